#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexchoice/graph.hpp"
#include "lexchoice/lexer.hpp"
#include "lexchoice/notation.hpp"
#include "lexchoice/nuance.hpp"
#include "lexchoice/report.hpp"

namespace lexchoice {

/// A peripheral concept a word may convey, and how. Variables in the
/// concept refer to roles of the owning cluster's core.
struct Distinction {
  Frequency frequency = Frequency::always;
  Strength strength = Strength::medium;
  Conveyance type = Conveyance::suggestion;
  Template pattern;

  friend bool operator==(const Distinction&, const Distinction&) = default;
};

struct StyleValue {
  std::string dimension;
  Level level = Level::neutral;
  friend bool operator==(const StyleValue&, const StyleValue&) = default;
};

struct AttitudeSpec {
  Attitude value = Attitude::neutral;
  std::string of;  // core variable naming the participant
  friend bool operator==(const AttitudeSpec&, const AttitudeSpec&) = default;
};

struct Entry {
  std::string lemma;
  std::vector<Distinction> distinctions;
  std::vector<StyleValue> style;
  std::optional<AttitudeSpec> attitude;
  std::vector<std::string> collocates;
  SourcePos pos{};

  // Unlisted dimensions are neutral.
  Level style_level(std::string_view dimension) const {
    for (const auto& s : style)
      if (s.dimension == dimension) return s.level;
    return Level::neutral;
  }

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.lemma == b.lemma && a.distinctions == b.distinctions && a.style == b.style &&
           a.attitude == b.attitude && a.collocates == b.collocates;
  }
};

/// Language-specific group of near-synonyms sharing one core denotation.
struct Cluster {
  std::string id;
  std::string language;
  Template core;
  std::vector<Entry> entries;
  SourcePos pos{};

  const Entry* entry(std::string_view lemma) const {
    for (const auto& e : entries)
      if (e.lemma == lemma) return &e;
    return nullptr;
  }

  friend bool operator==(const Cluster& a, const Cluster& b) {
    return a.id == b.id && a.language == b.language && a.core == b.core &&
           a.entries == b.entries;
  }
};

struct Sense {
  const Cluster* cluster;
  const Entry* entry;
};

/// Clusters of one language, in file order, with a lemma index.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::vector<Cluster> clusters) : clusters_(std::move(clusters)) {
    if (!clusters_.empty()) language_ = clusters_.front().language;
    for (std::size_t c = 0; c < clusters_.size(); ++c)
      for (std::size_t e = 0; e < clusters_[c].entries.size(); ++e)
        index_[clusters_[c].entries[e].lemma].emplace_back(c, e);
  }

  const std::string& language() const { return language_; }
  const std::vector<Cluster>& clusters() const { return clusters_; }

  const Cluster* cluster(std::string_view id) const {
    for (const auto& c : clusters_)
      if (c.id == id) return &c;
    return nullptr;
  }

  // All (cluster, entry) pairs for `lemma`, in lexicon order.
  std::vector<Sense> senses(std::string_view lemma) const {
    std::vector<Sense> out;
    if (auto it = index_.find(lemma); it != index_.end())
      for (auto [c, e] : it->second) out.push_back({&clusters_[c], &clusters_[c].entries[e]});
    return out;
  }

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.language_ == b.language_ && a.clusters_ == b.clusters_;
  }

 private:
  std::string language_;
  std::vector<Cluster> clusters_;
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>, std::less<>> index_;
};

inline std::vector<Sense> clusters_for_lemma(const Lexicon& lexicon, std::string_view lemma) {
  return lexicon.senses(lemma);
}

namespace detail {

class LexiconParser {
 public:
  explicit LexiconParser(std::string_view text) : c_(lex::tokenize(text)) {}

  std::vector<Cluster> parse() {
    std::vector<Cluster> out;
    while (!c_.at(lex::Tok::end)) {
      if (!c_.at_word("cluster")) c_.fail("expected 'cluster', found " + c_.found());
      out.push_back(cluster());
    }
    return out;
  }

 private:
  Cluster cluster() {
    Cluster cl;
    cl.pos = c_.take().pos;
    cl.id = c_.expect_name("cluster id").text;
    c_.expect(lex::Tok::lbrace);
    bool saw_language = false, saw_core = false;
    while (!c_.at(lex::Tok::rbrace)) {
      const auto kw = c_.expect(lex::Tok::word, "'language:', 'core:' or 'entry'");
      if (kw.text == "language" && !saw_language) {
        c_.expect(lex::Tok::colon);
        cl.language = c_.expect_name("language tag").text;
        saw_language = true;
      } else if (kw.text == "core" && !saw_core) {
        c_.expect(lex::Tok::colon);
        cl.core = notation::parse_template(c_);
        saw_core = true;
      } else if (kw.text == "entry") {
        cl.entries.push_back(entry(kw.pos));
      } else if (kw.text == "language" || kw.text == "core") {
        throw ParseError(kw.pos, "'" + kw.text + "' given twice in cluster " + cl.id);
      } else {
        throw ParseError(kw.pos, "unknown keyword '" + kw.text + "'");
      }
    }
    c_.take();
    if (!saw_language) throw ParseError(cl.pos, "cluster " + cl.id + " lacks 'language:'");
    if (!saw_core) throw ParseError(cl.pos, "cluster " + cl.id + " lacks 'core:'");
    return cl;
  }

  Entry entry(SourcePos pos) {
    Entry e;
    e.pos = pos;
    e.lemma = c_.expect_name("lemma").text;
    c_.expect(lex::Tok::lbrace);
    while (!c_.at(lex::Tok::rbrace)) {
      const auto kw = c_.expect(lex::Tok::word, "entry field");
      if (kw.text == "distinction") {
        e.distinctions.push_back(distinction());
      } else if (kw.text == "style") {
        c_.expect(lex::Tok::lparen);
        do {
          const auto dim = c_.expect(lex::Tok::word, "style dimension");
          const auto lv = c_.expect(lex::Tok::word, "style level");
          auto level = parse_level(lv.text);
          if (!level) throw ParseError(lv.pos, "unknown style level '" + lv.text + "'");
          e.style.push_back({dim.text, *level});
        } while (!c_.at(lex::Tok::rparen));
        c_.take();
      } else if (kw.text == "attitude") {
        if (e.attitude) throw ParseError(kw.pos, "attitude given twice");
        c_.expect(lex::Tok::lparen);
        const auto v = c_.expect(lex::Tok::word, "attitude value");
        auto att = parse_attitude(v.text);
        if (!att) throw ParseError(v.pos, "unknown attitude '" + v.text + "'");
        c_.expect_word("of");
        const auto var = c_.expect(lex::Tok::variable, "?variable");
        c_.expect(lex::Tok::rparen);
        e.attitude = AttitudeSpec{*att, var.text};
      } else if (kw.text == "collocates") {
        c_.expect(lex::Tok::colon);
        e.collocates.push_back(c_.expect_name("lemma").text);
        while (c_.at(lex::Tok::comma)) {
          c_.take();
          e.collocates.push_back(c_.expect_name("lemma").text);
        }
      } else {
        throw ParseError(kw.pos, "unknown keyword '" + kw.text + "'");
      }
    }
    c_.take();
    return e;
  }

  Distinction distinction() {
    Distinction d;
    c_.expect(lex::Tok::lparen);
    bool saw_freq = false, saw_strength = false, saw_type = false;
    while (!c_.at_word("concept")) {
      const auto key = c_.expect(lex::Tok::word, "distinction field");
      const auto val = c_.expect(lex::Tok::word, "field value");
      auto dup = [&](bool& seen) {
        if (seen) throw ParseError(key.pos, "field '" + key.text + "' given twice");
        seen = true;
      };
      if (key.text == "frequency") {
        dup(saw_freq);
        auto f = parse_frequency(val.text);
        if (!f) throw ParseError(val.pos, "unknown frequency '" + val.text + "'");
        d.frequency = *f;
      } else if (key.text == "strength") {
        dup(saw_strength);
        auto s = parse_strength(val.text);
        if (!s) throw ParseError(val.pos, "unknown strength '" + val.text + "'");
        d.strength = *s;
      } else if (key.text == "type") {
        dup(saw_type);
        auto t = parse_conveyance(val.text);
        if (!t) throw ParseError(val.pos, "unknown type '" + val.text + "'");
        d.type = *t;
      } else {
        throw ParseError(key.pos, "unknown keyword '" + key.text + "'");
      }
    }
    if (!saw_type) c_.fail("distinction requires a 'type' field");
    c_.take();
    d.pattern = notation::parse_template(c_);
    c_.expect(lex::Tok::rparen);
    return d;
  }

  lex::Cursor c_;
};

inline void check_template(const Ontology& o, const Template& t, Report& report,
                           const std::string& where) {
  detail::check_node_vocabulary(o, t.root, report, where);
}

}  // namespace detail

/// Syntax-only parse of the lexicon DSL. Throws ParseError.
inline Lexicon parse_lexicon(std::string_view text) {
  return Lexicon(detail::LexiconParser(text).parse());
}

/// Lists every violated cluster/entry invariant. Warns (without failing)
/// about entries in one cluster that cannot be told apart.
inline Report validate_lexicon(const Lexicon& lexicon, const Ontology& ontology) {
  Report report;
  std::set<std::string> cluster_ids;
  for (const auto& cl : lexicon.clusters()) {
    const std::string where = "cluster " + cl.id;
    if (!cluster_ids.insert(cl.id).second)
      report.add(ViolationKind::duplicate_cluster, "cluster id '" + cl.id + "' is used twice",
                 cl.pos);
    if (cl.language != lexicon.language())
      report.add(ViolationKind::language_mismatch,
                 where + ": language '" + cl.language + "' differs from lexicon language '" +
                     lexicon.language() + "'",
                 cl.pos);
    if (cl.entries.empty())
      report.add(ViolationKind::empty_cluster, where + " has no entries", cl.pos);
    detail::check_template(ontology, cl.core, report, where + " core");
    const auto core_vars = template_variables(cl.core.root);
    auto in_core = [&](const std::string& v) {
      return std::find(core_vars.begin(), core_vars.end(), v) != core_vars.end();
    };

    std::set<std::string> lemmas;
    for (const auto& e : cl.entries) {
      const std::string ewhere = where + " entry '" + e.lemma + "'";
      if (e.lemma.empty()) report.add(ViolationKind::empty_lemma, where + ": empty lemma", e.pos);
      if (!lemmas.insert(e.lemma).second)
        report.add(ViolationKind::duplicate_lemma,
                   where + ": lemma '" + e.lemma + "' appears twice", e.pos);
      for (std::size_t i = 0; i < e.distinctions.size(); ++i) {
        const auto& d = e.distinctions[i];
        const std::string dwhere = ewhere + " distinction " + std::to_string(i + 1);
        detail::check_template(ontology, d.pattern, report, dwhere);
        if (!d.pattern.root.var.empty())
          report.add(ViolationKind::misplaced_variable,
                     dwhere + ": the distinction concept itself cannot be a core variable",
                     d.pattern.root.pos);
        for (const auto& v : template_variables(d.pattern.root))
          if (!in_core(v))
            report.add(ViolationKind::unbound_variable,
                       dwhere + ": variable ?" + v + " does not occur in the core",
                       d.pattern.root.pos);
      }
      std::set<std::string> dims;
      for (const auto& s : e.style)
        if (!dims.insert(s.dimension).second)
          report.add(ViolationKind::duplicate_style,
                     ewhere + ": style dimension '" + s.dimension + "' given twice", e.pos);
      if (e.attitude && !in_core(e.attitude->of))
        report.add(ViolationKind::unbound_variable,
                   ewhere + ": attitude target ?" + e.attitude->of +
                       " does not occur in the core",
                   e.pos);
    }

    // Indistinguishable near-synonyms.
    auto style_dims = [&](const Entry& a, const Entry& b) {
      std::set<std::string> dims;
      for (const auto& s : a.style) dims.insert(s.dimension);
      for (const auto& s : b.style) dims.insert(s.dimension);
      return dims;
    };
    auto attitude_of = [](const Entry& e) {
      return e.attitude ? std::optional<AttitudeSpec>(*e.attitude) : std::nullopt;
    };
    for (std::size_t i = 0; i < cl.entries.size(); ++i)
      for (std::size_t j = i + 1; j < cl.entries.size(); ++j) {
        const auto& a = cl.entries[i];
        const auto& b = cl.entries[j];
        if (a.distinctions != b.distinctions || attitude_of(a) != attitude_of(b)) continue;
        bool same_style = true;
        for (const auto& dim : style_dims(a, b))
          same_style = same_style && a.style_level(dim) == b.style_level(dim);
        if (same_style)
          report.warnings.push_back(where + ": entries '" + a.lemma + "' and '" + b.lemma +
                                    "' have identical distinctions, style and attitude");
      }
  }
  return report;
}

/// Parses and validates. Throws ParseError or ValidationError.
inline Lexicon load_lexicon(std::string_view text, const Ontology& ontology) {
  Lexicon lexicon = parse_lexicon(text);
  Report report = validate_lexicon(lexicon, ontology);
  if (!report.ok()) throw ValidationError(std::move(report));
  return lexicon;
}

inline std::string format_lemma(const std::string& lemma) {
  return lex::is_bare_word(lemma) ? lemma : lex::quote(lemma);
}

/// Writes the lexicon back out in the DSL, every default made explicit.
inline std::string serialize_lexicon(const Lexicon& lexicon) {
  std::ostringstream out;
  for (const auto& cl : lexicon.clusters()) {
    out << "cluster " << format_lemma(cl.id) << " {\n"
        << "  language: " << format_lemma(cl.language) << "\n"
        << "  core: " << notation::to_text(cl.core) << "\n";
    for (const auto& e : cl.entries) {
      out << "  entry " << format_lemma(e.lemma) << " {\n";
      for (const auto& d : e.distinctions)
        out << "    distinction (frequency " << to_string(d.frequency) << " strength "
            << to_string(d.strength) << " type " << to_string(d.type) << " concept "
            << notation::to_text(d.pattern) << ")\n";
      for (const auto& s : e.style)
        out << "    style (" << s.dimension << " " << to_string(s.level) << ")\n";
      if (e.attitude)
        out << "    attitude (" << to_string(e.attitude->value) << " of ?" << e.attitude->of
            << ")\n";
      if (!e.collocates.empty()) {
        out << "    collocates: ";
        for (std::size_t i = 0; i < e.collocates.size(); ++i)
          out << (i ? ", " : "") << format_lemma(e.collocates[i]);
        out << "\n";
      }
      out << "  }\n";
    }
    out << "}\n";
  }
  return out.str();
}

/// Unifies the cluster core with the first situation node (pre-order) that
/// accepts it under `seed`. A core whose top node carries a bound variable is
/// tried only against that instance.
inline std::optional<Bindings> apply_core(const Ontology& ontology, const Cluster& cluster,
                                          const InstanceGraph& situation,
                                          const Bindings& seed = {}) {
  const auto& top = cluster.core.root;
  if (!top.var.empty()) {
    if (auto it = seed.find(top.var); it != seed.end()) {
      const Node* n = it->second.literal ? nullptr : situation.find(it->second.value);
      return n ? unify(ontology, cluster.core, *n, situation, seed) : std::nullopt;
    }
  }
  for (const Node* n : situation.nodes())
    if (auto b = unify(ontology, cluster.core, *n, situation, seed)) return b;
  return std::nullopt;
}

}  // namespace lexchoice
