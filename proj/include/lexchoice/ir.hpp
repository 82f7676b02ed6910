#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexchoice/graph.hpp"
#include "lexchoice/notation.hpp"
#include "lexchoice/nuance.hpp"
#include "lexchoice/report.hpp"

namespace lexchoice {

/// A nuance that may have been expressed: how often, how strongly and how
/// directly, plus the concept instance itself.
struct Possibility {
  Frequency frequency = Frequency::always;
  Strength strength = Strength::medium;
  Conveyance type = Conveyance::suggestion;
  Node instance;
  std::string source;  // originating word, from a trailing comment

  friend bool operator==(const Possibility&, const Possibility&) = default;
};

struct AttitudeExpr {
  Attitude value = Attitude::neutral;
  std::string of;  // instance id of the participant
  friend bool operator==(const AttitudeExpr&, const AttitudeExpr&) = default;
};

struct StylePref {
  std::string dimension;
  Level level = Level::neutral;
  friend bool operator==(const StylePref&, const StylePref&) = default;
};

/// Interlingual representation: one definite situation plus any number of
/// possibilities, attitudes and (global) style preferences.
struct IR {
  InstanceGraph situation;
  std::vector<Possibility> possibilities;
  std::vector<AttitudeExpr> attitudes;
  std::vector<StylePref> styles;

  friend bool operator==(const IR&, const IR&) = default;
};

// Situation and possibility instances share one id namespace.
inline IdIndex index_ir(const IR& ir, std::vector<std::string>* dups = nullptr) {
  IdIndex index;
  for (const auto& r : ir.situation.roots()) index_nodes(r, index, dups);
  for (const auto& p : ir.possibilities) index_nodes(p.instance, index, dups);
  return index;
}

namespace detail {

class IrParser {
 public:
  explicit IrParser(std::string_view text) : c_(lex::tokenize(text)) {}

  IR parse() {
    c_.expect(lex::Tok::lbrace);
    c_.expect_word("situation");
    notation::NodeParser nodes(c_, notation::Mode::instance, &labels_);
    std::vector<Node> roots;
    do {
      roots.push_back(nodes.node_or_def());
    } while (c_.at(lex::Tok::lbracket) || c_.at(lex::Tok::label_def));

    std::vector<Possibility> possibilities;
    std::vector<AttitudeExpr> attitudes;
    std::vector<std::pair<std::string, SourcePos>> attitude_refs;
    std::vector<StylePref> styles;
    while (!c_.at(lex::Tok::rbrace)) {
      if (!c_.at(lex::Tok::word)) c_.fail("expected a component or '}', found " + c_.found());
      const auto kw = c_.peek();
      if (kw.text == "possibility") {
        c_.take();
        possibilities.push_back(possibility(nodes));
      } else if (kw.text == "attitude") {
        c_.take();
        c_.expect(lex::Tok::lparen);
        c_.expect_word("type");
        const auto v = c_.expect(lex::Tok::word, "attitude value");
        auto att = parse_attitude(v.text);
        if (!att) throw ParseError(v.pos, "unknown attitude '" + v.text + "'");
        c_.expect_word("of");
        const auto ref = c_.expect(lex::Tok::label, "reference");
        labels_.uses.emplace_back(ref.text, ref.pos);
        attitude_refs.emplace_back(ref.text, ref.pos);
        c_.expect(lex::Tok::rparen);
        attitudes.push_back({*att, {}});
      } else if (kw.text == "style") {
        c_.take();
        c_.expect(lex::Tok::lparen);
        const auto dim = c_.expect(lex::Tok::word, "style dimension");
        c_.expect(lex::Tok::lparen);
        c_.expect_word("level");
        const auto lv = c_.expect(lex::Tok::word, "style level");
        auto level = parse_level(lv.text);
        if (!level) throw ParseError(lv.pos, "unknown style level '" + lv.text + "'");
        c_.expect(lex::Tok::rparen);
        c_.expect(lex::Tok::rparen);
        for (const auto& s : styles)
          if (s.dimension == dim.text)
            throw ParseError(dim.pos, "style dimension '" + dim.text + "' given twice");
        styles.push_back({dim.text, *level});
      } else {
        throw ParseError(kw.pos, "unknown keyword '" + kw.text + "'");
      }
    }
    c_.take();
    c_.expect(lex::Tok::end);

    notation::check_labels(labels_);
    for (auto& r : roots) notation::resolve_labels(r, labels_);
    for (auto& p : possibilities) notation::resolve_labels(p.instance, labels_);
    for (std::size_t i = 0; i < attitudes.size(); ++i)
      attitudes[i].of = labels_.ids.at(attitude_refs[i].first);

    IR ir{InstanceGraph(std::move(roots)), std::move(possibilities), std::move(attitudes),
          std::move(styles)};
    std::vector<std::string> dups;
    index_ir(ir, &dups);
    if (!dups.empty()) {
      // Report the second definition's position.
      std::set<std::string> seen;
      SourcePos where{};
      auto scan = [&](const Node& root) {
        for_each_node(root, [&](const Node& n) {
          if (n.id.empty() || where.known()) return;
          if (!seen.insert(n.id).second) where = n.pos;
        });
      };
      for (const auto& r : ir.situation.roots()) scan(r);
      for (const auto& p : ir.possibilities) scan(p.instance);
      throw ParseError(where, "instance id '" + dups.front() + "' is defined more than once");
    }
    return ir;
  }

 private:
  Possibility possibility(notation::NodeParser& nodes) {
    Possibility p;
    c_.expect(lex::Tok::lparen);
    bool saw_freq = false, saw_strength = false, saw_type = false;
    while (!c_.at_word("concept")) {
      const auto key = c_.expect(lex::Tok::word, "possibility field");
      const auto val = c_.expect(lex::Tok::word, "field value");
      auto dup = [&](bool& seen) {
        if (seen) throw ParseError(key.pos, "field '" + key.text + "' given twice");
        seen = true;
      };
      if (key.text == "frequency") {
        dup(saw_freq);
        auto f = parse_frequency(val.text);
        if (!f) throw ParseError(val.pos, "unknown frequency '" + val.text + "'");
        p.frequency = *f;
      } else if (key.text == "strength") {
        dup(saw_strength);
        auto s = parse_strength(val.text);
        if (!s) throw ParseError(val.pos, "unknown strength '" + val.text + "'");
        p.strength = *s;
      } else if (key.text == "type") {
        dup(saw_type);
        auto t = parse_conveyance(val.text);
        if (!t) throw ParseError(val.pos, "unknown type '" + val.text + "'");
        p.type = *t;
      } else {
        throw ParseError(key.pos, "unknown keyword '" + key.text + "'");
      }
    }
    if (!saw_type) c_.fail("possibility requires a 'type' field");
    c_.take();
    if (!c_.at(lex::Tok::lbracket) && !c_.at(lex::Tok::label_def))
      c_.fail("expected a concept instance, found " + c_.found());
    p.instance = nodes.node_or_def();
    c_.expect(lex::Tok::rparen);
    if (const auto* comment = c_.trailing_comment()) p.source = comment->text;
    return p;
  }

  lex::Cursor c_;
  notation::Labels labels_;
};

}  // namespace detail

/// Parses the IR text format. Throws ParseError (with position) on syntax
/// errors, dangling references, duplicate ids and unknown keywords.
inline IR parse_ir(std::string_view text) { return detail::IrParser(text).parse(); }

/// Canonical text: 2-space indentation, components in the order situation,
/// possibility, attitude, style; referenced instances get `#n=` labels
/// numbered in traversal order.
inline std::string serialize_ir(const IR& ir) {
  std::set<std::string, std::less<>> referenced;
  auto collect = [&](const Node& root) {
    for_each_value(root, [&](const Node&, const Slot&, const Value& v) {
      if (v.kind() == Value::Kind::ref) referenced.insert(v.text());
    });
  };
  for (const auto& r : ir.situation.roots()) collect(r);
  for (const auto& p : ir.possibilities) collect(p.instance);
  for (const auto& a : ir.attitudes) referenced.insert(a.of);

  std::map<std::string, std::string, std::less<>> labels;
  auto number = [&](const Node& root) {
    for_each_node(root, [&](const Node& n) {
      if (referenced.count(n.id) && !labels.count(n.id))
        labels.emplace(n.id, std::to_string(labels.size() + 1));
    });
  };
  for (const auto& r : ir.situation.roots()) number(r);
  for (const auto& p : ir.possibilities) number(p.instance);

  auto root_text = [&](const Node& n, int indent) {
    std::ostringstream os;
    if (auto it = labels.find(n.id); it != labels.end()) os << '#' << it->second << '=';
    notation::print_node(os, n, {true, indent, &labels});
    return os.str();
  };

  std::ostringstream out;
  out << "{ situation\n";
  for (const auto& r : ir.situation.roots()) out << "  " << root_text(r, 2) << "\n";
  for (const auto& p : ir.possibilities) {
    out << "  possibility (frequency " << to_string(p.frequency) << " strength "
        << to_string(p.strength) << " type " << to_string(p.type) << "\n"
        << "    concept " << root_text(p.instance, 4) << ")";
    if (!p.source.empty()) out << " % " << p.source;
    out << "\n";
  }
  for (const auto& a : ir.attitudes) {
    auto it = labels.find(a.of);
    if (it == labels.end())
      throw Error("cannot serialize attitude toward undefined instance '" + a.of + "'");
    out << "  attitude (type " << to_string(a.value) << " of #" << it->second << ")\n";
  }
  for (const auto& s : ir.styles)
    out << "  style (" << s.dimension << " (level " << to_string(s.level) << "))\n";
  out << "}\n";
  return out.str();
}

/// Checks every concept and relation against the ontology, reference
/// resolution across the shared id namespace, id uniqueness and style
/// uniqueness. Empty report iff valid.
inline Report validate_ir(const IR& ir, const Ontology& ontology) {
  Report report;
  std::vector<std::string> dups;
  const IdIndex index = index_ir(ir, &dups);
  for (const auto& id : dups)
    report.add(ViolationKind::duplicate_id, "instance id '" + id + "' is defined more than once");
  const auto resolve = resolver_for(index);
  for (const auto& r : ir.situation.roots()) {
    detail::check_node_vocabulary(ontology, r, report, "situation");
    detail::check_references(r, resolve, report, "situation");
  }
  for (std::size_t i = 0; i < ir.possibilities.size(); ++i) {
    const std::string where = "possibility " + std::to_string(i + 1);
    detail::check_node_vocabulary(ontology, ir.possibilities[i].instance, report, where);
    detail::check_references(ir.possibilities[i].instance, resolve, report, where);
  }
  for (const auto& a : ir.attitudes)
    if (!resolve(a.of))
      report.add(ViolationKind::dangling_reference,
                 "attitude refers to undefined instance '" + a.of + "'");
  std::set<std::string> dims;
  for (const auto& s : ir.styles)
    if (!dims.insert(s.dimension).second)
      report.add(ViolationKind::duplicate_style,
                 "style dimension '" + s.dimension + "' given more than once");
  return report;
}

}  // namespace lexchoice
