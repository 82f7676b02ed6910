#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexchoice/graph.hpp"
#include "lexchoice/ir.hpp"
#include "lexchoice/lexicon.hpp"
#include "lexchoice/nuance.hpp"
#include "lexchoice/ontology.hpp"

namespace lexchoice {

/// Scoring parameters. Penalties and the bonus must be non-negative.
struct Weights {
  // Directness of each conveyance type, emphasis..denotation.
  std::array<int, 4> directness{0, 1, 2, 3};
  std::array<double, 3> frequency{0.0, 0.5, 1.0};  // never, sometimes, always
  std::array<double, 3> strength{0.0, 0.5, 1.0};   // weak, medium, strong
  double gamma = 0.2;   // per unmatched always-implication/denotation
  double beta = 0.25;   // per style-level step
  double alpha = 0.5;   // attitude mismatch
  double kappa = 0.1;   // collocation bonus
  bool strict_match = false;
  bool clamp = true;

  double freq(Frequency f) const { return frequency[static_cast<std::size_t>(f)]; }
  double str(Strength s) const { return strength[static_cast<std::size_t>(s)]; }
  int dir(Conveyance c) const { return directness[static_cast<std::size_t>(c)]; }
};

/// Reads `key = value` lines (gamma, beta, alpha, kappa, strict_match) over
/// the defaults. `#` starts a comment.
inline Weights parse_weights(std::string_view text) {
  Weights w;
  std::size_t line_no = 0, start = 0;
  auto trim = [](std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return std::string_view{};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!trim(line).empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw ParseError({line_no, 1}, "expected 'key = value'");
      const auto key = trim(line.substr(0, eq));
      const auto val = trim(line.substr(eq + 1));
      const SourcePos vpos{line_no, eq + 2};
      if (key == "strict_match") {
        if (val == "true" || val == "1") w.strict_match = true;
        else if (val == "false" || val == "0") w.strict_match = false;
        else throw ParseError(vpos, "strict_match must be true or false");
      } else {
        double* target = key == "gamma" ? &w.gamma
                         : key == "beta"  ? &w.beta
                         : key == "alpha" ? &w.alpha
                         : key == "kappa" ? &w.kappa
                                          : nullptr;
        if (!target) throw ParseError({line_no, 1}, "unknown key '" + std::string(key) + "'");
        double v = 0;
        std::istringstream is{std::string(val)};
        is >> v;
        if (!is || !is.eof() || !std::isfinite(v))
          throw ParseError(vpos, "expected a number for " + std::string(key));
        if (v < 0) throw ParseError(vpos, std::string(key) + " must be non-negative");
        *target = v;
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return w;
}

class NoActivation : public Error {
 public:
  NoActivation() : Error("no cluster's core matches the situation") {}
};

struct Activation {
  const Cluster* cluster;
  Bindings bindings;
};

/// Clusters whose core unifies with some situation node, in lexicon order,
/// with the bindings of the first such unification.
inline std::vector<Activation> activate(const Lexicon& lexicon, const Ontology& ontology,
                                        const IR& ir) {
  std::vector<Activation> out;
  for (const auto& cl : lexicon.clusters())
    if (auto b = apply_core(ontology, cl, ir.situation)) out.push_back({&cl, std::move(*b)});
  return out;
}

/// How well `distinction` meets `preference`; nullopt when its concept does
/// not unify with the preference's concept under `bindings`.
///
/// value = freq(d) * (1 - |dir(p) - dir(d)| / 3) * (1 - |str(p) - str(d)|)
///
/// A never-distinction only satisfies a never-preference, which it does at
/// the always-frequency value; other pairings with a never side score 0.
inline std::optional<double> satisfaction(const Ontology& ontology, const Distinction& d,
                                          const Possibility& p, const Bindings& bindings,
                                          const Weights& w, const Resolver& resolve) {
  UnifyOptions opts;
  opts.either_direction = !w.strict_match;
  if (!unify(ontology, d.pattern, p.instance, resolve, bindings, opts)) return std::nullopt;

  if (d.frequency == Frequency::never || p.frequency == Frequency::never)
    return d.frequency == p.frequency ? w.freq(Frequency::always) : 0.0;
  const double directness = 1.0 - std::abs(w.dir(p.type) - w.dir(d.type)) / 3.0;
  const double closeness = 1.0 - std::abs(w.str(p.strength) - w.str(d.strength));
  double v = w.freq(d.frequency) * directness * closeness;
  if (w.clamp) v = std::clamp(v, 0.0, 1.0);
  return v;
}

struct PreferenceMatch {
  std::size_t preference;
  std::optional<std::size_t> distinction;  // best-matching distinction
  double satisfaction = 0.0;
};

struct ScoreBreakdown {
  std::vector<PreferenceMatch> preferences;
  std::vector<std::size_t> unwanted;  // distinction indices
  double style_penalty = 0.0;
  double attitude_penalty = 0.0;
  double collocation_bonus = 0.0;
  double total = 0.0;
};

inline bool conveys_unconditionally(const Distinction& d) {
  return d.frequency == Frequency::always &&
         (d.type == Conveyance::implication || d.type == Conveyance::denotation);
}

inline ScoreBreakdown score_entry(const Ontology& ontology, const Entry& entry, const IR& ir,
                                  const Bindings& bindings,
                                  const std::vector<std::string>& context, const Weights& w,
                                  const Resolver& resolve) {
  ScoreBreakdown out;
  std::vector<bool> matched(entry.distinctions.size(), false);
  double satisfied = 0.0;
  for (std::size_t i = 0; i < ir.possibilities.size(); ++i) {
    PreferenceMatch m{i, std::nullopt, 0.0};
    for (std::size_t j = 0; j < entry.distinctions.size(); ++j) {
      auto s = satisfaction(ontology, entry.distinctions[j], ir.possibilities[i], bindings, w,
                            resolve);
      if (!s) continue;
      matched[j] = true;
      if (!m.distinction || *s > m.satisfaction) {
        m.distinction = j;
        m.satisfaction = *s;
      }
    }
    satisfied += m.satisfaction;
    out.preferences.push_back(m);
  }
  for (std::size_t j = 0; j < entry.distinctions.size(); ++j)
    if (!matched[j] && conveys_unconditionally(entry.distinctions[j])) out.unwanted.push_back(j);

  int steps = 0;
  for (const auto& s : ir.styles)
    steps += std::abs(level_value(entry.style_level(s.dimension)) - level_value(s.level));
  out.style_penalty = w.beta * steps;

  if (entry.attitude) {
    auto it = bindings.find(entry.attitude->of);
    if (it != bindings.end() && !it->second.literal) {
      for (const auto& a : ir.attitudes)
        if (a.of == it->second.value && a.value != entry.attitude->value) {
          out.attitude_penalty = w.alpha;
          break;
        }
    }
  }

  for (const auto& c : entry.collocates)
    if (std::find(context.begin(), context.end(), c) != context.end()) {
      out.collocation_bonus = w.kappa;
      break;
    }

  out.total = satisfied - w.gamma * static_cast<double>(out.unwanted.size()) -
              out.style_penalty - out.attitude_penalty + out.collocation_bonus;
  return out;
}

inline ScoreBreakdown score_entry(const Ontology& ontology, const Entry& entry, const IR& ir,
                                  const Bindings& bindings,
                                  const std::vector<std::string>& context,
                                  const Weights& w = {}) {
  const IdIndex index = index_ir(ir);
  return score_entry(ontology, entry, ir, bindings, context, w, resolver_for(index));
}

struct Candidate {
  std::string lemma;
  std::size_t entry_index;
  ScoreBreakdown score;
  std::vector<std::string> distinctions;  // descriptions, for reports
};

struct ChoiceResult {
  std::string cluster_id;
  Bindings bindings;
  std::vector<std::string> preferences;  // descriptions, for reports
  std::vector<Candidate> ranked;         // best first; ties keep entry order
};

inline std::string describe(Frequency f, Strength s, Conveyance t, const Node& node) {
  std::string out = std::string(to_string(f)) + "/" + std::string(to_string(s)) + "/" +
                    std::string(to_string(t)) + " " + node.instance_of;
  return out;
}

// Scores every entry of an activated cluster and ranks them.
inline ChoiceResult rank_cluster(const Ontology& ontology, const Activation& act, const IR& ir,
                                 const std::vector<std::string>& context, const Weights& w,
                                 const Resolver& resolve) {
  ChoiceResult r;
  r.cluster_id = act.cluster->id;
  r.bindings = act.bindings;
  for (const auto& p : ir.possibilities) {
    std::string desc = describe(p.frequency, p.strength, p.type, p.instance);
    if (!p.source.empty()) desc += "  % " + p.source;
    r.preferences.push_back(std::move(desc));
  }
  const auto& entries = act.cluster->entries;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    Candidate c{entries[e].lemma, e,
                score_entry(ontology, entries[e], ir, act.bindings, context, w, resolve), {}};
    for (const auto& d : entries[e].distinctions)
      c.distinctions.push_back(describe(d.frequency, d.strength, d.type, d.pattern.root));
    r.ranked.push_back(std::move(c));
  }
  std::stable_sort(r.ranked.begin(), r.ranked.end(), [](const Candidate& a, const Candidate& b) {
    return a.score.total > b.score.total;
  });
  return r;
}

/// One ranked result per activated cluster, in lexicon order. Throws
/// NoActivation when no cluster covers the situation.
inline std::vector<ChoiceResult> choose(const Lexicon& lexicon, const Ontology& ontology,
                                        const IR& ir, const std::vector<std::string>& context = {},
                                        const Weights& w = {}) {
  const auto activations = activate(lexicon, ontology, ir);
  if (activations.empty()) throw NoActivation();
  const IdIndex index = index_ir(ir);
  const auto resolve = resolver_for(index);
  std::vector<ChoiceResult> out;
  for (const auto& act : activations)
    out.push_back(rank_cluster(ontology, act, ir, context, w, resolve));
  return out;
}

namespace detail {

inline std::string fixed(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << (v == 0.0 ? 0.0 : v);
  return os.str();
}

}  // namespace detail

/// Per-candidate report of matched, lost and unwanted nuances plus the
/// style, attitude and collocation terms. Deterministic.
inline std::string explain(const ChoiceResult& result) {
  std::ostringstream out;
  out << "cluster " << result.cluster_id << "\n";
  out << "  preferences\n";
  if (result.preferences.empty()) out << "    (none)\n";
  for (std::size_t i = 0; i < result.preferences.size(); ++i)
    out << "    P" << i + 1 << " " << result.preferences[i] << "\n";

  for (std::size_t rank = 0; rank < result.ranked.size(); ++rank) {
    const auto& c = result.ranked[rank];
    const auto& s = c.score;
    out << "  " << rank + 1 << ". " << c.lemma << "  total " << detail::fixed(s.total) << "\n";

    out << "     matched nuances\n";
    bool any = false;
    for (const auto& m : s.preferences)
      if (m.distinction && m.satisfaction > 0.0) {
        out << "       P" << m.preference + 1 << " by D" << *m.distinction + 1 << " "
            << c.distinctions[*m.distinction] << "  " << detail::fixed(m.satisfaction) << "\n";
        any = true;
      }
    if (!any) out << "       (none)\n";

    out << "     lost nuances\n";
    any = false;
    for (const auto& m : s.preferences)
      if (!(m.satisfaction > 0.0)) {
        out << "       P" << m.preference + 1 << " " << result.preferences[m.preference]
            << "\n";
        any = true;
      }
    if (!any) out << "       (none)\n";

    out << "     unwanted nuances\n";
    for (auto j : s.unwanted) out << "       D" << j + 1 << " " << c.distinctions[j] << "\n";
    if (s.unwanted.empty()) out << "       (none)\n";

    out << "     style penalty " << detail::fixed(s.style_penalty) << "\n"
        << "     attitude penalty " << detail::fixed(s.attitude_penalty) << "\n"
        << "     collocation bonus " << detail::fixed(s.collocation_bonus) << "\n";
  }
  return out.str();
}

}  // namespace lexchoice
