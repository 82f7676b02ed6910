#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "lexchoice/graph.hpp"
#include "lexchoice/ir.hpp"
#include "lexchoice/lexicon.hpp"
#include "lexchoice/ontology.hpp"

namespace lexchoice {

class AnalysisError : public Error {
 public:
  enum class Kind { unknown_lemma, ambiguous_lemma, unknown_cluster, incomplete_bindings, inapplicable };

  AnalysisError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A source word with its chosen sense and its role bindings into a situation.
struct AnalysisRequest {
  std::string lemma;
  std::optional<std::string> cluster_id;  // required when the lemma is polysemous
  Bindings bindings;                      // core variable -> situation instance
  InstanceGraph situation;
};

namespace detail {

// Lemma made safe for use inside an instance id.
inline std::string id_stem(std::string_view lemma) {
  std::string out;
  for (char c : lemma) out += lex::is_word_char(c) && c != ':' ? c : '-';
  return out.empty() ? std::string("w") : out;
}

class FreshIds {
 public:
  FreshIds(std::string stem, const IdIndex& taken) : stem_(std::move(stem)), taken_(taken) {}

  std::string next() {
    for (;;) {
      std::string id = stem_ + "-n" + std::to_string(++counter_);
      if (!taken_.count(id) && issued_.insert(id).second) return id;
    }
  }

 private:
  std::string stem_;
  const IdIndex& taken_;
  std::set<std::string> issued_;
  int counter_ = 0;
};

// Instance for a distinction template: fresh ids for template nodes,
// references for bound variables.
inline Node instantiate(const Node& pattern, const Bindings& b, FreshIds& ids) {
  Node n;
  n.id = ids.next();
  n.instance_of = pattern.instance_of;
  for (const auto& s : pattern.slots) {
    Slot out{s.relation, {}};
    for (const auto& f : s.fillers) {
      switch (f.kind()) {
        case Value::Kind::node:
          if (!f.node().var.empty()) {
            const auto& bound = b.at(f.node().var);
            out.fillers.push_back(bound.literal ? Value::atom(bound.value)
                                                : Value::ref(bound.value));
          } else {
            out.fillers.push_back(Value::embed(instantiate(f.node(), b, ids)));
          }
          break;
        case Value::Kind::var: {
          const auto& bound = b.at(f.text());
          out.fillers.push_back(bound.literal ? Value::atom(bound.value)
                                              : Value::ref(bound.value));
          break;
        }
        default:
          out.fillers.push_back(f);
      }
    }
    n.slots.push_back(std::move(out));
  }
  return n;
}

}  // namespace detail

/// Finds the sense a request names, throwing AnalysisError when the lemma is
/// unknown, ambiguous, or not in the requested cluster.
inline Sense select_sense(const Lexicon& lexicon, std::string_view lemma,
                          const std::optional<std::string>& cluster_id) {
  const auto senses = lexicon.senses(lemma);
  if (senses.empty())
    throw AnalysisError(AnalysisError::Kind::unknown_lemma,
                        "unknown lemma '" + std::string(lemma) + "'");
  if (cluster_id) {
    for (const auto& s : senses)
      if (s.cluster->id == *cluster_id) return s;
    throw AnalysisError(AnalysisError::Kind::unknown_cluster,
                        "lemma '" + std::string(lemma) + "' is not in cluster " + *cluster_id);
  }
  if (senses.size() > 1)
    throw AnalysisError(AnalysisError::Kind::ambiguous_lemma,
                        "lemma '" + std::string(lemma) + "' belongs to " +
                            std::to_string(senses.size()) + " clusters; name one");
  return senses.front();
}

/// Emits what a word can express, as an IR over the request's situation:
/// one possibility per distinction (source = lemma), the entry's attitude
/// on its bound participant, and every non-neutral style value.
inline IR analyze(const Lexicon& lexicon, const Ontology& ontology,
                  const AnalysisRequest& request) {
  const Sense sense = select_sense(lexicon, request.lemma, request.cluster_id);
  const Cluster& cluster = *sense.cluster;
  const Entry& entry = *sense.entry;

  for (const auto& v : template_variables(cluster.core.root))
    if (!request.bindings.count(v))
      throw AnalysisError(AnalysisError::Kind::incomplete_bindings,
                          "no binding for core variable ?" + v + " of " + cluster.id);

  const auto bindings = apply_core(ontology, cluster, request.situation, request.bindings);
  if (!bindings)
    throw AnalysisError(AnalysisError::Kind::inapplicable,
                        "'" + entry.lemma + "' (" + cluster.id +
                            ") does not apply: its core does not match the situation "
                            "under the given bindings");

  IR ir;
  ir.situation = request.situation;
  detail::FreshIds ids(detail::id_stem(entry.lemma), request.situation.index());
  for (const auto& d : entry.distinctions) {
    Possibility p;
    p.frequency = d.frequency;
    p.strength = d.strength;
    p.type = d.type;
    p.instance = detail::instantiate(d.pattern.root, *bindings, ids);
    p.source = entry.lemma;
    ir.possibilities.push_back(std::move(p));
  }
  if (entry.attitude) {
    const auto& bound = bindings->at(entry.attitude->of);
    if (!bound.literal) ir.attitudes.push_back({entry.attitude->value, bound.value});
  }
  for (const auto& s : entry.style)
    if (s.level != Level::neutral) ir.styles.push_back({s.dimension, s.level});
  return ir;
}

}  // namespace lexchoice
