#pragma once

// Random structures for property tests. All generators take an explicit
// engine so every case is reproducible from its seed.

#include <random>
#include <string>
#include <vector>

#include "lexchoice/lexchoice.hpp"

namespace lexchoice::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(Rng& rng, const std::vector<T>& xs) {
  return xs[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(xs.size()) - 1))];
}

// Concept names must not look like relation names, hence the lowercase tail.
inline std::string concept_name(int i) { return "Kind" + std::to_string(i); }

// Random DAG: each concept may take parents among the earlier ones.
inline std::vector<ConceptDecl> random_dag(Rng& rng, int n, double edge_p = 0.3) {
  std::vector<ConceptDecl> out;
  for (int i = 0; i < n; ++i) {
    ConceptDecl c{concept_name(i), {}, {}};
    for (int j = 0; j < i; ++j)
      if (chance(rng, edge_p)) c.parents.push_back(concept_name(j));
    out.push_back(std::move(c));
  }
  return out;
}

inline const std::vector<std::string>& relations() {
  static const std::vector<std::string> r{"RA", "RB", "RC"};
  return r;
}

inline Ontology random_ontology(Rng& rng, int n) {
  std::vector<RelationDecl> rels;
  for (const auto& r : relations()) rels.push_back({r, std::nullopt, std::nullopt, {}});
  return Ontology::build(random_dag(rng, n), rels);
}

// ---------------------------------------------------------------------------
// Unification pairs

struct UnifyCase {
  Ontology ontology;
  InstanceGraph graph;
  Template pattern;
  std::string target_id;  // node the pattern is matched against
  Bindings seed;
  bool either = false;
};

namespace detail {

struct Sketch {
  std::string concept_name;
  std::vector<std::pair<std::string, int>> children;  // relation, node index
  std::vector<std::pair<std::string, int>> refs;      // relation, node index
  std::vector<std::pair<std::string, std::string>> atoms;
};

inline Node build(const std::vector<Sketch>& s, int i) {
  Node n;
  n.id = "n" + std::to_string(i);
  n.instance_of = s[i].concept_name;
  for (const auto& [rel, c] : s[i].children) n.slots.push_back({rel, {Value::embed(build(s, c))}});
  for (const auto& [rel, r] : s[i].refs) n.slots.push_back({rel, {Value::ref("n" + std::to_string(r))}});
  for (const auto& [rel, a] : s[i].atoms) {
    // Sometimes append to an existing slot of the same relation.
    bool merged = false;
    for (auto& sl : n.slots)
      if (sl.relation == rel && sl.fillers.size() < 2 && (a.size() % 2 == 0)) {
        sl.fillers.push_back(Value::atom(a));
        merged = true;
        break;
      }
    if (!merged) n.slots.push_back({rel, {Value::atom(a)}});
  }
  return n;
}

}  // namespace detail

// Instance graph of up to `max_nodes` nodes: a tree of embedded nodes plus
// cross references (cycles allowed) and atoms.
inline InstanceGraph random_graph(Rng& rng, const Ontology& o, int max_nodes) {
  const int n = uniform(rng, 1, max_nodes);
  std::vector<detail::Sketch> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[i].concept_name = pick(rng, o.concepts());
  for (int i = 1; i < n; ++i) s[uniform(rng, 0, i - 1)].children.push_back({pick(rng, relations()), i});
  const int extra = uniform(rng, 0, 3);
  for (int k = 0; k < extra; ++k) s[uniform(rng, 0, n - 1)].refs.push_back({pick(rng, relations()), uniform(rng, 0, n - 1)});
  const int atoms = uniform(rng, 0, 2);
  static const std::vector<std::string> words{"hi", "lo", "mid"};
  for (int k = 0; k < atoms; ++k) s[uniform(rng, 0, n - 1)].atoms.push_back({pick(rng, relations()), pick(rng, words)});
  return InstanceGraph({detail::build(s, 0)});
}

namespace detail {

inline std::string general_concept(Rng& rng, const Ontology& o, const std::string& c) {
  // Walk up a random number of parent links.
  std::string cur = c;
  while (chance(rng, 0.4) && !o.parents(cur).empty()) cur = pick(rng, o.parents(cur));
  return cur;
}

// Pattern shaped after a target node, with some generalization and noise.
inline Node pattern_from(Rng& rng, const Ontology& o, const Node& t, const Resolver& resolve,
                         const std::vector<std::string>& vars, int& budget, int depth) {
  Node p;
  p.instance_of = chance(rng, 0.1) ? pick(rng, o.concepts()) : general_concept(rng, o, t.instance_of);
  if (chance(rng, 0.2)) p.var = pick(rng, vars);
  for (const auto& slot : t.slots) {
    for (const auto& f : slot.fillers) {
      if (budget <= 0 || !chance(rng, 0.6)) continue;
      Slot out{slot.relation, {}};
      const Node* child = nullptr;
      if (f.kind() == Value::Kind::node) child = &f.node();
      else if (f.kind() == Value::Kind::ref) child = resolve(f.text());
      if (chance(rng, 0.4)) {
        out.fillers.push_back(Value::var(pick(rng, vars)));
      } else if (f.kind() == Value::Kind::atom) {
        out.fillers.push_back(Value::atom(chance(rng, 0.85) ? f.text() : "other"));
      } else if (child && depth < 3) {
        --budget;
        out.fillers.push_back(Value::embed(pattern_from(rng, o, *child, resolve, vars, budget, depth + 1)));
      } else {
        out.fillers.push_back(Value::var(pick(rng, vars)));
      }
      if (chance(rng, 0.1)) out.relation = pick(rng, relations());  // noise
      p.slots.push_back(std::move(out));
    }
  }
  return p;
}

}  // namespace detail

// Pattern and graph with at most `max_nodes` nodes and 3 distinct variables.
inline UnifyCase random_unify_case(Rng& rng, int max_nodes = 6) {
  UnifyCase c;
  c.ontology = random_ontology(rng, uniform(rng, 2, 6));
  c.graph = random_graph(rng, c.ontology, max_nodes);
  const auto nodes = c.graph.nodes();
  const Node* target = pick(rng, nodes);
  c.target_id = target->id;
  static const std::vector<std::string> all_vars{"x", "y", "z"};
  std::vector<std::string> vars(all_vars.begin(), all_vars.begin() + uniform(rng, 1, 3));
  int budget = 3;
  const auto resolve = resolver_for(c.graph.index());
  c.pattern.root = detail::pattern_from(rng, c.ontology, *target, resolve, vars, budget, 0);
  // Occasionally seed a variable that appears in the pattern.
  if (chance(rng, 0.2)) {
    const auto tv = template_variables(c.pattern.root);
    if (!tv.empty()) c.seed[pick(rng, tv)] = Bound{pick(rng, nodes)->id, false};
  }
  c.either = chance(rng, 0.3);
  return c;
}

// ---------------------------------------------------------------------------
// Choice instances
//
// Fixed frame: an event Ev with an AGENT participant; nuances are concepts
// Nu0..Nu5 in a random DAG plus an isolated NuLone no preference uses.

struct ChoiceCase {
  Ontology ontology;
  Lexicon lexicon;
  IR ir;
  std::vector<std::string> context;
  Weights weights;
};

inline std::string nuance_name(int i) { return "Nu" + std::to_string(i); }

inline Ontology choice_ontology(Rng& rng) {
  std::vector<ConceptDecl> cs{{"Event", {}, {}}, {"Ev", {"Event"}, {}},
                              {"Party", {}, {}}, {"Person", {"Party"}, {}},
                              {"NuLone", {}, {}}};
  for (int i = 0; i < 6; ++i) {
    ConceptDecl c{nuance_name(i), {}, {}};
    for (int j = 0; j < i; ++j)
      if (chance(rng, 0.3)) c.parents.push_back(nuance_name(j));
    cs.push_back(std::move(c));
  }
  std::vector<RelationDecl> rels{{"AGENT", std::nullopt, std::nullopt, {}},
                                 {"ATTRIBUTE", std::nullopt, std::nullopt, {}},
                                 {"DEGREE", std::nullopt, std::nullopt, {}}};
  return Ontology::build(cs, rels);
}

template <class E>
E random_enum(Rng& rng, int n) {
  return static_cast<E>(uniform(rng, 0, n - 1));
}

inline Distinction random_distinction(Rng& rng) {
  Distinction d;
  d.frequency = random_enum<Frequency>(rng, 3);
  d.strength = random_enum<Strength>(rng, 3);
  d.type = random_enum<Conveyance>(rng, 4);
  Node p;
  p.instance_of = nuance_name(uniform(rng, 0, 5));
  switch (uniform(rng, 0, 3)) {
    case 0: p.slots.push_back({"AGENT", {Value::var("a")}}); break;
    case 1: p.slots.push_back({"AGENT", {Value::var("e")}}); break;
    case 2: {
      Node q;
      q.instance_of = chance(rng, 0.5) ? "Party" : "Person";
      p.slots.push_back({"AGENT", {Value::embed(q)}});
      break;
    }
    default: break;
  }
  if (chance(rng, 0.3)) p.slots.push_back({"DEGREE", {Value::atom(chance(rng, 0.5) ? "hi" : "lo")}});
  d.pattern.root = std::move(p);
  return d;
}

inline Possibility random_preference(Rng& rng, int i) {
  Possibility p;
  p.frequency = random_enum<Frequency>(rng, 3);
  p.strength = random_enum<Strength>(rng, 3);
  p.type = random_enum<Conveyance>(rng, 4);
  p.instance.id = "pref" + std::to_string(i);
  p.instance.instance_of = nuance_name(uniform(rng, 0, 5));
  static const std::vector<std::string> targets{"p1", "p2", "ev1"};
  if (chance(rng, 0.7)) p.instance.slots.push_back({"AGENT", {Value::ref(pick(rng, targets))}});
  if (chance(rng, 0.3)) p.instance.slots.push_back({"DEGREE", {Value::atom(chance(rng, 0.5) ? "hi" : "lo")}});
  p.source = "w" + std::to_string(i);
  return p;
}

inline Entry random_entry(Rng& rng, int i, int max_distinctions = 3) {
  Entry e;
  e.lemma = "w" + std::to_string(i);
  const int nd = uniform(rng, 0, max_distinctions);
  for (int k = 0; k < nd; ++k) e.distinctions.push_back(random_distinction(rng));
  static const std::vector<std::string> dims{"formality", "force"};
  for (const auto& dim : dims)
    if (chance(rng, 0.4)) e.style.push_back({dim, random_enum<Level>(rng, 3)});
  if (chance(rng, 0.3)) e.attitude = AttitudeSpec{random_enum<Attitude>(rng, 3), "a"};
  static const std::vector<std::string> words{"c1", "c2", "c3"};
  for (const auto& w : words)
    if (chance(rng, 0.2)) e.collocates.push_back(w);
  return e;
}

inline Weights random_weights(Rng& rng) {
  Weights w;
  if (chance(rng, 0.5)) return w;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  w.gamma = u(rng);
  w.beta = u(rng);
  w.alpha = u(rng);
  w.kappa = u(rng);
  w.strict_match = chance(rng, 0.3);
  return w;
}

inline ChoiceCase random_choice_case(Rng& rng, int max_entries = 5, int max_prefs = 4) {
  ChoiceCase c;
  c.ontology = choice_ontology(rng);

  Cluster cl;
  cl.id = "t:c";
  cl.language = "t";
  cl.core.root.var = "e";
  cl.core.root.instance_of = "Ev";
  cl.core.root.slots.push_back({"AGENT", {Value::var("a")}});
  const int ne = uniform(rng, 1, max_entries);
  for (int i = 0; i < ne; ++i) cl.entries.push_back(random_entry(rng, i));
  c.lexicon = Lexicon({cl});

  Node p1;
  p1.id = "p1";
  p1.instance_of = "Person";
  Node ev;
  ev.id = "ev1";
  ev.instance_of = "Ev";
  ev.slots.push_back({"AGENT", {Value::embed(p1)}});
  Node p2;
  p2.id = "p2";
  p2.instance_of = "Party";
  c.ir.situation = InstanceGraph({ev, p2});
  const int np = uniform(rng, 0, max_prefs);
  for (int i = 0; i < np; ++i) c.ir.possibilities.push_back(random_preference(rng, i));
  if (chance(rng, 0.5)) c.ir.styles.push_back({"formality", random_enum<Level>(rng, 3)});
  if (chance(rng, 0.3)) c.ir.styles.push_back({"force", random_enum<Level>(rng, 3)});
  static const std::vector<std::string> who{"p1", "p2", "ev1"};
  if (chance(rng, 0.4)) c.ir.attitudes.push_back({random_enum<Attitude>(rng, 3), pick(rng, who)});
  static const std::vector<std::string> words{"c1", "c2", "c3", "c4"};
  for (const auto& w : words)
    if (chance(rng, 0.3)) c.context.push_back(w);
  c.weights = random_weights(rng);
  return c;
}

// ---------------------------------------------------------------------------
// Random valid IRs over an ontology, nesting depth at most `max_depth`.

class IrGenerator {
 public:
  IrGenerator(Rng& rng, const Ontology& o) : rng_(rng), o_(o) {}

  IR make(int max_depth) {
    ids_.clear();
    IR ir;
    std::vector<Node> roots;
    const int nr = uniform(rng_, 1, 2);
    for (int i = 0; i < nr; ++i) roots.push_back(node(max_depth));
    const int np = uniform(rng_, 0, 3);
    std::vector<Possibility> ps;
    for (int i = 0; i < np; ++i) {
      Possibility p;
      p.frequency = random_enum<Frequency>(rng_, 3);
      p.strength = random_enum<Strength>(rng_, 3);
      p.type = random_enum<Conveyance>(rng_, 4);
      p.instance = node(max_depth);
      if (chance(rng_, 0.5)) p.source = "from `w" + std::to_string(i) + "'";
      ps.push_back(std::move(p));
    }
    // Cross references to already defined ids.
    auto add_refs = [&](Node& n) {
      if (ids_.empty()) return;
      for (int k = uniform(rng_, 0, 2); k > 0; --k)
        n.slots.push_back({pick(rng_, o_.relation_names()), {Value::ref(pick(rng_, ids_))}});
    };
    for (auto& r : roots) add_refs(r);
    for (auto& p : ps) add_refs(p.instance);
    ir.situation = InstanceGraph(std::move(roots));
    ir.possibilities = std::move(ps);
    if (chance(rng_, 0.4)) ir.attitudes.push_back({random_enum<Attitude>(rng_, 3), pick(rng_, ids_)});
    if (chance(rng_, 0.5)) ir.styles.push_back({"formality", random_enum<Level>(rng_, 3)});
    if (chance(rng_, 0.3)) ir.styles.push_back({"force", random_enum<Level>(rng_, 3)});
    return ir;
  }

 private:
  Node node(int depth) {
    Node n;
    n.id = "i" + std::to_string(ids_.size() + 1);
    ids_.push_back(n.id);
    n.instance_of = pick(rng_, o_.concepts());
    if (depth <= 1) return n;
    const int ns = uniform(rng_, 0, 2);
    for (int i = 0; i < ns; ++i) {
      Slot s{pick(rng_, o_.relation_names()), {}};
      const int nf = uniform(rng_, 1, 2);
      for (int k = 0; k < nf; ++k) {
        if (chance(rng_, 0.2)) s.fillers.push_back(Value::atom(chance(rng_, 0.5) ? "high" : "low"));
        else if (chance(rng_, 0.1)) s.fillers.push_back(Value::atom("two words"));
        else s.fillers.push_back(Value::embed(node(depth - 1)));
      }
      n.slots.push_back(std::move(s));
    }
    return n;
  }

  Rng& rng_;
  const Ontology& o_;
  std::vector<std::string> ids_;
};

// ---------------------------------------------------------------------------
// Text mutation for parser fuzzing.

inline std::string mutate(Rng& rng, std::string text) {
  static const std::vector<std::string> tokens{
      "[", "]", "(", ")", "{", "}", "#1=", "#1", "#99", "?x", "%", "\"", "\\", ":", ",",
      "=", "instance-of", "concept", "possibility", "attitude", "style", "entry", "cluster",
      "distinction", "AGENT", "Thing", "type", "frequency", "never", "\n", "\xc3\xa9", "\xff",
      std::string(1, '\0'), "[[[[[[[[", "]]]]"};
  const int ops = uniform(rng, 1, 4);
  for (int k = 0; k < ops; ++k) {
    const int n = static_cast<int>(text.size());
    const int at = n ? uniform(rng, 0, n) : 0;
    switch (uniform(rng, 0, 6)) {
      case 0:
        if (n) text.erase(static_cast<std::size_t>(std::min(at, n - 1)), static_cast<std::size_t>(uniform(rng, 1, 8)));
        break;
      case 1: text.insert(static_cast<std::size_t>(at), pick(rng, tokens)); break;
      case 2: text.insert(static_cast<std::size_t>(at), 1, static_cast<char>(uniform(rng, 0, 255))); break;
      case 3:
        if (n) text[static_cast<std::size_t>(std::min(at, n - 1))] = static_cast<char>(uniform(rng, 32, 126));
        break;
      case 4: {
        if (!n) break;
        const int from = uniform(rng, 0, n - 1);
        const int len = uniform(rng, 1, std::min(40, n - from));
        text.insert(static_cast<std::size_t>(at), text.substr(static_cast<std::size_t>(from), static_cast<std::size_t>(len)));
        break;
      }
      case 5: text.resize(static_cast<std::size_t>(at)); break;
      default: {
        if (n < 2) break;
        const int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
        std::swap(text[static_cast<std::size_t>(a)], text[static_cast<std::size_t>(b)]);
      }
    }
  }
  return text;
}

}  // namespace lexchoice::gen
