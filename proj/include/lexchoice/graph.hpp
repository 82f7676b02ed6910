#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexchoice/ontology.hpp"
#include "lexchoice/report.hpp"

namespace lexchoice {

// Owning pointer with deep-copy semantics; lets Value hold a Node by value.
template <class T>
class Box {
 public:
  Box() = default;
  explicit Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other) : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  explicit operator bool() const { return static_cast<bool>(ptr_); }
  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

 private:
  std::unique_ptr<T> ptr_;
};

struct Node;

/// One filler of a slot: an embedded node, a reference to an instance id,
/// an atomic literal, or (in templates only) a variable.
class Value {
 public:
  enum class Kind { node, ref, atom, var };

  static Value embed(Node node);
  static Value ref(std::string id) { return Value(Kind::ref, std::move(id)); }
  static Value atom(std::string text) { return Value(Kind::atom, std::move(text)); }
  static Value var(std::string name) { return Value(Kind::var, std::move(name)); }

  Kind kind() const { return kind_; }
  bool is_node() const { return kind_ == Kind::node; }
  // Reference target id, atom text or variable name. Empty for nodes.
  const std::string& text() const { return text_; }
  const Node& node() const { return *node_; }
  Node& node() { return *node_; }

  friend bool operator==(const Value& a, const Value& b);

 private:
  Value(Kind kind, std::string text) : kind_(kind), text_(std::move(text)) {}

  Kind kind_ = Kind::atom;
  std::string text_;
  Box<Node> node_;
};

struct Slot {
  std::string relation;
  std::vector<Value> fillers;
  friend bool operator==(const Slot&, const Slot&) = default;
};

/// An instantiated concept. In templates `id` is empty and `var`, when
/// set, names the variable bound to whatever instance the node matches.
struct Node {
  std::string id;
  std::string var;
  std::string instance_of;  // concept name
  std::vector<Slot> slots;
  SourcePos pos{};

  // Fillers of `relation` across all slots carrying it, in order.
  std::vector<const Value*> fillers(std::string_view relation) const {
    std::vector<const Value*> out;
    for (const auto& s : slots)
      if (s.relation == relation)
        for (const auto& f : s.fillers) out.push_back(&f);
    return out;
  }

  friend bool operator==(const Node& a, const Node& b) {
    return a.id == b.id && a.var == b.var && a.instance_of == b.instance_of &&
           a.slots == b.slots;
  }
};

inline Value Value::embed(Node node) {
  Value v(Kind::node, {});
  v.node_ = Box<Node>(std::move(node));
  return v;
}

inline bool operator==(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_ || a.text_ != b.text_) return false;
  return a.kind_ != Value::Kind::node || *a.node_ == *b.node_;
}

/// A concept configuration with variables; the shape of cluster cores and
/// peripheral distinctions.
struct Template {
  Node root;
  friend bool operator==(const Template&, const Template&) = default;
};

template <class F>
void for_each_node(const Node& n, F&& f) {
  f(n);
  for (const auto& s : n.slots)
    for (const auto& v : s.fillers)
      if (v.is_node()) for_each_node(v.node(), f);
}

template <class F>
void for_each_value(const Node& n, F&& f) {
  for (const auto& s : n.slots)
    for (const auto& v : s.fillers) {
      f(n, s, v);
      if (v.is_node()) for_each_value(v.node(), f);
    }
}

// Variable names in first-occurrence order (node vars and filler vars).
inline std::vector<std::string> template_variables(const Node& root) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (!v.empty() && std::find(out.begin(), out.end(), v) == out.end())
      out.push_back(v);
  };
  std::function<void(const Node&)> walk = [&](const Node& n) {
    add(n.var);
    for (const auto& s : n.slots)
      for (const auto& f : s.fillers) {
        if (f.kind() == Value::Kind::var) add(f.text());
        if (f.is_node()) walk(f.node());
      }
  };
  walk(root);
  return out;
}

using IdIndex = std::map<std::string, const Node*, std::less<>>;

// Adds every node under `root` with a nonempty id; repeated ids go to `dups`.
inline void index_nodes(const Node& root, IdIndex& index,
                        std::vector<std::string>* dups = nullptr) {
  for_each_node(root, [&](const Node& n) {
    if (n.id.empty()) return;
    if (!index.emplace(n.id, &n).second && dups) dups->push_back(n.id);
  });
}

/// Ordered roots plus an id index over every embedded node. The index points
/// into the owned tree and is rebuilt on copy.
class InstanceGraph {
 public:
  InstanceGraph() = default;
  explicit InstanceGraph(std::vector<Node> roots) : roots_(std::move(roots)) { reindex(); }
  InstanceGraph(const InstanceGraph& other) : roots_(other.roots_) { reindex(); }
  InstanceGraph(InstanceGraph&&) noexcept = default;
  InstanceGraph& operator=(const InstanceGraph& other) {
    if (this != &other) {
      roots_ = other.roots_;
      reindex();
    }
    return *this;
  }
  InstanceGraph& operator=(InstanceGraph&&) noexcept = default;

  const std::vector<Node>& roots() const { return roots_; }
  const IdIndex& index() const { return index_; }
  const std::vector<std::string>& duplicate_ids() const { return duplicates_; }

  const Node* find(std::string_view id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : it->second;
  }

  // Pre-order over roots and their embedded nodes.
  std::vector<const Node*> nodes() const {
    std::vector<const Node*> out;
    for (const auto& r : roots_) for_each_node(r, [&](const Node& n) { out.push_back(&n); });
    return out;
  }

  friend bool operator==(const InstanceGraph& a, const InstanceGraph& b) {
    return a.roots_ == b.roots_;
  }

 private:
  void reindex() {
    index_.clear();
    duplicates_.clear();
    for (const auto& r : roots_) index_nodes(r, index_, &duplicates_);
  }

  std::vector<Node> roots_;
  IdIndex index_;
  std::vector<std::string> duplicates_;
};

// What a variable is bound to: an instance id, or an atomic literal.
struct Bound {
  std::string value;
  bool literal = false;
  friend auto operator<=>(const Bound&, const Bound&) = default;
};

// Variable name (without '?') to bound value.
using Bindings = std::map<std::string, Bound, std::less<>>;

using Resolver = std::function<const Node*(std::string_view)>;

inline Resolver resolver_for(const IdIndex& index) {
  return [&index](std::string_view id) -> const Node* {
    auto it = index.find(id);
    return it == index.end() ? nullptr : it->second;
  };
}

struct UnifyOptions {
  // Accept concept subsumption in either direction rather than only
  // pattern-subsumes-target.
  bool either_direction = false;
};

namespace detail {

// Backtracking matcher. Each step calls its continuation with the extended
// bindings; the first continuation that returns true ends the search.
class Unifier {
 public:
  using Cont = std::function<bool(const Bindings&)>;

  Unifier(const Ontology& o, const Resolver& resolve, UnifyOptions opts)
      : ontology_(o), resolve_(resolve), opts_(opts) {}

  bool node(const Node& p, const Node& t, const Bindings& b, const Cont& k) const {
    if (!concept_ok(p.instance_of, t.instance_of)) return false;
    Bindings b2 = b;
    if (!p.var.empty() && !bind(b2, p.var, Bound{t.id, false})) return false;

    std::vector<std::string> relations;
    for (const auto& s : p.slots)
      if (std::find(relations.begin(), relations.end(), s.relation) == relations.end())
        relations.push_back(s.relation);
    return groups(p, t, relations, 0, b2, k);
  }

 private:
  bool concept_ok(const std::string& pc, const std::string& tc) const {
    if (ontology_.is_a(tc, pc)) return true;
    return opts_.either_direction && ontology_.is_a(pc, tc);
  }

  static bool bind(Bindings& b, const std::string& var, const Bound& value) {
    auto [it, inserted] = b.emplace(var, value);
    return inserted || it->second == value;
  }

  bool groups(const Node& p, const Node& t, const std::vector<std::string>& rels,
              std::size_t i, const Bindings& b, const Cont& k) const {
    if (i == rels.size()) return k(b);
    auto pf = p.fillers(rels[i]);
    auto tf = t.fillers(rels[i]);
    if (tf.size() < pf.size()) return false;
    std::vector<bool> used(tf.size(), false);
    return fillers(pf, tf, used, 0, b, [&](const Bindings& b2) {
      return groups(p, t, rels, i + 1, b2, k);
    });
  }

  bool fillers(const std::vector<const Value*>& pf, const std::vector<const Value*>& tf,
               std::vector<bool>& used, std::size_t j, const Bindings& b,
               const Cont& k) const {
    if (j == pf.size()) return k(b);
    for (std::size_t t = 0; t < tf.size(); ++t) {
      if (used[t]) continue;
      used[t] = true;
      const bool ok = value(*pf[j], *tf[t], b, [&](const Bindings& b2) {
        return fillers(pf, tf, used, j + 1, b2, k);
      });
      used[t] = false;
      if (ok) return true;
    }
    return false;
  }

  static std::optional<Bound> identity(const Value& v) {
    switch (v.kind()) {
      case Value::Kind::node: return Bound{v.node().id, false};
      case Value::Kind::ref: return Bound{v.text(), false};
      case Value::Kind::atom: return Bound{v.text(), true};
      case Value::Kind::var: return std::nullopt;
    }
    return std::nullopt;
  }

  bool value(const Value& p, const Value& t, const Bindings& b, const Cont& k) const {
    switch (p.kind()) {
      case Value::Kind::var: {
        auto id = identity(t);
        if (!id || (!id->literal && id->value.empty())) return false;
        Bindings b2 = b;
        return bind(b2, p.text(), *id) && k(b2);
      }
      case Value::Kind::atom:
        return t.kind() == Value::Kind::atom && t.text() == p.text() && k(b);
      case Value::Kind::ref: {
        auto id = identity(t);
        return id && !id->literal && id->value == p.text() && k(b);
      }
      case Value::Kind::node: {
        const Node* target = nullptr;
        if (t.is_node()) target = &t.node();
        else if (t.kind() == Value::Kind::ref && resolve_) target = resolve_(t.text());
        return target && node(p.node(), *target, b, k);
      }
    }
    return false;
  }

  const Ontology& ontology_;
  const Resolver& resolve_;
  UnifyOptions opts_;
};

}  // namespace detail

/// Matches `pattern` against `target`, extending `seed`.
///
/// The pattern concept must subsume the target concept. Each pattern
/// relation's fillers are assigned injectively to the target's fillers for
/// that relation, trying target fillers in order and backtracking; the first
/// consistent assignment wins. Targets may carry slots the pattern does not
/// mention. References in the target are followed through `resolve`.
inline std::optional<Bindings> unify(const Ontology& ontology, const Template& pattern,
                                     const Node& target, const Resolver& resolve,
                                     const Bindings& seed = {}, UnifyOptions opts = {}) {
  std::optional<Bindings> result;
  detail::Unifier u(ontology, resolve, opts);
  u.node(pattern.root, target, seed, [&](const Bindings& b) {
    result = b;
    return true;
  });
  return result;
}

inline std::optional<Bindings> unify(const Ontology& ontology, const Template& pattern,
                                     const Node& target, const InstanceGraph& graph,
                                     const Bindings& seed = {}, UnifyOptions opts = {}) {
  return unify(ontology, pattern, target, resolver_for(graph.index()), seed, opts);
}

// Replaces variables by their bindings: node vars become ids, filler vars
// become references (or atoms for literal bindings). Unbound variables stay.
inline Node substitute(const Node& pattern, const Bindings& b) {
  Node out = pattern;
  std::function<void(Node&)> walk = [&](Node& n) {
    if (!n.var.empty()) {
      if (auto it = b.find(n.var); it != b.end() && !it->second.literal) {
        n.id = it->second.value;
        n.var.clear();
      }
    }
    for (auto& s : n.slots)
      for (auto& f : s.fillers) {
        if (f.kind() == Value::Kind::var) {
          if (auto it = b.find(f.text()); it != b.end())
            f = it->second.literal ? Value::atom(it->second.value)
                                   : Value::ref(it->second.value);
        } else if (f.is_node()) {
          walk(f.node());
        }
      }
  };
  walk(out);
  return out;
}

namespace detail {

inline void check_node_vocabulary(const Ontology& o, const Node& root, Report& report,
                                  std::string_view where) {
  auto label = [&](const Node& n) {
    std::string s(where);
    if (!n.id.empty()) s += (s.empty() ? "" : " ") + std::string("instance '") + n.id + "'";
    return s.empty() ? std::string("node") : s;
  };
  for_each_node(root, [&](const Node& n) {
    if (!o.has_concept(n.instance_of))
      report.add(ViolationKind::undeclared_concept,
                 label(n) + ": undeclared concept '" + n.instance_of + "'", n.pos);
    for (const auto& s : n.slots) {
      const auto* rel = o.relation(s.relation);
      if (!rel) {
        report.add(ViolationKind::undeclared_relation,
                   label(n) + ": undeclared relation '" + s.relation + "'", n.pos);
        continue;
      }
      if (rel->domain && o.has_concept(n.instance_of) && !o.is_a(n.instance_of, *rel->domain))
        report.add(ViolationKind::domain_mismatch,
                   label(n) + ": " + n.instance_of + " is outside the domain " +
                       *rel->domain + " of " + s.relation,
                   n.pos);
      if (rel->range)
        for (const auto& f : s.fillers)
          if (f.is_node() && o.has_concept(f.node().instance_of) &&
              !o.is_a(f.node().instance_of, *rel->range))
            report.add(ViolationKind::range_mismatch,
                       label(n) + ": " + f.node().instance_of + " is outside the range " +
                           *rel->range + " of " + s.relation,
                       f.node().pos);
    }
  });
}

inline void check_references(const Node& root, const Resolver& resolve, Report& report,
                             std::string_view where) {
  for_each_value(root, [&](const Node& owner, const Slot& s, const Value& v) {
    if (v.kind() == Value::Kind::ref && !resolve(v.text())) {
      std::string msg(where);
      if (!owner.id.empty()) msg += (msg.empty() ? "" : " ") + std::string("instance '") + owner.id + "'";
      msg += (msg.empty() ? "" : ": ") + s.relation + " refers to undefined instance '" +
             v.text() + "'";
      report.add(ViolationKind::dangling_reference, msg, owner.pos);
    }
  });
}

}  // namespace detail

/// Lists dangling references, duplicate ids, undeclared concepts and
/// relations, and domain/range violations. Empty iff the graph is valid.
inline Report validate_graph(const Ontology& ontology, const InstanceGraph& graph) {
  Report report;
  for (const auto& id : graph.duplicate_ids())
    report.add(ViolationKind::duplicate_id, "instance id '" + id + "' is defined more than once");
  const auto resolve = resolver_for(graph.index());
  for (const auto& root : graph.roots()) {
    detail::check_node_vocabulary(ontology, root, report, "");
    detail::check_references(root, resolve, report, "");
  }
  return report;
}

}  // namespace lexchoice
