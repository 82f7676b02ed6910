#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lexchoice/error.hpp"
#include "lexchoice/lexer.hpp"
#include "lexchoice/report.hpp"

namespace lexchoice {

class UnknownConcept : public Error {
 public:
  explicit UnknownConcept(const std::string& name)
      : Error("undeclared concept '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

struct RelationDecl {
  std::string name;
  std::optional<std::string> domain;
  std::optional<std::string> range;
  SourcePos pos{};
};

struct ConceptDecl {
  std::string name;
  std::vector<std::string> parents;
  SourcePos pos{};
};

/// Concept taxonomy (a DAG under isa) plus the relation vocabulary.
///
/// Instances are only produced by Ontology::build, which rejects cycles,
/// undeclared parents and undeclared domain/range concepts, so every
/// Ontology value satisfies those invariants. Ancestor sets are computed once
/// at build time; subsumption is a set lookup afterwards.
class Ontology {
 public:
  Ontology() = default;

  static Ontology build(std::vector<ConceptDecl> concepts,
                        std::vector<RelationDecl> relations);

  bool has_concept(std::string_view name) const {
    return concepts_.find(name) != concepts_.end();
  }
  bool has_relation(std::string_view name) const {
    return relations_.find(name) != relations_.end();
  }

  // Declaration order.
  const std::vector<std::string>& concepts() const { return order_; }
  const std::vector<std::string>& relation_names() const { return relation_order_; }

  const std::vector<std::string>& parents(std::string_view name) const {
    return info(name).parents;
  }
  const RelationDecl* relation(std::string_view name) const {
    auto it = relations_.find(name);
    return it == relations_.end() ? nullptr : &it->second;
  }

  // True iff general == specific or general is a transitive isa-ancestor.
  // Throws UnknownConcept for undeclared names.
  bool subsumes(std::string_view general, std::string_view specific) const {
    if (!has_concept(general)) throw UnknownConcept(std::string(general));
    const auto& anc = info(specific).ancestors;
    return anc.find(general) != anc.end();
  }

  // Non-throwing variant: false if either concept is undeclared.
  bool is_a(std::string_view specific, std::string_view general) const noexcept {
    auto it = concepts_.find(specific);
    if (it == concepts_.end() || !has_concept(general)) return false;
    return it->second.ancestors.find(general) != it->second.ancestors.end();
  }

 private:
  struct Info {
    std::vector<std::string> parents;
    std::set<std::string, std::less<>> ancestors;  // includes self
  };

  const Info& info(std::string_view name) const {
    auto it = concepts_.find(name);
    if (it == concepts_.end()) throw UnknownConcept(std::string(name));
    return it->second;
  }

  std::map<std::string, Info, std::less<>> concepts_;
  std::vector<std::string> order_;
  std::map<std::string, RelationDecl, std::less<>> relations_;
  std::vector<std::string> relation_order_;
};

inline Ontology Ontology::build(std::vector<ConceptDecl> concepts,
                                std::vector<RelationDecl> relations) {
  Report report;
  Ontology o;
  std::map<std::string, SourcePos, std::less<>> where;

  for (auto& c : concepts) {
    if (o.concepts_.count(c.name)) {
      report.add(ViolationKind::duplicate_concept,
                 "concept '" + c.name + "' declared twice", c.pos);
      continue;
    }
    where[c.name] = c.pos;
    o.order_.push_back(c.name);
    o.concepts_[c.name].parents = c.parents;
  }
  for (auto& c : concepts) {
    for (const auto& p : c.parents) {
      if (!o.concepts_.count(p))
        report.add(ViolationKind::undeclared_concept,
                   "concept '" + c.name + "' has undeclared parent '" + p + "'",
                   c.pos);
    }
  }
  for (auto& r : relations) {
    if (o.relations_.count(r.name)) {
      report.add(ViolationKind::duplicate_relation,
                 "relation '" + r.name + "' declared twice", r.pos);
      continue;
    }
    for (const auto* end : {&r.domain, &r.range}) {
      if (*end && !o.concepts_.count(**end))
        report.add(ViolationKind::undeclared_concept,
                   "relation '" + r.name + "' names undeclared concept '" +
                       **end + "'",
                   r.pos);
    }
    o.relation_order_.push_back(r.name);
    o.relations_[r.name] = r;
  }
  if (!report.ok()) throw ValidationError(std::move(report));

  // Cycle detection, reporting one cycle path per offending component.
  enum class Mark { none, active, done };
  std::map<std::string, Mark, std::less<>> mark;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    mark[name] = Mark::active;
    stack.push_back(name);
    for (const auto& p : o.concepts_[name].parents) {
      if (mark[p] == Mark::active) {
        auto start = std::find(stack.begin(), stack.end(), p);
        std::string path;
        for (auto it = start; it != stack.end(); ++it) path += *it + " isa ";
        path += p;
        report.add(ViolationKind::isa_cycle, "isa cycle: " + path, where[p]);
      } else if (mark[p] == Mark::none) {
        visit(p);
      }
    }
    stack.pop_back();
    mark[name] = Mark::done;
  };
  for (const auto& name : o.order_)
    if (mark[name] == Mark::none) visit(name);
  if (!report.ok()) throw ValidationError(std::move(report));

  std::function<const std::set<std::string, std::less<>>&(const std::string&)>
      ancestors = [&](const std::string& name)
      -> const std::set<std::string, std::less<>>& {
    auto& info = o.concepts_[name];
    if (info.ancestors.empty()) {
      std::set<std::string, std::less<>> acc{name};
      for (const auto& p : info.parents) {
        const auto& up = ancestors(p);
        acc.insert(up.begin(), up.end());
      }
      info.ancestors = std::move(acc);
    }
    return info.ancestors;
  };
  for (const auto& name : o.order_) ancestors(name);
  return o;
}

/// Parses the line-oriented ontology format:
///
///   concept <Name> [isa <Parent> [, <Parent>]*]
///   relation <NAME> [domain <Concept>] [range <Concept>]
///
/// `#` starts a comment. Throws ParseError on malformed lines and
/// ValidationError on cycles or undeclared names.
inline Ontology load_ontology(std::string_view text) {
  std::vector<ConceptDecl> concepts;
  std::vector<RelationDecl> relations;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    // Split into (column, word) pairs; commas are separate tokens.
    std::vector<std::pair<std::size_t, std::string>> words;
    for (std::size_t i = 0; i < line.size();) {
      if (lex::is_space(line[i])) {
        ++i;
      } else if (line[i] == ',') {
        words.emplace_back(i + 1, ",");
        ++i;
      } else {
        std::size_t j = i;
        while (j < line.size() && !lex::is_space(line[j]) && line[j] != ',') ++j;
        words.emplace_back(i + 1, std::string(line.substr(i, j - i)));
        i = j;
      }
    }

    std::size_t k = 0;
    auto pos_at = [&](std::size_t idx) {
      if (idx < words.size()) return SourcePos{line_no, words[idx].first};
      return SourcePos{line_no, line.size() + 1};
    };
    auto fail = [&](std::size_t idx, const std::string& msg) {
      throw ParseError(pos_at(idx), msg);
    };
    auto name_at = [&](std::size_t idx, std::string_view what) {
      if (idx >= words.size() || words[idx].second == ",")
        fail(idx, "expected " + std::string(what));
      return words[idx].second;
    };
    auto check_concept = [&](std::size_t idx) {
      const auto& w = name_at(idx, "concept name");
      if (!lex::looks_like_concept(w) || !lex::is_bare_word(w))
        fail(idx, "concept names must be capitalized words, found '" + w + "'");
      return w;
    };

    if (!words.empty()) {
      const auto& keyword = words[0].second;
      if (keyword == "concept") {
        ConceptDecl decl{check_concept(1), {}, pos_at(1)};
        k = 2;
        if (k < words.size()) {
          if (words[k].second != "isa") fail(k, "expected 'isa'");
          ++k;
          decl.parents.push_back(check_concept(k++));
          while (k < words.size()) {
            if (words[k].second != ",") fail(k, "expected ','");
            ++k;
            decl.parents.push_back(check_concept(k++));
          }
        }
        concepts.push_back(std::move(decl));
      } else if (keyword == "relation") {
        const auto& name = name_at(1, "relation name");
        if (!lex::looks_like_relation(name))
          fail(1, "relation names must be uppercase, found '" + name + "'");
        RelationDecl decl{name, std::nullopt, std::nullopt, pos_at(1)};
        k = 2;
        while (k < words.size()) {
          const auto& w = words[k].second;
          if (w == "domain" && !decl.domain) {
            decl.domain = check_concept(k + 1);
          } else if (w == "range" && !decl.range) {
            decl.range = check_concept(k + 1);
          } else {
            fail(k, "expected 'domain' or 'range', found '" + w + "'");
          }
          k += 2;
        }
        relations.push_back(std::move(decl));
      } else {
        fail(0, "unknown keyword '" + keyword + "'");
      }
    }
    if (end == text.size()) break;
    start = end + 1;
  }
  return Ontology::build(std::move(concepts), std::move(relations));
}

inline std::string serialize_ontology(const Ontology& o) {
  std::ostringstream out;
  for (const auto& c : o.concepts()) {
    out << "concept " << c;
    const auto& ps = o.parents(c);
    for (std::size_t i = 0; i < ps.size(); ++i) out << (i ? ", " : " isa ") << ps[i];
    out << "\n";
  }
  for (const auto& r : o.relation_names()) {
    const auto* decl = o.relation(r);
    out << "relation " << r;
    if (decl->domain) out << " domain " << *decl->domain;
    if (decl->range) out << " range " << *decl->range;
    out << "\n";
  }
  return out.str();
}

}  // namespace lexchoice
