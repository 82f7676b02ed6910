#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "lexchoice/error.hpp"

namespace lexchoice {

enum class ViolationKind {
  dangling_reference,
  duplicate_id,
  undeclared_concept,
  undeclared_relation,
  domain_mismatch,
  range_mismatch,
  duplicate_style,
  duplicate_cluster,
  duplicate_lemma,
  empty_cluster,
  empty_lemma,
  language_mismatch,
  unbound_variable,
  misplaced_variable,
  isa_cycle,
  duplicate_concept,
  duplicate_relation,
};

inline std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::dangling_reference: return "dangling-reference";
    case ViolationKind::duplicate_id: return "duplicate-id";
    case ViolationKind::undeclared_concept: return "undeclared-concept";
    case ViolationKind::undeclared_relation: return "undeclared-relation";
    case ViolationKind::domain_mismatch: return "domain-mismatch";
    case ViolationKind::range_mismatch: return "range-mismatch";
    case ViolationKind::duplicate_style: return "duplicate-style";
    case ViolationKind::duplicate_cluster: return "duplicate-cluster";
    case ViolationKind::duplicate_lemma: return "duplicate-lemma";
    case ViolationKind::empty_cluster: return "empty-cluster";
    case ViolationKind::empty_lemma: return "empty-lemma";
    case ViolationKind::language_mismatch: return "language-mismatch";
    case ViolationKind::unbound_variable: return "unbound-variable";
    case ViolationKind::misplaced_variable: return "misplaced-variable";
    case ViolationKind::isa_cycle: return "isa-cycle";
    case ViolationKind::duplicate_concept: return "duplicate-concept";
    case ViolationKind::duplicate_relation: return "duplicate-relation";
  }
  return "unknown";
}

struct Violation {
  ViolationKind kind;
  std::string message;
  SourcePos pos{};
};

// Outcome of a validation pass. Warnings never make a report invalid.
struct Report {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }

  void add(ViolationKind kind, std::string message, SourcePos pos = {}) {
    violations.push_back({kind, std::move(message), pos});
  }

  std::size_t count(ViolationKind kind) const {
    std::size_t n = 0;
    for (const auto& v : violations) n += v.kind == kind;
    return n;
  }

  void merge(const Report& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
    warnings.insert(warnings.end(), other.warnings.begin(),
                    other.warnings.end());
  }
};

inline std::ostream& operator<<(std::ostream& os, const Report& report) {
  for (const auto& v : report.violations) {
    os << "error";
    if (v.pos.known()) os << " " << v.pos.str();
    os << " [" << to_string(v.kind) << "] " << v.message << "\n";
  }
  for (const auto& w : report.warnings) os << "warning: " << w << "\n";
  return os;
}

// Thrown by the load_* functions when the input parses but fails validation.
class ValidationError : public Error {
 public:
  explicit ValidationError(Report report)
      : Error(summary(report)), report_(std::move(report)) {}

  const Report& report() const { return report_; }

 private:
  static std::string summary(const Report& report) {
    if (report.violations.empty()) return "validation failed";
    const auto& first = report.violations.front();
    std::string s;
    if (first.pos.known()) s += first.pos.str() + ": ";
    s += first.message;
    if (report.violations.size() > 1)
      s += " (and " + std::to_string(report.violations.size() - 1) + " more)";
    return s;
  }

  Report report_;
};

}  // namespace lexchoice
