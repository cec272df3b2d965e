#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace etale {

enum class ErrorKind {
  MissingEmptyOrFull,
  NotClosedUnderUnion,
  NotClosedUnderIntersection,
  UnknownPoint,
  NotOpen,
  InvalidMap,
  InvalidPreorder,
  BudgetExceeded,
  CoverBudgetExceeded,
  EmptyStalkRejected,
  NotASheaf,
  NotT1Space,
  DecompositionViolated,
  NotAGroupoid,
  MissingUnderlying,
  NotConcrete,
  NotAPseudogroup,
  NotAPseudogroupSheaf,
  NotEtale,
  NoSectionThroughArrow,
  WitnessFailed,
  NoFactorization,
  EnumerationBudgetExceeded,
  InvalidGroupSheaf,
  SchemaError,
  ParseError,
  SuiteUnavailable,
  InvalidMorphism,
};

std::string_view to_string(ErrorKind kind);

/// Every failure carries a machine-readable witness next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, nlohmann::json witness = nullptr)
      : std::runtime_error(std::move(message)), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const nlohmann::json& witness() const noexcept { return witness_; }

  nlohmann::json to_json() const;

 private:
  ErrorKind kind_;
  nlohmann::json witness_;
};

struct Violation {
  std::string check;
  std::string message;
  nlohmann::json witness;
};

/// Report-valued checks collect violations instead of throwing.
struct CheckReport {
  std::vector<Violation> violations;
  bool skipped = false;
  std::string note;

  bool ok() const { return !skipped && violations.empty(); }
  void add(std::string check, std::string message, nlohmann::json witness = nullptr) {
    violations.push_back({std::move(check), std::move(message), std::move(witness)});
  }
  void merge(const CheckReport& other) {
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
  }
  nlohmann::json to_json() const;
};

/// Named checks, e.g. the numbered conditions of a pre-pseudogroup.
struct ConditionReport {
  std::vector<std::pair<std::string, CheckReport>> conditions;

  CheckReport& operator[](const std::string& name);
  const CheckReport* find(const std::string& name) const;
  bool ok() const;
  bool passes(const std::string& name) const;
  nlohmann::json to_json() const;
};

}  // namespace etale
