#include "etale/error.hpp"

namespace etale {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingEmptyOrFull: return "MissingEmptyOrFull";
    case ErrorKind::NotClosedUnderUnion: return "NotClosedUnderUnion";
    case ErrorKind::NotClosedUnderIntersection: return "NotClosedUnderIntersection";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::NotOpen: return "NotOpen";
    case ErrorKind::InvalidMap: return "InvalidMap";
    case ErrorKind::InvalidPreorder: return "InvalidPreorder";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::CoverBudgetExceeded: return "CoverBudgetExceeded";
    case ErrorKind::EmptyStalkRejected: return "EmptyStalkRejected";
    case ErrorKind::NotASheaf: return "NotASheaf";
    case ErrorKind::NotT1Space: return "NotT1Space";
    case ErrorKind::DecompositionViolated: return "DecompositionViolated";
    case ErrorKind::NotAGroupoid: return "NotAGroupoid";
    case ErrorKind::MissingUnderlying: return "MissingUnderlying";
    case ErrorKind::NotConcrete: return "NotConcrete";
    case ErrorKind::NotAPseudogroup: return "NotAPseudogroup";
    case ErrorKind::NotAPseudogroupSheaf: return "NotAPseudogroupSheaf";
    case ErrorKind::NotEtale: return "NotEtale";
    case ErrorKind::NoSectionThroughArrow: return "NoSectionThroughArrow";
    case ErrorKind::WitnessFailed: return "WitnessFailed";
    case ErrorKind::NoFactorization: return "NoFactorization";
    case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorKind::InvalidGroupSheaf: return "InvalidGroupSheaf";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SuiteUnavailable: return "SuiteUnavailable";
    case ErrorKind::InvalidMorphism: return "InvalidMorphism";
  }
  return "Unknown";
}

nlohmann::json Error::to_json() const {
  return {{"kind", std::string(to_string(kind_))}, {"message", what()}, {"witness", witness_}};
}

nlohmann::json CheckReport::to_json() const {
  nlohmann::json out;
  out["status"] = skipped ? "skipped" : (violations.empty() ? "pass" : "fail");
  if (!note.empty()) out["note"] = note;
  auto list = nlohmann::json::array();
  for (const auto& v : violations)
    list.push_back({{"check", v.check}, {"message", v.message}, {"witness", v.witness}});
  out["violations"] = std::move(list);
  return out;
}

CheckReport& ConditionReport::operator[](const std::string& name) {
  for (auto& [key, report] : conditions)
    if (key == name) return report;
  conditions.emplace_back(name, CheckReport{});
  return conditions.back().second;
}

const CheckReport* ConditionReport::find(const std::string& name) const {
  for (const auto& [key, report] : conditions)
    if (key == name) return &report;
  return nullptr;
}

bool ConditionReport::ok() const {
  for (const auto& [key, report] : conditions)
    if (!report.ok()) return false;
  return true;
}

bool ConditionReport::passes(const std::string& name) const {
  const auto* r = find(name);
  return r != nullptr && r->ok();
}

nlohmann::json ConditionReport::to_json() const {
  auto out = nlohmann::json::object();
  for (const auto& [key, report] : conditions) out[key] = report.to_json();
  return out;
}

}  // namespace etale
