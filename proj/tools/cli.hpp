#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "etale/budget.hpp"
#include "etale/corpus.hpp"

namespace etale::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::uint64_t seed = kDefaultSeed;
  Budgets budgets = Budgets::from_env();
  std::size_t max_points = 4;
  std::size_t random_groupoids = 200;
};

/// A JSON report plus the exit code it implies; artifact carries generated text such as DOT.
struct CommandResult {
  nlohmann::json report;
  int exit_code = kExitPass;
  std::string artifact;
};

/// 64-bit FNV-1a over the compact serialization, as 16 hex digits.
std::string digest(const nlohmann::json& j);

CommandResult cmd_validate(const std::string& path, const RunConfig& config);
CommandResult cmd_check(const std::string& path, const std::string& suite, const RunConfig& config);
CommandResult cmd_roundtrip(const std::string& path, const std::string& direction, const RunConfig& config);
CommandResult cmd_corpus(const RunConfig& config);
CommandResult cmd_dot(const std::string& path, const std::string& kind, const RunConfig& config);

/// Compact human-readable rendering of a report.
std::string render_text(const nlohmann::json& report);

}  // namespace etale::cli
