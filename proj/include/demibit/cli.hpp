#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace demibit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCap = 3;

/// Higher is worse: violation > cap > input error > ok.
int worse(int a, int b);

struct TaskSpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::size_t line = 0;
};

/// Line-oriented config:
///     seed <u64>
///     cap <bits>
///     output <path>
///     input <path>
///     task <kind> key=value ...
struct ExperimentConfig {
  std::vector<std::string> inputs;
  std::vector<TaskSpec> tasks;
  std::size_t cap = 24;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
  std::filesystem::path base_dir;
};

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

enum class OutputFormat { Report, Csv };

struct RunOptions {
  OutputFormat format = OutputFormat::Report;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> cap;
  /// Header timestamp; the current UTC time when absent.
  std::optional<std::string> timestamp;
};

struct RunResult {
  int exit_code = kExitOk;
  std::string output;
};

/// Loads every input, then runs the tasks in order. Never throws for
/// problems inside a task; they are reported and folded into the exit code.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});

struct SelftestOptions {
  /// Swap a mis-wired A2 into the super-core check so that it must fail.
  bool inject_fault = false;
};

struct SelftestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;
  int exit_code = kExitOk;
  std::string table;
};

SelftestResult selftest(const SelftestOptions& options = {});

}  // namespace demibit::cli
