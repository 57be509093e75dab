#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace morse::cli {

/// Stable exit codes for scripting.
enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, no_convergence = 3 };

/// Parses argv-style arguments (args[0] is the program name), runs the
/// subcommand and returns its exit code. Normal output goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct AnalyzeOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> config;
  std::filesystem::path output;
  std::optional<std::filesystem::path> report;
  std::optional<std::uint64_t> seed;  // beats MORSE_SEED, which beats the config file
  std::size_t threads = 1;
};

/// Runs the pipeline on a point-cloud CSV, writes the filtration document and
/// returns the report text.
std::string analyze(const AnalyzeOptions& options);

}  // namespace morse::cli
