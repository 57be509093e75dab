#pragma once

#include "morse/band.hpp"
#include "morse/maxima.hpp"
#include "morse/sheet.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace morse {

struct PipelineConfig {
  double sigma = 1.0;
  std::uint64_t seed = 0;
  AscentParams ascent;
  double zero_cluster_threshold = 0.3;
  NebParams neb;  // neb.sphere_mode doubles as the top-level sphere_mode key
  SheetParams sheet;
  bool two_cells = true;
  std::size_t max_loop_length = 6;

  void validate() const;
};

/// Value of one config key as echoed back; monostate stands for "auto".
using ConfigValue = std::variant<std::monostate, bool, std::uint64_t, double>;

/// Every key in a fixed order with its current value.
std::vector<std::pair<std::string, ConfigValue>> config_entries(const PipelineConfig& config);

/// Assigns one dotted key from its text form. Throws InvalidInput naming the
/// key when it is unknown or the value does not parse.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value);
void set_config_value(PipelineConfig& config, std::string_view key, const ConfigValue& value);

/// Flat "key = value" text; '#' starts a comment. Unlisted keys keep defaults.
PipelineConfig parse_config(const std::string& text);
PipelineConfig read_config(const std::filesystem::path& path);
std::string format_config(const PipelineConfig& config);

/// FNV-1a of the formatted config, as 16 hex digits.
std::string config_hash(const PipelineConfig& config);

}  // namespace morse
