#include "morse/config.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace morse {

namespace {

enum class Kind { real, count, flag, optional_real };

struct KeySpec {
  const char* key;
  Kind kind;
  std::function<ConfigValue(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const ConfigValue&)> set;
};

template <class T>
T as(const ConfigValue& v) {
  if constexpr (std::is_same_v<T, double>) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* u = std::get_if<std::uint64_t>(&v)) return static_cast<double>(*u);
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto* b = std::get_if<bool>(&v)) return *b;
  } else {
    if (auto* u = std::get_if<std::uint64_t>(&v)) return static_cast<T>(*u);
  }
  throw InvalidInput("wrong value type");
}

#define MORSE_REAL(name, field) \
  KeySpec { name, Kind::real, [](const PipelineConfig& c) -> ConfigValue { return c.field; }, \
            [](PipelineConfig& c, const ConfigValue& v) { c.field = as<double>(v); } }
#define MORSE_COUNT(name, field) \
  KeySpec { name, Kind::count, [](const PipelineConfig& c) -> ConfigValue { return static_cast<std::uint64_t>(c.field); }, \
            [](PipelineConfig& c, const ConfigValue& v) { c.field = as<std::uint64_t>(v); } }
#define MORSE_FLAG(name, field) \
  KeySpec { name, Kind::flag, [](const PipelineConfig& c) -> ConfigValue { return c.field; }, \
            [](PipelineConfig& c, const ConfigValue& v) { c.field = as<bool>(v); } }
#define MORSE_OPTIONAL(name, field) \
  KeySpec { name, Kind::optional_real, \
            [](const PipelineConfig& c) -> ConfigValue { \
              return c.field ? ConfigValue(*c.field) : ConfigValue(std::monostate{}); }, \
            [](PipelineConfig& c, const ConfigValue& v) { \
              if (std::holds_alternative<std::monostate>(v)) c.field.reset(); else c.field = as<double>(v); } }

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      MORSE_REAL("sigma", sigma),
      MORSE_COUNT("seed", seed),
      MORSE_FLAG("sphere_mode", neb.sphere_mode),
      MORSE_REAL("ascent.tolerance", ascent.tolerance),
      MORSE_COUNT("ascent.max_iterations", ascent.max_iterations),
      MORSE_COUNT("ascent.seed_count", ascent.seed_count),
      MORSE_REAL("zero.cluster_threshold", zero_cluster_threshold),
      MORSE_COUNT("neb.node_count", neb.node_count),
      MORSE_REAL("neb.alpha", neb.alpha),
      MORSE_REAL("neb.beta", neb.beta),
      MORSE_OPTIONAL("neb.gradient_constant", neb.gradient_constant),
      MORSE_REAL("neb.step_size", neb.step_size),
      MORSE_REAL("neb.convergence_tolerance", neb.convergence_tolerance),
      MORSE_COUNT("neb.max_steps", neb.max_steps),
      MORSE_REAL("neb.discard_radius", neb.discard_radius),
      MORSE_REAL("neb.cluster_threshold", neb.cluster_threshold),
      MORSE_COUNT("neb.trials_per_pair", neb.trials_per_pair),
      MORSE_FLAG("sheet.enabled", two_cells),
      MORSE_COUNT("sheet.rings", sheet.rings),
      MORSE_COUNT("sheet.nodes_per_ring", sheet.nodes_per_ring),
      MORSE_REAL("sheet.tolerance", sheet.tolerance),
      MORSE_REAL("sheet.step_size", sheet.step_size),
      MORSE_COUNT("sheet.max_steps", sheet.max_steps),
      MORSE_OPTIONAL("sheet.gradient_constant", sheet.gradient_constant),
      MORSE_COUNT("pipeline.max_loop_length", max_loop_length),
  };
  return table;
}

#undef MORSE_REAL
#undef MORSE_COUNT
#undef MORSE_FLAG
#undef MORSE_OPTIONAL

const KeySpec& find_key(std::string_view key) {
  for (const auto& spec : key_table())
    if (key == spec.key) return spec;
  throw InvalidInput(fmt::format("unknown config key '{}'", key));
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

ConfigValue parse_value(const KeySpec& spec, std::string_view text) {
  auto bad = [&] { return InvalidInput(fmt::format("config key '{}' has invalid value '{}'", spec.key, text)); };
  switch (spec.kind) {
    case Kind::flag:
      if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
      if (text == "false" || text == "0" || text == "no" || text == "off") return false;
      throw bad();
    case Kind::count: {
      std::uint64_t v = 0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) throw bad();
      return v;
    }
    case Kind::optional_real:
      if (text == "auto") return std::monostate{};
      [[fallthrough]];
    case Kind::real: {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) throw bad();
      return v;
    }
  }
  throw bad();
}

std::string format_value(const ConfigValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "auto";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, double>) return fmt::format("{:.17g}", v);
        else return fmt::format("{}", v);
      },
      value);
}

}  // namespace

void PipelineConfig::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("config key 'sigma' must be positive");
  if (!(ascent.tolerance > 0.0)) throw InvalidInput("config key 'ascent.tolerance' must be positive");
  if (ascent.max_iterations == 0) throw InvalidInput("config key 'ascent.max_iterations' must be positive");
  if (!(zero_cluster_threshold > 0.0)) throw InvalidInput("config key 'zero.cluster_threshold' must be positive");
  if (max_loop_length < 2) throw InvalidInput("config key 'pipeline.max_loop_length' must be at least 2");
  neb.validate();
  sheet.validate();
}

std::vector<std::pair<std::string, ConfigValue>> config_entries(const PipelineConfig& config) {
  std::vector<std::pair<std::string, ConfigValue>> out;
  for (const auto& spec : key_table()) out.emplace_back(spec.key, spec.get(config));
  return out;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value) {
  const KeySpec& spec = find_key(key);
  spec.set(config, parse_value(spec, trim(value)));
}

void set_config_value(PipelineConfig& config, std::string_view key, const ConfigValue& value) {
  const KeySpec& spec = find_key(key);
  try {
    spec.set(config, value);
  } catch (const InvalidInput&) {
    throw InvalidInput(fmt::format("config key '{}' has a value of the wrong type", key));
  }
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::istringstream in(text);
  std::size_t line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_number);
    set_config_value(config, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  config.validate();
  return config;
}

PipelineConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string format_config(const PipelineConfig& config) {
  std::string out;
  for (const auto& [key, value] : config_entries(config)) out += fmt::format("{} = {}\n", key, format_value(value));
  return out;
}

std::string config_hash(const PipelineConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : format_config(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace morse
