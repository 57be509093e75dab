#include "morse/document.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace morse {

using nlohmann::json;

namespace {

json config_to_json(const PipelineConfig& config) {
  json out = json::object();
  for (const auto& [key, value] : config_entries(config)) {
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, std::monostate>) out[key] = nullptr;
          else out[key] = v;
        },
        value);
  }
  return out;
}

PipelineConfig config_from_json(const json& object) {
  if (!object.is_object()) throw ParseError("document config must be an object");
  PipelineConfig config;
  for (const auto& [key, value] : object.items()) {
    ConfigValue parsed;
    if (value.is_null()) parsed = std::monostate{};
    else if (value.is_boolean()) parsed = value.get<bool>();
    else if (value.is_number_unsigned()) parsed = value.get<std::uint64_t>();
    else if (value.is_number()) parsed = value.get<double>();
    else throw ParseError(fmt::format("config key '{}' has an unsupported value", key));
    try {
      set_config_value(config, key, parsed);
    } catch (const InvalidInput& e) {
      throw ParseError(e.what());
    }
  }
  return config;
}

}  // namespace

std::string serialize_document(const FiltrationDocument& document) {
  const MorseFiltration& filtration = document.filtration;
  json out;
  out["format"] = "morse-filtration";
  out["version"] = kDocumentVersion;
  out["config"] = config_to_json(document.config);
  out["metadata"] = {{"sigma", filtration.metadata.sigma},
                     {"seed", filtration.metadata.seed},
                     {"config_hash", filtration.metadata.config_hash}};
  json cells = json::array();
  for (const auto& cell : filtration.cells()) {
    json geometry = json::array();
    for (const auto& point : cell.geometry) geometry.push_back(std::vector<double>(point.data(), point.data() + point.size()));
    cells.push_back({{"id", cell.id},
                     {"dim", cell.dim},
                     {"density", cell.density},
                     {"boundary", cell.boundary},
                     {"geometry", std::move(geometry)}});
  }
  out["cells"] = std::move(cells);
  return out.dump(1) + "\n";
}

FiltrationDocument parse_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("malformed filtration document: {}", e.what()));
  }
  try {
    if (!doc.is_object() || doc.value("format", "") != "morse-filtration")
      throw ParseError("not a morse-filtration document");
    if (doc.value("version", 0) != kDocumentVersion)
      throw ParseError(fmt::format("unsupported document version {}", doc.value("version", 0)));

    FiltrationDocument out;
    out.config = doc.contains("config") ? config_from_json(doc.at("config")) : PipelineConfig{};

    std::vector<Cell> cells;
    std::set<std::size_t> ids;
    double previous = std::numeric_limits<double>::infinity();
    for (const auto& entry : doc.at("cells")) {
      Cell cell;
      cell.id = entry.at("id").get<std::size_t>();
      cell.dim = entry.at("dim").get<int>();
      cell.density = entry.at("density").get<double>();
      cell.boundary = entry.value("boundary", std::vector<std::size_t>{});
      for (const auto& point : entry.value("geometry", json::array())) {
        const auto coords = point.get<std::vector<double>>();
        cell.geometry.push_back(Eigen::Map<const Vector>(coords.data(), static_cast<Eigen::Index>(coords.size())));
      }
      if (!ids.insert(cell.id).second) throw ParseError(fmt::format("duplicate cell id {}", cell.id));
      if (cell.density > previous)
        throw ParseError(fmt::format("cell {} has density above the cell before it", cell.id));
      previous = cell.density;
      cells.push_back(std::move(cell));
    }
    for (const auto& cell : cells)
      for (std::size_t face : cell.boundary)
        if (!ids.count(face)) throw ParseError(fmt::format("cell {} references unknown cell {}", cell.id, face));

    try {
      out.filtration = MorseFiltration::build(std::move(cells));
    } catch (const InvalidComplex& e) {
      throw ParseError(e.what());
    }
    if (doc.contains("metadata")) {
      const auto& meta = doc.at("metadata");
      out.filtration.metadata.sigma = meta.value("sigma", 0.0);
      out.filtration.metadata.seed = meta.value("seed", std::uint64_t{0});
      out.filtration.metadata.config_hash = meta.value("config_hash", "");
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(fmt::format("malformed filtration document: {}", e.what()));
  }
}

FiltrationDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_document(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_document(const FiltrationDocument& document, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  out << serialize_document(document);
}

}  // namespace morse
