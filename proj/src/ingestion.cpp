#include "morse/ingestion.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

namespace morse {

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
    throw ParseError(fmt::format("not a number: '{}'", field), line);
  return value;
}

// Rows of comma-separated numbers; blank lines are skipped.
std::vector<std::vector<double>> parse_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_number = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_number(rest.substr(0, comma), line_number));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(fmt::format("expected {} fields, found {}", rows.front().size(), row.size()), line_number);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

PointCloud parse_point_cloud(const std::string& text) {
  const auto rows = parse_rows(text);
  if (rows.empty()) throw ParseError("point cloud file has no points");
  Matrix data(static_cast<Eigen::Index>(rows.front().size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j)
    for (std::size_t i = 0; i < rows[j].size(); ++i)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[j][i];
  return PointCloud(std::move(data));
}

PointCloud read_point_cloud(const std::filesystem::path& path) {
  try {
    return parse_point_cloud(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

std::string format_point_cloud(const PointCloud& cloud) {
  std::string out;
  const Matrix& data = cloud.matrix();
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      if (i) out += ',';
      out += fmt::format("{:.17g}", data(i, j));
    }
    out += '\n';
  }
  return out;
}

void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(fmt::format("cannot write '{}'", path.string()));
  out << format_point_cloud(cloud);
}

Matrix parse_matrix(const std::string& text) {
  const auto rows = parse_rows(text);
  if (rows.empty()) throw ParseError("matrix file is empty");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  try {
    return parse_matrix(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

void UnweightedGraph::validate() const {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (auto [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count)
      throw InvalidInput(fmt::format("edge {} {} references a vertex outside 0..{}", a, b, vertex_count));
    if (a == b) throw InvalidInput(fmt::format("self-loop at vertex {}", a));
    if (!seen.emplace(std::min(a, b), std::max(a, b)).second)
      throw InvalidInput(fmt::format("duplicate edge {} {}", a, b));
  }
  if (!labels.empty() && labels.size() != vertex_count) throw InvalidInput("labels must cover every vertex");
}

UnweightedGraph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_number = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_number;
      if (!trim(line).empty()) return true;
    }
    return false;
  };
  auto read_pair = [&]() {
    std::istringstream fields(line);
    long long a = -1, b = -1;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra) || a < 0 || b < 0)
      throw ParseError("expected two non-negative integers", line_number);
    return std::pair<std::size_t, std::size_t>(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  };

  if (!next_line()) throw ParseError("graph file is empty");
  const auto [vertices, edge_count] = read_pair();
  UnweightedGraph graph;
  graph.vertex_count = vertices;
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (!next_line()) throw ParseError(fmt::format("expected {} edges, found {}", edge_count, e), line_number);
    graph.edges.push_back(read_pair());
  }
  try {
    graph.validate();
  } catch (const InvalidInput& e) {
    throw ParseError(e.what());
  }
  return graph;
}

UnweightedGraph read_graph(const std::filesystem::path& path) {
  try {
    return parse_graph(slurp(path));
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path.string(), e.what()), e.line());
  }
}

Matrix shortest_path_distances(const UnweightedGraph& graph) {
  graph.validate();
  const std::size_t n = graph.vertex_count;
  if (n == 0) throw InvalidInput("graph has no vertices");
  std::vector<std::vector<std::size_t>> adjacency(n);
  for (auto [a, b] : graph.edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  constexpr std::size_t unreached = static_cast<std::size_t>(-1);
  Matrix distances(n, n);
  std::vector<std::size_t> hops(n);
  for (std::size_t source = 0; source < n; ++source) {
    std::fill(hops.begin(), hops.end(), unreached);
    hops[source] = 0;
    std::queue<std::size_t> frontier;
    frontier.push(source);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (std::size_t w : adjacency[v])
        if (hops[w] == unreached) {
          hops[w] = hops[v] + 1;
          frontier.push(w);
        }
    }
    if (std::find(hops.begin(), hops.end(), unreached) != hops.end()) {
      // Report every component so the caller can decide what to drop.
      std::vector<std::size_t> component(n, unreached);
      std::vector<std::size_t> sizes;
      for (std::size_t start = 0; start < n; ++start) {
        if (component[start] != unreached) continue;
        std::size_t size = 0;
        std::queue<std::size_t> q;
        q.push(start);
        component[start] = sizes.size();
        while (!q.empty()) {
          const std::size_t v = q.front();
          q.pop();
          ++size;
          for (std::size_t w : adjacency[v])
            if (component[w] == unreached) {
              component[w] = sizes.size();
              q.push(w);
            }
        }
        sizes.push_back(size);
      }
      throw InvalidInput(fmt::format("graph is disconnected: {} components of sizes {}", sizes.size(),
                                     fmt::join(sizes, ", ")));
    }
    for (std::size_t t = 0; t < n; ++t)
      distances(static_cast<Eigen::Index>(source), static_cast<Eigen::Index>(t)) = static_cast<double>(hops[t]);
  }
  return distances;
}

PointCloud sliding_window(const Matrix& series, std::size_t window) {
  const auto variables = static_cast<std::size_t>(series.rows());
  const auto times = static_cast<std::size_t>(series.cols());
  if (window == 0) throw InvalidInput("window must be positive");
  if (variables == 0 || times == 0) throw InvalidInput("time series is empty");
  if (window > times)
    throw InvalidInput(fmt::format("window {} exceeds the {} available time points", window, times));
  if (!series.allFinite()) throw InvalidInput("time series has non-finite entries");

  const std::size_t count = times - window + 1;
  Matrix points(static_cast<Eigen::Index>(variables * window), static_cast<Eigen::Index>(count));
  for (std::size_t t = 0; t < count; ++t)
    for (std::size_t k = 0; k < window; ++k)
      points.block(static_cast<Eigen::Index>(k * variables), static_cast<Eigen::Index>(t),
                   static_cast<Eigen::Index>(variables), 1) = series.col(static_cast<Eigen::Index>(t + k));
  return PointCloud(std::move(points));
}

}  // namespace morse
