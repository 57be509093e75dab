#include "morse/pipeline.hpp"

#include "morse/error.hpp"
#include "morse/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <set>

namespace morse {

namespace {

using EdgeSet = std::vector<std::size_t>;  // sorted 1-cell indices

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Orders a simple cycle's edges head to tail; empty when the set is not one cycle.
std::vector<std::size_t> order_cycle(const EdgeSet& edges, const std::vector<OneCell>& one_cells) {
  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t e : edges) {
    incident[one_cells[e].from].push_back(e);
    incident[one_cells[e].to].push_back(e);
  }
  for (const auto& [vertex, list] : incident)
    if (list.size() != 2) return {};

  std::vector<std::size_t> ordered{edges.front()};
  std::size_t vertex = one_cells[edges.front()].to;
  const std::size_t start = one_cells[edges.front()].from;
  while (vertex != start) {
    const auto& list = incident[vertex];
    const std::size_t next = list[0] == ordered.back() ? list[1] : list[0];
    if (next == ordered.back()) return {};
    ordered.push_back(next);
    vertex = one_cells[next].from == vertex ? one_cells[next].to : one_cells[next].from;
    if (ordered.size() > edges.size()) return {};
  }
  return ordered.size() == edges.size() ? ordered : std::vector<std::size_t>{};
}

EdgeSet xor_sets(const EdgeSet& a, const EdgeSet& b) {
  EdgeSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> candidate_loops(std::size_t zero_count, const std::vector<OneCell>& one_cells,
                                                      std::size_t max_length) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adjacency(zero_count);  // (neighbor, edge)
  for (std::size_t e = 0; e < one_cells.size(); ++e) {
    const auto& cell = one_cells[e];
    if (cell.from >= zero_count || cell.to >= zero_count || cell.from == cell.to)
      throw InvalidInput(fmt::format("1-cell {} has invalid endpoints", e));
    adjacency[cell.from].emplace_back(cell.to, e);
    adjacency[cell.to].emplace_back(cell.from, e);
  }

  // Horton candidates: for every root w and edge (u, v), the tree paths
  // w->u and w->v closed by the edge.
  std::set<EdgeSet> candidates;
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  for (std::size_t root = 0; root < zero_count; ++root) {
    std::vector<std::size_t> parent_edge(zero_count, none);
    std::vector<bool> seen(zero_count, false);
    std::vector<EdgeSet> path(zero_count);
    std::queue<std::size_t> frontier;
    seen[root] = true;
    frontier.push(root);
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      for (auto [w, e] : adjacency[v])
        if (!seen[w]) {
          seen[w] = true;
          parent_edge[w] = e;
          path[w] = path[v];
          path[w].insert(std::upper_bound(path[w].begin(), path[w].end(), e), e);
          frontier.push(w);
        }
    }
    for (std::size_t e = 0; e < one_cells.size(); ++e) {
      const std::size_t u = one_cells[e].from;
      const std::size_t v = one_cells[e].to;
      if (!seen[u] || !seen[v]) continue;
      EdgeSet cycle = xor_sets(xor_sets(path[u], path[v]), EdgeSet{e});
      if (cycle.empty() || cycle.size() > max_length) continue;
      if (!order_cycle(cycle, one_cells).empty()) candidates.insert(std::move(cycle));
    }
  }

  std::vector<EdgeSet> sorted(candidates.begin(), candidates.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const EdgeSet& a, const EdgeSet& b) { return a.size() < b.size(); });

  // Greedy GF(2)-independent selection, shortest first.
  std::map<std::size_t, EdgeSet> pivots;  // highest edge -> reduced row
  std::vector<std::vector<std::size_t>> basis;
  for (const auto& cycle : sorted) {
    EdgeSet reduced = cycle;
    while (!reduced.empty()) {
      auto it = pivots.find(reduced.back());
      if (it == pivots.end()) break;
      reduced = xor_sets(reduced, it->second);
    }
    if (reduced.empty()) continue;
    pivots.emplace(reduced.back(), reduced);
    basis.push_back(order_cycle(cycle, one_cells));
  }
  return basis;
}

std::vector<Vector> loop_polyline(const std::vector<OneCell>& one_cells, const std::vector<std::size_t>& cycle) {
  if (cycle.empty()) throw InvalidInput("empty cycle");
  // Start at the vertex of the first edge not shared with the second edge.
  const OneCell& first = one_cells.at(cycle.front());
  std::size_t vertex = first.from;
  if (cycle.size() > 1) {
    const OneCell& second = one_cells.at(cycle[1]);
    if (first.from == second.from || first.from == second.to) vertex = first.to;
    if (cycle.size() == 2) vertex = first.from;
  }
  std::vector<Vector> polyline;
  for (std::size_t e : cycle) {
    const OneCell& cell = one_cells.at(e);
    const auto& nodes = cell.band.nodes;
    if (cell.from == vertex) {
      polyline.insert(polyline.end(), nodes.begin(), nodes.end() - 1);
      vertex = cell.to;
    } else {
      polyline.insert(polyline.end(), nodes.rbegin(), nodes.rend() - 1);
      vertex = cell.from;
    }
  }
  return polyline;
}

TwoCellSearch find_two_cells(const DensityField& field, const std::vector<OneCell>& one_cells,
                             std::size_t zero_count, const PipelineConfig& config, std::size_t workers) {
  TwoCellSearch search;
  const auto loops = candidate_loops(zero_count, one_cells, config.max_loop_length);
  search.candidates = loops.size();
  SheetParams params = config.sheet;
  if (!params.gradient_constant) params.gradient_constant = gradient_constant(field.dimension(), config.sigma);

  std::vector<std::optional<TwoCell>> outcomes(loops.size());
  parallel_for(loops.size(), workers, [&](std::size_t k) {
    WebSheet start = initial_sheet(loop_polyline(one_cells, loops[k]), params.rings, params.nodes_per_ring);
    RelaxResult relaxed = relax_sheet(field, std::move(start), params);
    if (!relaxed.converged()) return;
    TwoCell cell;
    cell.density = sheet_density(field, relaxed.sheet);
    cell.residual = relaxed.residual;
    cell.sheet = std::move(relaxed.sheet);
    cell.boundary_one_cells = loops[k];
    outcomes[k] = std::move(cell);
  });
  for (auto& outcome : outcomes)
    if (outcome) search.cells.push_back(std::move(*outcome));
  return search;
}

MorseFiltration assemble_filtration(const std::vector<ZeroCell>& zero_cells, const std::vector<OneCell>& one_cells,
                                    const std::vector<TwoCell>& two_cells) {
  std::vector<Cell> cells;
  std::size_t id = 0;
  for (const auto& z : zero_cells) cells.push_back({id++, 0, z.density, {}, {z.position}});
  const std::size_t one_base = id;
  for (const auto& o : one_cells) cells.push_back({id++, 1, o.density, {o.from, o.to}, o.band.nodes});
  for (const auto& t : two_cells) {
    std::vector<std::size_t> faces;
    for (std::size_t e : t.boundary_one_cells) faces.push_back(one_base + e);
    cells.push_back({id++, 2, t.density, std::move(faces), t.sheet.nodes});
  }
  return MorseFiltration::build(std::move(cells));
}

std::vector<ThresholdInterval> threshold_intervals(const MorseFiltration& filtration) {
  std::vector<ThresholdInterval> out;
  const auto values = filtration.critical_values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    ThresholdInterval interval;
    interval.upper = values[k];
    interval.lower = k + 1 < values.size() ? values[k + 1] : 0.0;
    const auto ids = superlevel_complex(filtration, values[k]);
    interval.counts = count_cells(filtration, ids);
    interval.betti = betti(filtration, ids);
    out.push_back(interval);
  }
  return out;
}

PipelineResult run(const PointCloud& cloud, const PipelineConfig& config, std::size_t workers) {
  config.validate();
  if (cloud.empty() || cloud.dimension() < 1) throw InvalidInput("point cloud is empty");
  const KernelDensity field(cloud, config.sigma);
  PipelineResult result;
  RunReport& report = result.report;

  auto start = std::chrono::steady_clock::now();
  Rng rng = make_stream(config.seed, 0);
  ZeroCellSearch zeros;
  try {
    zeros = find_zero_cells(field, config.ascent, config.zero_cluster_threshold, rng, workers);
  } catch (const NoConvergence& e) {
    throw NoConvergence(fmt::format("0-cell stage: {}", e.what()));
  }
  report.seeds = zeros.seeds;
  report.convergent_ascents = zeros.convergent;
  report.zero_clusters = zeros.clusters;
  report.zero_cells = std::move(zeros.cells);
  report.zero_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  if (report.zero_cells.size() < 2) {
    report.notes.push_back("fewer than two 0-cells, so no 1-cells were searched");
  } else {
    NebParams neb = config.neb;
    if (!neb.gradient_constant) neb.gradient_constant = gradient_constant(cloud.dimension(), config.sigma);
    OneCellSearch ones = find_one_cells(field, report.zero_cells, neb, derive_seed(config.seed, 1), workers);
    report.band_trials = ones.trials;
    report.convergent_bands = ones.convergent;
    report.discarded_bands = ones.discarded;
    report.one_clusters = ones.clusters;
    report.one_cells = std::move(ones.cells);
    if (report.one_cells.empty())
      report.notes.push_back(fmt::format("no band survived ({} trials, {} convergent, {} discarded near other 0-cells)",
                                         ones.trials, ones.convergent, ones.discarded));
  }
  report.one_seconds = seconds_since(start);

  start = std::chrono::steady_clock::now();
  if (!config.two_cells) {
    report.notes.push_back("2-cell search disabled");
  } else if (!report.one_cells.empty()) {
    TwoCellSearch twos = find_two_cells(field, report.one_cells, report.zero_cells.size(), config, workers);
    report.loop_candidates = twos.candidates;
    report.convergent_sheets = twos.cells.size();
    report.two_cells = std::move(twos.cells);
    if (twos.candidates == 0)
      report.notes.push_back(fmt::format("the 1-skeleton has no cycle of at most {} edges", config.max_loop_length));
    else if (report.two_cells.empty())
      report.notes.push_back(fmt::format("none of the {} candidate sheets converged", twos.candidates));
  }
  report.two_seconds = seconds_since(start);

  result.filtration = assemble_filtration(report.zero_cells, report.one_cells, report.two_cells);
  result.filtration.metadata = {config.sigma, config.seed, config_hash(config)};
  report.intervals = threshold_intervals(result.filtration);
  return result;
}

std::string format_report(const MorseFiltration& filtration, const RunReport& report) {
  std::string out;
  out += fmt::format("0-cells: {} seeds, {} convergent, {} clusters ({:.3f} s)\n", report.seeds,
                     report.convergent_ascents, report.zero_clusters, report.zero_seconds);
  out += fmt::format("1-cells: {} trials, {} convergent, {} discarded, {} clusters ({:.3f} s)\n", report.band_trials,
                     report.convergent_bands, report.discarded_bands, report.one_clusters, report.one_seconds);
  out += fmt::format("2-cells: {} candidate loops, {} convergent ({:.3f} s)\n", report.loop_candidates,
                     report.convergent_sheets, report.two_seconds);
  for (const auto& note : report.notes) out += fmt::format("note: {}\n", note);

  out += "\ncells (id dim density boundary)\n";
  for (const auto& cell : filtration.cells())
    out += fmt::format("  {:>4} {} {:.6e} [{}]\n", cell.id, cell.dim, cell.density, fmt::join(cell.boundary, " "));

  out += "\nthreshold intervals (a range: vertices edges faces -> b0 b1)\n";
  for (const auto& interval : report.intervals)
    out += fmt::format("  ({:.6e}, {:.6e}]: {} {} {} -> b0={} b1={}\n", interval.lower, interval.upper,
                       interval.counts.vertices, interval.counts.edges, interval.counts.faces, interval.betti.b0,
                       interval.betti.b1);

  const auto loops = loop_persistence(filtration);
  if (!loops.empty()) {
    out += "\nloops (birth death lifespan)\n";
    for (const auto& loop : loops)
      out += fmt::format("  {:.6e} {:.6e} {:.6e}\n", loop.birth, loop.death, loop.lifespan);
  }
  return out;
}

}  // namespace morse
