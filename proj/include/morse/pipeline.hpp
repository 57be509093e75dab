#pragma once

#include "morse/band.hpp"
#include "morse/config.hpp"
#include "morse/cwcomplex.hpp"
#include "morse/density.hpp"
#include "morse/maxima.hpp"
#include "morse/sheet.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace morse {

/// Range of thresholds a in [lower, upper] over which Z^a is the same complex.
struct ThresholdInterval {
  double lower = 0.0;  // exclusive, except for the last interval which reaches 0
  double upper = 0.0;  // inclusive
  CellCounts counts;
  Betti betti;
};

struct RunReport {
  std::size_t seeds = 0;
  std::size_t convergent_ascents = 0;
  std::size_t zero_clusters = 0;

  std::size_t band_trials = 0;
  std::size_t convergent_bands = 0;
  std::size_t discarded_bands = 0;
  std::size_t one_clusters = 0;

  std::size_t loop_candidates = 0;
  std::size_t convergent_sheets = 0;

  double zero_seconds = 0.0;
  double one_seconds = 0.0;
  double two_seconds = 0.0;

  // Stage outputs, kept so later stages can be rerun without recomputing.
  std::vector<ZeroCell> zero_cells;
  std::vector<OneCell> one_cells;
  std::vector<TwoCell> two_cells;

  std::vector<ThresholdInterval> intervals;
  std::vector<std::string> notes;
};

struct PipelineResult {
  MorseFiltration filtration;
  RunReport report;
};

/// Cycles of the 1-skeleton (0-cells as vertices, 1-cells as edges) forming a
/// shortest cycle basis restricted to cycles of at most max_length edges. Each
/// cycle lists 1-cell indices in traversal order.
std::vector<std::vector<std::size_t>> candidate_loops(std::size_t zero_count, const std::vector<OneCell>& one_cells,
                                                      std::size_t max_length);

/// Closed polyline obtained by walking the bands of a cycle head to tail.
std::vector<Vector> loop_polyline(const std::vector<OneCell>& one_cells, const std::vector<std::size_t>& cycle);

struct TwoCellSearch {
  std::vector<TwoCell> cells;
  std::size_t candidates = 0;
};

TwoCellSearch find_two_cells(const DensityField& field, const std::vector<OneCell>& one_cells,
                             std::size_t zero_count, const PipelineConfig& config, std::size_t workers = 1);

/// Clamped filtration over the three stage outputs.
MorseFiltration assemble_filtration(const std::vector<ZeroCell>& zero_cells, const std::vector<OneCell>& one_cells,
                                    const std::vector<TwoCell>& two_cells);

std::vector<ThresholdInterval> threshold_intervals(const MorseFiltration& filtration);

/// Density estimate, 0-cells, 1-cells, 2-cells and the assembled filtration.
/// The result depends only on (cloud, config); `workers` only changes speed.
PipelineResult run(const PointCloud& cloud, const PipelineConfig& config, std::size_t workers = 1);

/// Human-readable summary of a run.
std::string format_report(const MorseFiltration& filtration, const RunReport& report);

}  // namespace morse
