#pragma once

#include "morse/density.hpp"
#include "morse/random.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace morse {

/// A local maximum of the density (0-cell).
struct ZeroCell {
  Vector position;
  double density = 0.0;
};

struct AscentParams {
  double tolerance = 1e-4;
  std::size_t max_iterations = 10'000;
  /// Number of samples used as seeds; 0 means min(|X|, 500).
  std::size_t seed_count = 0;
};

/// Mean-shift iteration y <- m(y) from y0. Returns the first iterate whose
/// shift is shorter than the tolerance, or nullopt when the iteration runs out
/// of steps or loses all kernel mass.
std::optional<Vector> ascend(const KernelDensity& field, const Vector& y0, const AscentParams& params);

/// Union-find partition into connected components of the graph joining i, j
/// whenever distance(i, j) <= threshold. Clusters are ordered by their
/// smallest member and members are ascending.
std::vector<std::vector<std::size_t>> single_linkage(std::size_t count,
                                                     const std::function<double(std::size_t, std::size_t)>& distance,
                                                     double threshold);

/// Euclidean single linkage over a list of points.
std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Vector>& points, double threshold);

struct ZeroCellSearch {
  std::vector<ZeroCell> cells;
  std::size_t seeds = 0;
  std::size_t convergent = 0;
  std::size_t clusters = 0;
};

/// Seeds mean shift at a random subset of the samples, clusters the limits and
/// keeps the densest member of each cluster. Cells are sorted by density
/// descending, ties broken by lexicographic position. Throws EmptyResult when
/// no seed converges.
ZeroCellSearch find_zero_cells(const KernelDensity& field, const AscentParams& params, double cluster_threshold,
                               Rng& rng, std::size_t workers = 1);

}  // namespace morse
