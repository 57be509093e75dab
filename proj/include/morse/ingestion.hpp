#pragma once

#include "morse/random.hpp"
#include "morse/types.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace morse {

// ---------------------------------------------------------------------------
// Point-cloud CSV: one point per line, comma-separated decimal coordinates.

PointCloud read_point_cloud(const std::filesystem::path& path);
PointCloud parse_point_cloud(const std::string& text);
void write_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);
std::string format_point_cloud(const PointCloud& cloud);

/// Dense real matrix from CSV rows (used for rasters and time series).
Matrix parse_matrix(const std::string& text);
Matrix read_matrix(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Graph data.

struct UnweightedGraph {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::string> labels;  // optional, empty or one per vertex

  /// Throws InvalidInput on self-loops, duplicate edges or out-of-range ids.
  void validate() const;
};

/// Graph file: first line "V E", then E lines "i j" with 0-based ids.
UnweightedGraph parse_graph(const std::string& text);
UnweightedGraph read_graph(const std::filesystem::path& path);

/// Breadth-first hop counts between all vertex pairs. Throws InvalidInput
/// naming the component sizes when the graph is disconnected.
Matrix shortest_path_distances(const UnweightedGraph& graph);

struct MdsOptions {
  std::size_t target_dim = 5;
  std::size_t max_iterations = 1000;
  double tolerance = 1e-9;  // stop when the relative stress decrease falls below this
};

struct MdsResult {
  PointCloud embedding;
  double stress = 0.0;                // raw stress sum_{i<j} (d_ij - delta_ij)^2
  std::vector<double> stress_history;  // starting configuration first
  std::size_t iterations = 0;
};

/// Stress majorization (SMACOF with unit weights) from a seeded random start.
MdsResult mds_embed(const Matrix& distances, const MdsOptions& options, Rng& rng);

double raw_stress(const Matrix& configuration, const Matrix& distances);

// ---------------------------------------------------------------------------
// Image, range and flow patches.

enum class Modality { optical, range, flow };

Modality parse_modality(const std::string& name);

struct PatchConfig {
  std::size_t side = 3;
  Modality modality = Modality::optical;
  double quantile = 0.2;  // keep this top fraction by contrast
  std::size_t sample_size = 5000;

  void validate() const;
};

/// One raster: a single channel for optical/range, channels {u, v} for flow.
struct Raster {
  std::string name;
  std::vector<Matrix> channels;
};

/// Non-constant DCT-II modes of a side x side patch scaled to unit contrast
/// norm. Patch vectors are column-major (index = column * side + row). For side
/// 3 the order is e1 horizontal gradient, e2 vertical gradient, e3/e4 the
/// horizontal/vertical quadratics, e5 the saddle, e6, e7 the mixed modes and e8
/// the checker; for side 5 modes run with the horizontal frequency fastest, so
/// e1 is the horizontal and e5 the vertical gradient.
std::vector<Vector> dct_basis(std::size_t side);

/// sum over 4-adjacent pixel pairs of (x_i - x_j)(y_i - y_j).
double contrast_inner(const Vector& x, const Vector& y, std::size_t side);
double contrast_norm(const Vector& x, std::size_t side);
/// Flow patches stack u over v; the norm sums |(u_i, v_i) - (u_j, v_j)|^2.
double flow_contrast_norm(const Vector& uv, std::size_t side);

/// Centers, contrast-normalizes and expresses one patch (already log-transformed
/// where applicable) in DCT coordinates. Returns an empty vector for a
/// zero-contrast patch.
Vector patch_coordinates(const Vector& patch, Modality modality, std::size_t side);

/// Random patch sample, log transform (optical/range), top-quantile contrast
/// filter, normalization and DCT change of basis. Output lies on the unit sphere.
PointCloud preprocess_patches(const std::vector<Raster>& rasters, const PatchConfig& config, Rng& rng);

// ---------------------------------------------------------------------------
// Time series.

/// Delay embedding of a variables x time matrix: point t stacks columns
/// t .. t + window - 1, giving T - window + 1 points in R^(g * window).
PointCloud sliding_window(const Matrix& series, std::size_t window);

// ---------------------------------------------------------------------------
// Synthetic clouds.

enum class SynthKind { gaussian_mixture, noisy_circle, bumpy_circle };

SynthKind parse_synth_kind(const std::string& name);

struct SynthParams {
  std::size_t count = 1000;
  std::size_t dim = 2;
  // gaussian_mixture
  std::vector<Vector> centers;
  std::vector<double> weights;  // empty means equal
  std::vector<double> scales;   // one per center, empty means all 1
  // circles
  double radius = 1.0;
  double noise = 0.0;
  // bumpy_circle
  std::size_t bumps = 3;
  double bump_width = 0.25;    // angular standard deviation of each bump, radians
  double base_fraction = 0.3;  // share of points spread uniformly around the circle
  double phase = 0.0;          // angle of the first bump
};

PointCloud synth(SynthKind kind, const SynthParams& params, Rng& rng);

}  // namespace morse
