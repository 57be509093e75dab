#pragma once

#include "morse/density.hpp"
#include "morse/maxima.hpp"
#include "morse/random.hpp"

#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace morse {

/// Piecewise-linear path v_1..v_N whose endpoints are pinned to two 0-cells.
/// Only interior nodes (indices 1..N-2, zero-based) are ever moved.
struct Band {
  std::vector<Vector> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  const Vector& front() const { return nodes.front(); }
  const Vector& back() const { return nodes.back(); }
};

struct NebParams {
  std::size_t node_count = 11;
  double alpha = std::numbers::pi / 6;
  double beta = std::numbers::pi / 2;
  /// Strength of the perpendicular gradient force; unset means gradient_constant(n, sigma).
  std::optional<double> gradient_constant;
  double step_size = 0.01;
  double convergence_tolerance = 1e-4;
  std::size_t max_steps = 200'000;
  double discard_radius = 0.5;
  double cluster_threshold = 0.3;
  std::size_t trials_per_pair = 20;
  bool sphere_mode = false;

  /// Throws InvalidInput when a field is out of range.
  void validate() const;
};

/// Dense path between two 0-cells (indices into the 0-cell list).
struct OneCell {
  Band band;
  double density = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
  double residual = 0.0;      // mean interior force norm at convergence
  std::size_t cluster_size = 0;
};

/// Unit tangent (u+ + u-)/|u+ + u-| at interior node i. Throws DegenerateTangent
/// when the two edges cancel.
Vector tangent(const Band& band, std::size_t i);

/// Smoothing weight h_{alpha,beta}: 0 below alpha, 1 above beta, raised cosine between.
double smoothing_weight(double theta, double alpha, double beta);

/// Force on interior node i given a resolved gradient constant c.
struct NodeForce {
  Vector total;
  Vector gradient_part;  // c grad f restricted to the normal space of the tangent
  bool degenerate = false;
};

NodeForce node_force(const DensityField& field, const Band& band, std::size_t i, double c, double alpha, double beta);

/// Total force c grad f|perp + spring + smoothing at interior node i. A hairpin
/// node falls back to the forward-difference tangent.
Vector total_force(const DensityField& field, const Band& band, const NebParams& params, std::size_t i);

/// Mean norm of the total force over interior nodes.
double mean_force(const DensityField& field, const Band& band, const NebParams& params);

enum class EvolveStatus { converged, max_steps, non_finite, degenerate };

struct EvolveResult {
  Band band;
  EvolveStatus status = EvolveStatus::max_steps;
  std::size_t steps = 0;
  std::size_t degenerate_steps = 0;
  double residual = 0.0;

  bool converged() const noexcept { return status == EvolveStatus::converged; }
};

/// Explicit Euler integration of v_i' = F_i with simultaneous node updates,
/// stopping at the first state whose mean interior force norm is below the
/// tolerance. Endpoints are copied through untouched.
EvolveResult evolve(const DensityField& field, Band band, const NebParams& params);

/// N nodes evenly spaced by arc length along the circular arc through p,
/// (p + q + r y)/2 and q, with y a random unit vector orthogonal to p - q and
/// r uniform on [0, |p - q|]. Collinear or one-dimensional cases give the segment.
Band initial_band_general(const Vector& p, const Vector& q, std::size_t node_count, Rng& rng);

/// Arc with a prescribed bulge r along unit direction y (y orthogonal to p - q).
Band arc_band(const Vector& p, const Vector& q, std::size_t node_count, double bulge, const Vector& direction);

/// Band hugging the unit sphere: even spacing along the circle cut by the plane
/// through a random y, p/|p| and q/|q| (the arc avoiding y), with node norms
/// interpolated linearly from |p| to |q|.
Band initial_band_sphere(const Vector& p, const Vector& q, std::size_t node_count, Rng& rng);

/// Mean distance between corresponding interior nodes. Throws InvalidInput when
/// the bands differ in node count or endpoints.
double band_distance(const Band& a, const Band& b);

/// Minimum density over all nodes, endpoints included.
double band_density(const DensityField& field, const Band& band);

struct OneCellSearch {
  std::vector<OneCell> cells;
  std::size_t trials = 0;
  std::size_t convergent = 0;
  std::size_t discarded = 0;  // convergent but too close to another 0-cell
  std::size_t clusters = 0;
};

/// For every pair of 0-cells, evolves trials_per_pair random initial bands,
/// drops non-convergent ones and those passing within discard_radius of a third
/// 0-cell, clusters the survivors under band_distance and keeps the densest
/// band per cluster. Output is sorted by density descending. Each trial draws
/// from its own stream derived from `seed`, so results do not depend on `workers`.
OneCellSearch find_one_cells(const DensityField& field, const std::vector<ZeroCell>& zero_cells,
                             const NebParams& params, std::uint64_t seed, std::size_t workers = 1);

}  // namespace morse
