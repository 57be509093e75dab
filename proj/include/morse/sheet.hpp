#pragma once

#include "morse/density.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace morse {

/// Web-shaped graph: a center node plus `rings` concentric rings of
/// `nodes_per_ring` nodes. Node 0 is the center; ring j (1-based, outermost =
/// rings) spoke s is node 1 + (j - 1) * nodes_per_ring + s. The outer ring is
/// the fixed boundary.
struct WebSheet {
  std::vector<Vector> nodes;
  std::vector<std::vector<std::size_t>> neighbors;
  std::vector<bool> boundary;
  std::size_t rings = 0;
  std::size_t nodes_per_ring = 0;

  std::size_t index(std::size_t ring, std::size_t spoke) const { return 1 + (ring - 1) * nodes_per_ring + spoke; }
  std::size_t interior_count() const;
};

struct SheetParams {
  std::size_t rings = 10;
  std::size_t nodes_per_ring = 20;
  double tolerance = 1e-3;
  double step_size = 0.01;
  std::size_t max_steps = 200'000;
  /// Unset means gradient_constant(n, sigma) of the kernel density.
  std::optional<double> gradient_constant;

  void validate() const;
};

/// Lays a web over a closed polyline (last point joins back to the first). The
/// outer ring is resampled evenly by arc length; the center sits at the mean of
/// the outer ring and inner rings interpolate linearly toward it.
WebSheet initial_sheet(const std::vector<Vector>& boundary_loop, std::size_t rings, std::size_t nodes_per_ring);

struct TangentBasis {
  Matrix basis;  // n x r, orthonormal columns, r <= k
  bool deficient = false;
};

/// Top-k principal directions of the mean-centered neighbor offsets of a node.
/// Fewer than k directions are returned (and flagged) when the offsets do not
/// span k dimensions.
TangentBasis tangent_space(const WebSheet& sheet, std::size_t node, std::size_t k);

struct SheetForce {
  Vector total;
  Vector gradient_part;  // c grad f minus its projection on the tangent basis
  Vector spring_part;    // sum over neighbors of (v_beta - v_alpha)
  bool deficient = false;
};

SheetForce sheet_force(const DensityField& field, const WebSheet& sheet, std::size_t node, double c);

enum class RelaxStatus { converged, max_steps, non_finite };

struct RelaxResult {
  WebSheet sheet;
  RelaxStatus status = RelaxStatus::max_steps;
  std::size_t steps = 0;
  double residual = 0.0;  // mean interior force norm of the returned state

  bool converged() const noexcept { return status == RelaxStatus::converged; }
};

/// Explicit Euler relaxation of v' = F over interior nodes (simultaneous
/// update from a snapshot) until the mean interior force norm is below the
/// tolerance. Boundary nodes are never written.
RelaxResult relax_sheet(const DensityField& field, WebSheet sheet, const SheetParams& params);

double sheet_density(const DensityField& field, const WebSheet& sheet);

/// Dense sheet spanning a loop of 1-cells.
struct TwoCell {
  WebSheet sheet;
  std::vector<std::size_t> boundary_one_cells;
  double density = 0.0;
  double residual = 0.0;
};

}  // namespace morse
