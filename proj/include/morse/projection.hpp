#pragma once

#include "morse/types.hpp"

#include <cstddef>

namespace morse {

/// Affine map to the plane: y = axes^T (x - mean).
struct PlaneProjection {
  Vector mean;
  Matrix axes;  // n x 2

  Eigen::Vector2d apply(const Vector& x) const;
};

/// Top two principal axes of the columns of `points` (n x m, n >= 2). Axis
/// signs are fixed so the largest-magnitude component of each axis is positive.
PlaneProjection fit_pca(const Matrix& points);

/// Selects coordinates i and j verbatim. Throws InvalidInput when out of range.
PlaneProjection coordinate_projection(std::size_t dimension, std::size_t i, std::size_t j);

}  // namespace morse
