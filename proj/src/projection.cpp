#include "morse/projection.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

namespace morse {

Eigen::Vector2d PlaneProjection::apply(const Vector& x) const { return axes.transpose() * (x - mean); }

PlaneProjection fit_pca(const Matrix& points) {
  if (points.rows() < 2) throw InvalidInput("projection needs dimension at least 2");
  if (points.cols() == 0) throw InvalidInput("projection needs at least one point");
  PlaneProjection out;
  out.mean = points.rowwise().mean();
  const Matrix centered = points.colwise() - out.mean;
  const Matrix covariance = centered * centered.transpose() / static_cast<double>(points.cols());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(covariance);
  const auto n = points.rows();
  out.axes.resize(n, 2);
  // Eigenvalues ascend; the last two columns carry the most variance.
  out.axes.col(0) = solver.eigenvectors().col(n - 1);
  out.axes.col(1) = solver.eigenvectors().col(n - 2);
  for (int k = 0; k < 2; ++k) {
    Eigen::Index largest = 0;
    out.axes.col(k).cwiseAbs().maxCoeff(&largest);
    if (out.axes(largest, k) < 0.0) out.axes.col(k) *= -1.0;
  }
  return out;
}

PlaneProjection coordinate_projection(std::size_t dimension, std::size_t i, std::size_t j) {
  if (i >= dimension || j >= dimension)
    throw InvalidInput(fmt::format("coordinates {} {} out of range for dimension {}", i, j, dimension));
  PlaneProjection out;
  const auto n = static_cast<Eigen::Index>(dimension);
  out.mean = Vector::Zero(n);
  out.axes = Matrix::Zero(n, 2);
  out.axes(static_cast<Eigen::Index>(i), 0) = 1.0;
  out.axes(static_cast<Eigen::Index>(j), 1) = 1.0;
  return out;
}

}  // namespace morse
