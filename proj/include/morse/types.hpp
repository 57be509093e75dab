#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace morse {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Finite sample of R^n. Points are stored as the columns of a dense matrix.
class PointCloud {
public:
  PointCloud() = default;
  /// Takes ownership of an n-by-m matrix of m points. Throws InvalidInput when empty.
  explicit PointCloud(Matrix columns);
  /// Throws InvalidInput on an empty list or mixed dimensions.
  static PointCloud from_points(const std::vector<Vector>& points);

  std::size_t size() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  bool empty() const noexcept { return data_.cols() == 0; }

  auto point(std::size_t i) const { return data_.col(static_cast<Eigen::Index>(i)); }
  const Matrix& matrix() const noexcept { return data_; }
  std::vector<Vector> points() const;

private:
  Matrix data_;
};

}  // namespace morse
