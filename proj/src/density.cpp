#include "morse/density.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace morse {

PointCloud::PointCloud(Matrix columns) : data_(std::move(columns)) {
  if (data_.cols() == 0 || data_.rows() == 0)
    throw InvalidInput("point cloud must contain at least one point of positive dimension");
}

PointCloud PointCloud::from_points(const std::vector<Vector>& points) {
  if (points.empty()) throw InvalidInput("point cloud must contain at least one point");
  const auto n = points.front().size();
  Matrix data(n, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n)
      throw InvalidInput(fmt::format("point {} has dimension {}, expected {}", i, points[i].size(), n));
    data.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return PointCloud(std::move(data));
}

std::vector<Vector> PointCloud::points() const {
  std::vector<Vector> out;
  out.reserve(size());
  for (Eigen::Index i = 0; i < data_.cols(); ++i) out.emplace_back(data_.col(i));
  return out;
}

void DensityField::check_dimension(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != dimension())
    throw InvalidInput(fmt::format("query has dimension {}, field has dimension {}", y.size(), dimension()));
}

KernelDensity::KernelDensity(PointCloud cloud, double sigma) : cloud_(std::move(cloud)), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be positive and finite");
  if (cloud_.empty()) throw InvalidInput("kernel density needs at least one sample");
  const double n = static_cast<double>(cloud_.dimension());
  normalizer_ = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * n) / static_cast<double>(cloud_.size());
}

Eigen::ArrayXd KernelDensity::weights(const Vector& y) const {
  check_dimension(y);
  const Eigen::ArrayXd sq = (cloud_.matrix().colwise() - y).colwise().squaredNorm().transpose().array();
  return (sq * (-0.5 / (sigma_ * sigma_))).exp();
}

double KernelDensity::value(const Vector& y) const {
  return normalizer_ * weights(y).sum();
}

Vector KernelDensity::gradient(const Vector& y) const {
  const Eigen::ArrayXd w = weights(y);
  // sum_x w_x (x - y) = X w - y sum(w)
  const Vector pull = cloud_.matrix() * w.matrix() - y * w.sum();
  return pull * (normalizer_ / (sigma_ * sigma_));
}

Vector KernelDensity::mean_shift(const Vector& y) const {
  const Eigen::ArrayXd w = weights(y);
  const double total = w.sum();
  if (!(total > 0.0)) throw NoMass("all kernel weights underflow at the query point");
  return cloud_.matrix() * w.matrix() / total;
}

double gradient_constant(std::size_t n, double sigma) {
  if (n == 0) throw InvalidInput("dimension must be positive");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  return std::pow(sigma * std::sqrt(2.0 * std::numbers::pi), static_cast<double>(n)) * std::sqrt(std::numbers::e);
}

double ConstantField::value(const Vector& y) const {
  check_dimension(y);
  return level_;
}

Vector ConstantField::gradient(const Vector& y) const {
  check_dimension(y);
  return Vector::Zero(y.size());
}

double LinearField::value(const Vector& y) const {
  check_dimension(y);
  return w_.dot(y) + offset_;
}

Vector LinearField::gradient(const Vector& y) const {
  check_dimension(y);
  return w_;
}

double NegativeQuadraticField::value(const Vector& y) const {
  check_dimension(y);
  return -(y - center_).squaredNorm();
}

Vector NegativeQuadraticField::gradient(const Vector& y) const {
  check_dimension(y);
  return -2.0 * (y - center_);
}

GaussianMixtureField::GaussianMixtureField(std::vector<Vector> centers, double sigma)
    : GaussianMixtureField(centers, std::vector<double>(centers.size(), 1.0 / static_cast<double>(centers.size())),
                           sigma) {}

GaussianMixtureField::GaussianMixtureField(std::vector<Vector> centers, std::vector<double> weights, double sigma)
    : centers_(std::move(centers)), weights_(std::move(weights)), sigma_(sigma) {
  if (centers_.empty()) throw InvalidInput("mixture needs at least one center");
  if (weights_.size() != centers_.size()) throw InvalidInput("one weight per center required");
  if (!(sigma > 0.0)) throw InvalidInput("sigma must be positive");
  for (const auto& c : centers_)
    if (c.size() != centers_.front().size()) throw InvalidInput("mixture centers must share a dimension");
  const double n = static_cast<double>(centers_.front().size());
  normalizer_ = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.5 * n);
}

std::size_t GaussianMixtureField::dimension() const {
  return static_cast<std::size_t>(centers_.front().size());
}

double GaussianMixtureField::value(const Vector& y) const {
  check_dimension(y);
  double total = 0.0;
  for (std::size_t k = 0; k < centers_.size(); ++k)
    total += weights_[k] * std::exp(-(y - centers_[k]).squaredNorm() / (2.0 * sigma_ * sigma_));
  return normalizer_ * total;
}

Vector GaussianMixtureField::gradient(const Vector& y) const {
  check_dimension(y);
  Vector g = Vector::Zero(y.size());
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    const Vector d = centers_[k] - y;
    g += weights_[k] * std::exp(-d.squaredNorm() / (2.0 * sigma_ * sigma_)) * d;
  }
  return g * (normalizer_ / (sigma_ * sigma_));
}

}  // namespace morse
