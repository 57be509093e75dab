#pragma once

#include "morse/types.hpp"

#include <cstddef>
#include <vector>

namespace morse {

/// Differentiable scalar field on R^n. Implementations are immutable after
/// construction, so one instance may be shared by many solver threads.
class DensityField {
public:
  virtual ~DensityField() = default;

  virtual std::size_t dimension() const = 0;
  virtual double value(const Vector& y) const = 0;
  virtual Vector gradient(const Vector& y) const = 0;

protected:
  void check_dimension(const Vector& y) const;
};

/// Isotropic Gaussian kernel density estimate
///   f(y) = |X|^-1 sum_x (2 pi sigma^2)^(-n/2) exp(-|y - x|^2 / (2 sigma^2)).
/// Evaluation is exact: every sample contributes to every query.
class KernelDensity final : public DensityField {
public:
  /// Throws InvalidInput when sigma <= 0 or the cloud is empty.
  KernelDensity(PointCloud cloud, double sigma);

  std::size_t dimension() const override { return cloud_.dimension(); }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;

  /// Kernel-weighted mean of the samples around y. Throws NoMass when every
  /// weight underflows to zero.
  Vector mean_shift(const Vector& y) const;

  const PointCloud& cloud() const noexcept { return cloud_; }
  double sigma() const noexcept { return sigma_; }

private:
  // exp(-|y - x|^2 / (2 sigma^2)) for every sample x, unnormalized.
  Eigen::ArrayXd weights(const Vector& y) const;

  PointCloud cloud_;
  double sigma_;
  double normalizer_;  // (2 pi sigma^2)^(-n/2) / |X|
};

/// Reciprocal of sup |grad psi_{0,sigma}|, namely (sigma sqrt(2 pi))^n sqrt(e).
double gradient_constant(std::size_t n, double sigma);

// Analytic fields used to drive the solvers with known answers.

class ConstantField final : public DensityField {
public:
  ConstantField(std::size_t n, double level) : n_(n), level_(level) {}
  std::size_t dimension() const override { return n_; }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;

private:
  std::size_t n_;
  double level_;
};

/// f(y) = <w, y> + offset
class LinearField final : public DensityField {
public:
  LinearField(Vector w, double offset = 0.0) : w_(std::move(w)), offset_(offset) {}
  std::size_t dimension() const override { return static_cast<std::size_t>(w_.size()); }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;

private:
  Vector w_;
  double offset_;
};

/// f(y) = -|y - center|^2
class NegativeQuadraticField final : public DensityField {
public:
  explicit NegativeQuadraticField(Vector center) : center_(std::move(center)) {}
  std::size_t dimension() const override { return static_cast<std::size_t>(center_.size()); }
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;

private:
  Vector center_;
};

/// Weighted sum of isotropic Gaussian densities sharing one sigma. With unit
/// weights divided by the count this is the KDE of the centers.
class GaussianMixtureField final : public DensityField {
public:
  /// Equal weights 1/|centers|.
  GaussianMixtureField(std::vector<Vector> centers, double sigma);
  GaussianMixtureField(std::vector<Vector> centers, std::vector<double> weights, double sigma);

  std::size_t dimension() const override;
  double value(const Vector& y) const override;
  Vector gradient(const Vector& y) const override;

private:
  std::vector<Vector> centers_;
  std::vector<double> weights_;
  double sigma_;
  double normalizer_;
};

}  // namespace morse
