#include "morse/error.hpp"
#include "morse/ingestion.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace morse {

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "gaussian_mixture") return SynthKind::gaussian_mixture;
  if (name == "noisy_circle") return SynthKind::noisy_circle;
  if (name == "bumpy_circle") return SynthKind::bumpy_circle;
  throw InvalidInput(fmt::format("unknown synthetic kind '{}'", name));
}

namespace {

PointCloud gaussian_mixture(const SynthParams& params, Rng& rng) {
  if (params.centers.empty()) throw InvalidInput("gaussian_mixture needs at least one center");
  const auto dim = params.centers.front().size();
  for (const auto& c : params.centers)
    if (c.size() != dim) throw InvalidInput("mixture centers must share a dimension");
  if (!params.weights.empty() && params.weights.size() != params.centers.size())
    throw InvalidInput("one weight per center required");
  if (!params.scales.empty() && params.scales.size() != params.centers.size())
    throw InvalidInput("one scale per center required");
  for (double s : params.scales)
    if (!(s >= 0.0)) throw InvalidInput("mixture scales must be nonnegative");

  std::vector<double> weights = params.weights;
  if (weights.empty()) weights.assign(params.centers.size(), 1.0);
  std::discrete_distribution<std::size_t> component(weights.begin(), weights.end());
  std::normal_distribution<double> normal;

  Matrix data(dim, static_cast<Eigen::Index>(params.count));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    const std::size_t k = component(rng);
    const double scale = params.scales.empty() ? 1.0 : params.scales[k];
    for (Eigen::Index i = 0; i < dim; ++i) data(i, j) = params.centers[k](i) + scale * normal(rng);
  }
  return PointCloud(std::move(data));
}

PointCloud circle(const SynthParams& params, bool bumpy, Rng& rng) {
  if (params.dim < 2) throw InvalidInput("circles need dimension at least 2");
  if (!(params.radius > 0.0)) throw InvalidInput("radius must be positive");
  if (!(params.noise >= 0.0)) throw InvalidInput("noise must be nonnegative");
  if (bumpy) {
    if (params.bumps == 0) throw InvalidInput("bumpy_circle needs at least one bump");
    if (!(params.base_fraction >= 0.0 && params.base_fraction <= 1.0))
      throw InvalidInput("base fraction must lie in [0, 1]");
    if (!(params.bump_width > 0.0)) throw InvalidInput("bump width must be positive");
  }
  std::uniform_real_distribution<double> turn(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> which(0, bumpy ? params.bumps - 1 : 0);
  std::normal_distribution<double> normal;

  const auto dim = static_cast<Eigen::Index>(params.dim);
  Matrix data(dim, static_cast<Eigen::Index>(params.count));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    double angle;
    if (!bumpy || unit(rng) < params.base_fraction) {
      angle = turn(rng);
    } else {
      const double center =
          params.phase + 2.0 * std::numbers::pi * static_cast<double>(which(rng)) / static_cast<double>(params.bumps);
      angle = center + params.bump_width * normal(rng);
    }
    data.col(j).setZero();
    data(0, j) = params.radius * std::cos(angle);
    data(1, j) = params.radius * std::sin(angle);
    if (params.noise > 0.0)
      for (Eigen::Index i = 0; i < dim; ++i) data(i, j) += params.noise * normal(rng);
  }
  return PointCloud(std::move(data));
}

}  // namespace

PointCloud synth(SynthKind kind, const SynthParams& params, Rng& rng) {
  if (params.count == 0) throw InvalidInput("count must be positive");
  switch (kind) {
    case SynthKind::gaussian_mixture: return gaussian_mixture(params, rng);
    case SynthKind::noisy_circle: return circle(params, false, rng);
    case SynthKind::bumpy_circle: return circle(params, true, rng);
  }
  throw InvalidInput("unknown synthetic kind");
}

}  // namespace morse
