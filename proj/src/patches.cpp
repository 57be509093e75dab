#include "morse/error.hpp"
#include "morse/ingestion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace morse {

namespace {

std::size_t flat(std::size_t row, std::size_t col, std::size_t side) { return col * side + row; }

double cosine_mode(std::size_t k, std::size_t x, std::size_t side) {
  return std::cos(std::numbers::pi * static_cast<double>((2 * x + 1) * k) / static_cast<double>(2 * side));
}

// (horizontal frequency, vertical frequency) in basis order.
std::vector<std::pair<std::size_t, std::size_t>> mode_order(std::size_t side) {
  if (side == 3) return {{1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}};
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t ky = 0; ky < side; ++ky)
    for (std::size_t kx = 0; kx < side; ++kx)
      if (kx || ky) order.emplace_back(kx, ky);
  return order;
}

const std::vector<Vector>& cached_basis(std::size_t side) {
  static const std::vector<Vector> three = dct_basis(3);
  static const std::vector<Vector> five = dct_basis(5);
  return side == 3 ? three : five;
}

Vector cut_patch(const Matrix& channel, std::size_t top, std::size_t left, std::size_t side) {
  Vector patch(static_cast<Eigen::Index>(side * side));
  for (std::size_t c = 0; c < side; ++c)
    for (std::size_t r = 0; r < side; ++r)
      patch(static_cast<Eigen::Index>(flat(r, c, side))) =
          channel(static_cast<Eigen::Index>(top + r), static_cast<Eigen::Index>(left + c));
  return patch;
}

}  // namespace

Modality parse_modality(const std::string& name) {
  if (name == "optical") return Modality::optical;
  if (name == "range") return Modality::range;
  if (name == "flow") return Modality::flow;
  throw InvalidInput(fmt::format("unknown modality '{}' (expected optical, range or flow)", name));
}

void PatchConfig::validate() const {
  if (side != 3 && side != 5) throw InvalidInput(fmt::format("unsupported patch side {} (expected 3 or 5)", side));
  if (!(quantile > 0.0 && quantile <= 1.0)) throw InvalidInput("contrast quantile must lie in (0, 1]");
  if (sample_size == 0) throw InvalidInput("sample size must be positive");
}

std::vector<Vector> dct_basis(std::size_t side) {
  if (side != 3 && side != 5) throw InvalidInput(fmt::format("unsupported patch side {} (expected 3 or 5)", side));
  std::vector<Vector> basis;
  for (auto [kx, ky] : mode_order(side)) {
    Vector e(static_cast<Eigen::Index>(side * side));
    for (std::size_t c = 0; c < side; ++c)
      for (std::size_t r = 0; r < side; ++r)
        e(static_cast<Eigen::Index>(flat(r, c, side))) = cosine_mode(kx, c, side) * cosine_mode(ky, r, side);
    // Round away cos(pi/2)-style residue so symmetric modes are exactly zero-sum.
    for (auto& v : e)
      if (std::abs(v) < 1e-15) v = 0.0;
    basis.push_back(e / contrast_norm(e, side));
  }
  return basis;
}

double contrast_inner(const Vector& x, const Vector& y, std::size_t side) {
  if (x.size() != static_cast<Eigen::Index>(side * side) || y.size() != x.size())
    throw InvalidInput("patch size does not match the side length");
  double total = 0.0;
  auto pair = [&](std::size_t i, std::size_t j) {
    total += (x(static_cast<Eigen::Index>(i)) - x(static_cast<Eigen::Index>(j))) *
             (y(static_cast<Eigen::Index>(i)) - y(static_cast<Eigen::Index>(j)));
  };
  for (std::size_t c = 0; c < side; ++c)
    for (std::size_t r = 0; r < side; ++r) {
      if (r + 1 < side) pair(flat(r, c, side), flat(r + 1, c, side));
      if (c + 1 < side) pair(flat(r, c, side), flat(r, c + 1, side));
    }
  return total;
}

double contrast_norm(const Vector& x, std::size_t side) { return std::sqrt(contrast_inner(x, x, side)); }

double flow_contrast_norm(const Vector& uv, std::size_t side) {
  const auto m = static_cast<Eigen::Index>(side * side);
  if (uv.size() != 2 * m) throw InvalidInput("flow patch size does not match the side length");
  const Vector u = uv.head(m);
  const Vector v = uv.tail(m);
  return std::sqrt(contrast_inner(u, u, side) + contrast_inner(v, v, side));
}

Vector patch_coordinates(const Vector& patch, Modality modality, std::size_t side) {
  const auto m = static_cast<Eigen::Index>(side * side);
  const auto& basis = cached_basis(side);
  if (modality == Modality::flow) {
    const double norm = flow_contrast_norm(patch, side);
    if (!(norm > 1e-12)) return {};
    Vector u = patch.head(m).array() - patch.head(m).mean();
    Vector v = patch.tail(m).array() - patch.tail(m).mean();
    u /= norm;
    v /= norm;
    const auto k = static_cast<Eigen::Index>(basis.size());
    Vector coords(2 * k);
    for (Eigen::Index i = 0; i < k; ++i) {
      coords(i) = contrast_inner(u, basis[static_cast<std::size_t>(i)], side);
      coords(k + i) = contrast_inner(v, basis[static_cast<std::size_t>(i)], side);
    }
    return coords;
  }
  const double norm = contrast_norm(patch, side);
  if (!(norm > 1e-12)) return {};
  const Vector x = (patch.array() - patch.mean()) / norm;
  Vector coords(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) coords(static_cast<Eigen::Index>(i)) = contrast_inner(x, basis[i], side);
  return coords;
}

PointCloud preprocess_patches(const std::vector<Raster>& rasters, const PatchConfig& config, Rng& rng) {
  config.validate();
  if (rasters.empty()) throw InvalidInput("no rasters supplied");
  const std::size_t side = config.side;
  const bool flow = config.modality == Modality::flow;
  const std::size_t channels = flow ? 2 : 1;

  // Valid top-left corners per raster.
  std::vector<std::size_t> offsets{0};
  for (const auto& raster : rasters) {
    if (raster.channels.size() != channels)
      throw InvalidInput(fmt::format("raster '{}' has {} channels, expected {}", raster.name, raster.channels.size(),
                                     channels));
    const Matrix& first = raster.channels.front();
    for (const auto& channel : raster.channels)
      if (channel.rows() != first.rows() || channel.cols() != first.cols())
        throw InvalidInput(fmt::format("raster '{}' has channels of different shapes", raster.name));
    if (!flow && (first.array() <= 0.0).any())
      throw InvalidInput(fmt::format("raster '{}' has nonpositive values; cannot take logarithms", raster.name));
    const auto rows = static_cast<std::size_t>(first.rows());
    const auto cols = static_cast<std::size_t>(first.cols());
    const std::size_t corners = rows >= side && cols >= side ? (rows - side + 1) * (cols - side + 1) : 0;
    offsets.push_back(offsets.back() + corners);
  }
  if (offsets.back() == 0) throw InvalidInput(fmt::format("no raster is large enough for {}x{} patches", side, side));

  struct Sampled {
    Vector patch;
    double contrast;
  };
  std::vector<Sampled> sample;
  sample.reserve(config.sample_size);
  std::uniform_int_distribution<std::size_t> pick(0, offsets.back() - 1);
  for (std::size_t s = 0; s < config.sample_size; ++s) {
    const std::size_t global = pick(rng);
    const auto which = static_cast<std::size_t>(std::upper_bound(offsets.begin(), offsets.end(), global) - offsets.begin() - 1);
    const std::size_t local = global - offsets[which];
    const Raster& raster = rasters[which];
    const auto width = static_cast<std::size_t>(raster.channels.front().cols()) - side + 1;
    const std::size_t top = local / width;
    const std::size_t left = local % width;

    Vector patch;
    if (flow) {
      patch.resize(static_cast<Eigen::Index>(2 * side * side));
      patch << cut_patch(raster.channels[0], top, left, side), cut_patch(raster.channels[1], top, left, side);
    } else {
      patch = cut_patch(raster.channels[0], top, left, side).array().log();
    }
    const double contrast = flow ? flow_contrast_norm(patch, side) : contrast_norm(patch, side);
    sample.push_back({std::move(patch), contrast});
  }

  const auto keep = static_cast<std::size_t>(std::ceil(config.quantile * static_cast<double>(sample.size())));
  std::stable_sort(sample.begin(), sample.end(), [](const Sampled& a, const Sampled& b) { return a.contrast > b.contrast; });
  std::vector<Vector> points;
  for (std::size_t i = 0; i < keep && i < sample.size(); ++i) {
    Vector coords = patch_coordinates(sample[i].patch, config.modality, side);
    if (coords.size() > 0) points.push_back(std::move(coords));
  }
  if (points.empty()) throw EmptyResult("every sampled patch has zero contrast");
  return PointCloud::from_points(points);
}

}  // namespace morse
