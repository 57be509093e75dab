#include "morse/band.hpp"

#include "morse/error.hpp"
#include "morse/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace morse {

namespace {

constexpr double kTiny = 1e-12;

double resolve_gradient_constant(const DensityField& field, const NebParams& params) {
  if (params.gradient_constant) return *params.gradient_constant;
  if (const auto* kde = dynamic_cast<const KernelDensity*>(&field))
    return gradient_constant(kde->dimension(), kde->sigma());
  throw InvalidInput("gradient constant must be set explicitly for fields other than a kernel density");
}

void check_interior(const Band& band, std::size_t i) {
  if (band.size() < 3 || i == 0 || i + 1 >= band.size())
    throw InvalidInput(fmt::format("node {} is not interior to a band of {} nodes", i, band.size()));
}

Vector random_unit_orthogonal(const Vector& axis, Rng& rng) {
  std::normal_distribution<double> normal;
  const Vector unit_axis = axis.normalized();
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector y(axis.size());
    for (auto& c : y) c = normal(rng);
    y -= y.dot(unit_axis) * unit_axis;
    const double norm = y.norm();
    if (norm > 1e-8) return y / norm;
  }
  throw ConstructionError("could not sample a direction orthogonal to the endpoint chord");
}

Band straight_band(const Vector& p, const Vector& q, std::size_t node_count) {
  Band band;
  band.nodes.reserve(node_count);
  for (std::size_t k = 0; k < node_count; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(node_count - 1);
    band.nodes.push_back((1.0 - t) * p + t * q);
  }
  band.nodes.front() = p;
  band.nodes.back() = q;
  return band;
}

}  // namespace

void NebParams::validate() const {
  if (node_count < 3) throw InvalidInput("band needs at least 3 nodes");
  if (!(0.0 <= alpha && alpha < beta && beta <= std::numbers::pi))
    throw InvalidInput("smoothing angles must satisfy 0 <= alpha < beta <= pi");
  if (gradient_constant && !(*gradient_constant > 0.0)) throw InvalidInput("gradient constant must be positive");
  if (!(step_size > 0.0)) throw InvalidInput("step size must be positive");
  if (!(convergence_tolerance > 0.0)) throw InvalidInput("convergence tolerance must be positive");
  if (!(discard_radius > 0.0)) throw InvalidInput("discard radius must be positive");
  if (!(cluster_threshold > 0.0)) throw InvalidInput("band cluster threshold must be positive");
  if (max_steps == 0) throw InvalidInput("max steps must be positive");
  if (trials_per_pair == 0) throw InvalidInput("trials per pair must be positive");
}

Vector tangent(const Band& band, std::size_t i) {
  check_interior(band, i);
  const Vector sum = band.nodes[i + 1] - band.nodes[i - 1];  // u+ + u-
  const double norm = sum.norm();
  if (norm <= kTiny) throw DegenerateTangent(fmt::format("edges at node {} cancel", i));
  return sum / norm;
}

double smoothing_weight(double theta, double alpha, double beta) {
  if (theta <= alpha) return 0.0;
  if (theta >= beta) return 1.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * (theta - alpha) / (beta - alpha)));
}

NodeForce node_force(const DensityField& field, const Band& band, std::size_t i, double c, double alpha,
                     double beta) {
  check_interior(band, i);
  const Vector& v = band.nodes[i];
  const Vector forward = band.nodes[i + 1] - v;   // u+
  const Vector backward = v - band.nodes[i - 1];  // u-
  const double forward_len = forward.norm();
  const double backward_len = backward.norm();

  NodeForce out;
  Vector tau;
  const Vector sum = forward + backward;
  if (const double norm = sum.norm(); norm > kTiny) {
    tau = sum / norm;
  } else {
    out.degenerate = true;
    if (forward_len > kTiny)
      tau = forward / forward_len;
    else if (backward_len > kTiny)
      tau = backward / backward_len;
    else
      tau = Vector::Zero(v.size());
  }

  const Vector grad = field.gradient(v);
  out.gradient_part = c * (grad - grad.dot(tau) * tau);

  double theta = 0.0;
  if (forward_len > kTiny && backward_len > kTiny)
    theta = std::acos(std::clamp(forward.dot(backward) / (forward_len * backward_len), -1.0, 1.0));

  out.total = out.gradient_part + (forward_len - backward_len) * tau +
              smoothing_weight(theta, alpha, beta) * (forward - backward);
  return out;
}

Vector total_force(const DensityField& field, const Band& band, const NebParams& params, std::size_t i) {
  return node_force(field, band, i, resolve_gradient_constant(field, params), params.alpha, params.beta).total;
}

double mean_force(const DensityField& field, const Band& band, const NebParams& params) {
  const double c = resolve_gradient_constant(field, params);
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < band.size(); ++i)
    total += node_force(field, band, i, c, params.alpha, params.beta).total.norm();
  return total / static_cast<double>(band.size() - 2);
}

EvolveResult evolve(const DensityField& field, Band band, const NebParams& params) {
  params.validate();
  if (band.size() < 3) throw InvalidInput("band needs at least 3 nodes");
  const double c = resolve_gradient_constant(field, params);
  const std::size_t interior = band.size() - 2;
  const auto degenerate_budget = static_cast<std::size_t>(0.01 * static_cast<double>(params.max_steps));

  EvolveResult result;
  std::vector<Vector> forces(interior);
  for (std::size_t step = 0;; ++step) {
    double total = 0.0;
    bool degenerate = false;
    for (std::size_t k = 0; k < interior; ++k) {
      NodeForce f = node_force(field, band, k + 1, c, params.alpha, params.beta);
      degenerate = degenerate || f.degenerate;
      total += f.total.norm();
      forces[k] = std::move(f.total);
    }
    const double mean = total / static_cast<double>(interior);
    result.steps = step;
    result.residual = mean;
    if (degenerate) ++result.degenerate_steps;

    if (!std::isfinite(mean)) {
      result.status = EvolveStatus::non_finite;
      break;
    }
    if (mean < params.convergence_tolerance) {
      // A band that kept folding back on itself is not trusted even if it settled.
      const bool persistent = result.degenerate_steps * 100 > std::max<std::size_t>(step, 1);
      result.status = persistent ? EvolveStatus::degenerate : EvolveStatus::converged;
      break;
    }
    if (step == params.max_steps) {
      result.status = EvolveStatus::max_steps;
      break;
    }
    if (result.degenerate_steps > std::max<std::size_t>(degenerate_budget, 1)) {
      result.status = EvolveStatus::degenerate;
      break;
    }
    for (std::size_t k = 0; k < interior; ++k) band.nodes[k + 1] += params.step_size * forces[k];
  }
  result.band = std::move(band);
  return result;
}

Band arc_band(const Vector& p, const Vector& q, std::size_t node_count, double bulge, const Vector& direction) {
  if (node_count < 3) throw InvalidInput("band needs at least 3 nodes");
  if (p.size() != q.size()) throw InvalidInput("band endpoints differ in dimension");
  const Vector chord = q - p;
  const double half = 0.5 * chord.norm();
  if (half <= kTiny) throw InvalidInput("band endpoints coincide");
  const double height = 0.5 * bulge;  // apex sits height * direction above the chord midpoint
  if (p.size() < 2 || std::abs(height) <= kTiny * half) return straight_band(p, q, node_count);

  // Plane coordinates: origin at chord midpoint, e1 along the chord, e2 = direction.
  const Vector midpoint = 0.5 * (p + q);
  const Vector e1 = chord / (2.0 * half);
  const Vector& e2 = direction;
  const double center_offset = (height * height - half * half) / (2.0 * height);
  const Vector center = midpoint + center_offset * e2;
  const double radius = std::abs(height - center_offset);
  const Vector toward_apex = (height > center_offset ? 1.0 : -1.0) * e2;
  // Half the swept angle, measured from the apex to either endpoint.
  const double half_sweep =
      std::acos(std::clamp(-center_offset * (height - center_offset) / (radius * radius), -1.0, 1.0));

  Band band;
  band.nodes.reserve(node_count);
  for (std::size_t k = 0; k < node_count; ++k) {
    const double lambda = static_cast<double>(k) / static_cast<double>(node_count - 1);
    const double omega = half_sweep * (1.0 - 2.0 * lambda);
    band.nodes.push_back(center + radius * (std::cos(omega) * toward_apex - std::sin(omega) * e1));
  }
  band.nodes.front() = p;
  band.nodes.back() = q;
  return band;
}

Band initial_band_general(const Vector& p, const Vector& q, std::size_t node_count, Rng& rng) {
  if (p.size() != q.size()) throw InvalidInput("band endpoints differ in dimension");
  const double distance = (q - p).norm();
  if (distance <= kTiny) throw InvalidInput("band endpoints coincide");
  if (p.size() < 2) return straight_band(p, q, node_count);
  const Vector y = random_unit_orthogonal(q - p, rng);
  const double r = std::uniform_real_distribution<double>(0.0, distance)(rng);
  return arc_band(p, q, node_count, r, y);
}

Band initial_band_sphere(const Vector& p, const Vector& q, std::size_t node_count, Rng& rng) {
  if (node_count < 3) throw InvalidInput("band needs at least 3 nodes");
  if (p.size() != q.size()) throw InvalidInput("band endpoints differ in dimension");
  const double p_norm = p.norm();
  const double q_norm = q.norm();
  if (p_norm <= kTiny || q_norm <= kTiny) throw InvalidInput("sphere bands need nonzero endpoints");
  const Vector p_hat = p / p_norm;
  const Vector q_hat = q / q_norm;

  std::normal_distribution<double> normal;
  for (int attempt = 0; attempt < 100; ++attempt) {
    Vector y(p.size());
    for (auto& c : y) c = normal(rng);
    if (y.norm() <= kTiny) continue;
    y.normalize();

    // Circumcircle of p_hat, q_hat, y inside their affine plane.
    const Vector u = q_hat - p_hat;
    const Vector v = y - p_hat;
    const double uu = u.squaredNorm();
    const double vv = v.squaredNorm();
    const double uv = u.dot(v);
    const double gram = uu * vv - uv * uv;
    if (uu <= 1e-16 || vv <= 1e-16 || (y - q_hat).squaredNorm() <= 1e-16 || gram <= 1e-12 * uu * vv) continue;
    const double s = 0.5 * vv * (uu - uv) / gram;
    const double t = 0.5 * uu * (vv - uv) / gram;
    const Vector center = p_hat + s * u + t * v;
    const double radius = (p_hat - center).norm();

    const Vector e1 = (p_hat - center) / radius;
    Vector e2 = (q_hat - center) - (q_hat - center).dot(e1) * e1;
    if (e2.norm() <= 1e-9 * radius) e2 = (y - center) - (y - center).dot(e1) * e1;
    e2.normalize();
    auto angle = [&](const Vector& z) {
      const Vector d = z - center;
      double a = std::atan2(d.dot(e2), d.dot(e1));
      return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
    };
    const double q_angle = angle(q_hat);
    const double y_angle = angle(y);
    const double sweep = (y_angle > 0.0 && y_angle < q_angle) ? q_angle - 2.0 * std::numbers::pi : q_angle;

    Band band;
    band.nodes.reserve(node_count);
    for (std::size_t k = 0; k < node_count; ++k) {
      const double lambda = static_cast<double>(k) / static_cast<double>(node_count - 1);
      Vector unit = center + radius * (std::cos(lambda * sweep) * e1 + std::sin(lambda * sweep) * e2);
      unit.normalize();
      const double scale = ((1.0 - lambda) * p_norm + lambda * q_norm);
      band.nodes.push_back(scale * unit);
    }
    band.nodes.front() = p;
    band.nodes.back() = q;
    return band;
  }
  throw ConstructionError("could not find a plane through the endpoint directions after 100 samples");
}

double band_distance(const Band& a, const Band& b) {
  if (a.size() != b.size() || a.size() < 3) throw InvalidInput("bands must share a node count of at least 3");
  if (a.front() != b.front() || a.back() != b.back()) throw InvalidInput("bands must share endpoints");
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) total += (a.nodes[i] - b.nodes[i]).norm();
  return total / static_cast<double>(a.size() - 2);
}

double band_density(const DensityField& field, const Band& band) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& node : band.nodes) lowest = std::min(lowest, field.value(node));
  return lowest;
}

OneCellSearch find_one_cells(const DensityField& field, const std::vector<ZeroCell>& zero_cells,
                             const NebParams& params, std::uint64_t seed, std::size_t workers) {
  params.validate();
  OneCellSearch search;
  if (zero_cells.size() < 2) return search;

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < zero_cells.size(); ++i)
    for (std::size_t j = i + 1; j < zero_cells.size(); ++j) pairs.emplace_back(i, j);

  const std::size_t trials = params.trials_per_pair;
  search.trials = pairs.size() * trials;

  struct Trial {
    std::optional<EvolveResult> result;
    bool discarded = false;
  };
  std::vector<Trial> outcomes(search.trials);
  parallel_for(search.trials, workers, [&](std::size_t index) {
    const auto [from, to] = pairs[index / trials];
    Rng rng = make_stream(seed, index);
    const Vector& p = zero_cells[from].position;
    const Vector& q = zero_cells[to].position;
    Band start = params.sphere_mode ? initial_band_sphere(p, q, params.node_count, rng)
                                    : initial_band_general(p, q, params.node_count, rng);
    EvolveResult result = evolve(field, std::move(start), params);
    if (!result.converged()) return;
    Trial& out = outcomes[index];
    for (std::size_t r = 0; r < zero_cells.size() && !out.discarded; ++r) {
      if (r == from || r == to) continue;
      for (const auto& node : result.band.nodes)
        if ((node - zero_cells[r].position).norm() < params.discard_radius) {
          out.discarded = true;
          break;
        }
    }
    out.result = std::move(result);
  });

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::vector<const EvolveResult*> survivors;
    for (std::size_t t = 0; t < trials; ++t) {
      const Trial& trial = outcomes[k * trials + t];
      if (!trial.result) continue;
      ++search.convergent;
      if (trial.discarded) {
        ++search.discarded;
        continue;
      }
      survivors.push_back(&*trial.result);
    }
    const auto clusters = single_linkage(
        survivors.size(),
        [&](std::size_t a, std::size_t b) { return band_distance(survivors[a]->band, survivors[b]->band); },
        params.cluster_threshold);
    search.clusters += clusters.size();
    for (const auto& members : clusters) {
      OneCell best;
      best.density = -1.0;
      for (std::size_t m : members) {
        const double density = band_density(field, survivors[m]->band);
        if (density > best.density) {
          best.band = survivors[m]->band;
          best.density = density;
          best.residual = survivors[m]->residual;
        }
      }
      best.from = pairs[k].first;
      best.to = pairs[k].second;
      best.cluster_size = members.size();
      search.cells.push_back(std::move(best));
    }
  }
  std::stable_sort(search.cells.begin(), search.cells.end(),
                   [](const OneCell& a, const OneCell& b) { return a.density > b.density; });
  return search;
}

}  // namespace morse
