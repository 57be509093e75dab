#include "morse/sheet.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace morse {

namespace {

double resolve_gradient_constant(const DensityField& field, const SheetParams& params) {
  if (params.gradient_constant) return *params.gradient_constant;
  if (const auto* kde = dynamic_cast<const KernelDensity*>(&field))
    return gradient_constant(kde->dimension(), kde->sigma());
  throw InvalidInput("gradient constant must be set explicitly for fields other than a kernel density");
}

void link(WebSheet& sheet, std::size_t a, std::size_t b) {
  sheet.neighbors[a].push_back(b);
  sheet.neighbors[b].push_back(a);
}

}  // namespace

std::size_t WebSheet::interior_count() const {
  return static_cast<std::size_t>(std::count(boundary.begin(), boundary.end(), false));
}

void SheetParams::validate() const {
  if (rings < 1) throw InvalidInput("sheet needs at least one ring");
  if (nodes_per_ring < 3) throw InvalidInput("sheet rings need at least 3 nodes");
  if (!(tolerance > 0.0)) throw InvalidInput("sheet tolerance must be positive");
  if (!(step_size > 0.0)) throw InvalidInput("sheet step size must be positive");
  if (max_steps == 0) throw InvalidInput("sheet max steps must be positive");
  if (gradient_constant && !(*gradient_constant > 0.0)) throw InvalidInput("gradient constant must be positive");
}

WebSheet initial_sheet(const std::vector<Vector>& boundary_loop, std::size_t rings, std::size_t nodes_per_ring) {
  if (rings < 1 || nodes_per_ring < 3) throw InvalidInput("sheet needs at least 1 ring of at least 3 nodes");
  if (boundary_loop.size() < 3) throw ConstructionError("boundary loop needs at least 3 points");
  const std::size_t m = boundary_loop.size();

  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    cumulative[i + 1] = cumulative[i] + (boundary_loop[(i + 1) % m] - boundary_loop[i]).norm();
  const double perimeter = cumulative.back();
  if (!(perimeter > 1e-12)) throw ConstructionError("boundary loop is degenerate (all points coincide)");

  std::vector<Vector> outer;
  outer.reserve(nodes_per_ring);
  std::size_t segment = 0;
  for (std::size_t s = 0; s < nodes_per_ring; ++s) {
    const double target = perimeter * static_cast<double>(s) / static_cast<double>(nodes_per_ring);
    while (segment + 1 < m && cumulative[segment + 1] <= target) ++segment;
    const double length = cumulative[segment + 1] - cumulative[segment];
    const double t = length > 0.0 ? (target - cumulative[segment]) / length : 0.0;
    outer.push_back((1.0 - t) * boundary_loop[segment] + t * boundary_loop[(segment + 1) % m]);
  }

  Vector center = Vector::Zero(outer.front().size());
  for (const auto& p : outer) center += p;
  center /= static_cast<double>(nodes_per_ring);

  WebSheet sheet;
  sheet.rings = rings;
  sheet.nodes_per_ring = nodes_per_ring;
  const std::size_t total = 1 + rings * nodes_per_ring;
  sheet.nodes.reserve(total);
  sheet.neighbors.assign(total, {});
  sheet.boundary.assign(total, false);

  sheet.nodes.push_back(center);
  for (std::size_t j = 1; j <= rings; ++j) {
    const double fraction = static_cast<double>(j) / static_cast<double>(rings);
    for (std::size_t s = 0; s < nodes_per_ring; ++s)
      sheet.nodes.push_back(j == rings ? outer[s] : Vector(center + fraction * (outer[s] - center)));
  }
  for (std::size_t s = 0; s < nodes_per_ring; ++s) sheet.boundary[sheet.index(rings, s)] = true;

  for (std::size_t s = 0; s < nodes_per_ring; ++s) link(sheet, 0, sheet.index(1, s));
  for (std::size_t j = 1; j <= rings; ++j)
    for (std::size_t s = 0; s < nodes_per_ring; ++s) {
      link(sheet, sheet.index(j, s), sheet.index(j, (s + 1) % nodes_per_ring));
      if (j < rings) link(sheet, sheet.index(j, s), sheet.index(j + 1, s));
    }
  return sheet;
}

TangentBasis tangent_space(const WebSheet& sheet, std::size_t node, std::size_t k) {
  const auto& around = sheet.neighbors.at(node);
  const Vector& origin = sheet.nodes[node];
  const auto n = origin.size();
  TangentBasis out;
  if (around.empty()) {
    out.basis = Matrix(n, 0);
    out.deficient = k > 0;
    return out;
  }

  Matrix offsets(static_cast<Eigen::Index>(around.size()), n);
  for (std::size_t r = 0; r < around.size(); ++r)
    offsets.row(static_cast<Eigen::Index>(r)) = (sheet.nodes[around[r]] - origin).transpose();
  offsets.rowwise() -= offsets.colwise().mean();

  Eigen::JacobiSVD<Matrix> svd(offsets, Eigen::ComputeThinV);
  const auto& singular = svd.singularValues();
  const double scale = std::max(singular.size() > 0 ? singular(0) : 0.0, 0.0);
  Eigen::Index rank = 0;
  if (scale > 1e-14)
    while (rank < singular.size() && singular(rank) > 1e-10 * scale) ++rank;
  const Eigen::Index used = std::min<Eigen::Index>(rank, static_cast<Eigen::Index>(k));
  out.basis = svd.matrixV().leftCols(used);
  out.deficient = used < static_cast<Eigen::Index>(k);
  return out;
}

SheetForce sheet_force(const DensityField& field, const WebSheet& sheet, std::size_t node, double c) {
  if (node >= sheet.nodes.size()) throw InvalidInput(fmt::format("sheet has no node {}", node));
  const Vector& v = sheet.nodes[node];
  const TangentBasis tangent = tangent_space(sheet, node, 2);

  SheetForce out;
  out.deficient = tangent.deficient;
  const Vector grad = field.gradient(v);
  out.gradient_part = c * (grad - tangent.basis * (tangent.basis.transpose() * grad));
  out.spring_part = Vector::Zero(v.size());
  for (std::size_t b : sheet.neighbors[node]) out.spring_part += sheet.nodes[b] - v;
  out.total = out.gradient_part + out.spring_part;
  return out;
}

RelaxResult relax_sheet(const DensityField& field, WebSheet sheet, const SheetParams& params) {
  params.validate();
  const double c = resolve_gradient_constant(field, params);
  std::vector<std::size_t> interior;
  for (std::size_t a = 0; a < sheet.nodes.size(); ++a)
    if (!sheet.boundary[a]) interior.push_back(a);
  if (interior.empty()) throw InvalidInput("sheet has no interior nodes");

  RelaxResult result;
  std::vector<Vector> forces(interior.size());
  for (std::size_t step = 0;; ++step) {
    double total = 0.0;
    for (std::size_t k = 0; k < interior.size(); ++k) {
      forces[k] = sheet_force(field, sheet, interior[k], c).total;
      total += forces[k].norm();
    }
    const double mean = total / static_cast<double>(interior.size());
    result.steps = step;
    result.residual = mean;
    if (!std::isfinite(mean)) {
      result.status = RelaxStatus::non_finite;
      break;
    }
    if (mean < params.tolerance) {
      result.status = RelaxStatus::converged;
      break;
    }
    if (step == params.max_steps) {
      result.status = RelaxStatus::max_steps;
      break;
    }
    for (std::size_t k = 0; k < interior.size(); ++k) sheet.nodes[interior[k]] += params.step_size * forces[k];
  }
  result.sheet = std::move(sheet);
  return result;
}

double sheet_density(const DensityField& field, const WebSheet& sheet) {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& node : sheet.nodes) lowest = std::min(lowest, field.value(node));
  return lowest;
}

}  // namespace morse
