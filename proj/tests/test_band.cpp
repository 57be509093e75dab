#include "morse/band.hpp"
#include "morse/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace morse;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Band line(const Vector& p, const Vector& q, std::size_t n) {
  Band b;
  for (std::size_t i = 0; i < n; ++i) b.nodes.push_back(p + (q - p) * (static_cast<double>(i) / (n - 1)));
  return b;
}

NebParams analytic_params() {
  NebParams params;
  params.gradient_constant = gradient_constant(2, 1.0);
  return params;
}

const GaussianMixtureField& two_bumps() {
  static const GaussianMixtureField field({vec({-2, 0}), vec({2, 0})}, 1.0);
  return field;
}

}  // namespace

TEST(Tangent, CollinearIsDirection) {
  const Band b = line(vec({0, 0, 0}), vec({2, 4, 4}), 5);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(tangent(b, i).isApprox(vec({1, 2, 2}) / 3.0, 1e-15));
}

TEST(Tangent, AveragesEdgeDirections) {
  // u+ = (1,0), u- = (0,1)
  const Band b{{vec({0, -1}), vec({0, 0}), vec({1, 0})}};
  EXPECT_TRUE(tangent(b, 1).isApprox(vec({1, 1}) / std::sqrt(2.0), 1e-15));
}

TEST(Tangent, HairpinThrows) {
  const Band b{{vec({1, 0}), vec({0, 0}), vec({1, 0})}};
  EXPECT_THROW(tangent(b, 1), DegenerateTangent);
}

TEST(SmoothingWeight, BranchBoundaries) {
  const double a = std::numbers::pi / 6, b = std::numbers::pi / 2;
  EXPECT_DOUBLE_EQ(smoothing_weight(a, a, b), 0.0);
  EXPECT_DOUBLE_EQ(smoothing_weight(b, a, b), 1.0);
  EXPECT_NEAR(smoothing_weight((a + b) / 2, a, b), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(smoothing_weight(0.0, a, b), 0.0);
  EXPECT_DOUBLE_EQ(smoothing_weight(std::numbers::pi, a, b), 1.0);
}

TEST(SmoothingWeight, Monotone) {
  double previous = 0;
  for (double t = 0; t <= std::numbers::pi; t += 0.01) {
    const double h = smoothing_weight(t, 0.5, 1.5);
    EXPECT_GE(h, previous);
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
    previous = h;
  }
}

TEST(TotalForce, StraightEvenBandInConstantFieldIsZero) {
  const ConstantField f(2, 1.0);
  const Band b = line(vec({0, 0}), vec({4, 1}), 7);
  NebParams params;
  params.gradient_constant = 1.0;
  for (std::size_t i = 1; i < 6; ++i) EXPECT_LT(total_force(f, b, params, i).norm(), 1e-14);
}

TEST(TotalForce, UnequalEdgesGivePureSpring) {
  const ConstantField f(2, 1.0);
  const Band b{{vec({-1, 0}), vec({0, 0}), vec({2, 0})}};
  NebParams params;
  params.gradient_constant = 1.0;
  EXPECT_TRUE(total_force(f, b, params, 1).isApprox(vec({1, 0}), 1e-15));
}

TEST(TotalForce, PerpendicularGradient) {
  const LinearField f(vec({0, 1}));
  const Band b = line(vec({-2, 0}), vec({2, 0}), 5);
  NebParams params;
  params.gradient_constant = 1.0;
  for (std::size_t i = 1; i < 4; ++i) EXPECT_TRUE(total_force(f, b, params, i).isApprox(vec({0, 1}), 1e-15));
}

TEST(TotalForce, GradientPartIsNormalToTangent) {
  const Band b = arc_band(vec({-2, 0}), vec({2, 0}), 9, 1.5, vec({0, 1}));
  for (std::size_t i = 1; i < 8; ++i) {
    const NodeForce force = node_force(two_bumps(), b, i, 3.0, 0.5, 1.5);
    EXPECT_NEAR(force.gradient_part.dot(tangent(b, i)), 0.0, 1e-12);
  }
}

TEST(Evolve, EquilibriumReturnsUnchanged) {
  const ConstantField f(2, 1.0);
  const Band b = line(vec({0, 0}), vec({1, 1}), 11);
  NebParams params;
  params.gradient_constant = 1.0;
  const EvolveResult result = evolve(f, b, params);
  EXPECT_TRUE(result.converged());
  EXPECT_EQ(result.steps, 0u);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(result.band.nodes[i], b.nodes[i]);
}

TEST(Evolve, FindsMinimumEnergyPathThroughSaddle) {
  const Band start = arc_band(vec({-2, 0}), vec({2, 0}), 11, 2.0, vec({0, 1}));
  const EvolveResult result = evolve(two_bumps(), start, analytic_params());
  ASSERT_TRUE(result.converged());
  for (std::size_t i = 1; i + 1 < result.band.size(); ++i) EXPECT_LT(std::abs(result.band.nodes[i](1)), 1e-2);
  EXPECT_NEAR(band_density(two_bumps(), result.band), two_bumps().value(vec({0, 0})), 1e-3);
  EXPECT_EQ(result.band.front(), start.front());
  EXPECT_EQ(result.band.back(), start.back());
}

TEST(Evolve, StepCapIsNonConvergent) {
  NebParams params = analytic_params();
  params.max_steps = 3;
  const EvolveResult result = evolve(two_bumps(), arc_band(vec({-2, 0}), vec({2, 0}), 11, 2.0, vec({0, 1})), params);
  EXPECT_EQ(result.status, EvolveStatus::max_steps);
}

TEST(Evolve, DivergenceIsNonFinite) {
  NebParams params;
  params.gradient_constant = 1.0;
  params.step_size = 10.0;
  params.max_steps = 100000;
  const NegativeQuadraticField f(vec({0, 5}));
  const EvolveResult result = evolve(f, line(vec({-1, 0}), vec({1, 0}), 5), params);
  EXPECT_FALSE(result.converged());
}

TEST(InitialBand, ZeroBulgeIsStraightSegment) {
  const Vector p = vec({0, 0, 1}), q = vec({3, 0, 1});
  const Band b = arc_band(p, q, 4, 0.0, vec({0, 1, 0}));
  ASSERT_EQ(b.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE(b.nodes[i].isApprox(vec({static_cast<double>(i), 0, 1}), 1e-15));
}

TEST(InitialBand, MiddleNodeOfOddBandIsArcApex) {
  const Vector p = vec({-1, 0.5}), q = vec({2, 1.5});
  Vector y = vec({-1, 3});
  y.normalize();
  for (double r : {0.3, 1.0, 3.0}) {
    const Band b = arc_band(p, q, 11, r, y);
    EXPECT_LT((b.nodes[5] - (p + q + r * y) / 2).norm(), 1e-12);
  }
}

TEST(InitialBand, NodesEvenlySpacedByArcLength) {
  const Vector p = vec({0, 0}), q = vec({2, 0});
  const Band b = arc_band(p, q, 9, 1.6, vec({0, 1}));
  // Dense polyline oracle of the arc through p, apex and q.
  const Vector apex = (p + q + 1.6 * vec({0, 1})) / 2;
  // circle center on the perpendicular bisector x = 1: (1, k) with |p - c| = |apex - c|
  const double k = (apex(1) * apex(1) - 1.0) / (2 * apex(1));
  const Vector c = vec({1, k});
  const double radius = (p - c).norm();
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR((b.nodes[i] - c).norm(), radius, 1e-12);
  std::vector<double> chords;
  for (std::size_t i = 1; i < b.size(); ++i) chords.push_back((b.nodes[i] - b.nodes[i - 1]).norm());
  for (double chord : chords) EXPECT_NEAR(chord, chords.front(), 1e-12);
}

TEST(InitialBand, GeneralHasEndpointsAndSymmetricMiddle) {
  Rng rng(3);
  const Vector p = vec({0, 1, 2}), q = vec({1, -1, 0.5});
  for (int t = 0; t < 20; ++t) {
    const Band b = initial_band_general(p, q, 11, rng);
    EXPECT_EQ(b.front(), p);
    EXPECT_EQ(b.back(), q);
    const Vector m = b.nodes[5];
    EXPECT_NEAR((m - p).norm(), (m - q).norm(), 1e-12);
    EXPECT_LE((2 * m - p - q).norm(), (p - q).norm() + 1e-12);
  }
}

TEST(InitialBand, OneDimensionalFallsBackToSegment) {
  Rng rng(3);
  const Band b = initial_band_general(vec({0}), vec({4}), 5, rng);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(b.nodes[i](0), static_cast<double>(i), 1e-15);
}

TEST(InitialBand, SphereUnitNorms) {
  Rng rng(4);
  const Vector p = vec({1, 0, 0}), q = vec({0, 0.6, 0.8});
  const Band b = initial_band_sphere(p, q, 11, rng);
  EXPECT_EQ(b.front(), p);
  EXPECT_EQ(b.back(), q);
  for (const auto& v : b.nodes) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(InitialBand, SphereNormsInterpolate) {
  Rng rng(5);
  const Vector p = vec({2, 0, 0, 0}), q = vec({0, 0, 0.5, 0});
  const std::size_t n = 7;
  const Band b = initial_band_sphere(p, q, n, rng);
  for (std::size_t i = 0; i < n; ++i)
    EXPECT_NEAR(b.nodes[i].norm(), ((n - 1 - i) * 2.0 + i * 0.5) / (n - 1), 1e-12);
}

TEST(InitialBand, SphereAntipodalNeedsRandomPlane) {
  Rng rng(6);
  const Band b = initial_band_sphere(vec({1, 0, 0}), vec({-1, 0, 0}), 9, rng);
  for (const auto& v : b.nodes) EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(BandDistance, Identity) {
  const Band b = arc_band(vec({0, 0}), vec({1, 0}), 11, 0.4, vec({0, 1}));
  EXPECT_EQ(band_distance(b, b), 0.0);
}

TEST(BandDistance, UniformTranslation) {
  const Band a = arc_band(vec({0, 0}), vec({1, 0}), 11, 0.4, vec({0, 1}));
  Band b = a;
  for (std::size_t i = 1; i + 1 < b.size(); ++i) b.nodes[i] += vec({0.3, 0.4});
  EXPECT_NEAR(band_distance(a, b), 0.5, 1e-15);
}

TEST(BandDistance, MatchesDirectSummation) {
  Rng rng(7);
  std::normal_distribution<double> normal;
  Band a, b;
  for (int i = 0; i < 11; ++i) {
    Vector x = vec({normal(rng), normal(rng), normal(rng)});
    a.nodes.push_back(x);
    b.nodes.push_back(i == 0 || i == 10 ? x : Vector(vec({normal(rng), normal(rng), normal(rng)})));
  }
  double sum = 0;
  for (int i = 1; i < 10; ++i) {
    double s = 0;
    for (int k = 0; k < 3; ++k) s += (a.nodes[i](k) - b.nodes[i](k)) * (a.nodes[i](k) - b.nodes[i](k));
    sum += std::sqrt(s);
  }
  EXPECT_NEAR(band_distance(a, b), sum / 9, 1e-14);
}

TEST(BandDistance, MismatchThrows) {
  const Band a = line(vec({0, 0}), vec({1, 0}), 5);
  EXPECT_THROW(band_distance(a, line(vec({0, 0}), vec({1, 0}), 6)), InvalidInput);
  EXPECT_THROW(band_distance(a, line(vec({0, 0}), vec({2, 0}), 5)), InvalidInput);
}

TEST(FindOneCells, TwoBumpsGiveOneCellOnAxis) {
  const std::vector<ZeroCell> zeros{{vec({-2, 0}), two_bumps().value(vec({-2, 0}))},
                                    {vec({2, 0}), two_bumps().value(vec({2, 0}))}};
  NebParams params = analytic_params();
  params.trials_per_pair = 6;
  const OneCellSearch search = find_one_cells(two_bumps(), zeros, params, 17);
  ASSERT_EQ(search.cells.size(), 1u);
  EXPECT_EQ(search.clusters, 1u);
  EXPECT_EQ(search.convergent, search.trials);
  const OneCell& cell = search.cells[0];
  for (const auto& node : cell.band.nodes) EXPECT_LT(std::abs(node(1)), 1e-2);
  EXPECT_NEAR(cell.density, two_bumps().value(vec({0, 0})), 1e-3);
  EXPECT_LE(cell.density, std::min(zeros[0].density, zeros[1].density));
}

TEST(FindOneCells, NoDirectCellBetweenOuterBumps) {
  const GaussianMixtureField f({vec({-4, 0}), vec({0, 0}), vec({4, 0})}, 1.0);
  std::vector<ZeroCell> zeros;
  for (double x : {-4.0, 0.0, 4.0}) zeros.push_back({vec({x, 0}), f.value(vec({x, 0}))});
  NebParams params = analytic_params();
  params.trials_per_pair = 4;
  const OneCellSearch search = find_one_cells(f, zeros, params, 19);
  for (const auto& cell : search.cells) EXPECT_FALSE(std::min(cell.from, cell.to) == 0 && std::max(cell.from, cell.to) == 2);
  EXPECT_EQ(search.cells.size(), 2u);
}

TEST(FindOneCells, SingleZeroCellGivesNothing) {
  const std::vector<ZeroCell> zeros{{vec({-2, 0}), 0.1}};
  EXPECT_TRUE(find_one_cells(two_bumps(), zeros, analytic_params(), 1).cells.empty());
}

TEST(FindOneCells, DeterministicAcrossWorkers) {
  const std::vector<ZeroCell> zeros{{vec({-2, 0}), two_bumps().value(vec({-2, 0}))},
                                    {vec({2, 0}), two_bumps().value(vec({2, 0}))}};
  NebParams params = analytic_params();
  params.trials_per_pair = 4;
  const auto a = find_one_cells(two_bumps(), zeros, params, 23, 1);
  const auto b = find_one_cells(two_bumps(), zeros, params, 23, 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].density, b.cells[i].density);
    EXPECT_EQ(a.cells[i].band.nodes, b.cells[i].band.nodes);
  }
}

TEST(NebParams, ValidateRejectsBadValues) {
  NebParams params;
  params.node_count = 2;
  EXPECT_THROW(params.validate(), InvalidInput);
  params = {};
  params.alpha = 2.0;
  params.beta = 1.0;
  EXPECT_THROW(params.validate(), InvalidInput);
  params = {};
  params.step_size = 0.0;
  EXPECT_THROW(params.validate(), InvalidInput);
}
