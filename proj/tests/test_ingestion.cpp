#include "morse/error.hpp"
#include "morse/ingestion.hpp"
#include "morse/projection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>

using namespace morse;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Matrix floyd_warshall(const UnweightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count);
  Matrix d = Matrix::Constant(n, n, 1e18);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = 0;
  for (auto [a, b] : g.edges) {
    d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = 1;
    d(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = 1;
  }
  for (Eigen::Index k = 0; k < n; ++k)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

Matrix pairwise(const PointCloud& cloud) {
  const auto n = static_cast<Eigen::Index>(cloud.size());
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (cloud.point(i) - cloud.point(j)).norm();
  return d;
}

}  // namespace

TEST(PointCloudCsv, ParsesPoints) {
  const PointCloud c = parse_point_cloud("0,0\n1,2\n");
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.dimension(), 2u);
  EXPECT_EQ(c.point(1), vec({1, 2}));
}

TEST(PointCloudCsv, RaggedRowReportsLine) {
  try {
    parse_point_cloud("1,2\n3\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(PointCloudCsv, NonNumericReportsLine) {
  try {
    parse_point_cloud("1,2\n3,4\n5,x\n");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(PointCloudCsv, RoundTripsExactly) {
  Rng rng(1);
  std::normal_distribution<double> normal;
  Matrix m(3, 20);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng) * std::pow(10.0, static_cast<int>(i % 7) - 3);
  const PointCloud c(m);
  EXPECT_EQ(parse_point_cloud(format_point_cloud(c)).matrix(), m);
  const auto path = std::filesystem::temp_directory_path() / "morse_cloud_roundtrip.csv";
  write_point_cloud(c, path);
  EXPECT_EQ(read_point_cloud(path).matrix(), m);
  std::filesystem::remove(path);
}

TEST(PointCloudCsv, MissingFileThrows) { EXPECT_THROW(read_point_cloud("/nonexistent/cloud.csv"), Error); }

TEST(Graph, PathGraphDistance) {
  const Matrix d = shortest_path_distances(parse_graph("3 2\n0 1\n1 2\n"));
  EXPECT_EQ(d(0, 2), 2.0);
  EXPECT_EQ(d(2, 0), 2.0);
}

TEST(Graph, CompleteGraph) {
  const Matrix d = shortest_path_distances(parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(d(i, j), i == j ? 0.0 : 1.0);
}

TEST(Graph, RandomConnectedMatchesFloydWarshall) {
  Rng rng(5);
  UnweightedGraph g;
  g.vertex_count = 20;
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t v = 1; v < 20; ++v) edges.insert({std::uniform_int_distribution<std::size_t>(0, v - 1)(rng), v});
  std::uniform_int_distribution<std::size_t> any(0, 19);
  while (edges.size() < 35) {
    auto a = any(rng), b = any(rng);
    if (a != b) edges.insert({std::min(a, b), std::max(a, b)});
  }
  g.edges.assign(edges.begin(), edges.end());
  EXPECT_EQ(shortest_path_distances(g), floyd_warshall(g));
}

TEST(Graph, DisconnectedListsComponentSizes) {
  try {
    shortest_path_distances(parse_graph("5 2\n0 1\n1 2\n"));
    FAIL() << "expected an error";
  } catch (const InvalidInput& e) {
    const std::string message = e.what();
    EXPECT_NE(message.find('3'), std::string::npos);
    EXPECT_NE(message.find('1'), std::string::npos);
  }
}

TEST(Graph, RejectsBadEdges) {
  EXPECT_THROW(parse_graph("2 1\n0 0\n"), Error);
  EXPECT_THROW(parse_graph("2 1\n0 5\n"), Error);
  EXPECT_THROW(parse_graph("2 2\n0 1\n"), Error);
}

TEST(Mds, CoincidentPoints) {
  Rng rng(1);
  const MdsResult r = mds_embed(Matrix::Zero(4, 4), {2, 100, 1e-9}, rng);
  EXPECT_EQ(r.stress, 0.0);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT((r.embedding.point(i) - r.embedding.point(0)).norm(), 1e-9);
}

TEST(Mds, EquilateralTriangle) {
  Rng rng(2);
  Matrix d = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const MdsResult r = mds_embed(d, {2, 1000, 1e-14}, rng);
  EXPECT_LT(r.stress, 1e-6);
  const Matrix e = pairwise(r.embedding);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) {
        EXPECT_NEAR(e(i, j), 1.0, 1e-6);
      }
}

TEST(Mds, CollinearIsRealizedExactly) {
  Rng rng(3);
  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const MdsResult r = mds_embed(d, {2, 1'000'000, 0.0}, rng);
  EXPECT_LT(r.stress, 1e-10);
  EXPECT_NEAR(pairwise(r.embedding)(0, 2), 2.0, 1e-5);
}

TEST(Mds, StressIsMonotone) {
  Rng rng(4);
  UnweightedGraph g = parse_graph("6 7\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n0 3\n");
  const MdsResult r = mds_embed(shortest_path_distances(g), {2, 500, 0.0}, rng);
  ASSERT_GE(r.stress_history.size(), 2u);
  for (std::size_t i = 1; i < r.stress_history.size(); ++i)
    EXPECT_LE(r.stress_history[i], r.stress_history[i - 1] * (1 + 1e-12));
}

TEST(Mds, RejectsNonSymmetric) {
  Rng rng(5);
  Matrix d(2, 2);
  d << 0, 1, 2, 0;
  EXPECT_THROW(mds_embed(d, {}, rng), InvalidInput);
}

TEST(Dct, BasisSizesAndOrthonormality) {
  for (auto [side, count] : {std::pair<std::size_t, std::size_t>{3, 8}, {5, 24}}) {
    const auto basis = dct_basis(side);
    ASSERT_EQ(basis.size(), count);
    for (std::size_t i = 0; i < count; ++i) {
      EXPECT_NEAR(basis[i].sum(), 0.0, 1e-12);
      for (std::size_t j = 0; j < count; ++j)
        EXPECT_NEAR(contrast_inner(basis[i], basis[j], side), i == j ? 1.0 : 0.0, 1e-10);
    }
  }
}

TEST(Dct, UnsupportedSide) { EXPECT_THROW(dct_basis(4), InvalidInput); }

TEST(Dct, FirstTwoModesAreGradients) {
  const auto basis = dct_basis(3);
  // column-major: index = column * 3 + row; e1 varies along columns only.
  for (std::size_t row = 0; row < 3; ++row) {
    EXPECT_NEAR(basis[0](row), basis[0](0), 1e-15);
    EXPECT_NEAR(basis[1](3 * row), basis[1](0), 1e-15);
  }
  EXPECT_GT(basis[0](0), basis[0](6));
  EXPECT_GT(basis[1](0), basis[1](2));
  const auto five = dct_basis(5);
  for (std::size_t row = 0; row < 5; ++row) EXPECT_NEAR(five[0](row), five[0](0), 1e-15);
  for (std::size_t col = 0; col < 5; ++col) EXPECT_NEAR(five[4](5 * col), five[4](0), 1e-15);
}

TEST(Dct, ContrastNormIsAdjacentDifferenceSum) {
  Vector x(9);
  x << 1, 2, 4, 0, 3, 1, 5, 2, 2;
  double oracle = 0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      if (r + 1 < 3) oracle += std::pow(x(c * 3 + r) - x(c * 3 + r + 1), 2);
      if (c + 1 < 3) oracle += std::pow(x(c * 3 + r) - x((c + 1) * 3 + r), 2);
    }
  EXPECT_NEAR(contrast_norm(x, 3), std::sqrt(oracle), 1e-14);
}

TEST(Patches, ScaledBasisVectorMapsToCoordinate) {
  for (std::size_t side : {3u, 5u}) {
    const auto basis = dct_basis(side);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Vector coords = patch_coordinates(5.0 * basis[k], Modality::optical, side);
      ASSERT_EQ(coords.size(), static_cast<Eigen::Index>(basis.size()));
      Vector expected = Vector::Zero(coords.size());
      expected(static_cast<Eigen::Index>(k)) = 1.0;
      EXPECT_LT((coords - expected).norm(), 1e-12);
    }
  }
}

TEST(Patches, ConstantPatchIsExcluded) {
  EXPECT_EQ(patch_coordinates(Vector::Constant(9, 2.0), Modality::range, 3).size(), 0);
}

TEST(Patches, PreprocessGivesUnitZeroMeanPoints) {
  Rng rng(6);
  std::uniform_real_distribution<double> positive(0.5, 5.0);
  Raster raster{"noise", {Matrix(40, 30)}};
  for (Eigen::Index i = 0; i < raster.channels[0].size(); ++i) raster.channels[0](i) = positive(rng);
  PatchConfig config;
  config.sample_size = 500;
  Rng sample(7);
  const PointCloud cloud = preprocess_patches({raster}, config, sample);
  EXPECT_EQ(cloud.size(), 100u);
  EXPECT_EQ(cloud.dimension(), 8u);
  const auto basis = dct_basis(3);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    EXPECT_NEAR(cloud.point(i).norm(), 1.0, 1e-12);
    Vector patch = Vector::Zero(9);
    for (std::size_t k = 0; k < 8; ++k) patch += cloud.point(i)(static_cast<Eigen::Index>(k)) * basis[k];
    EXPECT_NEAR(patch.mean(), 0.0, 1e-12);
    EXPECT_NEAR(contrast_norm(patch, 3), 1.0, 1e-12);
  }
}

TEST(Patches, FlowPointsAreUnitNorm) {
  Rng rng(8);
  std::normal_distribution<double> normal;
  Raster raster{"flow", {Matrix(20, 20), Matrix(20, 20)}};
  for (auto& c : raster.channels)
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = normal(rng);
  PatchConfig config;
  config.modality = Modality::flow;
  config.sample_size = 200;
  const PointCloud cloud = preprocess_patches({raster}, config, rng);
  EXPECT_EQ(cloud.dimension(), 16u);
  for (std::size_t i = 0; i < cloud.size(); ++i) EXPECT_NEAR(cloud.point(i).norm(), 1.0, 1e-12);
}

TEST(Patches, NonpositiveRasterNamed) {
  Raster raster{"bad_raster", {Matrix::Constant(5, 5, 1.0)}};
  raster.channels[0](2, 2) = 0.0;
  Rng rng(1);
  try {
    preprocess_patches({raster}, {}, rng);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("bad_raster"), std::string::npos);
  }
}

TEST(Patches, AllConstantRasterIsEmpty) {
  Raster raster{"flat", {Matrix::Constant(6, 6, 3.0)}};
  Rng rng(1);
  EXPECT_THROW(preprocess_patches({raster}, {}, rng), EmptyResult);
}

TEST(SlidingWindow, FortySevenStepsOfSixVariables) {
  const PointCloud c = sliding_window(Matrix::Random(6, 47), 5);
  EXPECT_EQ(c.size(), 43u);
  EXPECT_EQ(c.dimension(), 30u);
}

TEST(SlidingWindow, WindowOneIsIdentity) {
  const Matrix s = Matrix::Random(3, 8);
  EXPECT_EQ(sliding_window(s, 1).matrix(), s);
}

TEST(SlidingWindow, HandStacked) {
  Matrix s(2, 3);
  s << 1, 2, 3, 4, 5, 6;
  const PointCloud c = sliding_window(s, 2);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.point(0), vec({1, 4, 2, 5}));
  EXPECT_EQ(c.point(1), vec({2, 5, 3, 6}));
}

TEST(SlidingWindow, TooLongThrows) { EXPECT_THROW(sliding_window(Matrix::Zero(2, 3), 4), InvalidInput); }

TEST(Synth, MixtureMeanNearCenter) {
  SynthParams p;
  p.centers = {vec({2, -1})};
  Rng rng(10);
  const PointCloud c = synth(SynthKind::gaussian_mixture, p, rng);
  EXPECT_EQ(c.size(), 1000u);
  EXPECT_LT((c.matrix().rowwise().mean() - vec({2, -1})).norm(), 0.15);
}

TEST(Synth, NoiselessCircleOnRadius) {
  SynthParams p;
  p.radius = 2.5;
  p.dim = 3;
  Rng rng(11);
  const PointCloud c = synth(SynthKind::noisy_circle, p, rng);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(c.point(i).norm(), 2.5, 1e-12);
}

TEST(Synth, Deterministic) {
  SynthParams p;
  Rng a(12), b(12);
  EXPECT_EQ(synth(SynthKind::bumpy_circle, p, a).matrix(), synth(SynthKind::bumpy_circle, p, b).matrix());
}

TEST(Synth, InvalidParams) {
  SynthParams p;
  Rng rng(1);
  EXPECT_THROW(synth(SynthKind::gaussian_mixture, p, rng), InvalidInput);
  p.count = 0;
  EXPECT_THROW(synth(SynthKind::noisy_circle, p, rng), InvalidInput);
  EXPECT_THROW(parse_synth_kind("spiral"), InvalidInput);
}

TEST(Projection, PcaOfPlanarCloudIsIsometry) {
  Rng rng(13);
  std::normal_distribution<double> normal;
  Matrix m(2, 30);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = normal(rng);
  const PlaneProjection plane = fit_pca(m);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j)
      EXPECT_NEAR((plane.apply(m.col(i)) - plane.apply(m.col(j))).norm(), (m.col(i) - m.col(j)).norm(), 1e-9);
}

TEST(Projection, CoordinatesVerbatim) {
  const PlaneProjection plane = coordinate_projection(5, 0, 1);
  const Vector x = vec({3, -4, 5, 6, 7});
  EXPECT_EQ(plane.apply(x), Eigen::Vector2d(3, -4));
  EXPECT_THROW(coordinate_projection(5, 0, 5), InvalidInput);
}

TEST(Projection, PlaneInR5HasNoResidual) {
  Rng rng(14);
  std::normal_distribution<double> normal;
  Matrix frame(5, 2);
  for (Eigen::Index i = 0; i < frame.size(); ++i) frame(i) = normal(rng);
  const Vector offset = vec({1, 2, 3, 4, 5});
  Matrix m(5, 40);
  for (int i = 0; i < 40; ++i) m.col(i) = offset + frame * vec({normal(rng), normal(rng)});
  const PlaneProjection plane = fit_pca(m);
  // Covariance eigendecomposition oracle: variance beyond the top two eigenvalues.
  const Matrix centered = m.colwise() - m.rowwise().mean();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(centered * centered.transpose() / 40.0);
  EXPECT_LT(eig.eigenvalues().head(3).sum(), 1e-9);
  double residual = 0;
  for (int i = 0; i < 40; ++i) {
    const Vector back = plane.mean + plane.axes * plane.apply(m.col(i));
    residual += (back - m.col(i)).squaredNorm() / 40.0;
  }
  EXPECT_LT(residual, 1e-9);
}
