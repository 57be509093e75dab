#include "morse/error.hpp"
#include "morse/ingestion.hpp"

#include <cmath>

namespace morse {

namespace {

// Pairwise Euclidean distances between the rows of a configuration.
Matrix row_distances(const Matrix& x) {
  const Eigen::Index n = x.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (x.row(i) - x.row(j)).norm();
  }
  return d;
}

void check_dissimilarities(const Matrix& delta) {
  if (delta.rows() != delta.cols() || delta.rows() == 0) throw InvalidInput("distance matrix must be square and non-empty");
  if (!delta.allFinite()) throw InvalidInput("distance matrix has non-finite entries");
  const double scale = std::max(1.0, delta.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < delta.rows(); ++i) {
    if (delta(i, i) != 0.0) throw InvalidInput("distance matrix must have a zero diagonal");
    for (Eigen::Index j = i + 1; j < delta.cols(); ++j) {
      if (std::abs(delta(i, j) - delta(j, i)) > 1e-12 * scale) throw InvalidInput("distance matrix is not symmetric");
      if (delta(i, j) < 0.0) throw InvalidInput("distance matrix has negative entries");
    }
  }
}

}  // namespace

double raw_stress(const Matrix& configuration, const Matrix& distances) {
  const Matrix d = row_distances(configuration);
  double stress = 0.0;
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = i + 1; j < d.cols(); ++j) stress += std::pow(d(i, j) - distances(i, j), 2);
  return stress;
}

MdsResult mds_embed(const Matrix& distances, const MdsOptions& options, Rng& rng) {
  check_dissimilarities(distances);
  if (options.target_dim == 0) throw InvalidInput("target dimension must be positive");
  const Eigen::Index n = distances.rows();
  const auto dim = static_cast<Eigen::Index>(options.target_dim);

  const double span = distances.maxCoeff();
  std::uniform_real_distribution<double> uniform(-0.5 * span, 0.5 * span);
  Matrix x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < dim; ++k) x(i, k) = span > 0.0 ? uniform(rng) : 0.0;

  MdsResult result;
  double stress = raw_stress(x, distances);
  result.stress_history.push_back(stress);
  Matrix b(n, n);
  for (std::size_t iteration = 0; iteration < options.max_iterations && stress > 0.0; ++iteration) {
    // Guttman transform x <- B(x) x / n.
    const Matrix d = row_distances(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      double diagonal = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        b(i, j) = d(i, j) > 0.0 ? -distances(i, j) / d(i, j) : 0.0;
        diagonal -= b(i, j);
      }
      b(i, i) = diagonal;
    }
    x = b * x / static_cast<double>(n);

    const double previous = stress;
    stress = raw_stress(x, distances);
    result.stress_history.push_back(stress);
    result.iterations = iteration + 1;
    if ((previous - stress) / previous < options.tolerance) break;
  }
  result.stress = stress;
  result.embedding = PointCloud(Matrix(x.transpose()));
  return result;
}

}  // namespace morse
