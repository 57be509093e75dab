#include "morse/maxima.hpp"

#include "morse/error.hpp"
#include "morse/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace morse {

std::optional<Vector> ascend(const KernelDensity& field, const Vector& y0, const AscentParams& params) {
  if (static_cast<std::size_t>(y0.size()) != field.dimension())
    throw InvalidInput(fmt::format("seed has dimension {}, field has dimension {}", y0.size(), field.dimension()));
  Vector y = y0;
  try {
    for (std::size_t i = 0; i <= params.max_iterations; ++i) {
      Vector next = field.mean_shift(y);
      if ((next - y).norm() < params.tolerance) return y;
      y = std::move(next);
    }
  } catch (const NoMass&) {
    return std::nullopt;
  }
  return std::nullopt;
}

namespace {

class DisjointSets {
public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<std::size_t> parent_;
};

bool lexicographic_less(const Vector& a, const Vector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

std::vector<std::vector<std::size_t>> single_linkage(std::size_t count,
                                                     const std::function<double(std::size_t, std::size_t)>& distance,
                                                     double threshold) {
  if (!(threshold > 0.0)) throw InvalidInput("clustering threshold must be positive");
  DisjointSets sets(count);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (sets.find(i) != sets.find(j) && distance(i, j) <= threshold) sets.unite(i, j);

  // Roots are the smallest member of each set, so visiting indices in order
  // yields clusters ordered by smallest member.
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::size_t> slot(count, count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == count) {
      slot[root] = clusters.size();
      clusters.emplace_back();
    }
    clusters[slot[root]].push_back(i);
  }
  return clusters;
}

std::vector<std::vector<std::size_t>> single_linkage(const std::vector<Vector>& points, double threshold) {
  return single_linkage(
      points.size(), [&](std::size_t i, std::size_t j) { return (points[i] - points[j]).norm(); }, threshold);
}

ZeroCellSearch find_zero_cells(const KernelDensity& field, const AscentParams& params, double cluster_threshold,
                               Rng& rng, std::size_t workers) {
  if (!(params.tolerance > 0.0)) throw InvalidInput("ascent tolerance must be positive");
  const std::size_t samples = field.cloud().size();
  const std::size_t wanted = params.seed_count == 0 ? std::min<std::size_t>(samples, 500) : params.seed_count;

  std::vector<std::size_t> seeds(samples);
  std::iota(seeds.begin(), seeds.end(), 0);
  if (wanted < samples) {
    std::vector<std::size_t> chosen;
    chosen.reserve(wanted);
    std::sample(seeds.begin(), seeds.end(), std::back_inserter(chosen), wanted, rng);
    seeds = std::move(chosen);
  }

  std::vector<std::optional<Vector>> limits(seeds.size());
  parallel_for(seeds.size(), workers, [&](std::size_t i) {
    limits[i] = ascend(field, field.cloud().point(seeds[i]), params);
  });

  std::vector<Vector> convergent;
  for (auto& limit : limits)
    if (limit) convergent.push_back(std::move(*limit));

  ZeroCellSearch result;
  result.seeds = seeds.size();
  result.convergent = convergent.size();
  if (convergent.empty())
    throw NoConvergence(fmt::format("no mean-shift ascent converged ({} seeds, 0 convergent, sigma {})", seeds.size(),
                                  field.sigma()));

  std::vector<double> density(convergent.size());
  parallel_for(convergent.size(), workers, [&](std::size_t i) { density[i] = field.value(convergent[i]); });

  const auto clusters = single_linkage(convergent, cluster_threshold);
  result.clusters = clusters.size();
  for (const auto& members : clusters) {
    std::size_t best = members.front();
    for (std::size_t m : members)
      if (density[m] > density[best]) best = m;
    result.cells.push_back({convergent[best], density[best]});
  }
  std::sort(result.cells.begin(), result.cells.end(), [](const ZeroCell& a, const ZeroCell& b) {
    if (a.density != b.density) return a.density > b.density;
    return lexicographic_less(a.position, b.position);
  });
  return result;
}

}  // namespace morse
