#ifndef STOPPROFILER_CLUSTERING_HPP
#define STOPPROFILER_CLUSTERING_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stopprofiler/errors.hpp"
#include "stopprofiler/metrics.hpp"
#include "stopprofiler/rng.hpp"

namespace stopprofiler {

// Assignment of stops to k clusters. centers is filled by k-means,
// medoid_ids by k-medoids. objective_history records the objective after
// every k-means iteration, or after the PAM build phase and each accepted
// swap.
struct ClusterResult {
  std::vector<std::string> labels;
  std::vector<int> assignment;
  std::vector<std::vector<double>> centers;
  std::vector<std::string> medoid_ids;
  double objective = 0.0;
  int iterations = 0;
  std::int64_t seed = 0;
  std::vector<double> objective_history;
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return ss;
}

}  // namespace detail

// Lloyd's algorithm from a k-means++ initialization driven by the seeded
// generator. Points are processed in a canonical order (sorted by value), so
// the partition depends on the multiset of points, not on their input order;
// the returned assignment is aligned with the input. Assignment ties go to
// the lowest center index. Iteration stops at an assignment fixpoint or
// max_iter; the objective never increases between iterations. An emptied
// cluster is repaired by re-seeding it with the point farthest from its
// current center (drawn from a cluster of size >= 2).
inline ClusterResult kmeans(std::vector<std::string> labels,
                            const std::vector<std::vector<double>>& points, int k,
                            std::int64_t seed, int max_iter = 100) {
  const std::size_t n = points.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw BadKError(k, n);
  if (labels.size() != n)
    throw LengthMismatchError("labels vs points: " + std::to_string(labels.size()) + " vs " +
                              std::to_string(n));
  detail::require_equal_lengths(points);
  if (max_iter < 1) throw ConfigError("max_iter must be positive");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  std::vector<std::vector<double>> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = points[order[i]];

  Rng rng(static_cast<std::uint64_t>(seed));
  const std::size_t uk = static_cast<std::size_t>(k);

  // k-means++ seeding: first center uniform, then proportional to squared
  // distance from the nearest chosen center.
  std::vector<std::vector<double>> centers;
  centers.reserve(uk);
  std::vector<double> d2(n, 0.0);
  centers.push_back(pts[rng.index(n)]);
  for (std::size_t i = 0; i < n; ++i) d2[i] = detail::sq_dist(pts[i], centers[0]);
  while (centers.size() < uk) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining mass sits on chosen centers (duplicate points); take
      // the lowest index that is not yet a center.
      std::vector<bool> is_center(n, false);
      for (const auto& c : centers)
        for (std::size_t i = 0; i < n; ++i)
          if (!is_center[i] && pts[i] == c) {
            is_center[i] = true;
            break;
          }
      while (pick + 1 < n && is_center[pick]) ++pick;
      rng.uniform();  // keep the stream position schedule-independent
    }
    centers.push_back(pts[pick]);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], detail::sq_dist(pts[i], centers.back()));
  }

  const std::size_t dim = pts.empty() ? 0 : pts[0].size();
  std::vector<int> assign(n, -1);
  std::vector<double> history;
  int iterations = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<int> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_c = 0;
      for (std::size_t c = 0; c < uk; ++c) {
        const double d = detail::sq_dist(pts[i], centers[c]);
        if (d < best) {
          best = d;
          best_c = static_cast<int>(c);
        }
      }
      next[i] = best_c;
    }

    // Empty-cluster repair: hand each empty cluster the point currently
    // farthest from its center, taken from a cluster that can spare one.
    std::vector<std::size_t> sizes(uk, 0);
    for (const int a : next) sizes[static_cast<std::size_t>(a)]++;
    for (std::size_t e = 0; e < uk; ++e) {
      if (sizes[e] > 0) continue;
      double worst = -1.0;
      std::size_t worst_i = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(next[i])] < 2) continue;
        const double d = detail::sq_dist(pts[i], centers[static_cast<std::size_t>(next[i])]);
        if (d > worst) {
          worst = d;
          worst_i = i;
        }
      }
      if (worst_i == n) break;  // every cluster is a singleton already
      sizes[static_cast<std::size_t>(next[worst_i])]--;
      next[worst_i] = static_cast<int>(e);
      sizes[e] = 1;
    }

    if (next == assign) break;
    assign = std::move(next);
    ++iterations;

    for (std::size_t c = 0; c < uk; ++c) centers[c].assign(dim, 0.0);
    std::vector<std::size_t> counts(uk, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(assign[i]);
      counts[c]++;
      for (std::size_t d = 0; d < dim; ++d) centers[c][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < uk; ++c)
      for (std::size_t d = 0; d < dim; ++d) centers[c][d] /= static_cast<double>(counts[c]);

    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      objective += detail::sq_dist(pts[i], centers[static_cast<std::size_t>(assign[i])]);
    history.push_back(objective);
  }

  ClusterResult result;
  result.labels = std::move(labels);
  result.assignment.resize(n);
  for (std::size_t i = 0; i < n; ++i) result.assignment[order[i]] = assign[i];
  result.centers = std::move(centers);
  result.objective = history.empty() ? 0.0 : history.back();
  result.iterations = iterations;
  result.seed = seed;
  result.objective_history = std::move(history);
  return result;
}

inline ClusterResult kmeans(const std::vector<std::vector<double>>& points, int k,
                            std::int64_t seed, int max_iter = 100) {
  return kmeans(detail::index_labels(points.size()), points, k, seed, max_iter);
}

// PAM over a precomputed distance matrix: greedy BUILD, then repeated best
// strictly-cost-decreasing (medoid, non-medoid) swaps until none exists.
// Fully deterministic; the seed is carried through for provenance only.
// Medoids are reported in ascending label order and assignment ties go to the
// lowest medoid index.
inline ClusterResult kmedoids(const DistanceMatrix& matrix, int k, std::int64_t seed) {
  const std::size_t n = matrix.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw BadKError(k, n);
  const auto& dist = matrix.values;
  const std::size_t uk = static_cast<std::size_t>(k);

  std::vector<std::size_t> medoids;
  medoids.reserve(uk);
  std::vector<bool> is_medoid(n, false);

  // BUILD: start from the 1-medoid optimum, then greedily add the point with
  // the largest total cost reduction.
  {
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      double cost = 0.0;
      for (std::size_t j = 0; j < n; ++j) cost += dist[i][j];
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
  }
  std::vector<double> nearest(n);
  for (std::size_t j = 0; j < n; ++j) nearest[j] = dist[medoids[0]][j];
  while (medoids.size() < uk) {
    std::size_t best = n;
    double best_gain = -1.0;
    for (std::size_t c = 0; c < n; ++c) {
      if (is_medoid[c]) continue;
      double gain = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        gain += std::max(0.0, nearest[j] - dist[c][j]);
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = true;
    for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], dist[best][j]);
  }

  auto total_cost = [&](const std::vector<std::size_t>& meds) {
    double cost = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (const std::size_t m : meds) best = std::min(best, dist[m][j]);
      cost += best;
    }
    return cost;
  };

  double cost = total_cost(medoids);
  std::vector<double> history{cost};

  // SWAP phase.
  int swaps = 0;
  while (true) {
    double best_cost = cost;
    std::size_t best_m = n, best_h = n;
    for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
      for (std::size_t h = 0; h < n; ++h) {
        if (is_medoid[h]) continue;
        std::vector<std::size_t> candidate = medoids;
        candidate[mi] = h;
        const double c = total_cost(candidate);
        if (c < best_cost) {
          best_cost = c;
          best_m = mi;
          best_h = h;
        }
      }
    }
    if (best_m == n) break;
    is_medoid[medoids[best_m]] = false;
    medoids[best_m] = best_h;
    is_medoid[best_h] = true;
    cost = best_cost;
    history.push_back(cost);
    ++swaps;
  }

  std::sort(medoids.begin(), medoids.end());

  ClusterResult result;
  result.labels = matrix.labels;
  result.assignment.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (std::size_t c = 0; c < medoids.size(); ++c) {
      const double d = dist[medoids[c]][j];
      if (d < best) {
        best = d;
        best_c = static_cast<int>(c);
      }
    }
    result.assignment[j] = best_c;
  }
  result.medoid_ids.reserve(medoids.size());
  for (const std::size_t m : medoids) result.medoid_ids.push_back(matrix.labels[m]);
  result.objective = cost;
  result.iterations = swaps;
  result.seed = seed;
  result.objective_history = std::move(history);
  return result;
}

// Chance-corrected agreement between two partitions, from the contingency
// table. 1 is perfect agreement; independent partitions score near 0.
inline double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw LengthMismatchError(std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  const std::size_t n = a.size();
  if (n < 2) return 1.0;

  std::map<std::pair<int, int>, std::int64_t> cells;
  std::map<int, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    cells[{a[i], b[i]}]++;
    rows[a[i]]++;
    cols[b[i]]++;
  }
  auto comb2 = [](std::int64_t x) { return static_cast<double>(x) * (x - 1) / 2.0; };

  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, c] : cells) index += comb2(c);
  for (const auto& [key, c] : rows) sum_rows += comb2(c);
  for (const auto& [key, c] : cols) sum_cols += comb2(c);

  const double total = comb2(static_cast<std::int64_t>(n));
  const double expected = sum_rows * sum_cols / total;
  const double max_index = (sum_rows + sum_cols) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_CLUSTERING_HPP
