#ifndef STOPPROFILER_COMPARE_HPP
#define STOPPROFILER_COMPARE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "stopprofiler/errors.hpp"
#include "stopprofiler/metrics.hpp"

namespace stopprofiler {

// Agreement between distance metrics: Spearman's rho on the vectorized
// pairwise distances, one row/column per metric.
struct CorrelationMatrix {
  std::vector<MetricKind> metric_labels;
  std::vector<std::vector<double>> values;
};

// Off-diagonal entries (i, j) with i < j in row-major order; for a symmetric
// matrix this determines everything but the diagonal.
inline std::vector<double> upper_triangle(const DistanceMatrix& m) {
  const std::size_t n = m.size();
  if (n < 2) throw TooFewStopsError(n);
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(m.values[i][j]);
  return out;
}

// Ranks with the midrank convention: rank 1 is the smallest value and tied
// values share the mean of the ranks they span.
inline std::vector<double> average_ranks(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("cannot rank an empty vector");
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t pos = 0;
  while (pos < n) {
    std::size_t end = pos + 1;
    while (end < n && values[idx[end]] == values[idx[pos]]) ++end;
    // 0-based positions pos..end-1 share the midrank.
    const double rank = (static_cast<double>(pos) + static_cast<double>(end - 1)) / 2.0 + 1.0;
    for (std::size_t p = pos; p < end; ++p) ranks[idx[p]] = rank;
    pos = end;
  }
  return ranks;
}

// Spearman's rho of two raw value vectors: Pearson correlation of their
// midranks. Midranks make ties well defined, which the no-ties closed form
// is not. Throws DegenerateError when either rank vector is constant.
inline double spearman_rho_values(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatchError(std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  const std::vector<double> ra = average_ranks(a);
  const std::vector<double> rb = average_ranks(b);
  const std::size_t n = ra.size();

  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += ra[i];
    mean_b += rb[i];
  }
  mean_a /= static_cast<double>(n);
  mean_b /= static_cast<double>(n);

  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - mean_a;
    const double db = rb[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa <= 0.0 || sbb <= 0.0)
    throw DegenerateError("constant ranks; Spearman's rho is undefined");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

// Spearman's rho between two distance matrices over the same stops, ranking
// stop pairs from least to most distant under each metric. The sign is
// unchanged if both rankings are reversed, so the direction convention does
// not matter.
inline double spearman_rho(const DistanceMatrix& a, const DistanceMatrix& b) {
  if (a.labels != b.labels)
    throw LabelMismatchError("matrices must share stop labels in the same order");
  return spearman_rho_values(upper_triangle(a), upper_triangle(b));
}

inline CorrelationMatrix correlation_matrix(std::span<const DistanceMatrix> matrices) {
  const std::size_t m = matrices.size();
  CorrelationMatrix out;
  out.metric_labels.reserve(m);
  for (const auto& mat : matrices) out.metric_labels.push_back(mat.metric);
  out.values.assign(m, std::vector<double>(m, 1.0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      out.values[i][j] = out.values[j][i] = spearman_rho(matrices[i], matrices[j]);
  return out;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_COMPARE_HPP
