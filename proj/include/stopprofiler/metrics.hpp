#ifndef STOPPROFILER_METRICS_HPP
#define STOPPROFILER_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stopprofiler/apc.hpp"
#include "stopprofiler/errors.hpp"
#include "stopprofiler/parallel.hpp"

namespace stopprofiler {

// The five pairwise stop-dissimilarity measures.
enum class MetricKind { CurveEuclidean, CurveBand, SeqNumber, Geographic, TravelDistance };

inline const char* metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::CurveEuclidean: return "eucl";
    case MetricKind::CurveBand: return "band";
    case MetricKind::SeqNumber: return "gseq";
    case MetricKind::Geographic: return "geo";
    case MetricKind::TravelDistance: return "trdist";
  }
  return "?";
}

inline std::optional<MetricKind> metric_from_name(std::string_view name) {
  if (name == "eucl") return MetricKind::CurveEuclidean;
  if (name == "band") return MetricKind::CurveBand;
  if (name == "gseq") return MetricKind::SeqNumber;
  if (name == "geo") return MetricKind::Geographic;
  if (name == "trdist") return MetricKind::TravelDistance;
  return std::nullopt;
}

// Labeled symmetric nonnegative matrix of pairwise stop dissimilarities.
struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  MetricKind metric = MetricKind::CurveEuclidean;

  std::size_t size() const { return labels.size(); }

  static DistanceMatrix zeros(std::vector<std::string> labels, MetricKind metric) {
    DistanceMatrix m;
    m.metric = metric;
    m.values.assign(labels.size(), std::vector<double>(labels.size(), 0.0));
    m.labels = std::move(labels);
    return m;
  }
};

// Invariant check shared by tests: symmetry, zero diagonal, nonnegativity,
// and the [0,1] bound for band entries. Returns false and fills `why` on the
// first violation.
inline bool matrix_invariants_ok(const DistanceMatrix& m, std::string* why = nullptr) {
  const std::size_t n = m.size();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (m.values.size() != n) return fail("row count != label count");
  for (std::size_t i = 0; i < n; ++i) {
    if (m.values[i].size() != n) return fail("ragged row " + std::to_string(i));
    if (m.values[i][i] != 0.0) return fail("nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m.values[i][j];
      if (!(v >= 0.0)) return fail("negative entry");
      if (m.metric == MetricKind::CurveBand && v > 1.0) return fail("band entry > 1");
      if (v != m.values[j][i]) return fail("asymmetry at (" + std::to_string(i) + "," +
                                           std::to_string(j) + ")");
    }
  }
  return true;
}

namespace detail {

inline std::vector<std::string> index_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return labels;
}

inline void require_equal_lengths(const std::vector<std::vector<double>>& curves) {
  for (std::size_t i = 1; i < curves.size(); ++i)
    if (curves[i].size() != curves[0].size())
      throw LengthMismatchError("curve " + std::to_string(i) + " has length " +
                                std::to_string(curves[i].size()) + ", expected " +
                                std::to_string(curves[0].size()));
}

}  // namespace detail

// L2 distance between two curves.
inline double curve_euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw LengthMismatchError(std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

inline DistanceMatrix curve_euclidean_matrix(std::vector<std::string> labels,
                                             const std::vector<std::vector<double>>& curves) {
  if (labels.size() != curves.size())
    throw LengthMismatchError("labels vs curves: " + std::to_string(labels.size()) + " vs " +
                              std::to_string(curves.size()));
  detail::require_equal_lengths(curves);
  DistanceMatrix m = DistanceMatrix::zeros(std::move(labels), MetricKind::CurveEuclidean);
  const std::size_t n = curves.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.values[i][j] = m.values[j][i] = curve_euclidean(curves[i], curves[j]);
  return m;
}

inline DistanceMatrix curve_euclidean_matrix(const std::vector<std::vector<double>>& curves) {
  return curve_euclidean_matrix(detail::index_labels(curves.size()), curves);
}

// Band dissimilarity of each curve pair, relative to the whole sample: the
// fraction of (other curve, time slot) combinations whose value falls inside
// the pair's pointwise envelope,
//
//   d(i,j) = (1 / ((n-2) * T)) * sum over h not in {i,j}, t in 0..T-1 of
//            [ min(c_i(t), c_j(t)) <= c_h(t) <= max(c_i(t), c_j(t)) ]
//
// with inclusive bounds. A large value means much of the data lies between
// the two curves, i.e. the pair is far apart relative to the sample. Entries
// land in [0,1]; the diagonal is 0 by convention, and n = 2 leaves an empty
// reference set so the off-diagonal value is 0. Depends only on per-slot
// orderings, so any common strictly increasing transform of all curves leaves
// the matrix unchanged.
//
// Counting uses per-slot sorted samples and rank arithmetic; the tests pin it
// against a direct triple-loop evaluation of the definition. Integer counts
// are accumulated per pair and divided once at the end, so parallel and
// sequential runs agree bitwise.
inline DistanceMatrix band_distance_matrix(std::vector<std::string> labels,
                                           const std::vector<std::vector<double>>& curves) {
  const std::size_t n = curves.size();
  if (n < 2) throw TooFewCurvesError(n);
  if (labels.size() != n)
    throw LengthMismatchError("labels vs curves: " + std::to_string(labels.size()) + " vs " +
                              std::to_string(n));
  if (curves[0].empty()) throw LengthMismatchError("curves must have at least one sample");
  detail::require_equal_lengths(curves);

  DistanceMatrix m = DistanceMatrix::zeros(std::move(labels), MetricKind::CurveBand);
  if (n == 2) return m;

  const std::size_t t_len = curves[0].size();
  std::vector<std::vector<double>> sorted_slot(t_len, std::vector<double>(n));
  for (std::size_t t = 0; t < t_len; ++t) {
    for (std::size_t h = 0; h < n; ++h) sorted_slot[t][h] = curves[h][t];
    std::sort(sorted_slot[t].begin(), sorted_slot[t].end());
  }

  const double denom = static_cast<double>((n - 2) * t_len);
  parallel_for(n, [&](std::size_t row_begin, std::size_t row_end) {
    for (std::size_t i = row_begin; i < row_end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        std::int64_t inside = 0;
        for (std::size_t t = 0; t < t_len; ++t) {
          const double a = curves[i][t];
          const double b = curves[j][t];
          const double lo = std::min(a, b);
          const double hi = std::max(a, b);
          const auto& slot = sorted_slot[t];
          const auto first = std::lower_bound(slot.begin(), slot.end(), lo);
          const auto last = std::upper_bound(slot.begin(), slot.end(), hi);
          // The pair's own two values are the envelope bounds, always inside.
          inside += (last - first) - 2;
        }
        m.values[i][j] = static_cast<double>(inside) / denom;
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m.values[i][j] = m.values[j][i];
  return m;
}

inline DistanceMatrix band_distance_matrix(const std::vector<std::vector<double>>& curves) {
  return band_distance_matrix(detail::index_labels(curves.size()), curves);
}

// One canonical location value per stop: route variations and loops make the
// per-event values disagree, so each field takes the modal value over the
// stop's events. Ties break to the smallest value; (lat, lon) is treated as
// one pair with lexicographic tie-breaking. Totals sum the stop's events.
inline std::map<std::string, StopInfo> canonical_location_values(
    std::span<const StopEvent> events) {
  struct Tally {
    std::string name;
    std::map<std::int64_t, std::int64_t> gseq;
    std::map<double, std::int64_t> cum;
    std::map<std::pair<double, double>, std::int64_t> latlon;
    std::int64_t boardings = 0;
    std::int64_t alightings = 0;
  };
  std::map<std::string, Tally> tallies;
  for (const auto& e : events) {
    Tally& t = tallies[e.stop_id];
    if (t.name.empty()) t.name = e.stop_name;
    t.gseq[e.global_seq]++;
    t.cum[e.cum_distance]++;
    t.latlon[{e.lat, e.lon}]++;
    t.boardings += e.boardings;
    t.alightings += e.alightings;
  }

  // Maps iterate in ascending key order, so "first of the max counts" is the
  // smallest value among the modes.
  auto mode_of = [](const auto& counts) {
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;
    return best->first;
  };

  std::map<std::string, StopInfo> infos;
  for (const auto& [stop, t] : tallies) {
    StopInfo info;
    info.stop_id = stop;
    info.stop_name = t.name;
    info.canonical_global_seq = mode_of(t.gseq);
    info.canonical_cum_distance = mode_of(t.cum);
    const auto [lat, lon] = mode_of(t.latlon);
    info.canonical_lat = lat;
    info.canonical_lon = lon;
    info.total_boardings = t.boardings;
    info.total_alightings = t.alightings;
    infos.emplace(stop, std::move(info));
  }
  return infos;
}

enum class GeoMode { PlanarDegrees, HaversineMeters };

namespace detail {

inline double haversine_m(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusM = 6371000.0;
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  const double phi1 = lat1 * kDegToRad;
  const double phi2 = lat2 * kDegToRad;
  const double dphi = (lat2 - lat1) * kDegToRad;
  const double dlam = (lon2 - lon1) * kDegToRad;
  const double s = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(s)));
}

}  // namespace detail

// Pairwise distances from canonical location values. SeqNumber counts stops
// apart along the route; Geographic is planar Euclidean on raw (lon, lat)
// degrees by default, with a haversine-meters mode; TravelDistance differences
// the cumulative odometer readings in meters.
inline DistanceMatrix location_distance_matrix(const std::vector<StopInfo>& infos,
                                               MetricKind kind,
                                               GeoMode geo_mode = GeoMode::PlanarDegrees) {
  if (kind != MetricKind::SeqNumber && kind != MetricKind::Geographic &&
      kind != MetricKind::TravelDistance)
    throw ConfigError("location_distance_matrix needs a location metric");

  std::vector<std::string> labels;
  labels.reserve(infos.size());
  for (const auto& info : infos) labels.push_back(info.stop_id);

  DistanceMatrix m = DistanceMatrix::zeros(std::move(labels), kind);
  const std::size_t n = infos.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = 0.0;
      switch (kind) {
        case MetricKind::SeqNumber:
          d = static_cast<double>(
              std::abs(infos[i].canonical_global_seq - infos[j].canonical_global_seq));
          break;
        case MetricKind::Geographic:
          if (geo_mode == GeoMode::PlanarDegrees) {
            const double dlat = infos[i].canonical_lat - infos[j].canonical_lat;
            const double dlon = infos[i].canonical_lon - infos[j].canonical_lon;
            d = std::sqrt(dlat * dlat + dlon * dlon);
          } else {
            d = detail::haversine_m(infos[i].canonical_lat, infos[i].canonical_lon,
                                    infos[j].canonical_lat, infos[j].canonical_lon);
          }
          break;
        case MetricKind::TravelDistance:
          d = std::abs(infos[i].canonical_cum_distance - infos[j].canonical_cum_distance);
          break;
        default:
          break;
      }
      m.values[i][j] = m.values[j][i] = d;
    }
  }
  return m;
}

// Applies a permutation to labels, rows, and columns:
// labels'[i] = labels[perm[i]], values'[i][j] = values[perm[i]][perm[j]].
inline DistanceMatrix reorder(const DistanceMatrix& m, const std::vector<std::size_t>& perm) {
  const std::size_t n = m.size();
  if (perm.size() != n)
    throw NotAPermutationError("length " + std::to_string(perm.size()) + " for a " +
                               std::to_string(n) + "-stop matrix");
  std::vector<bool> seen(n, false);
  for (const std::size_t p : perm) {
    if (p >= n || seen[p]) throw NotAPermutationError("index " + std::to_string(p));
    seen[p] = true;
  }

  DistanceMatrix out;
  out.metric = m.metric;
  out.labels.resize(n);
  out.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = m.labels[perm[i]];
    for (std::size_t j = 0; j < n; ++j) out.values[i][j] = m.values[perm[i]][perm[j]];
  }
  return out;
}

// Stop order along one route variation: ascending first appearance (by event
// time) within the variation's representative trip. The representative is the
// (trip, date) realization with the most recorded events; ties go to the
// smallest trip_id, then the earliest date.
inline std::vector<std::string> variation_order(std::span<const StopEvent> events,
                                                const std::string& variation_id) {
  std::map<std::pair<std::string, Date>, std::vector<const StopEvent*>> trips;
  for (const auto& e : events)
    if (e.variation_id == variation_id) trips[{e.trip_id, e.service_date}].push_back(&e);
  if (trips.empty()) throw UnknownVariationError(variation_id);

  const std::vector<const StopEvent*>* rep = nullptr;
  for (const auto& [key, trip_events] : trips)
    if (!rep || trip_events.size() > rep->size()) rep = &trip_events;

  std::vector<const StopEvent*> ordered = *rep;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const StopEvent* a, const StopEvent* b) {
                     return a->event_time < b->event_time;
                   });

  std::vector<std::string> stops;
  std::set<std::string> seen;
  for (const StopEvent* e : ordered)
    if (seen.insert(e->stop_id).second) stops.push_back(e->stop_id);
  return stops;
}

// Permutation that rearranges `labels` to follow `desired` order. Labels
// missing from `desired` keep their relative order at the end; entries of
// `desired` not present in `labels` are ignored.
inline std::vector<std::size_t> permutation_to(const std::vector<std::string>& labels,
                                               const std::vector<std::string>& desired) {
  std::map<std::string, std::size_t> where;
  for (std::size_t i = 0; i < labels.size(); ++i) where[labels[i]] = i;

  std::vector<std::size_t> perm;
  perm.reserve(labels.size());
  std::vector<bool> used(labels.size(), false);
  for (const auto& stop : desired) {
    auto it = where.find(stop);
    if (it == where.end() || used[it->second]) continue;
    perm.push_back(it->second);
    used[it->second] = true;
  }
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!used[i]) perm.push_back(i);
  return perm;
}

// Stop order by ascending canonical global sequence number (ties by stop id).
// Every label must have canonical values.
inline std::vector<std::string> order_by_global_seq(
    const std::vector<std::string>& labels, const std::map<std::string, StopInfo>& infos) {
  std::vector<std::string> order = labels;
  for (const auto& stop : order)
    if (!infos.count(stop)) throw UnknownStopError(stop);
  std::sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const auto ga = infos.at(a).canonical_global_seq;
    const auto gb = infos.at(b).canonical_global_seq;
    return ga != gb ? ga < gb : a < b;
  });
  return order;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_METRICS_HPP
