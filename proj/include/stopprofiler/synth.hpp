#ifndef STOPPROFILER_SYNTH_HPP
#define STOPPROFILER_SYNTH_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "stopprofiler/apc.hpp"
#include "stopprofiler/errors.hpp"
#include "stopprofiler/rng.hpp"

namespace stopprofiler {

// A named diurnal shape; proportions sum to 1.
struct Archetype {
  std::string name;
  std::array<double, 24> proportions{};
};

namespace detail {

inline Archetype archetype_from_weights(std::string name, const std::array<int, 24>& weights) {
  Archetype a;
  a.name = std::move(name);
  int total = 0;
  for (const int w : weights) total += w;
  for (int h = 0; h < 24; ++h)
    a.proportions[h] = static_cast<double>(weights[h]) / static_cast<double>(total);
  return a;
}

}  // namespace detail

// Four canonical stop shapes. Each is defined by integer hour weights summing
// to 1000, so exact expected totals exist for round volumes. MorningPeak and
// EveningPeak carry one commute peak each, TwoPeak both, EarlyPlusLate an
// early peak with sustained activity through the evening.
inline std::vector<Archetype> builtin_archetypes() {
  return {
      detail::archetype_from_weights(
          "MorningPeak", {2,  1,  1,  1,  3,  25, 120, 255, 185, 95, 55, 40,
                          35, 30, 28, 25, 22, 20, 16,  12,  10,  8,  6,  5}),
      detail::archetype_from_weights(
          "EveningPeak", {4,  2,  1,  1,  1,   5,   15,  25,  30, 35, 40, 45,
                          55, 65, 85, 110, 160, 255, 30,  15,  10, 6,  3,  2}),
      detail::archetype_from_weights(
          "TwoPeak", {2,  1,  1,  1,  2,   20,  95, 170, 110, 45, 28, 22,
                      22, 26, 40, 65, 110, 170, 30, 18,  10,  6,  4,  2}),
      detail::archetype_from_weights(
          "EarlyPlusLate", {3,  2,  1,  1,  2,  30, 130, 180, 105, 50, 32, 28,
                            26, 26, 28, 45, 52, 58, 62,  58,  45,  22, 9,  5}),
  };
}

// Generator specification. Volumes are log-normal (exp of a normal draw), so
// a handful of stops dominate the total the way a real route's hub stop does,
// while hourly counts are Poisson around the archetype shape.
//
// With deterministic = true every random draw is replaced by its mean: volume
// becomes exp(volume_log_mean), noise disappears, and each hour's expected
// stop total V * p_h is rounded to the nearest count and apportioned evenly
// across days. Recovered proportion curves then reproduce the archetypes
// exactly whenever the V * p_h are integral (true for the builtin archetypes
// with any volume that is a multiple of 1000).
struct SynthConfig {
  int n_stops = 40;
  std::vector<Archetype> archetypes = builtin_archetypes();
  std::vector<double> mixture_weights = {1.0, 1.0, 1.0, 1.0};
  double volume_log_mean = std::log(600.0);
  double volume_log_sd = 0.8;
  double noise_scale = 0.1;
  int n_weekdays = 45;
  std::int64_t seed = 0;
  std::string route_id = "R1";
  std::string variation_id = "V1";
  Direction direction = Direction::Inbound;
  Date start_date{2024, 1, 1};  // a Monday
  bool deterministic = false;
};

struct SynthOutput {
  std::vector<StopEvent> events;
  std::map<std::string, std::string> ground_truth;  // stop_id -> archetype name
};

namespace detail {

inline void validate_config(const SynthConfig& cfg) {
  if (cfg.n_stops < 1) throw ConfigError("n_stops must be positive");
  if (cfg.n_weekdays < 1) throw ConfigError("n_weekdays must be positive");
  if (cfg.archetypes.empty()) throw ConfigError("at least one archetype required");
  if (cfg.mixture_weights.size() != cfg.archetypes.size())
    throw ConfigError("mixture_weights must match archetypes");
  for (const double w : cfg.mixture_weights)
    if (!(w > 0.0)) throw ConfigError("mixture weights must be positive");
  for (const auto& a : cfg.archetypes) {
    double sum = 0.0;
    for (const double p : a.proportions) {
      if (!(p >= 0.0)) throw ConfigError("archetype '" + a.name + "' has a negative proportion");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw ConfigError("archetype '" + a.name + "' proportions must sum to 1");
  }
  if (!(cfg.noise_scale >= 0.0)) throw ConfigError("noise_scale must be nonnegative");
  if (!(cfg.volume_log_sd >= 0.0)) throw ConfigError("volume_log_sd must be nonnegative");
  if (!cfg.start_date.valid()) throw ConfigError("invalid start_date");
}

inline std::string synth_stop_id(int index, int n_stops) {
  int width = 3;
  for (int v = n_stops; v >= 1000; v /= 10) ++width;
  char buf[24];
  std::snprintf(buf, sizeof buf, "S%0*d", width, index + 1);
  return buf;
}

}  // namespace detail

// Generates a synthetic APC event file with planted cluster structure.
// Per-stop randomness comes from a derived stream Rng(derive(seed, stop)),
// drawn in a fixed order (archetype pick, volume, then per day-hour the
// boarding noise, boarding count, alighting noise, alighting count), so the
// output is a pure function of the config. Events are emitted in
// chronological order; each (date, hour) is one trip visiting every stop in
// sequence, and an event exists for every hour where the archetype (or its
// reverse, which drives alightings) has mass.
inline SynthOutput generate(const SynthConfig& cfg) {
  detail::validate_config(cfg);

  const int n = cfg.n_stops;
  const int days = cfg.n_weekdays;
  const std::size_t n_arch = cfg.archetypes.size();

  std::vector<Date> dates;
  dates.reserve(days);
  for (Date d = cfg.start_date; static_cast<int>(dates.size()) < days; d = d.next_day())
    if (!d.is_weekend()) dates.push_back(d);

  double weight_total = 0.0;
  for (const double w : cfg.mixture_weights) weight_total += w;

  SynthOutput out;
  // counts[s][d][h]
  std::vector<std::vector<std::array<std::int64_t, 24>>> board(
      n, std::vector<std::array<std::int64_t, 24>>(days));
  auto alight = board;
  std::vector<std::size_t> stop_archetype(n);

  for (int s = 0; s < n; ++s) {
    Rng rng(Rng::derive(static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(s)));

    const double u = rng.uniform() * weight_total;
    std::size_t pick = n_arch - 1;
    double cum = 0.0;
    for (std::size_t a = 0; a < n_arch; ++a) {
      cum += cfg.mixture_weights[a];
      if (cum > u) {
        pick = a;
        break;
      }
    }
    stop_archetype[s] = pick;
    const auto& p = cfg.archetypes[pick].proportions;

    double volume = std::exp(cfg.volume_log_mean);
    if (!cfg.deterministic) volume = std::exp(cfg.volume_log_mean + cfg.volume_log_sd * rng.normal());

    for (int d = 0; d < days; ++d) {
      board[s][d].fill(0);
      alight[s][d].fill(0);
    }

    if (cfg.deterministic) {
      for (int h = 0; h < 24; ++h) {
        const std::int64_t tb = std::llround(volume * p[h]);
        const std::int64_t ta = std::llround(volume * p[23 - h]);
        for (int d = 0; d < days; ++d) {
          board[s][d][h] = tb / days + (d < tb % days ? 1 : 0);
          alight[s][d][h] = ta / days + (d < ta % days ? 1 : 0);
        }
      }
    } else {
      for (int d = 0; d < days; ++d) {
        for (int h = 0; h < 24; ++h) {
          const double eps_b = rng.normal();
          const double mu_b = std::max(
              0.0, volume * p[h] * (1.0 + cfg.noise_scale * eps_b) / static_cast<double>(days));
          board[s][d][h] = rng.poisson(mu_b);
          const double eps_a = rng.normal();
          const double mu_a = std::max(
              0.0,
              volume * p[23 - h] * (1.0 + cfg.noise_scale * eps_a) / static_cast<double>(days));
          alight[s][d][h] = rng.poisson(mu_a);
        }
      }
    }
  }

  std::vector<std::string> stop_ids(n);
  for (int s = 0; s < n; ++s) {
    stop_ids[s] = detail::synth_stop_id(s, n);
    out.ground_truth[stop_ids[s]] = cfg.archetypes[stop_archetype[s]].name;
  }

  for (int d = 0; d < days; ++d) {
    for (int h = 0; h < 24; ++h) {
      char trip[8];
      std::snprintf(trip, sizeof trip, "T%02d", h);
      std::int64_t load = 0;
      for (int s = 0; s < n; ++s) {
        const auto& p = cfg.archetypes[stop_archetype[s]].proportions;
        if (p[h] <= 0.0 && p[23 - h] <= 0.0) continue;
        StopEvent e;
        e.route_id = cfg.route_id;
        e.direction = cfg.direction;
        e.variation_id = cfg.variation_id;
        e.trip_id = trip;
        e.stop_id = stop_ids[s];
        e.stop_name = "Stop " + stop_ids[s].substr(1);
        e.service_date = dates[d];
        e.event_time = h * 3600 + (s % 3600);
        e.boardings = board[s][d][h];
        e.alightings = alight[s][d][h];
        load += e.boardings - e.alightings;
        e.load = load;
        e.cum_distance = 400.0 * s;
        e.global_seq = s + 1;
        e.lat = 40.0 + 0.0003 * (s % 3);
        e.lon = -75.0 + 0.004 * s;
        out.events.push_back(std::move(e));
      }
    }
  }
  return out;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_SYNTH_HPP
