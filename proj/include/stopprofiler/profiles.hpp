#ifndef STOPPROFILER_PROFILES_HPP
#define STOPPROFILER_PROFILES_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "stopprofiler/apc.hpp"
#include "stopprofiler/errors.hpp"

namespace stopprofiler {

enum class Measure { Boardings, Alightings };

inline const char* measure_name(Measure m) {
  return m == Measure::Boardings ? "boardings" : "alightings";
}

inline std::int64_t measure_of(const StopEvent& e, Measure m) {
  return m == Measure::Boardings ? e.boardings : e.alightings;
}

// A stop's 24-slot hourly curve, aggregated across every date in the cohort.
// Counts are exact (accumulated in integers) even though the slots are
// doubles.
struct DiurnalProfile {
  std::string stop_id;
  Measure measure = Measure::Boardings;
  std::array<double, 24> counts{};
  double total = 0.0;
};

// The same curve as fractions of the stop's total: when the stop is used,
// not how much.
struct ProportionProfile {
  std::string stop_id;
  std::array<double, 24> proportions{};
};

enum class Grouping { ByDayOfWeek, ByHour, ByDayOfWeekAndHour };

inline const char* day_name(int day) {
  static const char* names[] = {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"};
  return names[day];
}

// Cell key for aggregate tables; unused dimensions stay -1. day is 0 = Mon
// through 4 = Fri.
struct AggKey {
  int day = -1;
  int hour = -1;
  auto operator<=>(const AggKey&) const = default;

  std::string label() const {
    if (day >= 0 && hour >= 0) return std::string(day_name(day)) + ":" + std::to_string(hour);
    if (day >= 0) return day_name(day);
    return std::to_string(hour);
  }
};

struct AggregateTable {
  Grouping grouping = Grouping::ByHour;
  Measure measure = Measure::Boardings;
  std::map<AggKey, double> cells;
};

// Sums the chosen measure into day-of-week/hour cells. The key set is always
// complete (Mon-Fri, 0-23, or their product) with zeros where nothing landed.
// Weekend events fall in no day-of-week cell; the cohort contract is weekday
// service.
inline AggregateTable aggregate_counts(std::span<const StopEvent> events, Grouping grouping,
                                       Measure measure) {
  AggregateTable table{grouping, measure, {}};
  std::map<AggKey, std::int64_t> sums;

  auto keys_of = [&](const StopEvent& e) -> std::vector<AggKey> {
    const int wd = e.service_date.weekday();
    switch (grouping) {
      case Grouping::ByDayOfWeek:
        if (wd >= 5) return {};
        return {AggKey{wd, -1}};
      case Grouping::ByHour:
        return {AggKey{-1, e.hour()}};
      case Grouping::ByDayOfWeekAndHour:
        if (wd >= 5) return {};
        return {AggKey{wd, e.hour()}};
    }
    return {};
  };

  switch (grouping) {
    case Grouping::ByDayOfWeek:
      for (int d = 0; d < 5; ++d) sums[AggKey{d, -1}] = 0;
      break;
    case Grouping::ByHour:
      for (int h = 0; h < 24; ++h) sums[AggKey{-1, h}] = 0;
      break;
    case Grouping::ByDayOfWeekAndHour:
      for (int d = 0; d < 5; ++d)
        for (int h = 0; h < 24; ++h) sums[AggKey{d, h}] = 0;
      break;
  }

  for (const auto& e : events)
    for (const AggKey& k : keys_of(e)) sums[k] += measure_of(e, measure);

  for (const auto& [k, v] : sums) table.cells[k] = static_cast<double>(v);
  return table;
}

// One diurnal curve per stop that has at least one event in the cohort.
// counts[h] sums the measure over the stop's hour-h events across all dates.
inline std::map<std::string, DiurnalProfile> stop_diurnal_profiles(
    std::span<const StopEvent> events, Measure measure) {
  std::map<std::string, std::array<std::int64_t, 24>> sums;
  for (const auto& e : events) {
    auto [it, inserted] = sums.try_emplace(e.stop_id);
    if (inserted) it->second.fill(0);
    it->second[e.hour()] += measure_of(e, measure);
  }

  std::map<std::string, DiurnalProfile> profiles;
  for (const auto& [stop, counts] : sums) {
    DiurnalProfile p;
    p.stop_id = stop;
    p.measure = measure;
    std::int64_t total = 0;
    for (int h = 0; h < 24; ++h) {
      p.counts[h] = static_cast<double>(counts[h]);
      total += counts[h];
    }
    p.total = static_cast<double>(total);
    profiles.emplace(stop, std::move(p));
  }
  return profiles;
}

// Normalizes a curve to proportions of the stop's total.
inline ProportionProfile to_proportions(const DiurnalProfile& profile) {
  if (!(profile.total > 0.0)) throw ZeroTotalError({profile.stop_id});
  ProportionProfile p;
  p.stop_id = profile.stop_id;
  for (int h = 0; h < 24; ++h) p.proportions[h] = profile.counts[h] / profile.total;
  return p;
}

// Stops whose total meets the minimum-demand threshold (inclusive).
inline std::set<std::string> eligible_stops(const std::map<std::string, DiurnalProfile>& profiles,
                                            double min_total = 50.0) {
  std::set<std::string> out;
  for (const auto& [stop, p] : profiles)
    if (p.total >= min_total) out.insert(stop);
  return out;
}

// Natural log of each stop's total; clarifies the heavily skewed volume
// distribution.
inline std::map<std::string, double> log_volumes(
    const std::map<std::string, DiurnalProfile>& profiles) {
  std::vector<std::string> zeros;
  for (const auto& [stop, p] : profiles)
    if (!(p.total > 0.0)) zeros.push_back(stop);
  if (!zeros.empty()) throw ZeroTotalError(std::move(zeros));

  std::map<std::string, double> out;
  for (const auto& [stop, p] : profiles) out[stop] = std::log(p.total);
  return out;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_PROFILES_HPP
