#ifndef STOPPROFILER_APC_HPP
#define STOPPROFILER_APC_HPP

#include <chrono>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "stopprofiler/errors.hpp"

namespace stopprofiler {

enum class Direction { Inbound, Outbound };

inline char direction_code(Direction d) {
  return d == Direction::Inbound ? 'I' : 'O';
}

inline std::optional<Direction> direction_from_code(std::string_view s) {
  if (s == "I") return Direction::Inbound;
  if (s == "O") return Direction::Outbound;
  return std::nullopt;
}

// Calendar date in the transit agency's local civil time. No timezone
// arithmetic anywhere: hour-of-day analysis is local by nature.
struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  bool valid() const {
    using namespace std::chrono;
    return year_month_day{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                          std::chrono::day{unsigned(day)}}
        .ok();
  }

  // 0 = Monday ... 6 = Sunday.
  int weekday() const {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                             std::chrono::day{unsigned(day)}};
    return int(std::chrono::weekday{sys_days{ymd}}.iso_encoding()) - 1;
  }

  bool is_weekend() const { return weekday() >= 5; }

  Date next_day() const {
    using namespace std::chrono;
    const year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                             std::chrono::day{unsigned(day)}};
    const year_month_day next{sys_days{ymd} + days{1}};
    return Date{int(next.year()), int(unsigned(next.month())), int(unsigned(next.day()))};
  }

  std::string to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  // Strict YYYY-MM-DD; rejects impossible calendar dates.
  static std::optional<Date> parse(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      if (i == 4 || i == 7) continue;
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
    }
    y = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
    m = (s[5] - '0') * 10 + (s[6] - '0');
    d = (s[8] - '0') * 10 + (s[9] - '0');
    const Date date{y, m, d};
    if (!date.valid()) return std::nullopt;
    return date;
  }
};

// Seconds since local midnight, strictly below 24:00:00.
inline std::optional<int> parse_time(std::string_view s) {
  if (s.size() != 8 || s[2] != ':' || s[5] != ':') return std::nullopt;
  for (std::size_t i = 0; i < 8; ++i) {
    if (i == 2 || i == 5) continue;
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  }
  const int h = (s[0] - '0') * 10 + (s[1] - '0');
  const int m = (s[3] - '0') * 10 + (s[4] - '0');
  const int sec = (s[6] - '0') * 10 + (s[7] - '0');
  if (h > 23 || m > 59 || sec > 59) return std::nullopt;
  return h * 3600 + m * 60 + sec;
}

inline std::string format_time(int seconds) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60,
                seconds % 60);
  return buf;
}

// One doors-open record. boardings = alightings = 0 is a valid event; the
// sensors emit a record whenever the doors open. load is carried through
// verbatim but never trusted for analysis (the counters routinely disagree).
struct StopEvent {
  std::string route_id;
  Direction direction = Direction::Inbound;
  std::string variation_id;
  std::string trip_id;
  std::string stop_id;
  std::string stop_name;
  Date service_date;
  int event_time = 0;  // seconds since local midnight
  std::int64_t boardings = 0;
  std::int64_t alightings = 0;
  std::int64_t load = 0;
  double cum_distance = 0.0;  // meters since trip start
  std::int64_t global_seq = 1;
  double lat = 0.0;
  double lon = 0.0;

  int hour() const { return event_time / 3600; }
};

struct ServicePeriod {
  std::string label;
  Date start_date;
  Date end_date;
  bool weekdays_only = false;

  bool valid() const {
    return start_date.valid() && end_date.valid() && start_date <= end_date;
  }
};

// Per-stop summary with one canonical location value per field, chosen as the
// modal value across the stop's events (route variations can disagree).
struct StopInfo {
  std::string stop_id;
  std::string stop_name;
  std::int64_t canonical_global_seq = 1;
  double canonical_cum_distance = 0.0;
  double canonical_lat = 0.0;
  double canonical_lon = 0.0;
  std::int64_t total_boardings = 0;
  std::int64_t total_alightings = 0;
};

// Checks every type invariant; returns the event untouched when all hold.
// Throws RangeError naming the first offending field.
inline const StopEvent& validate_event(const StopEvent& e) {
  if (e.boardings < 0) throw RangeError("boardings", std::to_string(e.boardings));
  if (e.alightings < 0) throw RangeError("alightings", std::to_string(e.alightings));
  if (!(e.cum_distance >= 0.0)) throw RangeError("cum_distance");
  if (e.global_seq < 1) throw RangeError("global_seq", std::to_string(e.global_seq));
  if (!(e.lat >= -90.0 && e.lat <= 90.0)) throw RangeError("lat");
  if (!(e.lon >= -180.0 && e.lon <= 180.0)) throw RangeError("lon");
  if (!(e.event_time >= 0 && e.event_time < 24 * 3600)) throw RangeError("event_time");
  if (!e.service_date.valid()) throw RangeError("service_date", e.service_date.to_string());
  return e;
}

// Net passenger flow of one trip: sum of boardings minus sum of alightings.
// Negative means the counters recorded more alightings than boardings, the
// usual APC artifact at crowded stops.
inline std::int64_t trip_flow_imbalance(std::span<const StopEvent> events) {
  std::int64_t net = 0;
  const std::string* trip = nullptr;
  for (const auto& e : events) {
    if (trip == nullptr) {
      trip = &e.trip_id;
    } else if (e.trip_id != *trip) {
      throw MixedTripError("'" + *trip + "' vs '" + e.trip_id + "'");
    }
    net += e.boardings - e.alightings;
  }
  return net;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_APC_HPP
