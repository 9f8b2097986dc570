#ifndef STOPPROFILER_INGEST_HPP
#define STOPPROFILER_INGEST_HPP

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <zlib.h>

#include "stopprofiler/apc.hpp"
#include "stopprofiler/csv.hpp"
#include "stopprofiler/errors.hpp"

namespace stopprofiler {

// The event file schema: comma-separated, header row required. Column order
// in the file is free; all schema columns must be present. Extra columns are
// ignored.
struct EventSchema {
  std::vector<std::string> columns;

  static EventSchema standard() {
    return EventSchema{{"route_id", "direction", "variation_id", "trip_id", "stop_id",
                        "stop_name", "service_date", "event_time", "boardings",
                        "alightings", "load", "cum_distance", "global_seq", "lat",
                        "lon"}};
  }
};

inline std::string event_csv_header() {
  return join_fields(EventSchema::standard().columns);
}

inline std::string event_csv_row(const StopEvent& e) {
  std::vector<std::string> f;
  f.reserve(15);
  f.push_back(e.route_id);
  f.push_back(std::string(1, direction_code(e.direction)));
  f.push_back(e.variation_id);
  f.push_back(e.trip_id);
  f.push_back(e.stop_id);
  f.push_back(e.stop_name);
  f.push_back(e.service_date.to_string());
  f.push_back(format_time(e.event_time));
  f.push_back(std::to_string(e.boardings));
  f.push_back(std::to_string(e.alightings));
  f.push_back(std::to_string(e.load));
  f.push_back(format_g(e.cum_distance));
  f.push_back(std::to_string(e.global_seq));
  f.push_back(format_g(e.lat));
  f.push_back(format_g(e.lon));
  return join_fields(f);
}

namespace detail {

inline std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

// Parses a whole event file. Every emitted event passes validate_event and
// row order is preserved. Repeated (trip_id, service_date, event_time,
// stop_id) keys are rejected.
inline std::vector<StopEvent> parse_events(std::istream& in,
                                           const EventSchema& schema = EventSchema::standard()) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "header", "missing header row");
  line = detail::chomp(line);

  const std::vector<std::string> header = split_fields(line);
  std::map<std::string, std::size_t> col_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!col_index.emplace(header[i], i).second)
      throw ParseError(1, header[i], "duplicate column");
  }
  std::vector<std::size_t> idx;
  idx.reserve(schema.columns.size());
  for (const auto& name : schema.columns) {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw ParseError(1, name, "missing column");
    idx.push_back(it->second);
  }

  std::vector<StopEvent> events;
  std::set<std::tuple<std::string, Date, int, std::string>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::chomp(line);
    if (line.empty()) continue;

    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(line_no, "row",
                       "expected " + std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));

    auto field = [&](std::size_t schema_pos) -> const std::string& {
      return fields[idx[schema_pos]];
    };
    auto need_i64 = [&](std::size_t schema_pos) {
      std::int64_t v = 0;
      if (!try_parse_i64(field(schema_pos), v))
        throw ParseError(line_no, schema.columns[schema_pos], "'" + field(schema_pos) + "'");
      return v;
    };
    auto need_f64 = [&](std::size_t schema_pos) {
      double v = 0;
      if (!try_parse_f64(field(schema_pos), v))
        throw ParseError(line_no, schema.columns[schema_pos], "'" + field(schema_pos) + "'");
      return v;
    };

    StopEvent e;
    e.route_id = field(0);
    const auto dir = direction_from_code(field(1));
    if (!dir) throw ParseError(line_no, "direction", "'" + field(1) + "' (want I or O)");
    e.direction = *dir;
    e.variation_id = field(2);
    e.trip_id = field(3);
    e.stop_id = field(4);
    e.stop_name = field(5);
    const auto date = Date::parse(field(6));
    if (!date) throw ParseError(line_no, "service_date", "'" + field(6) + "'");
    e.service_date = *date;
    const auto time = parse_time(field(7));
    if (!time) throw ParseError(line_no, "event_time", "'" + field(7) + "'");
    e.event_time = *time;
    e.boardings = need_i64(8);
    e.alightings = need_i64(9);
    e.load = need_i64(10);
    e.cum_distance = need_f64(11);
    e.global_seq = need_i64(12);
    e.lat = need_f64(13);
    e.lon = need_f64(14);

    try {
      validate_event(e);
    } catch (const RangeError& err) {
      throw RangeError(err.field(), "line " + std::to_string(line_no));
    }

    if (!seen.emplace(e.trip_id, e.service_date, e.event_time, e.stop_id).second)
      throw DuplicateEventError("line " + std::to_string(line_no) + ", trip '" + e.trip_id +
                                "' " + e.service_date.to_string() + " " +
                                format_time(e.event_time) + " stop '" + e.stop_id + "'");

    events.push_back(std::move(e));
  }
  return events;
}

inline std::vector<StopEvent> parse_events(const std::string& text,
                                           const EventSchema& schema = EventSchema::standard()) {
  std::istringstream in(text);
  return parse_events(in, schema);
}

// Whole-file read; transparently gunzips when the name ends in ".gz".
inline std::string read_file_text(const std::string& path) {
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    gzFile gz = gzopen(path.c_str(), "rb");
    if (!gz) throw IoError("cannot open '" + path + "'");
    std::string text;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof buf)) > 0) text.append(buf, std::size_t(n));
    const bool bad = n < 0;
    gzclose(gz);
    if (bad) throw IoError("gzip read failed for '" + path + "'");
    return text;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline std::vector<StopEvent> read_events_file(const std::string& path,
                                               const EventSchema& schema = EventSchema::standard()) {
  return parse_events(read_file_text(path), schema);
}

// Restriction of an event stream to an analysis cohort. An empty criteria set
// is the identity filter.
struct FilterCriteria {
  std::optional<std::string> route_id;
  std::optional<Direction> direction;
  std::optional<ServicePeriod> period;
  std::optional<std::set<std::string>> variation_ids;

  bool empty() const {
    return !route_id && !direction && !period && !variation_ids;
  }
};

// Keeps exactly the events matching every set criterion, in their original
// order. With period.weekdays_only, Saturday/Sunday service dates drop out.
inline std::vector<StopEvent> filter_events(const std::vector<StopEvent>& events,
                                            const FilterCriteria& criteria) {
  if (criteria.period && !criteria.period->valid())
    throw ConfigError("service period start after end (or invalid dates)");

  std::vector<StopEvent> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (criteria.route_id && e.route_id != *criteria.route_id) continue;
    if (criteria.direction && e.direction != *criteria.direction) continue;
    if (criteria.variation_ids && !criteria.variation_ids->count(e.variation_id)) continue;
    if (criteria.period) {
      const auto& p = *criteria.period;
      if (e.service_date < p.start_date || p.end_date < e.service_date) continue;
      if (p.weekdays_only && e.service_date.is_weekend()) continue;
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_INGEST_HPP
