#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailrisk {

/// Days since 1970-01-01, UTC midnight of the event date.
using DayNumber = double;

struct EventRecord {
  DayNumber time = 0.0;
  std::int64_t severity = 0;  // deaths
  std::string weapon;
  std::string source;

  bool operator==(const EventRecord&) const = default;
};

/// Observation window of a catalog. Both ends are inclusive.
struct TimeSpan {
  DayNumber start = 0.0;
  DayNumber end = 0.0;

  bool operator==(const TimeSpan&) const = default;
};

/// Events sorted by time (ties in insertion order) plus the window they were
/// observed over. An empty catalog has no span.
class EventCatalog {
 public:
  EventCatalog() = default;

  /// Stable-sorts `events`. When `span` is omitted it is taken as
  /// [first event, last event]. Throws invalid_argument if a record violates
  /// its invariants or lies outside an explicit span.
  explicit EventCatalog(std::vector<EventRecord> events, std::optional<TimeSpan> span = std::nullopt);

  const std::vector<EventRecord>& events() const noexcept { return events_; }
  const std::optional<TimeSpan>& span() const noexcept { return span_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  /// Severities as reals, in time order.
  std::vector<double> severities() const;

  bool operator==(const EventCatalog&) const = default;

 private:
  std::vector<EventRecord> events_;
  std::optional<TimeSpan> span_;
};

struct LoadWarnings {
  std::size_t bad_date = 0;
  std::size_t bad_severity = 0;  // missing, non-integral or negative
  std::size_t wrong_field_count = 0;

  std::size_t dropped() const noexcept { return bad_date + bad_severity + wrong_field_count; }
};

struct LoadResult {
  EventCatalog catalog;
  LoadWarnings warnings;
};

/// CSV with a header naming at least `date` (YYYY-MM-DD) and `deaths`;
/// optional `weapon` and `source` columns. Column order is free and other
/// columns are ignored. Fields may be double-quoted.
LoadResult load_catalog(const std::filesystem::path& path);
LoadResult parse_catalog(std::istream& in);

/// Writes the canonical four-column form read by load_catalog.
void write_catalog(std::ostream& out, const EventCatalog& catalog);

/// Parses YYYY-MM-DD; nullopt on malformed or impossible dates.
std::optional<DayNumber> parse_date(std::string_view text);
std::string format_date(DayNumber day);

struct TailFilter {
  double x_min = 0.0;
  std::optional<std::string> weapon;
  std::optional<TimeSpan> window;
};

/// Keeps events with severity >= x_min (and matching weapon / inside window
/// when given). The result's span is the input span clipped to the window.
EventCatalog filter_tail(const EventCatalog& catalog, const TailFilter& filter);

struct BinnedCounts {
  double dt = 30.0;
  DayNumber origin = 0.0;
  std::vector<std::int64_t> counts;

  std::int64_t total() const noexcept;
  double mean_count() const noexcept;
};

/// Left-closed, right-open bins of width dt starting at the span start; the
/// number of bins is floor((end - start) / dt) + 1 so the closed span is
/// covered.
BinnedCounts bin_events(const EventCatalog& catalog, double dt);

}  // namespace tailrisk
