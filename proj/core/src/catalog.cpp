#include "tailrisk/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "tailrisk/error.hpp"

namespace tailrisk {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// RFC 4180 style: quoted fields may hold commas and doubled quotes. Records
// never span lines here; catalog exports do not embed newlines in the columns
// we read.
std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(std::move(field));
  for (auto& f : fields) f = std::string(trim(f));
  return fields;
}

std::optional<std::int64_t> parse_severity(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec == std::errc{} && end == text.data() + text.size()) {
    if (value < 0) return std::nullopt;
    return value;
  }
  // Some exports write counts as reals ("12.0"); accept integral values only.
  double real = 0.0;
  auto [rend, rec] = std::from_chars(text.data(), text.data() + text.size(), real);
  if (rec != std::errc{} || rend != text.data() + text.size()) return std::nullopt;
  if (!std::isfinite(real) || real < 0.0 || std::floor(real) != real) return std::nullopt;
  return static_cast<std::int64_t>(real);
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

EventCatalog::EventCatalog(std::vector<EventRecord> events, std::optional<TimeSpan> span)
    : events_(std::move(events)), span_(span) {
  for (const auto& e : events_) {
    detail::require(std::isfinite(e.time), ErrorCode::invalid_argument, "event time must be finite");
    detail::require(e.severity >= 0, ErrorCode::invalid_argument, "event severity must be >= 0");
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const EventRecord& a, const EventRecord& b) { return a.time < b.time; });
  if (span_) {
    detail::require(span_->start <= span_->end, ErrorCode::invalid_argument, "span start after end");
    for (const auto& e : events_) {
      detail::require(e.time >= span_->start && e.time <= span_->end, ErrorCode::invalid_argument,
                      "event outside catalog span");
    }
  } else if (!events_.empty()) {
    span_ = TimeSpan{events_.front().time, events_.back().time};
  }
}

std::vector<double> EventCatalog::severities() const {
  std::vector<double> out;
  out.reserve(events_.size());
  for (const auto& e : events_) out.push_back(static_cast<double>(e.severity));
  return out;
}

std::optional<DayNumber> parse_date(std::string_view text) {
  text = trim(text);
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [end, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && end == text.data() + pos + len;
  };
  if (!parse(0, 4, y) || !parse(5, 2, m) || !parse(8, 2, d)) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return static_cast<DayNumber>(std::chrono::sys_days{ymd}.time_since_epoch().count());
}

std::string format_date(DayNumber day) {
  const std::chrono::sys_days sd{std::chrono::days{static_cast<long>(std::floor(day))}};
  const std::chrono::year_month_day ymd{sd};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

LoadResult parse_catalog(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::malformed_header, "missing header line");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_csv_line(line);
  std::optional<std::size_t> date_col, deaths_col, weapon_col, source_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = lower(header[i]);
    if (name == "date") date_col = i;
    else if (name == "deaths") deaths_col = i;
    else if (name == "weapon") weapon_col = i;
    else if (name == "source") source_col = i;
  }
  if (!date_col || !deaths_col) {
    throw Error(ErrorCode::malformed_header, "header must contain 'date' and 'deaths' columns");
  }

  LoadResult result;
  std::vector<EventRecord> events;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++data_rows;
    const auto fields = split_csv_line(line);
    if (fields.size() < header.size()) {
      ++result.warnings.wrong_field_count;
      continue;
    }
    const auto time = parse_date(fields[*date_col]);
    if (!time) {
      ++result.warnings.bad_date;
      continue;
    }
    const auto severity = parse_severity(fields[*deaths_col]);
    if (!severity) {
      ++result.warnings.bad_severity;
      continue;
    }
    EventRecord record;
    record.time = *time;
    record.severity = *severity;
    if (weapon_col) record.weapon = fields[*weapon_col];
    if (source_col) record.source = fields[*source_col];
    events.push_back(std::move(record));
  }
  if (data_rows > 0 && events.empty()) {
    throw Error(ErrorCode::no_valid_rows, "all " + std::to_string(data_rows) + " data rows were dropped");
  }
  result.catalog = EventCatalog(std::move(events));
  return result;
}

LoadResult load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::file_not_found, "cannot open " + path.string());
  return parse_catalog(in);
}

void write_catalog(std::ostream& out, const EventCatalog& catalog) {
  out << "date,deaths,weapon,source\n";
  for (const auto& e : catalog.events()) {
    out << format_date(e.time) << ',' << e.severity << ',' << quote_if_needed(e.weapon) << ','
        << quote_if_needed(e.source) << '\n';
  }
}

EventCatalog filter_tail(const EventCatalog& catalog, const TailFilter& filter) {
  detail::require(filter.x_min >= 0.0, ErrorCode::invalid_argument, "x_min must be >= 0");
  std::vector<EventRecord> kept;
  for (const auto& e : catalog.events()) {
    if (static_cast<double>(e.severity) < filter.x_min) continue;
    if (filter.weapon && e.weapon != *filter.weapon) continue;
    if (filter.window && (e.time < filter.window->start || e.time > filter.window->end)) continue;
    kept.push_back(e);
  }
  std::optional<TimeSpan> span = catalog.span();
  if (filter.window && span) {
    const TimeSpan clipped{std::max(span->start, filter.window->start), std::min(span->end, filter.window->end)};
    span = clipped.start <= clipped.end ? std::optional{clipped} : std::nullopt;
  }
  if (kept.empty() && !span) return EventCatalog{};
  return EventCatalog(std::move(kept), span);
}

std::int64_t BinnedCounts::total() const noexcept {
  std::int64_t sum = 0;
  for (auto c : counts) sum += c;
  return sum;
}

double BinnedCounts::mean_count() const noexcept {
  if (counts.empty()) return 0.0;
  return static_cast<double>(total()) / static_cast<double>(counts.size());
}

BinnedCounts bin_events(const EventCatalog& catalog, double dt) {
  detail::require(dt > 0.0 && std::isfinite(dt), ErrorCode::invalid_argument, "bin width must be > 0");
  if (catalog.empty() || !catalog.span()) throw Error(ErrorCode::empty_catalog, "cannot bin an empty catalog");
  const auto span = *catalog.span();
  const auto n_bins = static_cast<std::size_t>(std::floor((span.end - span.start) / dt)) + 1;
  BinnedCounts out;
  out.dt = dt;
  out.origin = span.start;
  out.counts.assign(n_bins, 0);
  for (const auto& e : catalog.events()) {
    auto bin = static_cast<std::size_t>(std::floor((e.time - span.start) / dt));
    // Guards the rounding case where (end - start) / dt lands just below an integer.
    bin = std::min(bin, n_bins - 1);
    ++out.counts[bin];
  }
  return out;
}

}  // namespace tailrisk
