#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "vw/error.hpp"
#include "vw/timestamp.hpp"

namespace vw {

using InstanceId = std::uint64_t;

/// One execution of an activity within a case, spanning [start, complete].
struct ActivityInstance {
  InstanceId id = 0;
  std::string case_id;
  std::string label;
  Timestamp start;
  Timestamp complete;

  friend bool operator==(const ActivityInstance&, const ActivityInstance&) = default;
};

enum class Severity { Warning, Error };

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::size_t line = 0;  // 0 when not tied to a line
  std::string message;
};

struct SourceMeta {
  std::string file_name;
  std::string format;
  std::vector<Diagnostic> diagnostics;

  void warn(std::size_t line, std::string message) {
    diagnostics.push_back({Severity::Warning, line, std::move(message)});
  }
  void error(std::size_t line, std::string message) {
    diagnostics.push_back({Severity::Error, line, std::move(message)});
  }
};

/// A set of activity instances with unique ids.
class EventLog {
 public:
  EventLog() = default;

  /// Throws InvalidArgument on a duplicate id or when start > complete.
  void add(ActivityInstance instance) {
    if (instance.start > instance.complete)
      throw InvalidArgument("activity instance " + std::to_string(instance.id) +
                            " starts after it completes");
    if (!ids_.insert(instance.id).second)
      throw InvalidArgument("duplicate activity instance id " + std::to_string(instance.id));
    instances_.push_back(std::move(instance));
  }

  const std::vector<ActivityInstance>& instances() const noexcept { return instances_; }
  std::size_t size() const noexcept { return instances_.size(); }
  bool empty() const noexcept { return instances_.empty(); }

  /// Smallest id not yet used, handy when appending generated instances.
  InstanceId next_id() const noexcept {
    InstanceId next = 0;
    for (const auto& a : instances_) next = std::max(next, a.id + 1);
    return next;
  }

  SourceMeta meta;

 private:
  std::vector<ActivityInstance> instances_;
  std::unordered_set<InstanceId> ids_;
};

/// Total order used for instances inside a trace: start, complete, label, id.
inline bool trace_order_less(const ActivityInstance& a, const ActivityInstance& b) {
  return std::tie(a.start, a.complete, a.label, a.id) <
         std::tie(b.start, b.complete, b.label, b.id);
}

struct Trace {
  std::string case_id;
  std::vector<ActivityInstance> instances;  // sorted by trace_order_less
};

/// One trace per distinct case id, in order of first appearance in the log.
inline std::vector<Trace> group_by_case(const EventLog& log) {
  std::vector<Trace> traces;
  std::unordered_map<std::string_view, std::size_t> index;
  for (const auto& a : log.instances()) {
    auto [it, inserted] = index.try_emplace(a.case_id, traces.size());
    if (inserted) traces.push_back(Trace{a.case_id, {}});
    traces[it->second].instances.push_back(a);
  }
  for (auto& t : traces) std::sort(t.instances.begin(), t.instances.end(), trace_order_less);
  return traces;
}

// ---------------------------------------------------------------------------
// Lifecycle pairing

enum class Lifecycle { Start, Complete };

struct LifecycleEvent {
  std::string label;
  Lifecycle kind = Lifecycle::Complete;
  Timestamp time;
};

struct PairingResult {
  std::vector<ActivityInstance> instances;
  std::vector<std::string> warnings;
};

/// Turns start/complete records of one case into activity instances. Per label,
/// starts are matched to completes first-in-first-out; anything left unmatched
/// becomes an atomic instance at its own timestamp. Input must be sorted by time
/// (stable on ties). Output is ordered by the position of each instance's first
/// event; ids are assigned consecutively from first_id.
inline PairingResult pair_events(std::span<const LifecycleEvent> events,
                                 const std::string& case_id = {}, InstanceId first_id = 0) {
  struct Slot {
    std::string label;
    Timestamp start;
    Timestamp complete;
    bool closed = false;
  };
  std::vector<Slot> slots;
  slots.reserve(events.size());
  std::map<std::string, std::deque<std::size_t>, std::less<>> open_starts;
  PairingResult out;

  for (const auto& e : events) {
    if (e.kind == Lifecycle::Start) {
      slots.push_back({e.label, e.time, e.time, false});
      open_starts[slots.back().label].push_back(slots.size() - 1);
      continue;
    }
    auto it = open_starts.find(e.label);
    if (it != open_starts.end() && !it->second.empty()) {
      Slot& s = slots[it->second.front()];
      it->second.pop_front();
      s.complete = e.time;
      s.closed = true;
    } else {
      slots.push_back({e.label, e.time, e.time, true});
      out.warnings.push_back("case '" + case_id + "': complete of '" + e.label +
                             "' without a matching start, kept as atomic instance");
    }
  }

  out.instances.reserve(slots.size());
  InstanceId id = first_id;
  for (auto& s : slots) {
    if (!s.closed)
      out.warnings.push_back("case '" + case_id + "': start of '" + s.label +
                             "' never completed, kept as atomic instance");
    out.instances.push_back({id++, case_id, std::move(s.label), s.start, s.complete});
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

/// Header names of the columns holding each instance field.
struct ColumnMap {
  std::string case_id = "case";
  std::string label = "label";
  std::string start = "start";
  std::string complete = "complete";

  /// Parses "case,label,start,complete" (column names in that order).
  static ColumnMap from_list(std::string_view spec);
};

namespace csv {

// Splits one CSV record (RFC 4180 quoting) from the stream. Returns false at EOF.
// Quoted fields may span lines; `line` is advanced accordingly.
inline bool read_record(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) return false;
  if (!field.empty() && field.back() == '\r') field.pop_back();
  fields.push_back(std::move(field));
  ++line;
  return true;
}

inline std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace csv

inline ColumnMap ColumnMap::from_list(std::string_view spec) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    auto comma = spec.find(',', pos);
    parts.emplace_back(detail::trim(spec.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (parts.size() != 4 || std::any_of(parts.begin(), parts.end(),
                                       [](const std::string& p) { return p.empty(); }))
    throw InvalidArgument("column mapping must name four columns: case,label,start,complete");
  return {parts[0], parts[1], parts[2], parts[3]};
}

/// One instance per data row; ids follow row order. Rows with unparseable
/// timestamps are skipped with a warning, rows with start > complete with an error entry.
inline EventLog parse_csv(std::istream& in, const ColumnMap& mapping = {}) {
  EventLog log;
  log.meta.format = "csv";
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!csv::read_record(in, fields, line)) throw ParseError("CSV input has no header row");
  if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);

  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (detail::trim(fields[i]) == name) return i;
    throw ParseError("CSV header lacks column '" + name + "'", 1, 1);
  };
  const std::size_t c_case = column(mapping.case_id);
  const std::size_t c_label = column(mapping.label);
  const std::size_t c_start = column(mapping.start);
  const std::size_t c_complete = column(mapping.complete);
  const std::size_t needed = std::max({c_case, c_label, c_start, c_complete}) + 1;

  InstanceId next_id = 0;
  while (true) {
    std::size_t row_line = line + 1;
    if (!csv::read_record(in, fields, line)) break;
    if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
    InstanceId id = next_id++;
    if (fields.size() < needed) {
      log.meta.warn(row_line, "row has " + std::to_string(fields.size()) +
                                  " fields, expected at least " + std::to_string(needed));
      continue;
    }
    auto start = parse_timestamp(fields[c_start]);
    auto complete = parse_timestamp(fields[c_complete]);
    if (!start || !complete) {
      log.meta.warn(row_line, "unparseable timestamp '" +
                                  (start ? fields[c_complete] : fields[c_start]) + "'");
      continue;
    }
    if (*start > *complete) {
      log.meta.error(row_line, "start timestamp after complete timestamp");
      continue;
    }
    log.add({id, fields[c_case], fields[c_label], *start, *complete});
  }
  return log;
}

/// Writes the log in the row-per-instance layout read by parse_csv with the default mapping.
inline void write_csv(std::ostream& out, const EventLog& log) {
  out << "id,case,label,start,complete\n";
  for (const auto& a : log.instances()) {
    out << a.id << ',' << csv::quote(a.case_id) << ',' << csv::quote(a.label) << ','
        << format_timestamp(a.start) << ',' << format_timestamp(a.complete) << '\n';
  }
}

}  // namespace vw
