#pragma once

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vw/ingest.hpp"
#include "vw/layout.hpp"
#include "vw/order.hpp"
#include "vw/parallel.hpp"
#include "vw/variants.hpp"

namespace vw {

/// Variant key of a trace when activities are totally ordered by start time
/// (ties: complete time, then label), as in single-timestamp variant explorers.
inline std::string classic_key(const Trace& trace) {
  std::string key;
  for (std::size_t i = 0; i < trace.instances.size(); ++i) {
    if (i) key.push_back(',');
    key += detail::escape_label(trace.instances[i].label);
  }
  return key;
}

inline std::map<std::string, std::size_t> classic_variants(std::span<const Trace> traces) {
  std::map<std::string, std::size_t> out;
  for (const auto& t : traces) ++out[classic_key(t)];
  return out;
}

inline std::map<std::string, std::size_t> classic_variants(const EventLog& log) {
  auto traces = group_by_case(log);
  return classic_variants(std::span<const Trace>(traces));
}

/// Wall-clock seconds per pipeline phase.
struct PhaseTimings {
  double preprocessing = 0;    // parsing (when measured by the caller) + pairing + grouping
  double building_orders = 0;
  double cutting = 0;          // recursive layout construction
  double total = 0;
};

struct LogReport {
  std::size_t num_cases = 0;
  std::size_t num_instances = 0;
  std::size_t classic_variant_count = 0;
  std::size_t interval_variant_count = 0;
  std::size_t fallback_variant_count = 0;
  PhaseTimings timings;

  /// num_instances / num_cases, 0 for an empty log.
  double avg_events_per_case() const {
    return num_cases ? double(num_instances) / double(num_cases) : 0.0;
  }
  double fallback_percentage() const {
    return interval_variant_count ? 100.0 * double(fallback_variant_count) /
                                        double(interval_variant_count)
                                  : 0.0;
  }
};

struct ReportOptions {
  unsigned threads = 1;
  double parse_seconds = 0;  // added to the preprocessing phase
};

struct PipelineResult {
  LogReport report;
  VariantTable variants;
};

/// Runs grouping, order construction and cutting with a timer around each phase.
inline PipelineResult run_pipeline(const EventLog& log, const ReportOptions& options = {}) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::duration d) { return std::chrono::duration<double>(d).count(); };

  PipelineResult result;
  LogReport& r = result.report;
  const auto t0 = clock::now();

  auto traces = group_by_case(log);
  const auto t1 = clock::now();

  std::vector<std::optional<IntervalOrder>> orders(traces.size());
  parallel_for(traces.size(), options.threads, [&](std::size_t i) {
    if (!traces[i].instances.empty()) orders[i] = build_interval_order(traces[i]);
  });
  const auto t2 = clock::now();

  std::vector<std::optional<LayoutTree>> layouts(traces.size());
  parallel_for(traces.size(), options.threads, [&](std::size_t i) {
    if (orders[i]) layouts[i] = build_layout(*orders[i]);
  });
  const auto t3 = clock::now();

  result.variants = aggregate_variants(traces, std::move(layouts));
  const auto t4 = clock::now();

  r.timings.preprocessing = options.parse_seconds + seconds(t1 - t0);
  r.timings.building_orders = seconds(t2 - t1);
  r.timings.cutting = seconds(t3 - t2);
  r.timings.total = options.parse_seconds + seconds(t4 - t0);

  r.num_cases = traces.size();
  r.num_instances = log.size();
  r.classic_variant_count = classic_variants(std::span<const Trace>(traces)).size();
  r.interval_variant_count = result.variants.entries.size();
  r.fallback_variant_count = result.variants.fallback_variant_count();
  return result;
}

inline LogReport report(const EventLog& log, const ReportOptions& options = {}) {
  return run_pipeline(log, options).report;
}

inline nlohmann::ordered_json to_json(const LogReport& r) {
  nlohmann::ordered_json j;
  j["num_cases"] = r.num_cases;
  j["num_instances"] = r.num_instances;
  j["avg_events_per_case"] = r.avg_events_per_case();
  j["classic_variant_count"] = r.classic_variant_count;
  j["interval_variant_count"] = r.interval_variant_count;
  j["fallback_variant_count"] = r.fallback_variant_count;
  j["fallback_percentage"] = r.fallback_percentage();
  j["timings"] = {{"total", r.timings.total},
                  {"preprocessing", r.timings.preprocessing},
                  {"building_orders", r.timings.building_orders},
                  {"cutting", r.timings.cutting}};
  return j;
}

namespace detail {

inline void write_aligned(std::ostream& os, const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) os << " | ";
      os << std::setw(static_cast<int>(width[c])) << (c == 0 ? std::left : std::right)
         << cells[c];
    }
    os << std::right << '\n';
  };
  line(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  line(rule);
  for (const auto& row : rows) line(row);
}

inline std::string fixed(double v, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace detail

/// Plain-text table with the column layout of the usual variant evaluation table.
inline void write_report_table(std::ostream& os, const std::vector<std::string>& names,
                               const std::vector<LogReport>& reports) {
  const std::vector<std::string> header{"Event log",
                                        "#cases (avg. #events per case)",
                                        "Total calculation (s)",
                                        "Pre-processing event data (s)",
                                        "Creating interval orders (s)",
                                        "Cutting interval orders (s)",
                                        "#classic variants",
                                        "#interval ordered variants",
                                        "#interval ordered variants with limitations"};
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const LogReport& r = reports[i];
    rows.push_back({names[i],
                    std::to_string(r.num_cases) + " (" + detail::fixed(r.avg_events_per_case(), 1) + ")",
                    detail::fixed(r.timings.total, 3), detail::fixed(r.timings.preprocessing, 3),
                    detail::fixed(r.timings.building_orders, 3), detail::fixed(r.timings.cutting, 3),
                    std::to_string(r.classic_variant_count),
                    std::to_string(r.interval_variant_count),
                    std::to_string(r.fallback_variant_count) + " (" +
                        detail::fixed(r.fallback_percentage(), 1) + "%)"});
  }
  detail::write_aligned(os, header, rows);
}

}  // namespace vw
