#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vw/error.hpp"
#include "vw/generate.hpp"
#include "vw/ingest.hpp"
#include "vw/layout.hpp"
#include "vw/order.hpp"
#include "vw/render.hpp"
#include "vw/stats.hpp"
#include "vw/variants.hpp"
#include "vw/xes.hpp"

namespace vw::cli {

enum ExitCode : int { kOk = 0, kInternalError = 1, kInputError = 2, kBadReference = 3 };

enum class InputFormat { Auto, Xes, Csv };
enum class OutputFormat { Default, Json, Svg, Text };

struct CliConfig {
  std::string input;
  InputFormat format = InputFormat::Auto;
  ColumnMap columns;
  std::string output;  // empty: standard output
  OutputFormat output_format = OutputFormat::Default;
  unsigned threads = 1;
  std::uint64_t seed = 42;
};

/// Raised for anything wrong with the user's input; maps to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Raised when a requested variant or case does not exist; maps to exit code 3.
class ReferenceError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline InputFormat detect_format(const CliConfig& cfg) {
  if (cfg.format != InputFormat::Auto) return cfg.format;
  const std::string name = lower(cfg.input);
  if (ends_with(name, ".xes") || ends_with(name, ".xes.gz")) return InputFormat::Xes;
  if (ends_with(name, ".csv")) return InputFormat::Csv;
  throw InputError("cannot infer the input format of '" + cfg.input + "'; pass --format xes|csv");
}

inline OutputFormat resolve_output(const CliConfig& cfg, OutputFormat fallback) {
  if (cfg.output_format != OutputFormat::Default) return cfg.output_format;
  const std::string name = lower(cfg.output);
  if (ends_with(name, ".svg")) return OutputFormat::Svg;
  if (ends_with(name, ".json")) return OutputFormat::Json;
  if (ends_with(name, ".txt")) return OutputFormat::Text;
  return fallback;
}

inline void emit(const CliConfig& cfg, std::ostream& out, const std::string& content) {
  if (cfg.output.empty()) {
    out << content;
    out.flush();
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw InputError("cannot open '" + cfg.output + "' for writing");
  file << content;
  if (!file) throw InputError("failed writing '" + cfg.output + "'");
}

inline void report_diagnostics(const EventLog& log, std::ostream& err) {
  std::size_t shown = 0;
  for (const auto& d : log.meta.diagnostics) {
    if (shown++ == 20) {
      err << "... " << log.meta.diagnostics.size() - 20 << " more diagnostics\n";
      break;
    }
    err << log.meta.file_name << ':';
    if (d.line) err << d.line << ':';
    err << (d.severity == Severity::Error ? " error: " : " warning: ") << d.message << '\n';
  }
}

}  // namespace detail

struct LoadedLog {
  EventLog log;
  double parse_seconds = 0;
};

/// Reads the configured input, printing parse diagnostics to `err`.
inline LoadedLog load_log(const CliConfig& cfg, std::ostream& err) {
  if (cfg.input.empty()) throw InputError("no input file given (--input)");
  if (!std::filesystem::exists(cfg.input)) throw InputError("input '" + cfg.input + "' does not exist");
  const InputFormat format = detail::detect_format(cfg);
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) throw InputError("cannot open '" + cfg.input + "'");

  const auto t0 = std::chrono::steady_clock::now();
  LoadedLog loaded;
  loaded.log = format == InputFormat::Xes ? parse_xes(in) : parse_csv(in, cfg.columns);
  loaded.parse_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  loaded.log.meta.file_name = cfg.input;
  detail::report_diagnostics(loaded.log, err);
  return loaded;
}

/// Runs a command body and maps exceptions onto exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ReferenceError& e) {
    err << "error: " << e.what() << '\n';
    return kBadReference;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

/// Variant table ranked by count, as JSON (default) or one text line per variant.
inline int cmd_variants(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto loaded = load_log(cfg, err);
    VariantTable table = variant_table(loaded.log, cfg.threads);
    for (const auto& w : table.warnings) err << "warning: " << w << '\n';
    std::string content;
    if (detail::resolve_output(cfg, OutputFormat::Json) == OutputFormat::Text) {
      for (const auto* kv : table.ranked())
        content += std::to_string(kv->second.count) + '\t' + render_text(kv->second.layout) + '\n';
    } else {
      content = to_json(table).dump(2) + '\n';
    }
    detail::emit(cfg, out, content);
    return int(kOk);
  });
}

struct RenderTarget {
  std::optional<std::string> key;      // canonical variant key
  std::optional<std::string> case_id;  // any case of the variant
};

/// Renders one variant, chosen by canonical key or by case id, as SVG (default), text or JSON.
inline int cmd_render(const CliConfig& cfg, const RenderTarget& target, const RenderConfig& style,
                      std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!target.key && !target.case_id) throw InputError("render needs --key or --case");
    auto loaded = load_log(cfg, err);
    std::optional<LayoutTree> layout;
    if (target.key) {
      VariantTable table = variant_table(loaded.log, cfg.threads);
      auto it = table.entries.find(*target.key);
      if (it == table.entries.end()) throw ReferenceError("no variant with key '" + *target.key + "'");
      layout = std::move(it->second.layout);
    } else {
      for (const auto& t : group_by_case(loaded.log))
        if (t.case_id == *target.case_id) layout = build_layout(build_interval_order(t));
      if (!layout) throw ReferenceError("no case '" + *target.case_id + "' in the log");
    }
    std::string content;
    switch (detail::resolve_output(cfg, OutputFormat::Svg)) {
      case OutputFormat::Text: content = render_text(*layout) + '\n'; break;
      case OutputFormat::Json: content = to_json(*layout).dump(2) + '\n'; break;
      default: content = render_svg(*layout, style); break;
    }
    detail::emit(cfg, out, content);
    return int(kOk);
  });
}

/// Log statistics and phase timings, as an aligned table (default) or JSON.
inline int cmd_stats(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto loaded = load_log(cfg, err);
    LogReport r = report(loaded.log, {cfg.threads, loaded.parse_seconds});
    std::string content;
    if (detail::resolve_output(cfg, OutputFormat::Text) == OutputFormat::Json) {
      content = to_json(r).dump(2) + '\n';
    } else {
      std::ostringstream os;
      write_report_table(os, {std::filesystem::path(cfg.input).filename().string()}, {r});
      content = os.str();
    }
    detail::emit(cfg, out, content);
    return int(kOk);
  });
}

/// Validates the interval order of every trace; exit 1 if any axiom fails.
inline int cmd_check(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto loaded = load_log(cfg, err);
    auto traces = group_by_case(loaded.log);
    std::vector<std::vector<Violation>> found(traces.size());
    parallel_for(traces.size(), cfg.threads,
                 [&](std::size_t i) { found[i] = validate(build_interval_order(traces[i])); });
    std::size_t total = 0;
    std::ostringstream os;
    for (std::size_t i = 0; i < traces.size(); ++i)
      for (const auto& v : found[i]) {
        os << traces[i].case_id << ": " << v.describe() << '\n';
        ++total;
      }
    os << "checked " << traces.size() << " traces, " << total << " violations\n";
    detail::emit(cfg, out, os.str());
    return total == 0 ? int(kOk) : int(kInternalError);
  });
}

/// Repeats parse + pipeline and prints min and median seconds per phase.
inline int cmd_bench(const CliConfig& cfg, std::size_t repeat, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (repeat == 0) throw InputError("--repeat must be positive");
    std::vector<PhaseTimings> runs;
    LogReport last;
    for (std::size_t i = 0; i < repeat; ++i) {
      std::ostringstream quiet;
      auto loaded = load_log(cfg, i == 0 ? err : quiet);
      last = report(loaded.log, {cfg.threads, loaded.parse_seconds});
      runs.push_back(last.timings);
    }
    auto summary = [&](double PhaseTimings::*field) {
      std::vector<double> v;
      for (const auto& r : runs) v.push_back(r.*field);
      std::sort(v.begin(), v.end());
      const double median =
          v.size() % 2 ? v[v.size() / 2] : (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2;
      return std::pair{v.front(), median};
    };
    const std::vector<std::pair<std::string, double PhaseTimings::*>> phases{
        {"preprocessing", &PhaseTimings::preprocessing},
        {"building_orders", &PhaseTimings::building_orders},
        {"cutting", &PhaseTimings::cutting},
        {"total", &PhaseTimings::total}};

    std::string content;
    if (detail::resolve_output(cfg, OutputFormat::Text) == OutputFormat::Json) {
      nlohmann::ordered_json j;
      j["runs"] = repeat;
      j["num_cases"] = last.num_cases;
      for (const auto& [name, field] : phases) {
        auto [mn, med] = summary(field);
        j["phases"][name] = {{"min", mn}, {"median", med}};
      }
      content = j.dump(2) + '\n';
    } else {
      std::vector<std::vector<std::string>> rows;
      for (const auto& [name, field] : phases) {
        auto [mn, med] = summary(field);
        rows.push_back({name, vw::detail::fixed(mn, 4), vw::detail::fixed(med, 4)});
      }
      std::ostringstream os;
      os << repeat << " runs, " << last.num_cases << " cases\n";
      vw::detail::write_aligned(os, {"phase", "min (s)", "median (s)"}, rows);
      content = os.str();
    }
    detail::emit(cfg, out, content);
    return int(kOk);
  });
}

/// Writes a synthetic log as CSV (readable back with the default column mapping).
inline int cmd_generate(const CliConfig& cfg, const GeneratorSpec& spec, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    EventLog log;
    try {
      log = generate_log(spec);
    } catch (const InvalidArgument& e) {
      throw InputError(e.what());
    }
    std::ostringstream os;
    write_csv(os, log);
    detail::emit(cfg, out, os.str());
    return int(kOk);
  });
}

/// Graphviz export of one case's interval order.
inline int cmd_dot(const CliConfig& cfg, const std::string& case_id, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    auto loaded = load_log(cfg, err);
    for (const auto& t : group_by_case(loaded.log)) {
      if (t.case_id != case_id) continue;
      std::ostringstream os;
      write_dot(os, build_interval_order(t), case_id);
      detail::emit(cfg, out, os.str());
      return int(kOk);
    }
    throw ReferenceError("no case '" + case_id + "' in the log");
  });
}

}  // namespace vw::cli
