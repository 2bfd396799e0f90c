#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vw/ingest.hpp"
#include "vw/layout.hpp"
#include "vw/order.hpp"
#include "vw/parallel.hpp"

namespace vw {

struct VariantEntry {
  std::size_t count = 0;
  LayoutTree layout;                  // layout of the first trace seen with this key
  std::vector<std::string> case_ids;  // in trace order
  bool has_fallback = false;
};

/// Traces grouped by canonical layout key.
struct VariantTable {
  std::map<std::string, VariantEntry> entries;
  std::size_t traces = 0;             // traces successfully laid out
  std::vector<std::string> warnings;  // traces that could not be processed

  void add(const std::string& case_id, LayoutTree layout) {
    std::string key = canonical_form(layout);
    auto [it, inserted] = entries.try_emplace(std::move(key));
    VariantEntry& e = it->second;
    if (inserted) {
      e.has_fallback = layout.has_fallback();
      e.layout = std::move(layout);
    }
    ++e.count;
    e.case_ids.push_back(case_id);
    ++traces;
  }

  std::size_t fallback_variant_count() const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [](const auto& kv) { return kv.second.has_fallback; }));
  }

  /// Entries by descending count, then key.
  std::vector<const std::pair<const std::string, VariantEntry>*> ranked() const {
    std::vector<const std::pair<const std::string, VariantEntry>*> out;
    out.reserve(entries.size());
    for (const auto& kv : entries) out.push_back(&kv);
    std::stable_sort(out.begin(), out.end(), [](const auto* a, const auto* b) {
      return a->second.count > b->second.count;
    });
    return out;
  }

  /// Entry whose case list contains `case_id`, if any.
  const std::pair<const std::string, VariantEntry>* find_case(const std::string& case_id) const {
    for (const auto& kv : entries)
      if (std::find(kv.second.case_ids.begin(), kv.second.case_ids.end(), case_id) !=
          kv.second.case_ids.end())
        return &kv;
    return nullptr;
  }
};

/// Layout per trace, computed on up to `threads` workers. A trace that cannot
/// be ordered yields nullopt.
inline std::vector<std::optional<LayoutTree>> layouts_of(std::span<const Trace> traces,
                                                         unsigned threads = 1) {
  std::vector<std::optional<LayoutTree>> out(traces.size());
  parallel_for(traces.size(), threads, [&](std::size_t i) {
    if (traces[i].instances.empty()) return;
    out[i] = build_layout(build_interval_order(traces[i]));
  });
  return out;
}

/// Folds per-trace layouts into a table in trace order, so the result does not
/// depend on how the layouts were computed.
inline VariantTable aggregate_variants(std::span<const Trace> traces,
                                       std::vector<std::optional<LayoutTree>> layouts) {
  VariantTable table;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    if (!layouts[i]) {
      table.warnings.push_back("case '" + traces[i].case_id + "' has no activity instances");
      continue;
    }
    table.add(traces[i].case_id, std::move(*layouts[i]));
  }
  return table;
}

inline VariantTable variant_table(std::span<const Trace> traces, unsigned threads = 1) {
  return aggregate_variants(traces, layouts_of(traces, threads));
}

inline VariantTable variant_table(const EventLog& log, unsigned threads = 1) {
  auto traces = group_by_case(log);
  return variant_table(std::span<const Trace>(traces), threads);
}

inline nlohmann::ordered_json to_json(const VariantTable& table) {
  nlohmann::ordered_json j;
  j["traces"] = table.traces;
  j["variant_count"] = table.entries.size();
  j["fallback_variant_count"] = table.fallback_variant_count();
  j["variants"] = nlohmann::ordered_json::array();
  for (const auto* kv : table.ranked()) {
    nlohmann::ordered_json v;
    v["key"] = kv->first;
    v["count"] = kv->second.count;
    v["has_fallback"] = kv->second.has_fallback;
    v["cases"] = kv->second.case_ids;
    v["layout"] = to_json(kv->second.layout);
    j["variants"].push_back(std::move(v));
  }
  if (!table.warnings.empty()) j["warnings"] = table.warnings;
  return j;
}

}  // namespace vw
