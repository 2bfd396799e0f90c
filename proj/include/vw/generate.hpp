#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vw/error.hpp"
#include "vw/ingest.hpp"
#include "vw/layout.hpp"
#include "vw/order.hpp"

namespace vw {

struct GeneratorSpec {
  std::size_t num_templates = 5;
  std::size_t traces_per_template = 200;
  std::size_t instances_per_trace = 20;
  double overlap_density = 0.5;  // chance that an instance starts before its predecessor ends
  std::uint64_t seed = 42;
};

namespace gen_detail {

// Templates live on an integer grid. Endpoints sharing a grid point share their
// jitter, and jitter stays below half the grid spacing, so every comparison
// between endpoints (and with it the interval order) survives instantiation.
inline constexpr std::int64_t kGridMicros = 60'000'000;
inline constexpr std::int64_t kMaxJitterMicros = 20'000'000;
// 2021-07-13T00:00:00Z
inline constexpr std::int64_t kBaseMicros = 1'626'134'400LL * 1'000'000;

struct Slot {
  std::string label;
  std::int64_t start = 0;
  std::int64_t complete = 0;
};
using Template = std::vector<Slot>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, n) by modulo reduction; identical across standard libraries.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  bool chance(double p) { return double(engine_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 engine_;
};

inline std::string label_name(std::size_t i) {
  std::string s(1, static_cast<char>('A' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

inline Template make_template(const GeneratorSpec& spec, Rng& rng) {
  const std::size_t alphabet = std::max<std::size_t>(4, spec.instances_per_trace / 2 + 2) +
                               spec.num_templates;
  Template t;
  std::int64_t max_complete = -1;
  for (std::size_t i = 0; i < spec.instances_per_trace; ++i) {
    Slot s;
    s.label = label_name(rng.below(alphabet));
    const auto duration = static_cast<std::int64_t>(rng.below(5));
    if (i > 0 && rng.chance(spec.overlap_density)) {
      const Slot& prev = t.back();
      s.start = prev.start + static_cast<std::int64_t>(
                                 rng.below(static_cast<std::uint64_t>(prev.complete - prev.start + 1)));
    } else {
      s.start = max_complete + 1 + static_cast<std::int64_t>(rng.below(2));
    }
    s.complete = s.start + duration;
    max_complete = std::max(max_complete, s.complete);
    t.push_back(std::move(s));
  }
  return t;
}

inline std::string template_key(const Template& t) {
  std::vector<ActivityInstance> instances;
  InstanceId id = 0;
  for (const auto& s : t)
    instances.push_back({id++, "", s.label, Timestamp{s.start * kGridMicros},
                         Timestamp{s.complete * kGridMicros}});
  std::sort(instances.begin(), instances.end(), trace_order_less);
  return canonical_form(build_layout(build_interval_order(instances)));
}

}  // namespace gen_detail

/// Seeded synthetic log. Each template is a random interval structure (chains
/// of overlaps appear as overlap_density grows); its traces are copies with
/// structure-preserving timestamp jitter and a random global shift, so each
/// template yields exactly one interval variant and templates are pairwise
/// distinct variants. Case ids are "case_<n>"; traces are interleaved.
inline EventLog generate_log(const GeneratorSpec& spec) {
  if (spec.num_templates == 0 || spec.traces_per_template == 0 || spec.instances_per_trace == 0)
    throw InvalidArgument("generator counts must be positive");
  if (!(spec.overlap_density >= 0.0 && spec.overlap_density <= 1.0))
    throw InvalidArgument("overlap density must lie in [0, 1]");

  gen_detail::Rng rng(spec.seed);
  std::vector<gen_detail::Template> templates;
  std::set<std::string> keys;
  const std::size_t max_attempts = 1000 * spec.num_templates;
  for (std::size_t attempt = 0; templates.size() < spec.num_templates; ++attempt) {
    if (attempt == max_attempts)
      throw InvalidArgument("cannot generate " + std::to_string(spec.num_templates) +
                            " structurally distinct templates with these settings");
    auto t = gen_detail::make_template(spec, rng);
    if (keys.insert(gen_detail::template_key(t)).second) templates.push_back(std::move(t));
  }

  std::vector<std::size_t> assignment;
  assignment.reserve(spec.num_templates * spec.traces_per_template);
  for (std::size_t t = 0; t < spec.num_templates; ++t)
    assignment.insert(assignment.end(), spec.traces_per_template, t);
  for (std::size_t i = assignment.size(); i > 1; --i)
    std::swap(assignment[i - 1], assignment[rng.below(i)]);

  EventLog log;
  log.meta.format = "synthetic";
  InstanceId next_id = 0;
  std::vector<std::int64_t> jitter;
  for (std::size_t c = 0; c < assignment.size(); ++c) {
    const auto& tmpl = templates[assignment[c]];
    const std::string case_id = "case_" + std::to_string(c);
    const std::int64_t shift =
        static_cast<std::int64_t>(rng.below(365 * 24 * 60)) * gen_detail::kGridMicros;
    std::int64_t last_point = 0;
    for (const auto& s : tmpl) last_point = std::max(last_point, s.complete);
    jitter.assign(static_cast<std::size_t>(last_point) + 1, 0);
    for (auto& j : jitter)
      j = static_cast<std::int64_t>(rng.below(2 * gen_detail::kMaxJitterMicros + 1)) -
          gen_detail::kMaxJitterMicros;
    auto at = [&](std::int64_t point) {
      return Timestamp{gen_detail::kBaseMicros + shift + point * gen_detail::kGridMicros +
                       jitter[static_cast<std::size_t>(point)]};
    };
    for (const auto& s : tmpl) log.add({next_id++, case_id, s.label, at(s.start), at(s.complete)});
  }
  return log;
}

}  // namespace vw
