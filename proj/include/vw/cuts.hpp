#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "vw/error.hpp"
#include "vw/order.hpp"

namespace vw {

enum class CutKind { None, Ordering, Parallel };

inline const char* to_string(CutKind k) {
  switch (k) {
    case CutKind::None: return "none";
    case CutKind::Ordering: return "ordering";
    case CutKind::Parallel: return "parallel";
  }
  return "?";
}

/// Groups are vertex positions within the order they were computed on.
struct PositionCut {
  CutKind kind = CutKind::None;
  std::vector<std::vector<std::size_t>> groups;
};

/// Outcome of cut detection. For Ordering, every vertex of groups[i] precedes
/// every vertex of groups[j] when i < j. For Parallel, groups are the connected
/// components of the relation. Members of a group are listed in vertex order
/// (start, complete, label, id).
struct CutResult {
  CutKind kind = CutKind::None;
  std::vector<std::vector<InstanceId>> groups;

  friend bool operator==(const CutResult&, const CutResult&) = default;
};

namespace detail {

inline bool vertex_less(const Vertex& a, const Vertex& b) {
  return std::tie(a.start, a.complete, a.label, a.id) <
         std::tie(b.start, b.complete, b.label, b.id);
}

inline std::vector<std::size_t> positions_in_vertex_order(const IntervalOrder& order) {
  std::vector<std::size_t> pos(order.size());
  std::iota(pos.begin(), pos.end(), 0);
  std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    return vertex_less(order.vertex(a), order.vertex(b));
  });
  return pos;
}

inline void require_vertices(const IntervalOrder& order) {
  if (order.empty()) throw InvalidArgument("cut detection needs at least one vertex");
}

inline CutResult to_ids(const IntervalOrder& order, const PositionCut& cut) {
  CutResult r{cut.kind, {}};
  r.groups.reserve(cut.groups.size());
  for (const auto& g : cut.groups) {
    auto& ids = r.groups.emplace_back();
    ids.reserve(g.size());
    for (auto p : g) ids.push_back(order.vertex(p).id);
  }
  return r;
}

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

}  // namespace detail

/// Maximal ordering cut by a sweep over start times: with vertices sorted by
/// start, a boundary falls before v exactly when every earlier vertex has
/// completed before v starts. Relies on edges agreeing with the timestamps,
/// which build_interval_order and induced suborders guarantee. O(n log n).
inline PositionCut ordering_cut_positions(const IntervalOrder& order) {
  detail::require_vertices(order);
  PositionCut cut;
  auto sorted = detail::positions_in_vertex_order(order);
  std::vector<std::size_t> current;
  Timestamp running_max = order.vertex(sorted.front()).complete;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const Vertex& v = order.vertex(sorted[k]);
    if (k > 0 && running_max < v.start) {
      cut.groups.push_back(std::move(current));
      current.clear();
    }
    running_max = std::max(running_max, v.complete);
    current.push_back(sorted[k]);
  }
  cut.groups.push_back(std::move(current));
  if (cut.groups.size() >= 2) {
    cut.kind = CutKind::Ordering;
  } else {
    cut.groups.clear();
  }
  return cut;
}

/// Maximal parallel cut: connected components of the relation viewed as an
/// undirected graph. Components are ordered by (min start, min complete, min
/// label, min id) over their members.
inline PositionCut parallel_cut_positions(const IntervalOrder& order) {
  detail::require_vertices(order);
  const std::size_t n = order.size();
  detail::DisjointSets dsu(n);
  for (std::size_t u = 0; u < n; ++u)
    order.successors(u).for_each([&](std::size_t v) { dsu.unite(u, v); });

  std::vector<std::size_t> root_slot(n, n);
  PositionCut cut;
  for (auto p : detail::positions_in_vertex_order(order)) {
    std::size_t r = dsu.find(p);
    if (root_slot[r] == n) {
      root_slot[r] = cut.groups.size();
      cut.groups.emplace_back();
    }
    cut.groups[root_slot[r]].push_back(p);
  }
  if (cut.groups.size() < 2) {
    cut.groups.clear();
    return cut;
  }

  struct Key {
    Timestamp min_start, min_complete;
    std::string_view min_label;
    InstanceId min_id;
  };
  std::vector<Key> keys;
  for (const auto& g : cut.groups) {
    Key k{order.vertex(g[0]).start, order.vertex(g[0]).complete, order.vertex(g[0]).label,
          order.vertex(g[0]).id};
    for (auto p : g) {
      const Vertex& v = order.vertex(p);
      k.min_complete = std::min(k.min_complete, v.complete);
      k.min_label = std::min<std::string_view>(k.min_label, v.label);
      k.min_id = std::min(k.min_id, v.id);
    }
    keys.push_back(k);
  }
  std::vector<std::size_t> idx(cut.groups.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(keys[a].min_start, keys[a].min_complete, keys[a].min_label, keys[a].min_id) <
           std::tie(keys[b].min_start, keys[b].min_complete, keys[b].min_label, keys[b].min_id);
  });
  std::vector<std::vector<std::size_t>> sorted;
  sorted.reserve(idx.size());
  for (auto i : idx) sorted.push_back(std::move(cut.groups[i]));
  cut.groups = std::move(sorted);
  cut.kind = CutKind::Parallel;
  return cut;
}

/// An ordering and a parallel cut never coexist, so the detector order only
/// affects which one runs first.
inline PositionCut find_cut_positions(const IntervalOrder& order) {
  auto cut = ordering_cut_positions(order);
  if (cut.kind != CutKind::None) return cut;
  return parallel_cut_positions(order);
}

inline CutResult maximal_ordering_cut(const IntervalOrder& order) {
  return detail::to_ids(order, ordering_cut_positions(order));
}

inline CutResult maximal_parallel_cut(const IntervalOrder& order) {
  return detail::to_ids(order, parallel_cut_positions(order));
}

inline CutResult find_cut(const IntervalOrder& order) {
  return detail::to_ids(order, find_cut_positions(order));
}

}  // namespace vw
