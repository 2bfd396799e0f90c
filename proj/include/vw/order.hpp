#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vw/error.hpp"
#include "vw/ingest.hpp"

namespace vw {

/// Fixed-size bit set sized at runtime.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const noexcept {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  bool is_subset_of(const Bits& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }
  /// First index set here but not in `other`, or size() if none.
  std::size_t first_not_in(const Bits& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t d = words_[i] & ~other.words_[i];
      if (d) return i * 64 + static_cast<std::size_t>(std::countr_zero(d));
    }
    return size_;
  }
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  friend bool operator==(const Bits&, const Bits&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Vertex of an interval order: an activity instance minus its case.
struct Vertex {
  InstanceId id = 0;
  std::string label;
  Timestamp start;
  Timestamp complete;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Labeled directed graph over the activity instances of one trace. Edges are
/// stored as the full relation (not reduced), one successor bit set per vertex.
/// Vertices are addressed by position; ids are looked up through index_of.
class IntervalOrder {
 public:
  IntervalOrder() = default;

  /// Builds a graph from explicit edges without checking any order axiom.
  /// Meant for hand-made graphs; build_interval_order is the normal route.
  static IntervalOrder from_edges(std::vector<Vertex> vertices,
                                  std::span<const std::pair<InstanceId, InstanceId>> edges) {
    IntervalOrder g(std::move(vertices));
    for (auto [from, to] : edges) g.succ_[g.index_of(from)].set(g.index_of(to));
    return g;
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const Vertex& vertex(std::size_t i) const { return vertices_[i]; }

  bool has_edge(std::size_t from, std::size_t to) const { return succ_[from].test(to); }
  const Bits& successors(std::size_t i) const { return succ_[i]; }

  std::size_t index_of(InstanceId id) const {
    auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id,
                               [](const auto& p, InstanceId v) { return p.first < v; });
    if (it == by_id_.end() || it->first != id)
      throw InvalidArgument("vertex " + std::to_string(id) + " is not part of the order");
    return it->second;
  }
  bool contains(InstanceId id) const {
    auto it = std::lower_bound(by_id_.begin(), by_id_.end(), id,
                               [](const auto& p, InstanceId v) { return p.first < v; });
    return it != by_id_.end() && it->first == id;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (const auto& s : succ_) c += s.count();
    return c;
  }

  /// Edges as (from id, to id), ordered by source then target position.
  std::vector<std::pair<InstanceId, InstanceId>> edges() const {
    std::vector<std::pair<InstanceId, InstanceId>> out;
    for (std::size_t i = 0; i < size(); ++i)
      succ_[i].for_each([&](std::size_t j) { out.emplace_back(vertices_[i].id, vertices_[j].id); });
    return out;
  }

  friend bool operator==(const IntervalOrder& a, const IntervalOrder& b) {
    return a.vertices_ == b.vertices_ && a.succ_ == b.succ_;
  }

 private:
  explicit IntervalOrder(std::vector<Vertex> vertices)
      : vertices_(std::move(vertices)), succ_(vertices_.size(), Bits(vertices_.size())) {
    by_id_.reserve(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) by_id_.emplace_back(vertices_[i].id, i);
    std::sort(by_id_.begin(), by_id_.end());
    auto dup = std::adjacent_find(by_id_.begin(), by_id_.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; });
    if (dup != by_id_.end())
      throw InvalidArgument("duplicate vertex id " + std::to_string(dup->first));
  }

  friend IntervalOrder build_interval_order(std::span<const ActivityInstance>);
  friend IntervalOrder induced_by_positions(const IntervalOrder&, std::span<const std::size_t>);

  std::vector<Vertex> vertices_;
  std::vector<Bits> succ_;
  std::vector<std::pair<InstanceId, std::size_t>> by_id_;
};

/// Edge (a, b) iff a completes strictly before b starts; touching or
/// overlapping instances stay unrelated. Vertices keep the input order.
inline IntervalOrder build_interval_order(std::span<const ActivityInstance> instances) {
  if (instances.empty()) throw InvalidArgument("cannot build an interval order of an empty trace");
  std::vector<Vertex> vs;
  vs.reserve(instances.size());
  for (const auto& a : instances) vs.push_back({a.id, a.label, a.start, a.complete});
  IntervalOrder g(std::move(vs));
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g.vertices_[i].complete < g.vertices_[j].start) g.succ_[i].set(j);
  return g;
}

inline IntervalOrder build_interval_order(const Trace& trace) {
  return build_interval_order(std::span<const ActivityInstance>(trace.instances));
}

/// Induced subgraph on the given vertex positions (sorted, unique, in range).
inline IntervalOrder induced_by_positions(const IntervalOrder& order,
                                          std::span<const std::size_t> positions) {
  std::vector<Vertex> vs;
  vs.reserve(positions.size());
  for (auto p : positions) vs.push_back(order.vertices_[p]);
  IntervalOrder g(std::move(vs));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Bits& row = order.succ_[positions[i]];
    for (std::size_t j = 0; j < positions.size(); ++j)
      if (row.test(positions[j])) g.succ_[i].set(j);
  }
  return g;
}

/// Restriction of `order` to `subset`; vertices keep their relative order.
inline IntervalOrder induced_suborder(const IntervalOrder& order,
                                      std::span<const InstanceId> subset) {
  if (subset.empty()) throw InvalidArgument("induced suborder needs a non-empty vertex subset");
  std::vector<std::size_t> positions;
  positions.reserve(subset.size());
  for (auto id : subset) positions.push_back(order.index_of(id));
  std::sort(positions.begin(), positions.end());
  positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
  return induced_by_positions(order, positions);
}

// ---------------------------------------------------------------------------
// Validation

enum class Axiom { Irreflexivity, Asymmetry, Transitivity, IntervalOrderCondition };

inline const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::Irreflexivity: return "irreflexivity";
    case Axiom::Asymmetry: return "asymmetry";
    case Axiom::Transitivity: return "transitivity";
    case Axiom::IntervalOrderCondition: return "interval-order condition";
  }
  return "?";
}

struct Violation {
  Axiom axiom;
  std::vector<InstanceId> witness;

  std::string describe() const {
    std::ostringstream os;
    os << to_string(axiom) << " violated by (";
    for (std::size_t i = 0; i < witness.size(); ++i) os << (i ? "," : "") << witness[i];
    os << ')';
    switch (axiom) {
      case Axiom::Irreflexivity: os << ": v<v"; break;
      case Axiom::Asymmetry: os << ": u<v and v<u"; break;
      case Axiom::Transitivity: os << ": u<v, v<w but not u<w"; break;
      case Axiom::IntervalOrderCondition: os << ": x<w, y<z but neither x<z nor y<w"; break;
    }
    return os.str();
  }

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks irreflexivity, asymmetry, transitivity and the 2+2-free condition.
/// Empty result iff all hold. At most one transitivity witness is reported per edge;
/// witnesses are (u), (u,v), (u,v,w) and (x,y,w,z) respectively.
inline std::vector<Violation> validate(const IntervalOrder& order) {
  std::vector<Violation> out;
  const std::size_t n = order.size();
  auto id = [&](std::size_t i) { return order.vertex(i).id; };

  for (std::size_t v = 0; v < n; ++v)
    if (order.has_edge(v, v)) out.push_back({Axiom::Irreflexivity, {id(v)}});

  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (order.has_edge(u, v) && order.has_edge(v, u))
        out.push_back({Axiom::Asymmetry, {id(u), id(v)}});

  for (std::size_t u = 0; u < n; ++u) {
    order.successors(u).for_each([&](std::size_t v) {
      std::size_t w = order.successors(v).first_not_in(order.successors(u));
      if (w < n) out.push_back({Axiom::Transitivity, {id(u), id(v), id(w)}});
    });
  }

  // A 2+2 is four distinct vertices x<w, y<z with neither x<z nor y<w.
  if (!out.empty()) {
    for (std::size_t x = 0; x < n; ++x)
      order.successors(x).for_each([&](std::size_t w) {
        for (std::size_t y = 0; y < n; ++y) {
          if (y == x || y == w) continue;
          order.successors(y).for_each([&](std::size_t z) {
            if (z == x || z == w || order.has_edge(x, z) || order.has_edge(y, w)) return;
            if (x < y) out.push_back({Axiom::IntervalOrderCondition, {id(x), id(y), id(w), id(z)}});
          });
        }
      });
    return out;
  }

  // On a strict order the condition holds iff predecessor sets form a
  // chain under inclusion, and a family sorted by cardinality is a chain iff
  // each neighbouring pair is nested.
  std::vector<Bits> pred(n, Bits(n));
  for (std::size_t u = 0; u < n; ++u) order.successors(u).for_each([&](std::size_t v) { pred[v].set(u); });
  std::vector<std::size_t> by_size(n);
  std::iota(by_size.begin(), by_size.end(), 0);
  std::vector<std::size_t> card(n);
  for (std::size_t v = 0; v < n; ++v) card[v] = pred[v].count();
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](std::size_t a, std::size_t b) { return card[a] < card[b]; });
  for (std::size_t k = 1; k < n; ++k) {
    std::size_t z = by_size[k - 1], w = by_size[k];
    if (pred[z].is_subset_of(pred[w])) continue;
    std::size_t y = pred[z].first_not_in(pred[w]);
    std::size_t x = pred[w].first_not_in(pred[z]);
    out.push_back({Axiom::IntervalOrderCondition, {id(x), id(y), id(w), id(z)}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Debug export

namespace detail {
inline std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  return out;
}
}  // namespace detail

/// Graphviz DOT rendering of the full relation.
inline void write_dot(std::ostream& os, const IntervalOrder& order,
                      std::string_view name = "interval_order") {
  os << "digraph \"" << detail::dot_escape(name) << "\" {\n  rankdir=LR;\n";
  for (const auto& v : order.vertices())
    os << "  n" << v.id << " [label=\"" << detail::dot_escape(v.label) << "\"];\n";
  for (auto [a, b] : order.edges()) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
}

}  // namespace vw
