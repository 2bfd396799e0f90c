#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "vw/cuts.hpp"

namespace vw {

inline constexpr std::size_t kBruteForceMaxVertices = 16;

/// Maximal ordering cut by direct enumeration over the graph, ignoring timestamps.
/// A vertex set P is a prefix when every (p in P, s not in P) pair is an edge;
/// prefixes form a chain under inclusion and consecutive differences of that
/// chain are the groups of the maximal cut. Exponential; test use only.
inline CutResult brute_force_ordering_cut(const IntervalOrder& order) {
  const std::size_t n = order.size();
  if (n == 0) throw InvalidArgument("cut detection needs at least one vertex");
  if (n > kBruteForceMaxVertices)
    throw InvalidArgument("brute-force ordering cut is limited to " +
                          std::to_string(kBruteForceMaxVertices) + " vertices");

  const std::uint32_t all = (std::uint32_t{1} << n) - 1;
  std::vector<std::uint32_t> succ(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (order.has_edge(u, v)) succ[u] |= std::uint32_t{1} << v;

  std::vector<std::uint32_t> prefixes;
  for (std::uint32_t p = 1; p < all; ++p) {
    const std::uint32_t rest = all & ~p;
    bool ok = true;
    for (std::uint32_t bits = p; bits && ok; bits &= bits - 1) {
      auto u = static_cast<std::size_t>(std::countr_zero(bits));
      ok = (succ[u] & rest) == rest;
    }
    if (ok) prefixes.push_back(p);
  }
  if (prefixes.empty()) return {};

  std::sort(prefixes.begin(), prefixes.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  prefixes.push_back(all);

  auto order_positions = detail::positions_in_vertex_order(order);
  CutResult r{CutKind::Ordering, {}};
  std::uint32_t prev = 0;
  for (auto p : prefixes) {
    if ((prev & ~p) != 0) throw Error("prefix sets do not form a chain; input is not an order");
    const std::uint32_t block = p & ~prev;
    auto& g = r.groups.emplace_back();
    for (auto pos : order_positions)
      if (block >> pos & 1u) g.push_back(order.vertex(pos).id);
    prev = p;
  }
  return r;
}

}  // namespace vw
