#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vw/cuts.hpp"
#include "vw/error.hpp"
#include "vw/order.hpp"

namespace vw {

enum class NodeKind { Sequence, Parallel, Leaf, Fallback };

/// Recursive chevron structure. Sequence children sit side by side, Parallel
/// children are stacked, a Leaf is one activity and a Fallback holds the labels
/// of a suborder no cut applies to.
struct LayoutTree {
  NodeKind kind = NodeKind::Leaf;
  std::string label;                 // Leaf
  std::vector<std::string> labels;   // Fallback, in start order
  std::vector<LayoutTree> children;  // Sequence, Parallel

  static LayoutTree leaf(std::string label) {
    LayoutTree t;
    t.kind = NodeKind::Leaf;
    t.label = std::move(label);
    return t;
  }
  static LayoutTree sequence(std::vector<LayoutTree> children) {
    return composite(NodeKind::Sequence, std::move(children));
  }
  static LayoutTree parallel(std::vector<LayoutTree> children) {
    return composite(NodeKind::Parallel, std::move(children));
  }
  static LayoutTree fallback(std::vector<std::string> labels) {
    LayoutTree t;
    t.kind = NodeKind::Fallback;
    t.labels = std::move(labels);
    return t;
  }

  bool has_fallback() const {
    if (kind == NodeKind::Fallback) return true;
    return std::any_of(children.begin(), children.end(),
                       [](const LayoutTree& c) { return c.has_fallback(); });
  }

  /// Labels of all activities in the tree, depth first.
  void collect_labels(std::vector<std::string>& out) const {
    switch (kind) {
      case NodeKind::Leaf: out.push_back(label); break;
      case NodeKind::Fallback: out.insert(out.end(), labels.begin(), labels.end()); break;
      default:
        for (const auto& c : children) c.collect_labels(out);
    }
  }

  friend bool operator==(const LayoutTree&, const LayoutTree&) = default;

 private:
  static LayoutTree composite(NodeKind kind, std::vector<LayoutTree> children) {
    LayoutTree t;
    t.kind = kind;
    t.children = std::move(children);
    return t;
  }
};

/// Structural problems of a tree; empty when all layout invariants hold.
inline std::vector<std::string> check_layout(const LayoutTree& t) {
  std::vector<std::string> problems;
  auto visit = [&](auto&& self, const LayoutTree& n) -> void {
    switch (n.kind) {
      case NodeKind::Leaf: break;
      case NodeKind::Fallback:
        if (n.labels.size() < 2) problems.push_back("fallback with fewer than two labels");
        break;
      case NodeKind::Sequence:
      case NodeKind::Parallel:
        if (n.children.size() < 2) problems.push_back("composite node with fewer than two children");
        for (const auto& c : n.children) {
          if (c.kind == n.kind)
            problems.push_back(n.kind == NodeKind::Sequence ? "sequence nested directly in sequence"
                                                            : "parallel nested directly in parallel");
          self(self, c);
        }
        break;
    }
  };
  visit(visit, t);
  return problems;
}

namespace detail {

inline LayoutTree layout_of(const IntervalOrder& order) {
  if (order.size() == 1) return LayoutTree::leaf(order.vertex(0).label);
  PositionCut cut = find_cut_positions(order);
  if (cut.kind == CutKind::None) {
    std::vector<std::string> labels;
    labels.reserve(order.size());
    for (auto p : positions_in_vertex_order(order)) labels.push_back(order.vertex(p).label);
    return LayoutTree::fallback(std::move(labels));
  }
  std::vector<LayoutTree> children;
  children.reserve(cut.groups.size());
  for (auto& group : cut.groups) {
    std::sort(group.begin(), group.end());
    children.push_back(layout_of(induced_by_positions(order, group)));
  }
  return cut.kind == CutKind::Ordering ? LayoutTree::sequence(std::move(children))
                                       : LayoutTree::parallel(std::move(children));
}

// Characters with structural meaning in canonical keys and text notation.
inline std::string escape_label(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == '(' || c == ')' || c == '{' || c == '}' || c == ',') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

/// Applies maximal cuts recursively: ordering cut -> Sequence, parallel cut ->
/// Parallel, single vertex -> Leaf, no cut -> Fallback over all labels.
inline LayoutTree build_layout(const IntervalOrder& order) {
  if (order.empty()) throw InvalidArgument("cannot lay out an empty interval order");
  return detail::layout_of(order);
}

/// Key equal for two trees iff they agree up to the order of Parallel children
/// and of Fallback labels.
inline std::string canonical_form(const LayoutTree& t) {
  switch (t.kind) {
    case NodeKind::Leaf: return detail::escape_label(t.label);
    case NodeKind::Fallback: {
      std::vector<std::string> ls;
      for (const auto& l : t.labels) ls.push_back(detail::escape_label(l));
      std::sort(ls.begin(), ls.end());
      std::string out = "u{";
      for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? "," : "") + ls[i];
      return out + "}";
    }
    case NodeKind::Sequence:
    case NodeKind::Parallel: {
      std::vector<std::string> keys;
      keys.reserve(t.children.size());
      for (const auto& c : t.children) keys.push_back(canonical_form(c));
      if (t.kind == NodeKind::Parallel) std::sort(keys.begin(), keys.end());
      std::string out = t.kind == NodeKind::Sequence ? "s(" : "p(";
      for (std::size_t i = 0; i < keys.size(); ++i) out += (i ? "," : "") + keys[i];
      return out + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// JSON: {"kind": "seq"|"par"|"leaf"|"fallback", "label"?, "labels"?, "children"?}

inline nlohmann::ordered_json to_json(const LayoutTree& t) {
  nlohmann::ordered_json j;
  switch (t.kind) {
    case NodeKind::Leaf:
      j["kind"] = "leaf";
      j["label"] = t.label;
      break;
    case NodeKind::Fallback:
      j["kind"] = "fallback";
      j["labels"] = t.labels;
      break;
    case NodeKind::Sequence:
    case NodeKind::Parallel:
      j["kind"] = t.kind == NodeKind::Sequence ? "seq" : "par";
      j["children"] = nlohmann::ordered_json::array();
      for (const auto& c : t.children) j["children"].push_back(to_json(c));
      break;
  }
  return j;
}

inline LayoutTree layout_from_json(const nlohmann::ordered_json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "leaf") return LayoutTree::leaf(j.at("label").get<std::string>());
  if (kind == "fallback") return LayoutTree::fallback(j.at("labels").get<std::vector<std::string>>());
  if (kind != "seq" && kind != "par") throw ParseError("unknown layout node kind '" + kind + "'");
  std::vector<LayoutTree> children;
  for (const auto& c : j.at("children")) children.push_back(layout_from_json(c));
  return kind == "seq" ? LayoutTree::sequence(std::move(children))
                       : LayoutTree::parallel(std::move(children));
}

}  // namespace vw
