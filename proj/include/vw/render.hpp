#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vw/error.hpp"
#include "vw/layout.hpp"

namespace vw {

/// Geometry and colouring of SVG output. All lengths in pixels.
struct RenderConfig {
  double unit_height = 28;     // height of one leaf row
  double chevron_indent = 9;   // depth of the chevron point and notch
  double padding = 4;          // gap between and around nested chevrons
  double leaf_width = 64;      // constant leaf width; duration is not encoded
  std::uint64_t palette_seed = 0;

  void validate() const {
    if (!(unit_height > 0 && chevron_indent > 0 && padding > 0 && leaf_width > 0))
      throw InvalidArgument("render config lengths must be positive");
    if (leaf_width <= 2 * chevron_indent)
      throw InvalidArgument("leaf width must exceed twice the chevron indent");
  }
};

/// "seq(...)", "par(...)" with children in render order, "unordered{...}", or the label.
inline std::string render_text(const LayoutTree& t) {
  switch (t.kind) {
    case NodeKind::Leaf: return detail::escape_label(t.label);
    case NodeKind::Fallback: {
      std::string out = "unordered{";
      for (std::size_t i = 0; i < t.labels.size(); ++i)
        out += (i ? "," : "") + detail::escape_label(t.labels[i]);
      return out + "}";
    }
    case NodeKind::Sequence:
    case NodeKind::Parallel: {
      std::string out = t.kind == NodeKind::Sequence ? "seq(" : "par(";
      for (std::size_t i = 0; i < t.children.size(); ++i)
        out += (i ? "," : "") + render_text(t.children[i]);
      return out + ")";
    }
  }
  return {};
}

namespace svg_detail {

// Twenty well-separated hues (Tableau 20 ordering), each with the text colour that reads on it.
struct Swatch {
  const char* fill;
  const char* text;
};
inline constexpr std::array<Swatch, 20> kPalette{{
    {"#1f77b4", "#ffffff"}, {"#ff7f0e", "#000000"}, {"#2ca02c", "#ffffff"},
    {"#d62728", "#ffffff"}, {"#9467bd", "#ffffff"}, {"#8c564b", "#ffffff"},
    {"#e377c2", "#000000"}, {"#7f7f7f", "#ffffff"}, {"#bcbd22", "#000000"},
    {"#17becf", "#000000"}, {"#aec7e8", "#000000"}, {"#ffbb78", "#000000"},
    {"#98df8a", "#000000"}, {"#ff9896", "#000000"}, {"#c5b0d5", "#000000"},
    {"#c49c94", "#000000"}, {"#f7b6d2", "#000000"}, {"#c7c7c7", "#000000"},
    {"#dbdb8d", "#000000"}, {"#9edae5", "#000000"},
}};

inline constexpr std::array<const char*, 4> kNestShades{"#f2f2f2", "#d9d9d9", "#c4c4c4", "#e6e6e6"};

inline std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline const Swatch& swatch_for(std::string_view label, std::uint64_t seed) {
  return kPalette[mix(fnv1a(label) ^ mix(seed)) % kPalette.size()];
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  if (s == "-0") s = "0";
  return s;
}

struct Size {
  double w = 0, h = 0;
};

class Painter {
 public:
  Painter(const RenderConfig& cfg, std::ostringstream& out) : cfg_(cfg), out_(out) {}

  Size measure(const LayoutTree& t) const {
    switch (t.kind) {
      case NodeKind::Leaf: return {cfg_.leaf_width, cfg_.unit_height};
      case NodeKind::Fallback:
        return {cfg_.leaf_width,
                std::max(cfg_.unit_height, line_height() * double(t.labels.size()) + 2 * cfg_.padding)};
      case NodeKind::Sequence: {
        Size s;
        for (const auto& c : t.children) {
          Size cs = measure(c);
          s.w += cs.w;
          s.h = std::max(s.h, cs.h);
        }
        s.w += cfg_.padding * double(t.children.size() - 1);
        return s;
      }
      case NodeKind::Parallel: {
        Size s;
        for (const auto& c : t.children) {
          Size cs = measure(c);
          s.w = std::max(s.w, cs.w);
          s.h += cs.h;
        }
        s.h += cfg_.padding * double(t.children.size() - 1) + 2 * cfg_.padding;
        s.w += 2 * (cfg_.chevron_indent + cfg_.padding);
        return s;
      }
    }
    return {};
  }

  // Draws `t` filling the box (x, y, w, h); the box is never smaller than measure(t).
  void draw(const LayoutTree& t, double x, double y, double w, double h, int depth) {
    switch (t.kind) {
      case NodeKind::Leaf: {
        const Swatch& sw = swatch(t.label);
        out_ << "<g class=\"leaf\">";
        chevron(x, y, w, h, sw.fill);
        text(x + w / 2 + cfg_.chevron_indent / 2, y + h / 2, t.label, sw.text);
        out_ << "</g>\n";
        break;
      }
      case NodeKind::Fallback: {
        out_ << "<g class=\"fallback\">";
        chevron(x, y, w, h, kNestShades[0]);
        const double top = y + (h - line_height() * double(t.labels.size())) / 2;
        for (std::size_t i = 0; i < t.labels.size(); ++i)
          text(x + w / 2 + cfg_.chevron_indent / 2, top + line_height() * (double(i) + 0.5),
               t.labels[i], "#000000");
        out_ << "</g>\n";
        break;
      }
      case NodeKind::Sequence: {
        out_ << "<g class=\"seq\">\n";
        std::vector<double> widths;
        double natural = cfg_.padding * double(t.children.size() - 1);
        for (const auto& c : t.children) {
          widths.push_back(measure(c).w);
          natural += widths.back();
        }
        const double extra = (w - natural) / double(t.children.size());
        double cx = x;
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          draw(t.children[i], cx, y, widths[i] + extra, h, depth);
          cx += widths[i] + extra + cfg_.padding;
        }
        out_ << "</g>\n";
        break;
      }
      case NodeKind::Parallel: {
        out_ << "<g class=\"par\">\n";
        chevron(x, y, w, h, kNestShades[static_cast<std::size_t>(depth) % kNestShades.size()]);
        std::vector<double> heights;
        double natural = cfg_.padding * double(t.children.size() - 1) + 2 * cfg_.padding;
        for (const auto& c : t.children) {
          heights.push_back(measure(c).h);
          natural += heights.back();
        }
        const double extra = (h - natural) / double(t.children.size());
        const double inner_x = x + cfg_.chevron_indent + cfg_.padding;
        const double inner_w = w - 2 * (cfg_.chevron_indent + cfg_.padding);
        double cy = y + cfg_.padding;
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          draw(t.children[i], inner_x, cy, inner_w, heights[i] + extra, depth + 1);
          cy += heights[i] + extra + cfg_.padding;
        }
        out_ << "</g>\n";
        break;
      }
    }
  }

 private:
  double line_height() const { return cfg_.unit_height * 0.6; }

  const Swatch& swatch(std::string_view label) const {
    return swatch_for(label, cfg_.palette_seed);
  }

  void chevron(double x, double y, double w, double h, const char* fill) {
    const double d = cfg_.chevron_indent;
    out_ << "<polygon points=\"" << num(x) << ',' << num(y) << ' ' << num(x + w - d) << ','
         << num(y) << ' ' << num(x + w) << ',' << num(y + h / 2) << ' ' << num(x + w - d) << ','
         << num(y + h) << ' ' << num(x) << ',' << num(y + h) << ' ' << num(x + d) << ','
         << num(y + h / 2) << "\" fill=\"" << fill << "\" stroke=\"#b0b0b0\"/>";
  }

  void text(double x, double y, std::string_view s, const char* colour) {
    out_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" fill=\"" << colour
         << "\">" << xml_escape(s) << "</text>";
  }

  const RenderConfig& cfg_;
  std::ostringstream& out_;
};

}  // namespace svg_detail

/// Fill colour assigned to a label under the given palette seed.
inline std::string label_color(std::string_view label, std::uint64_t palette_seed = 0) {
  return svg_detail::swatch_for(label, palette_seed).fill;
}

/// Standalone SVG 1.1 document of nested chevrons. Every node is wrapped in a
/// <g> whose class is seq, par, leaf or fallback.
inline std::string render_svg(const LayoutTree& tree, const RenderConfig& config = {}) {
  config.validate();
  std::ostringstream body;
  svg_detail::Painter painter(config, body);
  const svg_detail::Size size = painter.measure(tree);
  const double margin = config.padding;
  painter.draw(tree, margin, margin, size.w, size.h, 0);

  const double width = size.w + 2 * margin, height = size.h + 2 * margin;
  std::ostringstream doc;
  doc << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << svg_detail::num(width) << "\" height=\"" << svg_detail::num(height)
      << "\" viewBox=\"0 0 " << svg_detail::num(width) << ' ' << svg_detail::num(height)
      << "\" font-family=\"sans-serif\" font-size=\"" << svg_detail::num(config.unit_height * 0.45)
      << "\" text-anchor=\"middle\" dominant-baseline=\"central\">\n"
      << body.str() << "</svg>\n";
  return doc.str();
}

}  // namespace vw
