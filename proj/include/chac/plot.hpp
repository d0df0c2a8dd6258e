#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "chac/band_matrix.hpp"
#include "chac/dendrogram.hpp"
#include "chac/io.hpp"

namespace chac::plot {

/// Layout heights: each node is drawn no lower than its children. Raw
/// heights are never modified; this only affects drawing.
inline std::vector<double> layout_heights(const Dendrogram& d) {
  std::vector<double> out;
  out.reserve(d.merges().size());
  for (const auto& m : d.merges()) {
    double h = m.height;
    for (const NodeRef c : {m.left, m.right}) {
      if (c > 0) h = std::max(h, out[static_cast<std::size_t>(c - 1)]);
    }
    out.push_back(h);
  }
  return out;
}

namespace detail {

inline double max_abs(const BandMatrix& m) {
  double out = 0.0;
  for (double v : m.storage()) out = std::max(out, std::abs(v));
  return out;
}

inline std::string heat_row(const BandMatrix& m, std::size_t i, double scale) {
  static constexpr std::string_view ramp = " .:-=+*#%@";
  std::string out;
  for (std::size_t d = 0; d < m.bandwidth() && d < 64 && i + d < m.size(); ++d) {
    const double v = scale > 0 ? std::abs(m.band(i, d)) / scale : 0.0;
    const auto idx = static_cast<std::size_t>(std::lround(v * static_cast<double>(ramp.size() - 1)));
    out += ramp[std::min(idx, ramp.size() - 1)];
  }
  return out;
}

inline std::string span_label(const Interval& e) {
  return "[" + std::to_string(e.begin + 1) + "-" + std::to_string(e.end) + "]";
}

}  // namespace detail

/// Indented ASCII tree, root first. With a matrix, every leaf line carries
/// that object's band row as a character heat strip.
inline std::string render_text(const Dendrogram& d, const BandMatrix* matrix = nullptr) {
  std::ostringstream out;
  const auto& merges = d.merges();
  const auto draw = layout_heights(d);
  out << "dendrogram p=" << d.size() << " merges=" << merges.size() << '\n';
  const double scale = matrix != nullptr ? detail::max_abs(*matrix) : 0.0;

  auto leaf_line = [&](std::size_t obj) {
    std::string s = "leaf " + std::to_string(obj + 1);
    if (matrix != nullptr) s += "  |" + detail::heat_row(*matrix, obj, scale) + "|";
    return s;
  };

  if (merges.empty()) {
    out << leaf_line(0) << '\n';
    return out.str();
  }

  struct Item {
    NodeRef node;
    std::string prefix;
    std::string branch;
  };
  std::vector<Item> stack{{merge_ref(merges.size() - 1), "", ""}};
  while (!stack.empty()) {
    Item it = std::move(stack.back());
    stack.pop_back();
    out << it.prefix << it.branch;
    if (it.node < 0) {
      out << leaf_line(static_cast<std::size_t>(-it.node - 1)) << '\n';
      continue;
    }
    const auto t = static_cast<std::size_t>(it.node - 1);
    const auto& m = merges[t];
    out << "node " << t + 1 << ' ' << detail::span_label(m.extent())
        << " height=" << io::format_height(m.height);
    if (draw[t] != m.height) out << " drawn_at=" << io::format_height(draw[t]);
    out << '\n';
    std::string child_prefix = it.prefix;
    if (!it.branch.empty()) child_prefix += it.branch == "+-- " ? "|   " : "    ";
    stack.push_back({m.right, child_prefix, "`-- "});
    stack.push_back({m.left, child_prefix, "+-- "});
  }
  return out.str();
}

/// Standalone SVG drawing: dendrogram above the leaves and, with a matrix,
/// a heat strip of the band below them.
inline std::string render_svg(const Dendrogram& d, const BandMatrix* matrix = nullptr) {
  const std::size_t p = d.size();
  const auto& merges = d.merges();
  const auto draw = layout_heights(d);

  const double dx = std::clamp(800.0 / static_cast<double>(p), 2.0, 20.0);
  const double margin = 40.0;
  const double tree_h = 300.0;
  const std::size_t strip_depth = matrix != nullptr ? std::min<std::size_t>(matrix->bandwidth(), 64) : 0;
  const double strip_h = static_cast<double>(strip_depth) * dx / 2.0;
  const double width = 2 * margin + static_cast<double>(p) * dx;
  const double height = 2 * margin + tree_h + (strip_depth > 0 ? 10.0 + strip_h : 0.0);
  const double base = margin + tree_h;

  double lo = 0.0, hi = 0.0;
  for (double v : draw) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double range = hi > lo ? hi - lo : 1.0;
  auto y_of = [&](double v) { return base - (v - lo) / range * tree_h; };
  auto leaf_x = [&](std::size_t i) { return margin + (static_cast<double>(i) + 0.5) * dx; };

  char buf[256];
  std::ostringstream out;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.1f\" height=\"%.1f\" "
                "viewBox=\"0 0 %.1f %.1f\">\n",
                width, height, width, height);
  out << buf;
  out << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<double> node_x(merges.size());
  std::vector<double> node_y(merges.size());
  auto child_pos = [&](NodeRef c) -> std::pair<double, double> {
    if (c < 0) return {leaf_x(static_cast<std::size_t>(-c - 1)), y_of(lo)};
    const auto t = static_cast<std::size_t>(c - 1);
    return {node_x[t], node_y[t]};
  };

  out << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  for (std::size_t t = 0; t < merges.size(); ++t) {
    const auto [lx, ly] = child_pos(merges[t].left);
    const auto [rx, ry] = child_pos(merges[t].right);
    const double y = y_of(draw[t]);
    node_x[t] = 0.5 * (lx + rx);
    node_y[t] = y;
    std::snprintf(buf, sizeof buf,
                  "<path d=\"M%.2f %.2f V%.2f H%.2f V%.2f\"><title>merge %zu height %s</title></path>\n",
                  lx, ly, y, rx, ry, t + 1, io::format_height(merges[t].height).c_str());
    out << buf;
  }
  out << "</g>\n";

  if (p <= 60) {
    out << "<g font-family=\"sans-serif\" font-size=\"8\" text-anchor=\"middle\">\n";
    for (std::size_t i = 0; i < p; ++i) {
      std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\">%zu</text>\n", leaf_x(i),
                    base + 9.0, i + 1);
      out << buf;
    }
    for (std::size_t t = 0; t < merges.size(); ++t) {
      std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\">%s</text>\n", node_x[t],
                    node_y[t] - 2.0, io::format_height(merges[t].height).c_str());
      out << buf;
    }
    out << "</g>\n";
  }
  if (p == 1) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"black\"/>\n",
                  leaf_x(0), base);
    out << buf;
  }

  if (matrix != nullptr) {
    const double scale = detail::max_abs(*matrix);
    const double top = base + 10.0 + (p <= 60 ? 4.0 : 0.0);
    out << "<g stroke=\"none\">\n";
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t k = 0; k < strip_depth && i + k < p; ++k) {
        const double v = scale > 0 ? std::abs(matrix->band(i, k)) / scale : 0.0;
        const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
        std::snprintf(buf, sizeof buf,
                      "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
                      "fill=\"rgb(255,%d,%d)\"/>\n",
                      margin + (static_cast<double>(i) + 0.5 * static_cast<double>(k)) * dx,
                      top + static_cast<double>(k) * dx / 2.0, dx, dx / 2.0, shade, shade);
        out << buf;
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace chac::plot
