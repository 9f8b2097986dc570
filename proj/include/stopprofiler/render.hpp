#ifndef STOPPROFILER_RENDER_HPP
#define STOPPROFILER_RENDER_HPP

#include <cfenv>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stopprofiler/csv.hpp"
#include "stopprofiler/errors.hpp"
#include "stopprofiler/metrics.hpp"
#include "stopprofiler/profiles.hpp"

namespace stopprofiler {

enum class ImageFormat { PGM, SVG };

// Heatmap request: the matrix is first reordered by `order` (a permutation of
// its indices; identity when empty). With invert = true, darker means
// smaller distance.
struct HeatmapSpec {
  DistanceMatrix matrix;
  std::vector<std::size_t> order;
  ImageFormat format = ImageFormat::PGM;
  bool invert = true;
};

struct Heatmap {
  std::string bytes;
  std::vector<std::string> warnings;
};

namespace detail {

// Gray levels: off-diagonal values min-max scaled to 0..255 (minimum maps to
// 0), midpoints rounded half-to-even; the diagonal is 0. When every
// off-diagonal value is equal the scale is undefined and every off-diagonal
// cell becomes mid-gray 128.
inline std::vector<std::vector<int>> gray_levels(const DistanceMatrix& m, bool invert,
                                                 std::vector<std::string>* warnings) {
  const std::size_t n = m.size();
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double v = m.values[i][j];
      if (first) {
        lo = hi = v;
        first = false;
      } else {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  const bool degenerate = !first && lo == hi;
  if (degenerate && warnings)
    warnings->push_back("all off-diagonal distances are equal; rendering mid-gray");

  std::vector<std::vector<int>> gray(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      int g = 0;
      if (i != j) {
        if (degenerate) {
          g = 128;
        } else {
          const double scaled = (m.values[i][j] - lo) / (hi - lo) * 255.0;
          g = static_cast<int>(std::nearbyint(scaled));  // FE_TONEAREST: half-to-even
        }
      }
      gray[i][j] = invert ? g : 255 - g;
    }
  }
  return gray;
}

}  // namespace detail

// Renders a distance matrix as an image: binary PGM (P5, one byte per cell)
// for byte-stable comparisons, or SVG 1.1 with one rect per cell for viewing.
inline Heatmap heatmap(const HeatmapSpec& spec) {
  const DistanceMatrix m =
      spec.order.empty() ? spec.matrix : reorder(spec.matrix, spec.order);
  const std::size_t n = m.size();

  Heatmap out;
  const auto gray = detail::gray_levels(m, spec.invert, &out.warnings);

  if (spec.format == ImageFormat::PGM) {
    out.bytes = "P5\n" + std::to_string(n) + " " + std::to_string(n) + "\n255\n";
    out.bytes.reserve(out.bytes.size() + n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out.bytes.push_back(static_cast<char>(static_cast<unsigned char>(gray[i][j])));
  } else {
    const int cell = 10;
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(n * cell) + "\" height=\"" + std::to_string(n * cell) + "\">\n";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const int g = gray[i][j];
        svg += "<rect x=\"" + std::to_string(j * cell) + "\" y=\"" + std::to_string(i * cell) +
               "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) +
               "\" fill=\"rgb(" + std::to_string(g) + "," + std::to_string(g) + "," +
               std::to_string(g) + ")\"/>\n";
      }
    }
    svg += "</svg>\n";
    out.bytes = std::move(svg);
  }
  return out;
}

// Proportion curves as CSV rows in the given stop order. position_index is
// the row's place in that order, for position-along-route coloring.
inline std::string curve_export(const std::map<std::string, ProportionProfile>& profiles,
                                const std::vector<std::string>& ordering) {
  std::string csv = "stop_id,position_index";
  for (int h = 0; h < 24; ++h) {
    char col[8];
    std::snprintf(col, sizeof col, ",h%02d", h);
    csv += col;
  }
  csv += "\n";

  for (std::size_t pos = 0; pos < ordering.size(); ++pos) {
    auto it = profiles.find(ordering[pos]);
    if (it == profiles.end()) throw UnknownStopError(ordering[pos]);
    csv += ordering[pos] + "," + std::to_string(pos);
    for (int h = 0; h < 24; ++h) csv += "," + format_g(it->second.proportions[h]);
    csv += "\n";
  }
  return csv;
}

}  // namespace stopprofiler

#endif  // STOPPROFILER_RENDER_HPP
