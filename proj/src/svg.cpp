#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "hyptile/errors.hpp"
#include "hyptile/geometry.hpp"

namespace hyptile {

namespace {

constexpr std::uint64_t kRenderTileLimit = 1u << 18;

const char* palette(Letter c) {
  static const char* colors[] = {"#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
                                 "#46f0f0", "#f032e6", "#bcf60c", "#fabebe", "#008080"};
  return colors[static_cast<std::size_t>(c - 1) % (sizeof(colors) / sizeof(colors[0]))];
}

struct Screen {
  double x_min, y_max, scale;
  std::array<double, 2> operator()(double x, double y) const { return {(x - x_min) * scale, (y_max - y) * scale}; }
};

void append_points(std::ostringstream& out, const std::vector<std::array<double, 2>>& pts, bool skip_first) {
  for (std::size_t k = skip_first ? 1 : 0; k < pts.size(); ++k) out << pts[k][0] << ',' << pts[k][1] << ' ';
}

// Closed polyline through the five vertices, with geodesic edges.
std::string tile_points(const std::array<ExactPoint, 5>& v, const Screen& screen, double tolerance) {
  std::ostringstream out;
  out << std::setprecision(8);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto& p = v[k];
    const auto& q = v[(k + 1) % 5];
    auto px = to_double(p.x), py = to_double(p.y), qx = to_double(q.x), qy = to_double(q.y);
    auto arc = geodesic_polyline(px, py, qx, qy, 1.0, tolerance / screen.scale);
    for (auto& pt : arc) pt = screen(pt[0], pt[1]);
    arc.pop_back();  // the next edge starts there
    append_points(out, arc, false);
  }
  return out.str();
}

std::string header(double width, double height) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  return out.str();
}

}  // namespace

std::vector<std::array<double, 2>> geodesic_polyline(double px, double py, double qx, double qy, double scale,
                                                     double tolerance) {
  if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
  if (px == qx) return {{px, py}, {qx, qy}};  // vertical geodesic
  const double c = (px * px + py * py - qx * qx - qy * qy) / (2.0 * (px - qx));
  const double radius = std::hypot(px - c, py);
  const double t0 = std::atan2(py, px - c);
  const double t1 = std::atan2(qy, qx - c);
  // Sagitta of a chord spanning angle theta is R (1 - cos(theta / 2)).
  const double ratio = tolerance / (radius * scale);
  const double max_step = ratio >= 2.0 ? M_PI : 2.0 * std::acos(1.0 - ratio);
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(t1 - t0) / max_step)));
  std::vector<std::array<double, 2>> out;
  out.reserve(n + 1);
  out.push_back({px, py});
  for (std::size_t k = 1; k < n; ++k) {
    const double t = t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n);
    out.push_back({c + radius * std::cos(t), radius * std::sin(t)});
  }
  out.push_back({qx, qy});
  return out;
}

std::string render_prototile_svg(double scale, double tolerance) {
  const auto v = tile_region(TileAddress{0, BigInt(0)});
  const Screen screen{-0.25, 2.25, scale};
  std::ostringstream out;
  out << header(1.5 * scale, 1.5 * scale);
  out << "<polygon data-row=\"0\" data-col=\"0\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\""
      << tile_points(v, screen, tolerance) << "\"/>\n";
  out << "</svg>\n";
  return out.str();
}

std::string render_svg(const Model& model, const RenderOptions& o) {
  if (!(o.scale > 0.0) || !(o.tolerance > 0.0)) throw DomainError("scale and tolerance must be positive");
  const double width = std::max(0.0, (o.x_max - o.x_min) * o.scale);
  const double height = std::max(0.0, (o.y_max - o.y_min) * o.scale);
  std::ostringstream out;
  out << std::setprecision(8);
  out << header(width, height);
  if (o.row_min > o.row_max || !(o.x_max > o.x_min) || !(o.y_max > o.y_min) || !(o.y_max > 0.0)) {
    out << "</svg>\n";
    return out.str();
  }
  const Screen screen{o.x_min, o.y_max, o.scale};

  // Rows meeting the band [y_min, y_max].
  std::int64_t lo = o.row_min, hi = o.row_max;
  if (o.y_min > 0.0) lo = std::max<std::int64_t>(lo, static_cast<std::int64_t>(std::floor(std::log2(o.y_min))));
  hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(std::ceil(std::log2(o.y_max))) - 1);
  lo = std::max<std::int64_t>(lo, -60);
  hi = std::min<std::int64_t>(hi, 60);

  auto columns = [&](std::int64_t row) {
    const double w = std::ldexp(1.0, static_cast<int>(row));
    return std::pair{static_cast<std::int64_t>(std::floor(o.x_min / w)),
                     static_cast<std::int64_t>(std::ceil(o.x_max / w))};
  };
  std::uint64_t total = 0;
  for (std::int64_t row = lo; row <= hi; ++row) {
    auto [c0, c1] = columns(row);
    total += static_cast<std::uint64_t>(c1 - c0);
    if (total > kRenderTileLimit) throw BudgetError("render window holds too many tiles");
  }

  out << "<defs><clipPath id=\"window\"><rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\"/></clipPath></defs>\n<g clip-path=\"url(#window)\" stroke=\"black\" stroke-width=\"0.5\">\n";
  for (std::int64_t row = lo; row <= hi; ++row) {
    const char* fill = o.undecorated ? "none" : palette(sequence_letter(model, row));
    auto [c0, c1] = columns(row);
    for (std::int64_t col = c0; col < c1; ++col) {
      out << "<polygon data-row=\"" << row << "\" data-col=\"" << col << "\" fill=\"" << fill << "\" points=\""
          << tile_points(tile_region(TileAddress{row, BigInt(col)}), screen, o.tolerance) << "\"/>\n";
    }
  }
  out << "</g>\n";

  // Level-q patch boundaries: the top edges of each slab's top row, and the
  // vertical sides under every apex.
  for (int q : o.overlay_levels) {
    const BigInt big = level_length(model, q);
    if (big > 60) continue;
    const auto len = big.convert_to<std::int64_t>();
    out << "<g clip-path=\"url(#window)\" data-level=\"" << q
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\">\n";
    for (std::int64_t k = floor_div(lo, len); k * len <= hi; ++k) {
      const std::int64_t top = (k + 1) * len - 1;
      if (top > 60 || k * len < -60) continue;
      const double w = std::ldexp(1.0, static_cast<int>(top));
      const double y_top = 2.0 * w;
      const double y_bottom = std::ldexp(1.0, static_cast<int>(k * len));
      auto [c0, c1] = columns(top);
      for (std::int64_t col = c0; col < c1; ++col) {
        const double x0 = static_cast<double>(col) * w;
        auto arc = geodesic_polyline(x0, y_top, x0 + w, y_top, 1.0, o.tolerance / o.scale);
        for (auto& pt : arc) pt = screen(pt[0], pt[1]);
        std::ostringstream pts;
        pts << std::setprecision(8);
        append_points(pts, arc, false);
        out << "<polyline points=\"" << pts.str() << "\"/>\n";
        const auto a = screen(x0, y_top);
        const auto b = screen(x0, y_bottom);
        out << "<line x1=\"" << a[0] << "\" y1=\"" << a[1] << "\" x2=\"" << b[0] << "\" y2=\"" << b[1] << "\"/>\n";
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::string& path, const std::string& document) {
  std::ofstream file(path, std::ios::out | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  file << document;
  if (!file.flush()) throw std::runtime_error("write failed for " + path);
}

}  // namespace hyptile
