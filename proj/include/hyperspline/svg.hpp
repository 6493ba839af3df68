#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "hyperspline/bolza.hpp"

namespace hyperspline {

namespace detail {

// Palette for generator-index coloring; the identity tile stays gray.
inline const char* tile_color(const TileCell& cell) {
    static const char* palette[8] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52",
                                     "#8172b3", "#937860", "#da8bc3", "#8c8c8c"};
    if (cell.element.word.empty()) return "#cccccc";
    return palette[static_cast<size_t>(cell.element.word.front())];
}

inline void svg_move(std::ostream& os, const DiskPoint& p) {
    os << "M " << p.x << " " << -p.y << " ";
}

inline void svg_line(std::ostream& os, const DiskPoint& p) {
    os << "L " << p.x << " " << -p.y << " ";
}

// Circular-arc side between Poincare points. Arcs stay below a half turn, so
// the large-arc flag is always 0; the sweep direction comes from the signed
// angle in SVG coordinates (y down).
inline void svg_arc(std::ostream& os, const DiskPoint& a, const DiskPoint& b) {
    const PoincareGeodesic g = poincare_geodesic(a, b, 1e-9);
    if (g.diameter) {
        svg_line(os, b);
        return;
    }
    const double r = g.radius();
    const double a0 = std::atan2(-a.y - (-g.center_y()), a.x - g.center_x());
    const double a1 = std::atan2(-b.y - (-g.center_y()), b.x - g.center_x());
    double sweep_angle = a1 - a0;
    while (sweep_angle > pi()) sweep_angle -= 2.0 * pi();
    while (sweep_angle < -pi()) sweep_angle += 2.0 * pi();
    os << "A " << r << " " << r << " 0 0 " << (sweep_angle > 0 ? 1 : 0) << " " << b.x << " "
       << -b.y << " ";
}

}  // namespace detail

// Tiling picture: unit circle plus one path per octagon. Klein tiles are
// straight polygons; Poincare tiles use circular-arc sides.
inline void write_tiling_svg(std::ostream& os, const std::vector<TileCell>& cells,
                             DiskModel model, bool color_by_generator = true) {
    os << std::setprecision(10);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n"
       << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#000\" "
          "stroke-width=\"0.004\"/>\n";
    for (const TileCell& cell : cells) {
        std::array<DiskPoint, 8> corners = cell.corners;
        if (model == DiskModel::Poincare)
            for (DiskPoint& c : corners) c = klein_to_poincare(c);
        os << "<path d=\"";
        detail::svg_move(os, corners[0]);
        for (int k = 1; k <= 8; ++k) {
            const DiskPoint& next = corners[static_cast<size_t>(k % 8)];
            if (model == DiskModel::Klein)
                detail::svg_line(os, next);
            else
                detail::svg_arc(os, corners[static_cast<size_t>(k - 1)], next);
        }
        os << "Z\" fill=\"" << (color_by_generator ? detail::tile_color(cell) : "none")
           << "\" fill-opacity=\"0.35\" stroke=\"#222\" stroke-width=\"0.002\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace hyperspline
