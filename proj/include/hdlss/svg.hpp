#ifndef HDLSS_SVG_HPP
#define HDLSS_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace hdlss {

using Point2 = std::pair<double, double>;

enum class Glyph { circle, triangle, square, diamond, cross };

/// Glyph for 0-based class g: circle, triangle, square, then the rest.
Glyph glyph_for_class(std::size_t g);

struct ScatterSeries {
    std::string label;
    Glyph glyph = Glyph::circle;
    std::vector<Point2> points;
};

struct ScatterPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ScatterSeries> series;
    /// Closed dashed polygon through these points (theoretical vertices).
    std::vector<Point2> overlay;
    /// Dashed segments drawn in addition to the polygon.
    std::vector<std::pair<Point2, Point2>> overlay_segments;
    bool unit_circle = false;
    /// Force equal scaling on both axes.
    bool equal_aspect = false;
};

/// Standalone 600x600 SVG document. Coordinates are printed with fixed
/// precision so output is byte-stable.
std::string render_svg(const ScatterPlot& plot);

std::string xml_escape(const std::string& text);

}  // namespace hdlss

#endif  // HDLSS_SVG_HPP
