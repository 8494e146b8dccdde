#include "hdlss/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace hdlss {

namespace {

constexpr double kSize = 600.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 140.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

std::string tick_text(double v, double step) {
    int decimals = 0;
    while (decimals < 6 && std::abs(step * std::pow(10.0, decimals) -
                                    std::round(step * std::pow(10.0, decimals))) > 1e-9)
        ++decimals;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, std::abs(v) < step * 1e-9 ? 0.0 : v);
    return buf;
}

double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

struct Range {
    double lo;
    double hi;
};

Range padded(double lo, double hi) {
    if (!(hi > lo)) {
        const double c = std::isfinite(lo) ? lo : 0.0;
        return {c - 1.0, c + 1.0};
    }
    const double pad = 0.08 * (hi - lo);
    return {lo - pad, hi + pad};
}

struct Frame {
    Range x;
    Range y;
    double px0 = kLeft;
    double px1 = kSize - kRight;
    double py0 = kSize - kBottom;
    double py1 = kTop;

    double sx(double v) const { return px0 + (v - x.lo) / (x.hi - x.lo) * (px1 - px0); }
    double sy(double v) const { return py0 + (v - y.lo) / (y.hi - y.lo) * (py1 - py0); }
};

void glyph(std::ostringstream& out, Glyph g, double cx, double cy) {
    const double r = 4.5;
    switch (g) {
        case Glyph::circle:
            out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
                << "\" fill=\"none\" stroke=\"black\"/>\n";
            break;
        case Glyph::triangle:
            out << "<polygon points=\"" << num(cx) << ',' << num(cy - r) << ' ' << num(cx - r)
                << ',' << num(cy + r * 0.8) << ' ' << num(cx + r) << ',' << num(cy + r * 0.8)
                << "\" fill=\"none\" stroke=\"black\"/>\n";
            break;
        case Glyph::square:
            out << "<rect x=\"" << num(cx - r * 0.85) << "\" y=\"" << num(cy - r * 0.85)
                << "\" width=\"" << num(1.7 * r) << "\" height=\"" << num(1.7 * r)
                << "\" fill=\"none\" stroke=\"black\"/>\n";
            break;
        case Glyph::diamond:
            out << "<polygon points=\"" << num(cx) << ',' << num(cy - r) << ' ' << num(cx + r)
                << ',' << num(cy) << ' ' << num(cx) << ',' << num(cy + r) << ' ' << num(cx - r)
                << ',' << num(cy) << "\" fill=\"none\" stroke=\"black\"/>\n";
            break;
        case Glyph::cross:
            out << "<path d=\"M" << num(cx - r) << ' ' << num(cy - r) << "L" << num(cx + r) << ' '
                << num(cy + r) << "M" << num(cx - r) << ' ' << num(cy + r) << "L" << num(cx + r)
                << ' ' << num(cy - r) << "\" stroke=\"black\"/>\n";
            break;
    }
}

}  // namespace

Glyph glyph_for_class(std::size_t g) {
    static constexpr Glyph order[] = {Glyph::circle, Glyph::triangle, Glyph::square,
                                      Glyph::diamond, Glyph::cross};
    return order[g % 5];
}

std::string xml_escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_svg(const ScatterPlot& plot) {
    double xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
    auto include = [&](const Point2& p) {
        if (!std::isfinite(p.first) || !std::isfinite(p.second)) return;
        xlo = std::min(xlo, p.first);
        xhi = std::max(xhi, p.first);
        ylo = std::min(ylo, p.second);
        yhi = std::max(yhi, p.second);
    };
    for (const auto& s : plot.series)
        for (const auto& p : s.points) include(p);
    for (const auto& p : plot.overlay) include(p);
    for (const auto& [a, b] : plot.overlay_segments) {
        include(a);
        include(b);
    }
    if (plot.unit_circle) {
        include({-1.0, -1.0});
        include({1.0, 1.0});
    }

    Frame f;
    f.x = padded(xlo, xhi);
    f.y = padded(ylo, yhi);
    if (plot.equal_aspect) {
        const double half = std::max(f.x.hi - f.x.lo, f.y.hi - f.y.lo) / 2.0;
        const double cx = (f.x.hi + f.x.lo) / 2.0;
        const double cy = (f.y.hi + f.y.lo) / 2.0;
        f.x = {cx - half, cx + half};
        f.y = {cy - half, cy + half};
        const double side = std::min(f.px1 - f.px0, f.py0 - f.py1);
        f.px1 = f.px0 + side;
        f.py1 = f.py0 - side;
    }

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
           "viewBox=\"0 0 600 600\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"600\" height=\"600\" fill=\"white\"/>\n";
    if (!plot.title.empty())
        out << "<text x=\"300\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
            << xml_escape(plot.title) << "</text>\n";

    // axes box and ticks
    out << "<rect x=\"" << num(f.px0) << "\" y=\"" << num(f.py1) << "\" width=\""
        << num(f.px1 - f.px0) << "\" height=\"" << num(f.py0 - f.py1)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double xs = nice_step(f.x.hi - f.x.lo);
    for (double t = std::ceil(f.x.lo / xs) * xs; t <= f.x.hi + 1e-12 * xs; t += xs) {
        const double px = f.sx(t);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << num(f.py0) << "\" x2=\"" << num(px)
            << "\" y2=\"" << num(f.py0 + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(px) << "\" y=\"" << num(f.py0 + 18)
            << "\" text-anchor=\"middle\">" << tick_text(t, xs) << "</text>\n";
    }
    const double ys = nice_step(f.y.hi - f.y.lo);
    for (double t = std::ceil(f.y.lo / ys) * ys; t <= f.y.hi + 1e-12 * ys; t += ys) {
        const double py = f.sy(t);
        out << "<line x1=\"" << num(f.px0 - 5) << "\" y1=\"" << num(py) << "\" x2=\"" << num(f.px0)
            << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(f.px0 - 8) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\">" << tick_text(t, ys) << "</text>\n";
    }
    if (!plot.x_label.empty())
        out << "<text x=\"" << num((f.px0 + f.px1) / 2) << "\" y=\"" << num(f.py0 + 40)
            << "\" text-anchor=\"middle\">" << xml_escape(plot.x_label) << "</text>\n";
    if (!plot.y_label.empty())
        out << "<text x=\"18\" y=\"" << num((f.py0 + f.py1) / 2)
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << num((f.py0 + f.py1) / 2)
            << ")\">" << xml_escape(plot.y_label) << "</text>\n";

    if (plot.unit_circle) {
        out << "<ellipse cx=\"" << num(f.sx(0)) << "\" cy=\"" << num(f.sy(0)) << "\" rx=\""
            << num(f.sx(1) - f.sx(0)) << "\" ry=\"" << num(f.sy(0) - f.sy(1))
            << "\" fill=\"none\" stroke=\"gray\"/>\n";
    }
    if (!plot.overlay.empty()) {
        out << "<polygon points=\"";
        for (std::size_t i = 0; i < plot.overlay.size(); ++i) {
            if (i) out << ' ';
            out << num(f.sx(plot.overlay[i].first)) << ',' << num(f.sy(plot.overlay[i].second));
        }
        out << "\" fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    }
    for (const auto& [a, b] : plot.overlay_segments)
        out << "<line x1=\"" << num(f.sx(a.first)) << "\" y1=\"" << num(f.sy(a.second))
            << "\" x2=\"" << num(f.sx(b.first)) << "\" y2=\"" << num(f.sy(b.second))
            << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";

    for (const auto& s : plot.series)
        for (const auto& p : s.points)
            if (std::isfinite(p.first) && std::isfinite(p.second))
                glyph(out, s.glyph, f.sx(p.first), f.sy(p.second));

    double ly = kTop + 10;
    for (const auto& s : plot.series) {
        if (s.label.empty()) continue;
        glyph(out, s.glyph, kSize - kRight + 25, ly);
        out << "<text x=\"" << num(kSize - kRight + 37) << "\" y=\"" << num(ly + 4) << "\">"
            << xml_escape(s.label) << "</text>\n";
        ly += 20;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace hdlss
