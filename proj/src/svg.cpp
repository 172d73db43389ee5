#include "sgdlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace sgdlab {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Round a span to pleasant tick positions.
std::vector<double> ticks(double lo, double hi, int target = 6) {
    if (!(hi > lo)) hi = lo + 1.0;
    const double raw = (hi - lo) / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * step;
         t += step)
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    return out;
}

}  // namespace

std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series, int width,
                              int height) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        for (double v : s.x) { x_lo = std::min(x_lo, v); x_hi = std::max(x_hi, v); }
        for (double v : s.y) { y_lo = std::min(y_lo, v); y_hi = std::max(y_hi, v); }
    }
    if (!(x_hi > x_lo)) { x_lo -= 0.5; x_hi += 0.5; }
    if (!(y_hi > y_lo)) { y_lo -= 0.5; y_hi += 0.5; }
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const double ml = 64, mr = 16, mt = 32, mb = 48;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return mt + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title
        << "</text>\n";

    for (double t : ticks(x_lo, x_hi)) {
        const double x = px(t);
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt) << "\" x2=\""
            << num(x) << "\" y2=\"" << num(mt + ph)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(mt + ph + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << num(t) << "</text>\n";
    }
    for (double t : ticks(y_lo, y_hi)) {
        const double y = py(t);
        svg << "<line x1=\"" << num(ml) << "\" y1=\"" << num(y) << "\" x2=\""
            << num(ml + pw) << "\" y2=\"" << num(y)
            << "\" stroke=\"#dddddd\"/>\n";
        svg << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << num(t) << "</text>\n";
    }
    svg << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\""
        << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\">" << x_label << "</text>\n";
    svg << "<text x=\"14\" y=\"" << num(mt + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"12\" transform=\"rotate(-90 14 " << num(mt + ph / 2)
        << ")\">" << y_label << "</text>\n";

    double legend_y = mt + 14;
    for (const auto& s : series) {
        if (s.x.empty()) continue;
        svg << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            svg << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
        svg << "\"/>\n";
        svg << "<line x1=\"" << num(ml + pw - 130) << "\" y1=\""
            << num(legend_y - 4) << "\" x2=\"" << num(ml + pw - 110)
            << "\" y2=\"" << num(legend_y - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(ml + pw - 104) << "\" y=\"" << num(legend_y)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
            << "</text>\n";
        legend_y += 16;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace sgdlab
