#ifndef SGDLAB_SVG_HPP
#define SGDLAB_SVG_HPP

#include <string>
#include <vector>

namespace sgdlab {

// One polyline of a line chart.
struct SvgSeries {
    std::string label;
    std::string color;  // any SVG color string
    std::vector<double> x;
    std::vector<double> y;
};

// Self-contained SVG line chart with axes, tick labels and a legend.
std::string render_line_chart(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<SvgSeries>& series,
                              int width = 720, int height = 440);

}  // namespace sgdlab

#endif  // SGDLAB_SVG_HPP
