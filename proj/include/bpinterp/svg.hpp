#pragma once

#include <string>
#include <vector>

namespace bpinterp {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band_lo;  // optional +- band, empty for none
    std::vector<double> band_hi;
    std::string marker = "circle";  // circle | square | triangle
    std::string color = "#1f77b4";
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    // Trend curve, drawn dashed (the only dashed path in the output).
    std::vector<double> trend_x;
    std::vector<double> trend_y;
    std::string trend_label;
    int width = 640;
    int height = 440;
};

// Static SVG scatter/line plot. Throws std::invalid_argument when the
// series are empty or degenerate (more than one point, all x identical),
// std::runtime_error on I/O failure.
void render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options,
                const std::string& path);

} // namespace bpinterp
