#pragma once

#include <string>
#include <vector>

namespace semilag::io {

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool markers = false;
};

struct PlotOptions {
    std::string title;
    std::string xlabel, ylabel;
    bool loglog = false;
    int width = 640, height = 420;
};

/// Static SVG line plot. On log axes non-positive points are dropped.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& opt);

}  // namespace semilag::io
