#include "semilag/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace semilag::io {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(const char* f, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& opt) {
    const double left = 70, right = 20, top = 40, bottom = 50;
    const double W = opt.width, H = opt.height;
    const double pw = W - left - right, ph = H - top - bottom;
    auto tx = [&](double v) { return opt.loglog ? std::log10(v) : v; };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (opt.loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, tx(s.y[i]));
            y1 = std::max(y1, tx(s.y[i]));
        }
    }
    if (!(x1 >= x0)) x0 = 0, x1 = 1;
    if (!(y1 >= y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;
    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (tx(v) - y0) / (y1 - y0)) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opt.width) + "\" height=\"" +
           std::to_string(opt.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fmt("%.1f", W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           esc(opt.title) + "</text>\n";
    out += "<rect x=\"" + fmt("%.1f", left) + "\" y=\"" + fmt("%.1f", top) + "\" width=\"" + fmt("%.1f", pw) +
           "\" height=\"" + fmt("%.1f", ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4, fy = y0 + (y1 - y0) * i / 4;
        const double sx = left + pw * i / 4, sy = top + ph * (1.0 - i / 4.0);
        const double lx = opt.loglog ? std::pow(10.0, fx) : fx, ly = opt.loglog ? std::pow(10.0, fy) : fy;
        out += "<text x=\"" + fmt("%.1f", sx) + "\" y=\"" + fmt("%.1f", top + ph + 16) +
               "\" text-anchor=\"middle\">" + fmt("%.3g", lx) + "</text>\n";
        out += "<text x=\"" + fmt("%.1f", left - 6) + "\" y=\"" + fmt("%.1f", sy + 4) +
               "\" text-anchor=\"end\">" + fmt("%.3g", ly) + "</text>\n";
    }
    out += "<text x=\"" + fmt("%.1f", left + pw / 2) + "\" y=\"" + fmt("%.1f", H - 10) +
           "\" text-anchor=\"middle\">" + esc(opt.xlabel) + "</text>\n";
    out += "<text transform=\"translate(16," + fmt("%.1f", top + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + esc(opt.ylabel) + "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % 6];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (opt.loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            pts += fmt("%.2f", px(s.x[i])) + "," + fmt("%.2f", py(s.y[i])) + " ";
            if (s.markers)
                out += "<circle cx=\"" + fmt("%.2f", px(s.x[i])) + "\" cy=\"" + fmt("%.2f", py(s.y[i])) +
                       "\" r=\"3\" fill=\"" + color + "\"/>\n";
        }
        out += std::string("<polyline fill=\"none\" stroke=\"") + color + "\" stroke-width=\"1.5\" points=\"" + pts +
               "\"/>\n";
        out += "<text x=\"" + fmt("%.1f", left + 10) + "\" y=\"" + fmt("%.1f", top + 16 + 14.0 * si) +
               "\" fill=\"" + color + "\">" + esc(s.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace semilag::io
