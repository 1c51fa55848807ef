#include "bpinterp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bpinterp {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct AxisScale {
    double lo, hi;
    double px0, px1;
    double map(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

std::vector<double> ticks(double lo, double hi, int count) {
    std::vector<double> out;
    const double span = hi - lo;
    const double raw = span / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v);
    return out;
}

} // namespace

void render_svg(const std::vector<PlotSeries>& series, const PlotOptions& options,
                const std::string& path) {
    std::size_t points = 0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto absorb = [&](const std::vector<double>& xs, const std::vector<double>& ys) {
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xmin = std::min(xmin, xs[i]);
            xmax = std::max(xmax, xs[i]);
            ymin = std::min(ymin, ys[i]);
            ymax = std::max(ymax, ys[i]);
        }
    };
    for (const auto& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("render_svg: x/y length mismatch in series " + s.label);
        points += s.x.size();
        absorb(s.x, s.y);
        if (!s.band_lo.empty()) absorb(s.x, s.band_lo);
        if (!s.band_hi.empty()) absorb(s.x, s.band_hi);
    }
    if (points == 0) throw std::invalid_argument("render_svg: no data");
    if (points > 1 && xmax == xmin)
        throw std::invalid_argument("render_svg: degenerate axis (all x equal)");
    absorb(options.trend_x, options.trend_y);

    if (xmax == xmin) {
        const double pad = std::max(1.0, std::fabs(xmin)) * 0.5;
        xmin -= pad;
        xmax += pad;
    }
    if (ymax == ymin) {
        const double pad = std::max(1.0, std::fabs(ymin)) * 0.5;
        ymin -= pad;
        ymax += pad;
    }
    const double xpad = 0.06 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
    AxisScale xs{xmin - xpad, xmax + xpad, 60.0, options.width - 20.0};
    AxisScale ys{ymin - ypad, ymax + ypad, options.height - 50.0, 30.0};

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("render_svg: cannot open " + path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
        << options.height << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" fill=\"white\"/>\n";

    // Axes with ticks and labels.
    out << "<line x1=\"" << fmt(xs.px0) << "\" y1=\"" << fmt(ys.px0) << "\" x2=\""
        << fmt(xs.px1) << "\" y2=\"" << fmt(ys.px0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << fmt(xs.px0) << "\" y1=\"" << fmt(ys.px0) << "\" x2=\""
        << fmt(xs.px0) << "\" y2=\"" << fmt(ys.px1) << "\" stroke=\"black\"/>\n";
    for (double t : ticks(xs.lo, xs.hi, 6)) {
        const double px = xs.map(t);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(ys.px0) << "\" x2=\"" << fmt(px)
            << "\" y2=\"" << fmt(ys.px0 + 5) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(ys.px0 + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(ys.lo, ys.hi, 6)) {
        const double py = ys.map(t);
        out << "<line x1=\"" << fmt(xs.px0 - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(xs.px0) << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(xs.px0 - 8) << "\" y=\"" << fmt(py + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    if (!options.title.empty())
        out << "<text x=\"" << options.width / 2 << "\" y=\"18\" font-size=\"14\" "
            << "text-anchor=\"middle\">" << escape_xml(options.title) << "</text>\n";
    if (!options.x_label.empty())
        out << "<text x=\"" << fmt(0.5 * (xs.px0 + xs.px1)) << "\" y=\""
            << options.height - 12 << "\" font-size=\"12\" text-anchor=\"middle\">"
            << escape_xml(options.x_label) << "</text>\n";
    if (!options.y_label.empty())
        out << "<text x=\"14\" y=\"" << fmt(0.5 * (ys.px0 + ys.px1))
            << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << fmt(0.5 * (ys.px0 + ys.px1)) << ")\">" << escape_xml(options.y_label)
            << "</text>\n";

    // Shaded bands first so markers stay on top.
    for (const auto& s : series) {
        if (s.band_lo.empty() || s.band_hi.empty()) continue;
        out << "<polygon fill=\"" << s.color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            out << fmt(xs.map(s.x[i])) << ',' << fmt(ys.map(s.band_hi[i])) << ' ';
        for (std::size_t i = s.x.size(); i-- > 0;)
            out << fmt(xs.map(s.x[i])) << ',' << fmt(ys.map(s.band_lo[i])) << ' ';
        out << "\"/>\n";
    }

    // Dashed trend curve (the single dashed path in the file).
    if (options.trend_x.size() >= 2) {
        out << "<path fill=\"none\" stroke=\"#444444\" stroke-dasharray=\"6 4\" d=\"";
        for (std::size_t i = 0; i < options.trend_x.size(); ++i)
            out << (i == 0 ? 'M' : 'L') << fmt(xs.map(options.trend_x[i])) << ' '
                << fmt(ys.map(options.trend_y[i]));
        out << "\"/>\n";
    }

    for (const auto& s : series) {
        if (s.x.size() >= 2) {
            out << "<path fill=\"none\" stroke=\"" << s.color << "\" d=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << (i == 0 ? 'M' : 'L') << fmt(xs.map(s.x[i])) << ' ' << fmt(ys.map(s.y[i]));
            out << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double px = xs.map(s.x[i]), py = ys.map(s.y[i]);
            if (s.marker == "square") {
                out << "<rect x=\"" << fmt(px - 3.5) << "\" y=\"" << fmt(py - 3.5)
                    << "\" width=\"7\" height=\"7\" fill=\"" << s.color << "\"/>\n";
            } else if (s.marker == "triangle") {
                out << "<polygon fill=\"" << s.color << "\" points=\"" << fmt(px) << ','
                    << fmt(py - 4.5) << ' ' << fmt(px - 4.0) << ',' << fmt(py + 3.5) << ' '
                    << fmt(px + 4.0) << ',' << fmt(py + 3.5) << "\"/>\n";
            } else {
                out << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
                    << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
            }
        }
    }

    // Legend.
    double ly = 40.0;
    for (const auto& s : series) {
        out << "<rect x=\"" << fmt(xs.px1 - 150) << "\" y=\"" << fmt(ly - 8)
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << fmt(xs.px1 - 135) << "\" y=\"" << fmt(ly + 1)
            << "\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
        ly += 16.0;
    }
    if (!options.trend_label.empty()) {
        out << "<line x1=\"" << fmt(xs.px1 - 150) << "\" y1=\"" << fmt(ly - 3) << "\" x2=\""
            << fmt(xs.px1 - 140) << "\" y2=\"" << fmt(ly - 3)
            << "\" stroke=\"#444444\" stroke-dasharray=\"6 4\"/>\n";
        out << "<text x=\"" << fmt(xs.px1 - 135) << "\" y=\"" << fmt(ly + 1)
            << "\" font-size=\"11\">" << escape_xml(options.trend_label) << "</text>\n";
    }

    out << "</svg>\n";
    if (!out) throw std::runtime_error("render_svg: write failed for " + path);
}

} // namespace bpinterp
