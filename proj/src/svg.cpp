#include "driftbench/svg.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "driftbench/errors.hpp"

namespace driftbench {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// round a range outward to friendly tick positions
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    double t = std::ceil(lo / step) * step;
    for (; t <= hi + 1e-9 * span; t += step) out.push_back(t == 0.0 ? 0.0 : t);
    return out;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::set_range(double x_min, double x_max, double y_min, double y_max) {
    x_min_ = x_min;
    x_max_ = x_max;
    y_min_ = y_min;
    y_max_ = y_max;
    range_set_ = true;
}

void SvgPlot::cover(const std::vector<Vec2>& pts) {
    for (const auto& p : pts) {
        if (!range_set_) {
            x_min_ = x_max_ = p.x;
            y_min_ = y_max_ = p.y;
            range_set_ = true;
        } else {
            x_min_ = std::min(x_min_, p.x);
            x_max_ = std::max(x_max_, p.x);
            y_min_ = std::min(y_min_, p.y);
            y_max_ = std::max(y_max_, p.y);
        }
    }
}

void SvgPlot::freeze_range() {
    if (!range_set_) set_range(0, 1, 0, 1);
    if (x_max_ - x_min_ < 1e-12) {
        x_min_ -= 0.5;
        x_max_ += 0.5;
    }
    if (y_max_ - y_min_ < 1e-12) {
        y_min_ -= 0.5;
        y_max_ += 0.5;
    }
    frozen_ = true;
}

Vec2 SvgPlot::to_px(const Vec2& p) const {
    const double px = kLeft + (p.x - x_min_) / (x_max_ - x_min_) * (kWidth - kLeft - kRight);
    const double py = kHeight - kBottom -
                      (p.y - y_min_) / (y_max_ - y_min_) * (kHeight - kTop - kBottom);
    return {px, py};
}

void SvgPlot::add_polyline(const std::vector<Vec2>& pts, const std::string& color,
                           const std::string& label) {
    series_.push_back({pts, color, label});
}

void SvgPlot::add_vspan(double x0, double x1, const std::string& color) {
    spans_.push_back({x0, x1, color});
}

void SvgPlot::add_hline(double y, const std::string& color) { hlines_.emplace_back(y, color); }

std::string SvgPlot::render() const {
    if (!frozen_) throw input_error("svg plot: freeze_range() must be called before render()");
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    for (const auto& s : spans_) {
        const double x0 = to_px({std::max(s.x0, x_min_), 0}).x;
        const double x1 = to_px({std::min(s.x1, x_max_), 0}).x;
        if (x1 <= x0) continue;
        out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(x1 - x0)
            << "\" height=\"" << fmt(kHeight - kTop - kBottom) << "\" fill=\"" << s.color
            << "\" fill-opacity=\"0.25\"/>\n";
    }

    // axes
    out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
        << fmt(kWidth - kLeft - kRight) << "\" height=\"" << fmt(kHeight - kTop - kBottom)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ticks(x_min_, x_max_)) {
        const double px = to_px({t, 0}).x;
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(kHeight - kBottom) << "\" x2=\""
            << fmt(px) << "\" y2=\"" << fmt(kHeight - kBottom + 5) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(kHeight - kBottom + 18)
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(y_min_, y_max_)) {
        const double py = to_px({0, t}).y;
        out << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py) << "\" x2=\"" << fmt(kLeft)
            << "\" y2=\"" << fmt(py) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }

    for (const auto& [y, color] : hlines_) {
        if (y < y_min_ || y > y_max_) continue;
        const double py = to_px({0, y}).y;
        out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(kWidth - kRight) << "\" y2=\"" << fmt(py) << "\" stroke=\"" << color
            << "\" stroke-dasharray=\"4 3\"/>\n";
    }

    for (const auto& s : series_) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& p : s.pts) {
            const Vec2 q = to_px(p);
            if (!first) out << " ";
            out << fmt(q.x) << "," << fmt(q.y);
            first = false;
        }
        out << "\"/>\n";
    }

    // legend
    double ly = kTop + 14;
    for (const auto& s : series_) {
        if (s.label.empty()) continue;
        out << "<line x1=\"" << fmt(kLeft + 10) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << fmt(kLeft + 34) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n"
            << "<text x=\"" << fmt(kLeft + 40) << "\" y=\"" << fmt(ly)
            << "\" font-size=\"12\">" << escape(s.label) << "</text>\n";
        ly += 16;
    }

    out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">"
        << escape(title_) << "</text>\n"
        << "<text x=\"" << fmt(kLeft + (kWidth - kLeft - kRight) / 2) << "\" y=\""
        << fmt(kHeight - 12) << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label_)
        << "</text>\n"
        << "<text x=\"16\" y=\"" << fmt(kTop + (kHeight - kTop - kBottom) / 2)
        << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << fmt(kTop + (kHeight - kTop - kBottom) / 2) << ")\">" << escape(y_label_) << "</text>\n"
        << "</svg>\n";
    return out.str();
}

void SvgPlot::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << render();
    if (!out) throw input_error("write failed for '" + path + "'");
}

}  // namespace driftbench
