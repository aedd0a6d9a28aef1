#pragma once

#include <string>
#include <vector>

#include "driftbench/geometry.hpp"

namespace driftbench {

// Minimal deterministic SVG plotting: fixed canvas, linear axes, polylines.
// Numbers are formatted with %.6g so identical inputs give identical bytes.
class SvgPlot {
public:
    SvgPlot(std::string title, std::string x_label, std::string y_label);

    // data ranges must be set before adding geometry
    void set_range(double x_min, double x_max, double y_min, double y_max);
    // expand ranges to cover the points (call for every series, then freeze)
    void cover(const std::vector<Vec2>& pts);
    void freeze_range();  // pads degenerate ranges and locks the mapping

    void add_polyline(const std::vector<Vec2>& pts, const std::string& color,
                      const std::string& label = "");
    void add_vspan(double x0, double x1, const std::string& color);  // shaded window
    void add_hline(double y, const std::string& color);

    std::string render() const;
    void write(const std::string& path) const;

private:
    struct Series {
        std::vector<Vec2> pts;
        std::string color;
        std::string label;
    };
    struct Span {
        double x0, x1;
        std::string color;
    };

    Vec2 to_px(const Vec2& p) const;

    std::string title_, x_label_, y_label_;
    double x_min_ = 0, x_max_ = 1, y_min_ = 0, y_max_ = 1;
    bool range_set_ = false;
    bool frozen_ = false;
    std::vector<Series> series_;
    std::vector<Span> spans_;
    std::vector<std::pair<double, std::string>> hlines_;
};

}  // namespace driftbench
