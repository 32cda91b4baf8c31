#include "topo/render.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace topo {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 40.0;
constexpr double kEssentialFactor = 1.05;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

const char* dim_color(int dim)
{
    return dim == 0 ? "#1f77b4" : "#d62728";
}

// Upper end of the value axis: essential deaths are drawn here.
double axis_limit(const PersistenceDiagram& diagram)
{
    double max_finite = 0.0;
    for (const auto& p : diagram.pairs) {
        max_finite = std::max(max_finite, p.birth);
        if (!p.essential()) {
            max_finite = std::max(max_finite, p.death);
        }
    }
    return max_finite > 0.0 ? kEssentialFactor * max_finite : 1.0;
}

std::string header(const char* title)
{
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 400\" width=\"640\" "
           "height=\"400\">\n";
    out += "<title>";
    out += title;
    out += "</title>\n";
    out += "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" "
           "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\"/></marker></defs>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"400\" fill=\"white\"/>\n";
    return out;
}

std::string axes(double limit, const char* x_label, const char* y_label, bool y_ticks)
{
    const double x0 = kLeft;
    const double y0 = kHeight - kBottom;
    std::string out;
    out += "<line class=\"axis\" x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
    out += "<line class=\"axis\" x1=\"" + num(x0) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x0) +
           "\" y2=\"" + num(y0) + "\" stroke=\"black\"/>\n";
    const double span_x = kWidth - kLeft - kRight;
    const double span_y = kHeight - kTop - kBottom;
    for (int t = 0; t <= 4; ++t) {
        const double value = limit * t / 4.0;
        const double x = x0 + span_x * t / 4.0;
        out += "<text class=\"tick\" x=\"" + num(x) + "\" y=\"" + num(y0 + 16) +
               "\" font-size=\"10\" text-anchor=\"middle\">" + num(value) + "</text>\n";
        if (y_ticks) {
            const double y = y0 - span_y * t / 4.0;
            out += "<text class=\"tick\" x=\"" + num(x0 - 6) + "\" y=\"" + num(y + 3) +
                   "\" font-size=\"10\" text-anchor=\"end\">" + num(value) + "</text>\n";
        }
    }
    out += "<text class=\"label\" x=\"" + num(x0 + span_x / 2) + "\" y=\"" + num(kHeight - 6) +
           "\" font-size=\"12\" text-anchor=\"middle\">" + x_label + "</text>\n";
    out += "<text class=\"label\" x=\"14\" y=\"" + num(kTop + span_y / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num(kTop + span_y / 2) + ")\">" + y_label + "</text>\n";
    return out;
}

std::string barcode(const PersistenceDiagram& diagram)
{
    const double limit = axis_limit(diagram);
    std::string out = header("persistence barcode");
    out += axes(limit, "scale", "features", false);
    const double span_x = kWidth - kLeft - kRight;
    const double span_y = kHeight - kTop - kBottom;
    const std::size_t count = diagram.pairs.size();
    const double pitch = count > 0 ? span_y / static_cast<double>(count + 1) : 0.0;
    // pairs are sorted by (dim, birth, death): H0 bars come first, at the top
    for (std::size_t k = 0; k < count; ++k) {
        const auto& p = diagram.pairs[k];
        const double y = kTop + pitch * static_cast<double>(k + 1);
        const double x1 = kLeft + span_x * p.birth / limit;
        const double death = p.essential() ? limit : p.death;
        const double x2 = kLeft + span_x * death / limit;
        out += "<line class=\"bar dim" + std::to_string(p.dim) +
               (p.essential() ? " essential" : "") + "\" x1=\"" + num(x1) + "\" y1=\"" + num(y) +
               "\" x2=\"" + num(x2) + "\" y2=\"" + num(y) + "\" stroke=\"" + dim_color(p.dim) +
               "\" stroke-width=\"2\"" + (p.essential() ? " marker-end=\"url(#arrow)\"" : "") +
               "/>\n";
    }
    out += "</svg>\n";
    return out;
}

std::string scatter(const PersistenceDiagram& diagram)
{
    const double limit = axis_limit(diagram);
    std::string out = header("persistence diagram");
    out += axes(limit, "birth", "death", true);
    const double span_x = kWidth - kLeft - kRight;
    const double span_y = kHeight - kTop - kBottom;
    const double x0 = kLeft;
    const double y0 = kHeight - kBottom;
    out += "<line class=\"diagonal\" x1=\"" + num(x0) + "\" y1=\"" + num(y0) + "\" x2=\"" +
           num(x0 + span_x) + "\" y2=\"" + num(y0 - span_y) +
           "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& p : diagram.pairs) {
        const double death = p.essential() ? limit : p.death;
        const double cx = x0 + span_x * p.birth / limit;
        const double cy = y0 - span_y * death / limit;
        out += "<circle class=\"point dim" + std::to_string(p.dim) +
               (p.essential() ? " essential" : "") + "\" cx=\"" + num(cx) + "\" cy=\"" + num(cy) +
               "\" r=\"4\" " +
               (p.essential() ? std::string("fill=\"none\" stroke=\"") + dim_color(p.dim) + "\""
                              : std::string("fill=\"") + dim_color(p.dim) + "\"") +
               "/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace

std::string render_svg(const PersistenceDiagram& diagram, RenderMode mode)
{
    return mode == RenderMode::barcode ? barcode(diagram) : scatter(diagram);
}

} // namespace topo
