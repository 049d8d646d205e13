#include "core/svg.hpp"

#include <cmath>

#include "core/common.hpp"

namespace minnorm {

namespace {
constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 56.0, kRight = 16.0, kTop = 16.0, kBottom = 40.0;

std::string px(double v) { return format_fixed(v, 2); }

double nice_tick(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0}) {
        if (raw <= mult * mag) return mult * mag;
    }
    return 10.0 * mag;
}
} // namespace

SvgFigure::SvgFigure(double x_min, double x_max, double y_min, double y_max,
                     std::string x_label, std::string y_label)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
      x_label_(std::move(x_label)), y_label_(std::move(y_label)) {
    if (!(x_max_ > x_min_)) x_max_ = x_min_ + 1.0;
    if (!(y_max_ > y_min_)) y_max_ = y_min_ + 1.0;
}

double SvgFigure::to_px_x(double x) const {
    return kLeft + (x - x_min_) / (x_max_ - x_min_) * (kWidth - kLeft - kRight);
}

double SvgFigure::to_px_y(double y) const {
    return kHeight - kBottom - (y - y_min_) / (y_max_ - y_min_) * (kHeight - kTop - kBottom);
}

void SvgFigure::add_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                             const std::string& css_class, const std::string& color) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) pts += " ";
        pts += px(to_px_x(xs[i])) + "," + px(to_px_y(ys[i]));
    }
    shapes_.push_back("<polyline class=\"" + css_class + "\" fill=\"none\" stroke=\"" + color +
                      "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>");
}

void SvgFigure::add_band(const std::vector<double>& xs, const std::vector<double>& lo,
                         const std::vector<double>& hi, const std::string& css_class,
                         const std::string& color) {
    std::string pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) pts += " ";
        pts += px(to_px_x(xs[i])) + "," + px(to_px_y(hi[i]));
    }
    for (std::size_t i = xs.size(); i-- > 0;) {
        pts += " " + px(to_px_x(xs[i])) + "," + px(to_px_y(lo[i]));
    }
    shapes_.push_back("<polygon class=\"" + css_class + "\" fill=\"" + color +
                      "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"" + pts + "\"/>");
}

void SvgFigure::add_vertical_marker(double x, const std::string& css_class,
                                    const std::string& color) {
    const std::string xs = px(to_px_x(x));
    markers_.push_back("<line class=\"" + css_class + "\" x1=\"" + xs + "\" y1=\"" +
                       px(kTop) + "\" x2=\"" + xs + "\" y2=\"" + px(kHeight - kBottom) +
                       "\" stroke=\"" + color + "\" stroke-width=\"0.5\"/>");
}

void SvgFigure::add_legend_entry(const std::string& label, const std::string& color) {
    const double y = kTop + 16.0 + 16.0 * double(legend_.size());
    legend_.push_back("<rect x=\"" + px(kLeft + 8.0) + "\" y=\"" + px(y - 9.0) +
                      "\" width=\"12\" height=\"3\" fill=\"" + color + "\"/>" +
                      "<text class=\"legend\" x=\"" + px(kLeft + 24.0) + "\" y=\"" + px(y) +
                      "\" font-size=\"11\" font-family=\"sans-serif\">" + label + "</text>");
}

std::string SvgFigure::render() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(kWidth) + "\" height=\"" +
           px(kHeight) + "\" viewBox=\"0 0 " + px(kWidth) + " " + px(kHeight) + "\">\n";
    out += "<rect width=\"" + px(kWidth) + "\" height=\"" + px(kHeight) + "\" fill=\"white\"/>\n";

    for (const auto& s : markers_) out += s + "\n";

    // Axes with ticks.
    out += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(kHeight - kBottom) +
           "\" x2=\"" + px(kWidth - kRight) + "\" y2=\"" + px(kHeight - kBottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out += "<line class=\"axis\" x1=\"" + px(kLeft) + "\" y1=\"" + px(kTop) + "\" x2=\"" +
           px(kLeft) + "\" y2=\"" + px(kHeight - kBottom) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    const double xt = nice_tick(x_max_ - x_min_);
    for (double v = std::ceil(x_min_ / xt) * xt; v <= x_max_ + 1e-12; v += xt) {
        const std::string xs = px(to_px_x(v));
        out += "<line class=\"tick\" x1=\"" + xs + "\" y1=\"" + px(kHeight - kBottom) +
               "\" x2=\"" + xs + "\" y2=\"" + px(kHeight - kBottom + 4.0) +
               "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text class=\"tick-label\" x=\"" + xs + "\" y=\"" + px(kHeight - kBottom + 16.0) +
               "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\">" +
               format_fixed(v, 2) + "</text>\n";
    }
    const double yt = nice_tick(y_max_ - y_min_);
    for (double v = std::ceil(y_min_ / yt) * yt; v <= y_max_ + 1e-12; v += yt) {
        const std::string ys = px(to_px_y(v));
        out += "<line class=\"tick\" x1=\"" + px(kLeft - 4.0) + "\" y1=\"" + ys + "\" x2=\"" +
               px(kLeft) + "\" y2=\"" + ys + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
        out += "<text class=\"tick-label\" x=\"" + px(kLeft - 6.0) + "\" y=\"" + px(to_px_y(v) + 3.0) +
               "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"end\">" +
               format_fixed(v, 2) + "</text>\n";
    }
    out += "<text class=\"axis-label\" x=\"" + px((kLeft + kWidth - kRight) / 2.0) + "\" y=\"" +
           px(kHeight - 8.0) +
           "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">" + x_label_ +
           "</text>\n";
    out += "<text class=\"axis-label\" x=\"14\" y=\"" + px((kTop + kHeight - kBottom) / 2.0) +
           "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           px((kTop + kHeight - kBottom) / 2.0) + ")\">" + y_label_ + "</text>\n";

    for (const auto& s : shapes_) out += s + "\n";
    for (const auto& s : legend_) out += s + "\n";
    out += "</svg>\n";
    return out;
}

} // namespace minnorm
