#ifndef MINNORM_SVG_HPP
#define MINNORM_SVG_HPP

#include <string>
#include <vector>

namespace minnorm {

/// Minimal deterministic SVG figure builder: fixed canvas, data-space
/// coordinates mapped once, numbers rendered with fixed precision so
/// identical inputs produce identical bytes.
class SvgFigure {
public:
    SvgFigure(double x_min, double x_max, double y_min, double y_max,
              std::string x_label, std::string y_label);

    void add_polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                      const std::string& css_class, const std::string& color);
    /// Filled band between (xs, lo) and (xs, hi).
    void add_band(const std::vector<double>& xs, const std::vector<double>& lo,
                  const std::vector<double>& hi, const std::string& css_class,
                  const std::string& color);
    /// Vertical marker line over the full plot height.
    void add_vertical_marker(double x, const std::string& css_class, const std::string& color);
    void add_legend_entry(const std::string& label, const std::string& color);

    std::string render() const;

private:
    double to_px_x(double x) const;
    double to_px_y(double y) const;

    double x_min_, x_max_, y_min_, y_max_;
    std::string x_label_, y_label_;
    std::vector<std::string> markers_, shapes_, legend_;
};

} // namespace minnorm

#endif
