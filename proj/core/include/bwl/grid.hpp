#ifndef BWL_GRID_HPP
#define BWL_GRID_HPP

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "bwl/measure.hpp"

namespace bwl {

/// Piecewise-constant function on the uniform dyadic partition of a window,
/// the universal function carrier. Cells are the level-cells
/// (j*2^{-level}, (j+1)*2^{-level}] covering (2^{-L}, 2^L]; evaluation is 0
/// outside the window.
class GridFunction {
public:
    GridFunction(Window window, int level, std::vector<double> values);

    /// Constant c on the whole window.
    static GridFunction constant(Window window, int level, double c);
    /// Cell values sampled from fn at cell midpoints.
    static GridFunction sample(Window window, int level, const std::function<double(double)>& fn);
    /// Indicator of (a, b] intersected with the window, snapped to cells by midpoint.
    static GridFunction indicator(Window window, int level, double a, double b);

    const Window& window() const { return window_; }
    int level() const { return level_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double cell_width() const;
    double cell_left(std::size_t i) const;
    double cell_right(std::size_t i) const;
    double cell_mid(std::size_t i) const { return 0.5 * (cell_left(i) + cell_right(i)); }

    /// Index of the cell containing t; throws if t is outside the window.
    std::size_t cell_index(double t) const;

    /// Value of the unique cell containing t; 0 outside the window.
    double operator()(double t) const;

    double min_value() const;
    double max_value() const;

private:
    Window window_;
    int level_;
    std::vector<double> values_;
};

/// Exact integral of f(t) * t^beta over B (B inside the window), summing
/// value * moment(beta, cell intersect B) over cells.
double integrate(const GridFunction& f, double beta, const Interval& B);

/// nu_lambda-average of f over B: integrate(f, 2*lambda+1, B) / nu_lambda(B).
double lambda_average(const GridFunction& f, const Interval& B, const LambdaMeasure& mu);

/// Average against the chosen density (m or nu).
double measure_average(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                       MeasureKind kind);

/// CSV serialization: header `t_left,t_right,value`, one row per cell,
/// monotone in t_left. Readers reject overlapping or gapped rows.
void write_csv(const GridFunction& f, std::ostream& os);
GridFunction read_csv(std::istream& is);
GridFunction read_csv_file(const std::string& path);

} // namespace bwl

#endif
