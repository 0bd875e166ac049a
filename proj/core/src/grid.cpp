#include "bwl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bwl {

GridFunction::GridFunction(Window window, int level, std::vector<double> values)
    : window_(window), level_(level), values_(std::move(values)) {
    if (level_ < window_.L)
        throw std::domain_error("GridFunction: level must be >= window L so cells tile the window");
    if (level_ + window_.L > 24)
        throw std::domain_error("GridFunction: grid too fine (level + L > 24)");
    const std::size_t n =
        (std::size_t{1} << (level_ + window_.L)) - (std::size_t{1} << (level_ - window_.L));
    if (values_.size() != n)
        throw std::domain_error("GridFunction: value count does not match level-cells in window");
}

GridFunction GridFunction::constant(Window window, int level, double c) {
    const std::size_t n =
        (std::size_t{1} << (level + window.L)) - (std::size_t{1} << (level - window.L));
    return GridFunction(window, level, std::vector<double>(n, c));
}

GridFunction GridFunction::sample(Window window, int level,
                                  const std::function<double(double)>& fn) {
    GridFunction g = constant(window, level, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) g.values_[i] = fn(g.cell_mid(i));
    return g;
}

GridFunction GridFunction::indicator(Window window, int level, double a, double b) {
    return sample(window, level, [a, b](double t) { return (a < t && t <= b) ? 1.0 : 0.0; });
}

double GridFunction::cell_width() const { return std::ldexp(1.0, -level_); }

double GridFunction::cell_left(std::size_t i) const {
    const std::uint64_t j0 = std::uint64_t{1} << (level_ - window_.L);
    return std::ldexp(static_cast<double>(j0 + i), -level_);
}

double GridFunction::cell_right(std::size_t i) const {
    const std::uint64_t j0 = std::uint64_t{1} << (level_ - window_.L);
    return std::ldexp(static_cast<double>(j0 + i + 1), -level_);
}

std::size_t GridFunction::cell_index(double t) const {
    if (!window_.contains(t)) throw std::domain_error("GridFunction: t outside window");
    const double scaled = std::ldexp(t, level_);
    std::uint64_t j = static_cast<std::uint64_t>(std::ceil(scaled)) - 1;
    const std::uint64_t j0 = std::uint64_t{1} << (level_ - window_.L);
    const std::uint64_t jmax = j0 + values_.size() - 1;
    if (j < j0) j = j0;
    if (j > jmax) j = jmax;
    return static_cast<std::size_t>(j - j0);
}

double GridFunction::operator()(double t) const {
    if (!window_.contains(t)) return 0.0;
    return values_[cell_index(t)];
}

double GridFunction::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}
double GridFunction::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double integrate(const GridFunction& f, double beta, const Interval& B) {
    const double lo = f.window().lo();
    const double hi = f.window().hi();
    const double slack = 1e-12 * hi;
    if (B.a < lo - slack || B.b > hi + slack)
        throw std::domain_error("integrate: B outside window");
    const double a = std::max(B.a, lo);
    const double b = std::min(B.b, hi);
    if (!(b > a)) return 0.0;

    const double w = f.cell_width();
    const std::size_t n = f.size();
    std::size_t i0 = 0;
    if (a > lo) {
        const double off = (a - lo) / w;
        i0 = static_cast<std::size_t>(std::floor(off));
        if (i0 >= n) i0 = n - 1;
        // a exactly on a boundary: start at the cell beginning there
        if (f.cell_right(i0) <= a && i0 + 1 < n) ++i0;
    }
    double acc = 0.0;
    for (std::size_t i = i0; i < n; ++i) {
        const double cl = f.cell_left(i);
        if (cl >= b) break;
        const double clo = std::max(cl, a);
        const double chi = std::min(f.cell_right(i), b);
        if (chi > clo) acc += f.values()[i] * moment(beta, clo, chi);
    }
    return acc;
}

double measure_average(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                       MeasureKind kind) {
    const double e = kind == MeasureKind::m ? mu.m_exponent() : mu.nu_exponent();
    const double meas = measure_of(mu, kind, B);
    if (!(meas > 0.0)) throw std::domain_error("measure_average: degenerate interval");
    return integrate(f, e, B) / meas;
}

double lambda_average(const GridFunction& f, const Interval& B, const LambdaMeasure& mu) {
    return measure_average(f, B, mu, MeasureKind::nu);
}

void write_csv(const GridFunction& f, std::ostream& os) {
    os << "t_left,t_right,value\n";
    os.precision(17);
    for (std::size_t i = 0; i < f.size(); ++i)
        os << f.cell_left(i) << ',' << f.cell_right(i) << ',' << f.values()[i] << '\n';
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("t_left,t_right,value", 0) != 0)
        throw std::invalid_argument("grid csv: missing header t_left,t_right,value");
    std::vector<double> lefts, rights, vals;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        double v[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(row, tok, c < 2 ? ',' : '\n'))
                throw std::invalid_argument("grid csv: malformed row");
            v[c] = std::stod(tok);
        }
        lefts.push_back(v[0]);
        rights.push_back(v[1]);
        vals.push_back(v[2]);
    }
    if (vals.empty()) throw std::invalid_argument("grid csv: no rows");
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!(rights[i] > lefts[i])) throw std::invalid_argument("grid csv: empty cell");
        if (i > 0 && rights[i - 1] != lefts[i])
            throw std::invalid_argument("grid csv: overlapping or gapped rows");
    }
    const double width = rights[0] - lefts[0];
    const int level = static_cast<int>(std::lround(-std::log2(width)));
    const int L = static_cast<int>(std::lround(-std::log2(lefts[0])));
    if (std::ldexp(1.0, -level) != width || std::ldexp(1.0, -L) != lefts[0] ||
        std::ldexp(1.0, L) != rights.back())
        throw std::invalid_argument("grid csv: cells are not a dyadic window partition");
    return GridFunction(Window(L), level, std::move(vals));
}

GridFunction read_csv_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("grid csv: cannot open " + path);
    return read_csv(is);
}

} // namespace bwl
