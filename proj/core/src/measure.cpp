#include "bwl/measure.hpp"

#include <cmath>

namespace bwl {

LambdaMeasure::LambdaMeasure(double lambda) : lambda_(lambda) {
    if (!(lambda > -0.5) || std::abs(lambda + 0.5) < 1e-6)
        throw std::domain_error("LambdaMeasure: lambda must satisfy lambda > -1/2 (with margin)");
    if (lambda == 0.0)
        throw std::domain_error("LambdaMeasure: lambda = 0 is excluded");
}

Interval::Interval(double a_, double b_) : a(a_), b(b_) {
    if (!(a > 0.0) || !(b > a) || !std::isfinite(a) || !std::isfinite(b))
        throw std::domain_error("Interval: need 0 < a < b < inf");
}

double DyadicInterval::lower() const { return std::ldexp(static_cast<double>(j), -k); }
double DyadicInterval::upper() const { return std::ldexp(static_cast<double>(j + 1), -k); }

Window::Window(int L_) : L(L_) {
    if (L < 1 || L > 30) throw std::domain_error("Window: L must be a positive integer (<= 30)");
}
double Window::lo() const { return std::ldexp(1.0, -L); }
double Window::hi() const { return std::ldexp(1.0, L); }

double moment(double beta, double a, double b) {
    if (!(a > 0.0) || !(b > a))
        throw std::domain_error("moment: need 0 < a < b");
    const double c = beta + 1.0;
    if (c == 0.0) return std::log(b / a);
    // a^c * expm1(c*log(b/a)) / c is stable when c is small.
    return std::pow(a, c) * std::expm1(c * std::log(b / a)) / c;
}

double moment_from_zero(double beta, double b) {
    if (!(b > 0.0)) throw std::domain_error("moment_from_zero: need b > 0");
    const double c = beta + 1.0;
    if (c <= 0.0) return infinity();
    return std::pow(b, c) / c;
}

static double density_exponent(const LambdaMeasure& mu, MeasureKind kind) {
    return kind == MeasureKind::m ? mu.m_exponent() : mu.nu_exponent();
}

double measure_of(const LambdaMeasure& mu, MeasureKind kind, const Interval& B) {
    return moment(density_exponent(mu, kind), B.a, B.b);
}

double measure_of(const LambdaMeasure& mu, MeasureKind kind, const DyadicInterval& cell) {
    const double e = density_exponent(mu, kind);
    if (cell.j == 0) return moment_from_zero(e, cell.upper());
    return moment(e, cell.lower(), cell.upper());
}

double doubling_ratio(const LambdaMeasure& mu, MeasureKind kind, const Interval& B, double eta) {
    if (!(eta >= 1.0)) throw std::domain_error("doubling_ratio: eta >= 1 required");
    const double e = density_exponent(mu, kind);
    const double c = B.center();
    const double h = eta * 0.5 * B.length();
    const double lo = c - h;
    const double hi = c + h;
    const double dilated = lo > 0.0 ? moment(e, lo, hi) : moment_from_zero(e, hi);
    return dilated / moment(e, B.a, B.b);
}

} // namespace bwl
