#ifndef BWL_MEASURE_HPP
#define BWL_MEASURE_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>

namespace bwl {

/// The pair of densities m_lambda(t) = t^{2*lambda} and nu_lambda(t) = t^{2*lambda+1}
/// on the half line, for a fixed lambda > -1/2, lambda != 0.
class LambdaMeasure {
public:
    explicit LambdaMeasure(double lambda);

    double lambda() const { return lambda_; }
    double m_exponent() const { return 2.0 * lambda_; }        // > -1
    double nu_exponent() const { return 2.0 * lambda_ + 1.0; } // > 0

private:
    double lambda_;
};

enum class MeasureKind { m, nu };

/// Open-closed subinterval (a, b] of the half line, 0 < a < b.
struct Interval {
    double a;
    double b;

    Interval(double a_, double b_);
    double length() const { return b - a; }
    double center() const { return 0.5 * (a + b); }
    bool contains(double t) const { return a < t && t <= b; }
};

/// Half-open dyadic cell (j*2^{-k}, (j+1)*2^{-k}]. Level k may be negative.
struct DyadicInterval {
    int k = 0;       // side length 2^{-k}
    std::uint64_t j = 0;

    double lower() const;
    double upper() const;
    DyadicInterval parent() const { return {k - 1, j / 2}; }
    DyadicInterval left_child() const { return {k + 1, 2 * j}; }
    DyadicInterval right_child() const { return {k + 1, 2 * j + 1}; }
    bool contains(double t) const { return lower() < t && t <= upper(); }
};

/// Truncation window (2^{-L}, 2^L]. Every reported constant carries its L.
struct Window {
    int L;

    explicit Window(int L_);
    double lo() const;
    double hi() const;
    bool contains(double t) const { return lo() < t && t <= hi(); }
};

/// Exact power moment: integral of t^beta over (a, b).
/// (b^{beta+1} - a^{beta+1}) / (beta+1) for beta != -1, log(b/a) for beta = -1.
double moment(double beta, double a, double b);

/// Same integral with a = 0 permitted; requires beta > -1 there (used for
/// dyadic cells touching the origin, where the m/nu exponents qualify).
double moment_from_zero(double beta, double b);

/// m_lambda or nu_lambda measure of an interval.
double measure_of(const LambdaMeasure& mu, MeasureKind kind, const Interval& B);

/// Measure of a dyadic cell; handles the j = 0 cells (0, 2^{-k}].
double measure_of(const LambdaMeasure& mu, MeasureKind kind, const DyadicInterval& cell);

/// measure(eta B intersect R_+) / measure(B), eta-dilate about the center of B.
double doubling_ratio(const LambdaMeasure& mu, MeasureKind kind, const Interval& B, double eta);

inline double infinity() { return std::numeric_limits<double>::infinity(); }

} // namespace bwl

#endif
