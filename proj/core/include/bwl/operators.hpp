#ifndef BWL_OPERATORS_HPP
#define BWL_OPERATORS_HPP

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "bwl/grid.hpp"
#include "bwl/measure.hpp"
#include "bwl/weights.hpp"

namespace bwl {

/// Off-diagonal kernel K(x, y) for the truncated operator
/// T f(x) = integral_{|x-y| > delta} K(x, y) f(y) dm_lambda(y).
struct Kernel {
    std::function<double(double, double)> eval;
    bool singular = false;
    std::string name;
};

Kernel constant_kernel(double c);
Kernel hilbert_kernel(); // 1/(x - y)

/// Tabulated kernel on grid midpoints, from CSV rows `x,y,K`; every
/// off-diagonal midpoint pair must be present.
Kernel tabulated_kernel_from_csv(const GridFunction& grid, const std::string& path);

/// Sign-definite model kernel K(x, y) = sign(y - x) / m_lambda((x^y, x|y])
/// with the lower-bound property: for B = B(x0, r) and its right translate
/// Btilde = B + A1 r, |K| >= c_K / m_lambda(Btilde) on B x Btilde.
struct ModelLowerBoundKernel {
    double A1 = 3.0;
    double A2 = 5.0;
    double c_K = 0.0;
    Kernel kernel;
};

ModelLowerBoundKernel make_model_kernel(const LambdaMeasure& mu, double A1 = 3.0, double A2 = 5.0);

double apply_operator(const Kernel& K, const GridFunction& f, const LambdaMeasure& mu,
                      double delta, double x);

std::complex<double> apply_operator(const Kernel& K, const GridFunction& shape,
                                    const std::vector<std::complex<double>>& values,
                                    const LambdaMeasure& mu, double delta, double x);

/// [b, T] f(x) = b(x) T f(x) - T(b f)(x).
double commutator_apply(const GridFunction& b, const Kernel& K, const GridFunction& f,
                        const LambdaMeasure& mu, double delta, double x);

/// Same commutator through the Cauchy-integral generating operator
/// T_z f = e^{z b} T(e^{-z b} f): trapezoidal contour sum of T_z f(x)/z^2
/// over N points on |z| = eps. eps <= 0 selects 1/(4 max|b|).
double cauchy_commutator(const GridFunction& b, const Kernel& K, const GridFunction& f,
                         const LambdaMeasure& mu, double delta, double x, double eps, int points);

/// Empirical lower bound for ||T||_{L^p(w dt) -> L^p(w dt)} over a family.
double operator_norm_probe(const Kernel& K, const Weight& w, double p, const LambdaMeasure& mu,
                           double delta, const std::vector<GridFunction>& family);

/// Median-split sets of the commutator lower-bound construction; indices are
/// cells of b's grid.
struct LowerBoundSets {
    Interval Btilde{1.0, 2.0};
    double alpha_median = 0.0;
    std::vector<std::size_t> E1, E2; // cells of B: b >= alpha / b < alpha
    std::vector<std::size_t> F1, F2; // cells of Btilde: b <= alpha / b >= alpha
};

LowerBoundSets lower_bound_sets(const GridFunction& b, const Interval& B, const LambdaMeasure& mu,
                                double A1, double A2);

struct OscillationLowerEstimate {
    double osc = 0.0;   // (1/nu(B)) integral |b - b_{B,lambda}| d nu
    double probe = 0.0; // Hoelder-assembled commutator bound
};

OscillationLowerEstimate oscillation_lower_estimate(const GridFunction& b, const Weight& w,
                                                    double p, const LambdaMeasure& mu,
                                                    const ModelLowerBoundKernel& K,
                                                    const Interval& B);

} // namespace bwl

#endif
