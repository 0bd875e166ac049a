#include "bwl/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>

#include "bwl/oscillation.hpp"

namespace bwl {

Kernel constant_kernel(double c) {
    return Kernel{[c](double, double) { return c; }, false, "constant"};
}

Kernel hilbert_kernel() {
    return Kernel{[](double x, double y) { return 1.0 / (x - y); }, true, "hilbert"};
}

Kernel tabulated_kernel_from_csv(const GridFunction& grid, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("kernel csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,y,K", 0) != 0)
        throw std::invalid_argument("kernel csv: missing header x,y,K");
    auto table = std::make_shared<std::map<std::pair<long, long>, double>>();
    const double scale = std::ldexp(1.0, grid.level() + 1); // midpoints sit on the half grid
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string tok;
        double v[3];
        for (int c = 0; c < 3; ++c) {
            if (!std::getline(row, tok, c < 2 ? ',' : '\n'))
                throw std::invalid_argument("kernel csv: malformed row");
            v[c] = std::stod(tok);
        }
        (*table)[{std::lround(v[0] * scale), std::lround(v[1] * scale)}] = v[2];
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (i == j) continue;
            const std::pair<long, long> key{std::lround(grid.cell_mid(i) * scale),
                                            std::lround(grid.cell_mid(j) * scale)};
            if (!table->count(key))
                throw std::invalid_argument("kernel csv: missing off-diagonal entry");
        }
    }
    return Kernel{[table, scale](double x, double y) {
                      const auto it =
                          table->find({std::lround(x * scale), std::lround(y * scale)});
                      if (it == table->end())
                          throw std::domain_error("tabulated kernel: off-grid evaluation");
                      return it->second;
                  },
                  true, "tabulated"};
}

ModelLowerBoundKernel make_model_kernel(const LambdaMeasure& mu, double A1, double A2) {
    if (!(3.0 <= A1 && A1 <= A2))
        throw std::domain_error("make_model_kernel: need 3 <= A1 <= A2");
    ModelLowerBoundKernel mk;
    mk.A1 = A1;
    mk.A2 = A2;
    const double me = mu.m_exponent();
    mk.kernel = Kernel{[me](double x, double y) {
                           const double lo = std::min(x, y);
                           const double hi = std::max(x, y);
                           return (y > x ? 1.0 : -1.0) / moment(me, lo, hi);
                       },
                       true, "model-lower-bound"};
    // c_K = inf over positions of m(Btilde)/m((B.a, Btilde.b]); the ratio is
    // scale invariant, so scan the offset a/r on a log grid plus the edge case.
    double ck = infinity();
    auto ratio_at = [&](double a) {
        const double r = 1.0;
        const double b_lo = a + A1 * r;          // Btilde = B + A1 r, B = (a, a+2r)
        const double b_hi = a + (A1 + 2.0) * r;
        const double span = a > 0.0 ? moment(me, a, b_hi) : moment_from_zero(me, b_hi);
        return moment(me, b_lo, b_hi) / span;
    };
    ck = std::min(ck, ratio_at(0.0));
    for (int k = -20; k <= 40; ++k) ck = std::min(ck, ratio_at(std::ldexp(1.0, k)));
    mk.c_K = 0.95 * ck;
    return mk;
}

namespace {

void require_truncation(const Kernel& K, const GridFunction& f, double delta) {
    if (delta < 0.0) throw std::domain_error("apply_operator: delta >= 0 required");
    if (K.singular && delta < f.cell_width())
        throw std::domain_error("apply_operator: singular kernel needs delta >= one cell width");
}

template <class Value>
Value apply_impl(const Kernel& K, const GridFunction& shape, const std::vector<Value>& vals,
                 const LambdaMeasure& mu, double delta, double x) {
    const double me = mu.m_exponent();
    Value acc{};
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const double cl = shape.cell_left(i);
        const double cr = shape.cell_right(i);
        const Value v = vals[i];
        if (v == Value{}) continue;
        // pieces of the cell with |x - y| > delta
        const double left_hi = std::min(cr, x - delta);
        if (left_hi > cl) acc += v * K.eval(x, 0.5 * (cl + left_hi)) * moment(me, cl, left_hi);
        const double right_lo = std::max(cl, x + delta);
        if (cr > right_lo) acc += v * K.eval(x, 0.5 * (right_lo + cr)) * moment(me, right_lo, cr);
    }
    return acc;
}

} // namespace

double apply_operator(const Kernel& K, const GridFunction& f, const LambdaMeasure& mu,
                      double delta, double x) {
    require_truncation(K, f, delta);
    return apply_impl<double>(K, f, f.values(), mu, delta, x);
}

std::complex<double> apply_operator(const Kernel& K, const GridFunction& shape,
                                    const std::vector<std::complex<double>>& values,
                                    const LambdaMeasure& mu, double delta, double x) {
    require_truncation(K, shape, delta);
    return apply_impl<std::complex<double>>(K, shape, values, mu, delta, x);
}

double commutator_apply(const GridFunction& b, const Kernel& K, const GridFunction& f,
                        const LambdaMeasure& mu, double delta, double x) {
    if (b.window().L != f.window().L || b.level() != f.level())
        throw std::domain_error("commutator_apply: b and f must share a grid");
    GridFunction bf = f;
    for (std::size_t i = 0; i < bf.size(); ++i) bf.values()[i] *= b.values()[i];
    return b(x) * apply_operator(K, f, mu, delta, x) - apply_operator(K, bf, mu, delta, x);
}

double cauchy_commutator(const GridFunction& b, const Kernel& K, const GridFunction& f,
                         const LambdaMeasure& mu, double delta, double x, double eps, int points) {
    if (points < 8) throw std::domain_error("cauchy_commutator: need at least 8 contour points");
    if (b.window().L != f.window().L || b.level() != f.level())
        throw std::domain_error("cauchy_commutator: b and f must share a grid");
    double bmax = 0.0;
    for (double v : b.values()) bmax = std::max(bmax, std::abs(v));
    if (bmax > 1e6) throw std::domain_error("cauchy_commutator: b values beyond 1e6");
    if (eps <= 0.0) eps = bmax > 0.0 ? 1.0 / (4.0 * bmax) : 1.0;

    const double bx = b(x);
    std::vector<std::complex<double>> damped(f.size());
    std::complex<double> acc = 0.0;
    for (int k = 0; k < points; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / points;
        const std::complex<double> z = eps * std::complex<double>(std::cos(theta), std::sin(theta));
        for (std::size_t i = 0; i < f.size(); ++i)
            damped[i] = std::exp(-z * b.values()[i]) * f.values()[i];
        const std::complex<double> Tz =
            std::exp(z * bx) * apply_operator(K, f, damped, mu, delta, x);
        acc += Tz / z;
    }
    return acc.real() / points;
}

double operator_norm_probe(const Kernel& K, const Weight& w, double p, const LambdaMeasure& mu,
                           double delta, const std::vector<GridFunction>& family) {
    if (family.empty()) throw std::domain_error("operator_norm_probe: empty family");
    double best = 0.0;
    for (const auto& f : family) {
        double fn = 0.0, tn = 0.0;
        std::vector<double> wcell(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            wcell[i] = weighted_integral(w, 0.0, 1.0, Interval(f.cell_left(i), f.cell_right(i)));
            fn += std::pow(std::abs(f.values()[i]), p) * wcell[i];
        }
        if (!(fn > 0.0)) continue; // zero-norm member skipped
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double tv = apply_operator(K, f, mu, delta, f.cell_mid(i));
            tn += std::pow(std::abs(tv), p) * wcell[i];
        }
        best = std::max(best, std::pow(tn / fn, 1.0 / p));
    }
    return best;
}

LowerBoundSets lower_bound_sets(const GridFunction& b, const Interval& B, const LambdaMeasure& mu,
                                double A1, double A2) {
    if (!(3.0 <= A1 && A1 <= A2)) throw std::domain_error("lower_bound_sets: need 3 <= A1 <= A2");
    const double r = 0.5 * B.length();
    const Interval Btilde(B.a + A1 * r, B.b + A1 * r);
    if (B.a < b.window().lo() || Btilde.b > b.window().hi())
        throw std::domain_error("lower_bound_sets: B and its translate must sit in the window");

    LowerBoundSets out;
    out.Btilde = Btilde;
    out.alpha_median = median_value(b, Btilde, mu);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double cl = b.cell_left(i);
        const double cr = b.cell_right(i);
        const double v = b.values()[i];
        if (cr > B.a && cl < B.b) {
            if (v >= out.alpha_median)
                out.E1.push_back(i);
            else
                out.E2.push_back(i);
        }
        if (cr > Btilde.a && cl < Btilde.b) {
            if (v <= out.alpha_median) out.F1.push_back(i);
            if (v >= out.alpha_median) out.F2.push_back(i);
        }
    }
    return out;
}

OscillationLowerEstimate oscillation_lower_estimate(const GridFunction& b, const Weight& w,
                                                    double p, const LambdaMeasure& mu,
                                                    const ModelLowerBoundKernel& K,
                                                    const Interval& B) {
    const LowerBoundSets sets = lower_bound_sets(b, B, mu, K.A1, K.A2);
    const double nuB = measure_of(mu, MeasureKind::nu, B);
    const double avg = integrate(b, mu.nu_exponent(), B) / nuB;

    OscillationLowerEstimate out;
    double osc = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double cl = b.cell_left(i);
        if (cl >= B.b) break;
        const double cr = b.cell_right(i);
        if (cr <= B.a) continue;
        osc += std::abs(b.values()[i] - avg) *
               moment(mu.nu_exponent(), std::max(cl, B.a), std::min(cr, B.b));
    }
    out.osc = osc / nuB;

    const Interval Bstar(B.a, sets.Btilde.b);
    const double pp = conjugate_exponent(p);
    const double dual_factor =
        std::pow(weighted_integral(w, (2.0 * mu.lambda() + 1.0) * pp, -1.0 / (p - 1.0), Bstar),
                 1.0 / pp);

    const double delta = b.cell_width();
    double sum = 0.0;
    for (const auto* cells : {&sets.F1, &sets.F2}) {
        GridFunction chi = GridFunction::constant(b.window(), b.level(), 0.0);
        for (std::size_t i : *cells) chi.values()[i] = 1.0;
        double norm_p = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double tv = commutator_apply(b, K.kernel, chi, mu, delta, b.cell_mid(i));
            norm_p += std::pow(std::abs(tv), p) *
                      weighted_integral(w, 0.0, 1.0, Interval(b.cell_left(i), b.cell_right(i)));
        }
        sum += std::pow(norm_p, 1.0 / p);
    }
    out.probe = sum * dual_factor / nuB;
    return out;
}

} // namespace bwl
