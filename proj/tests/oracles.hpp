#ifndef BWL_TEST_ORACLES_HPP
#define BWL_TEST_ORACLES_HPP

// Independent reference implementations used only by tests. Each oracle takes
// a deliberately different code path from the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "bwl/grid.hpp"
#include "bwl/maximal.hpp"
#include "bwl/measure.hpp"

namespace bwl::test {

// deterministic rng (splitmix64), identical across platforms
inline std::uint64_t mix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
inline double urand(std::uint64_t& s) { return static_cast<double>(mix64(s) >> 11) * 0x1.0p-53; }

inline Interval random_interval(std::uint64_t& s, const Window& w) {
    const double lo = w.lo();
    const double hi = w.hi();
    // log-uniform endpoints
    const double x = lo * std::pow(hi / lo, urand(s));
    const double y = lo * std::pow(hi / lo, urand(s));
    const double a = std::min(x, y);
    const double b = std::max(x, y);
    return b > a ? Interval(a, b) : Interval(a, a * 1.5 > hi ? hi : a * 1.5);
}

inline GridFunction random_grid_function(std::uint64_t& s, Window w, int level, double lo = -2.0,
                                         double hi = 2.0) {
    GridFunction g = GridFunction::constant(w, level, 0.0);
    for (auto& v : g.values()) v = lo + (hi - lo) * urand(s);
    return g;
}

// refined-quadrature oracle: integral of f(t) t^beta over B, evaluating f
// pointwise on a 4x-subdivided grid (subpieces aligned to cells so piecewise
// constants are reproduced exactly) and integrating t^beta per piece
inline double oracle_integrate(const GridFunction& f, double beta, const Interval& B,
                               int subdiv = 4) {
    const double a = std::max(B.a, f.window().lo());
    const double b = std::min(B.b, f.window().hi());
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = std::max(f.cell_left(i), a);
        const double ch = std::min(f.cell_right(i), b);
        if (ch <= cl) continue;
        const double w = (ch - cl) / subdiv;
        for (int k = 0; k < subdiv; ++k) {
            const double lo = cl + k * w;
            const double hi = k + 1 == subdiv ? ch : lo + w;
            acc += f(0.5 * (lo + hi)) * moment(beta, lo, hi);
        }
    }
    return acc;
}

// brute-force lambda-maximal at x over all boundary pairs
inline double oracle_lambda_maximal(const GridFunction& f, const LambdaMeasure& mu, double x) {
    const std::size_t n = f.size();
    std::vector<double> Nu(n + 1, 0.0), Fa(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = moment(mu.nu_exponent(), f.cell_left(i), f.cell_right(i));
        Nu[i + 1] = Nu[i] + m;
        Fa[i + 1] = Fa[i] + std::abs(f.values()[i]) * m;
    }
    const std::size_t ix = f.cell_index(x);
    double best = 0.0;
    for (std::size_t u = 0; u <= ix; ++u)
        for (std::size_t v = ix + 1; v <= n; ++v)
            best = std::max(best, (Fa[v] - Fa[u]) / (Nu[v] - Nu[u]));
    return best;
}

// brute-force per-cell lambda-maximal
inline std::vector<double> oracle_maximal_grid(const GridFunction& f, const LambdaMeasure& mu) {
    const std::size_t n = f.size();
    std::vector<double> Nu(n + 1, 0.0), Fa(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double m = moment(mu.nu_exponent(), f.cell_left(i), f.cell_right(i));
        Nu[i + 1] = Nu[i] + m;
        Fa[i + 1] = Fa[i] + std::abs(f.values()[i]) * m;
    }
    std::vector<double> M(n, 0.0);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v <= n; ++v) {
            const double avg = (Fa[v] - Fa[u]) / (Nu[v] - Nu[u]);
            for (std::size_t i = u; i < v; ++i) M[i] = std::max(M[i], avg);
        }
    return M;
}

// independent recursive stopping time for the CZ cross-check
inline void oracle_cz(const GridFunction& f, const LambdaMeasure& mu, double alpha,
                      const DyadicInterval& cell, std::vector<DyadicInterval>& sel) {
    const double lo = std::max(cell.lower(), f.window().lo());
    const double hi = std::min(cell.upper(), f.window().hi());
    if (hi <= lo) return;
    GridFunction absf = f;
    for (auto& v : absf.values()) v = std::abs(v);
    const double mass = integrate(absf, mu.nu_exponent(), Interval(lo, hi));
    if (!(mass > 0.0)) return;
    const double avg = mass / measure_of(mu, MeasureKind::nu, cell);
    if (avg > alpha) {
        sel.push_back(cell);
        return;
    }
    if (cell.k >= f.level()) return;
    oracle_cz(f, mu, alpha, cell.left_child(), sel);
    oracle_cz(f, mu, alpha, cell.right_child(), sel);
}

// a-grid infimum oracle for the norm-equivalent BMO characterization
inline double oracle_bmo_infimum(const GridFunction& f, const LambdaMeasure& mu,
                                 const std::vector<Interval>& family) {
    double worst = 0.0;
    for (const auto& B : family) {
        const double nuB = moment(mu.nu_exponent(), B.a, B.b);
        std::vector<double> candidates;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double cl = f.cell_left(i);
            if (cl >= B.b) break;
            if (f.cell_right(i) <= B.a) continue;
            candidates.push_back(f.values()[i]);
        }
        double best = infinity();
        for (double a : candidates) {
            double osc = 0.0;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const double cl = f.cell_left(i);
                if (cl >= B.b) break;
                const double cr = f.cell_right(i);
                if (cr <= B.a) continue;
                osc += std::abs(f.values()[i] - a) *
                       moment(mu.nu_exponent(), std::max(cl, B.a), std::min(cr, B.b));
            }
            best = std::min(best, osc / nuB);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace bwl::test

#endif
