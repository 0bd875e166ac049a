#include <doctest.h>

#include <cmath>
#include <fstream>

#include "bwl/operators.hpp"
#include "bwl/oscillation.hpp"
#include "oracles.hpp"

using namespace bwl;

namespace {

// kernel form of the commutator, the identity's other side
double kernel_form(const GridFunction& b, const Kernel& K, const GridFunction& f,
                   const LambdaMeasure& mu, double delta, double x) {
    double acc = 0.0;
    const double bx = b(x);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        const double cr = f.cell_right(i);
        const double v = f.values()[i];
        if (v == 0.0) continue;
        const double lh = std::min(cr, x - delta);
        if (lh > cl) {
            const double m = 0.5 * (cl + lh);
            acc += (bx - b.values()[i]) * K.eval(x, m) * v * moment(mu.m_exponent(), cl, lh);
        }
        const double rl = std::max(cl, x + delta);
        if (cr > rl) {
            const double m = 0.5 * (rl + cr);
            acc += (bx - b.values()[i]) * K.eval(x, m) * v * moment(mu.m_exponent(), rl, cr);
        }
    }
    return acc;
}

} // namespace

TEST_SUITE("operators") {

TEST_CASE("apply_operator closed forms") {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    GridFunction ind = GridFunction::indicator(w, 10, 1.0, 2.0);

    CHECK(apply_operator(constant_kernel(0.0), ind, mu, 0.0, 4.0) == 0.0);
    CHECK(apply_operator(constant_kernel(1.0), ind, mu, 0.0, 4.0) ==
          doctest::Approx(1.5).epsilon(1e-12));

    const double want = 4.0 * std::log(1.5) - 1.0;
    CHECK(apply_operator(hilbert_kernel(), ind, mu, ind.cell_width(), 4.0) ==
          doctest::Approx(want).epsilon(1e-4));
    CHECK_THROWS_AS(apply_operator(hilbert_kernel(), ind, mu, 0.0, 4.0), std::domain_error);
}

TEST_CASE("commutator identities") {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    GridFunction ind = GridFunction::indicator(w, 10, 1.0, 2.0);

    GridFunction cb = GridFunction::constant(w, 10, 9.0);
    CHECK(commutator_apply(cb, constant_kernel(1.0), ind, mu, 0.0, 4.0) ==
          doctest::Approx(0.0).epsilon(1e-12));

    // b is midpoint-sampled, so b(4) sits half a cell below 4
    GridFunction tb = GridFunction::sample(w, 10, [](double t) { return t; });
    CHECK(commutator_apply(tb, constant_kernel(1.0), ind, mu, 0.0, 4.0) ==
          doctest::Approx(11.0 / 3.0).epsilon(1e-3));

    // difference form vs kernel form
    std::uint64_t s = 121;
    for (int trial = 0; trial < 25; ++trial) {
        GridFunction b = test::random_grid_function(s, w, 7, -1.0, 1.0);
        GridFunction f = test::random_grid_function(s, w, 7, -1.0, 1.0);
        const Kernel K = trial % 2 == 0 ? hilbert_kernel() : constant_kernel(0.7);
        const double delta = K.singular ? f.cell_width() : 0.0;
        const double x = 0.3 + 7.0 * test::urand(s);
        const double diff_form = commutator_apply(b, K, f, mu, delta, x);
        const double kern_form = kernel_form(b, K, f, mu, delta, x);
        CHECK(diff_form == doctest::Approx(kern_form).epsilon(1e-10));
    }

    // adding a constant to b changes nothing
    GridFunction b = test::random_grid_function(s, w, 7, -1.0, 1.0);
    GridFunction bc = b;
    for (auto& v : bc.values()) v += 4.0;
    GridFunction f = test::random_grid_function(s, w, 7, -1.0, 1.0);
    const double lhs = commutator_apply(b, hilbert_kernel(), f, mu, f.cell_width(), 2.0);
    const double rhs = commutator_apply(bc, hilbert_kernel(), f, mu, f.cell_width(), 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("cauchy contour commutator") {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    GridFunction f = GridFunction::indicator(w, 8, 1.0, 2.0);

    GridFunction cb = GridFunction::constant(w, 8, 2.0);
    CHECK(std::abs(cauchy_commutator(cb, constant_kernel(1.0), f, mu, 0.0, 4.0, 0.0, 16)) <=
          1e-12);

    std::uint64_t s = 131;
    GridFunction b = GridFunction::sample(w, 8, [](double t) { return std::log(t); });
    for (const Kernel& K : {constant_kernel(1.0), hilbert_kernel()}) {
        const double delta = K.singular ? f.cell_width() : 0.0;
        for (double x : {0.5, 2.5, 6.0}) {
            const double direct = commutator_apply(b, K, f, mu, delta, x);
            const double contour = cauchy_commutator(b, K, f, mu, delta, x, 0.0, 64);
            CHECK(contour == doctest::Approx(direct).epsilon(1e-8));
        }
    }

    // linearity in f
    GridFunction g = test::random_grid_function(s, w, 8, -1.0, 1.0);
    GridFunction h = test::random_grid_function(s, w, 8, -1.0, 1.0);
    GridFunction sum = g;
    for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += h.values()[i];
    const double cs = cauchy_commutator(b, constant_kernel(1.0), sum, mu, 0.0, 2.0, 0.0, 32);
    const double cg = cauchy_commutator(b, constant_kernel(1.0), g, mu, 0.0, 2.0, 0.0, 32);
    const double ch = cauchy_commutator(b, constant_kernel(1.0), h, mu, 0.0, 2.0, 0.0, 32);
    CHECK(cs == doctest::Approx(cg + ch).epsilon(1e-10));

    // spectral convergence: with a wide contour the N=16 truncation error is
    // visible and the N=64 one collapses
    double bmax = 0.0;
    for (double v : b.values()) bmax = std::max(bmax, std::abs(v));
    const double eps = 1.0 / bmax;
    const double direct = commutator_apply(b, constant_kernel(1.0), f, mu, 0.0, 2.5);
    const double e16 =
        std::abs(cauchy_commutator(b, constant_kernel(1.0), f, mu, 0.0, 2.5, eps, 16) - direct);
    const double e64 =
        std::abs(cauchy_commutator(b, constant_kernel(1.0), f, mu, 0.0, 2.5, eps, 64) - direct);
    CHECK(e64 <= 1e-2 * e16 + 1e-14);

    CHECK_THROWS_AS(cauchy_commutator(b, constant_kernel(1.0), f, mu, 0.0, 2.5, 0.0, 4),
                    std::domain_error);
}

TEST_CASE("operator norm probe") {
    const LambdaMeasure mu(0.5);
    const Window w(3);
    std::vector<GridFunction> family;
    for (double a : {0.25, 0.5, 1.0, 2.0})
        family.push_back(GridFunction::indicator(w, 7, a, 2.0 * a));

    CHECK(operator_norm_probe(constant_kernel(0.0), Weight::power(0.0), 2.0, mu, 0.0, family) ==
          0.0);

    const double small = operator_norm_probe(constant_kernel(1.0), Weight::power(0.0), 2.0, mu,
                                             0.0, {family[0], family[1]});
    const double large =
        operator_norm_probe(constant_kernel(1.0), Weight::power(0.0), 2.0, mu, 0.0, family);
    CHECK(large >= small - 1e-15);

    // rank-one oracle: K == 1 maps f to the constant integral f dm
    for (const auto& f : family) {
        double fm = 0.0, fn = 0.0, on = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Interval cell(f.cell_left(i), f.cell_right(i));
            const double wc = weighted_integral(Weight::power(0.0), 0.0, 1.0, cell);
            fm += f.values()[i] * moment(mu.m_exponent(), cell.a, cell.b);
            fn += std::pow(std::abs(f.values()[i]), 2.0) * wc;
            on += wc;
        }
        const double want = std::abs(fm) * std::sqrt(on) / std::sqrt(fn);
        const double got =
            operator_norm_probe(constant_kernel(1.0), Weight::power(0.0), 2.0, mu, 0.0, {f});
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("tabulated kernel plugin") {
    const LambdaMeasure mu(0.5);
    const Window w(1);
    GridFunction f = GridFunction::indicator(w, 3, 1.0, 2.0);

    const std::string path = "/tmp/bwl_test_kernel.csv";
    {
        std::ofstream os(path);
        os << "x,y,K\n";
        os.precision(17);
        for (std::size_t i = 0; i < f.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (i == j) continue;
                os << f.cell_mid(i) << ',' << f.cell_mid(j) << ",1.0\n";
            }
    }
    const Kernel K = tabulated_kernel_from_csv(f, path);
    // behaves like the constant kernel away from the diagonal; x on a cell
    // midpoint and a half-integral delta keep the quadrature on midpoints
    const double x = f.cell_mid(4);
    const double delta = 1.5 * f.cell_width();
    const double got = apply_operator(K, f, mu, delta, x);
    const double want = apply_operator(constant_kernel(1.0), f, mu, delta, x);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));

    // missing off-diagonal entries are rejected
    {
        std::ofstream os(path);
        os << "x,y,K\n";
        os << f.cell_mid(0) << ',' << f.cell_mid(1) << ",1.0\n";
    }
    CHECK_THROWS_AS(tabulated_kernel_from_csv(f, path), std::invalid_argument);
}

TEST_CASE("model kernel lower bound") {
    for (double lam : {-0.25, 0.5, 1.0}) {
        const LambdaMeasure mu(lam);
        const ModelLowerBoundKernel mk = make_model_kernel(mu);
        CHECK(mk.c_K > 0.0);
        std::uint64_t s = 137;
        const Window w(4);
        GridFunction grid = GridFunction::constant(w, 8, 1.0);
        for (int trial = 0; trial < 40; ++trial) {
            const double a = w.lo() + (1.0 - w.lo()) * test::urand(s);
            const double len = 0.05 + 0.5 * test::urand(s);
            const Interval B(a, a + len);
            const double r = 0.5 * B.length();
            const Interval Bt(B.a + mk.A1 * r, B.b + mk.A1 * r);
            if (Bt.b > w.hi()) continue;
            const double mBt = moment(mu.m_exponent(), Bt.a, Bt.b);
            int checked = 0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double x = grid.cell_mid(i);
                if (!B.contains(x)) continue;
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    const double y = grid.cell_mid(j);
                    if (!Bt.contains(y)) continue;
                    const double K = mk.kernel.eval(x, y);
                    CHECK(K > 0.0); // sign definite: y sits right of x
                    CHECK(std::abs(K) >= mk.c_K / mBt * (1 - 1e-12));
                    ++checked;
                }
                if (checked > 400) break;
            }
        }
    }
    CHECK_THROWS_AS(make_model_kernel(LambdaMeasure(1.0), 2.0, 5.0), std::domain_error);
}

TEST_CASE("lower bound sets") {
    const LambdaMeasure mu(0.5);
    const Window w(4);

    GridFunction cb = GridFunction::constant(w, 8, 3.3);
    const Interval B(0.5, 1.0);
    const LowerBoundSets cs = lower_bound_sets(cb, B, mu, 3.0, 5.0);
    CHECK(cs.alpha_median == 3.3);
    CHECK(cs.Btilde.a == doctest::Approx(1.25));
    CHECK(cs.Btilde.b == doctest::Approx(1.75));

    // indicator of the left half of Btilde
    GridFunction half = GridFunction::indicator(w, 8, 1.25, 1.5);
    const LowerBoundSets hs = lower_bound_sets(half, B, mu, 3.0, 5.0);
    CHECK((hs.alpha_median == 0.0 || hs.alpha_median == 1.0));

    std::uint64_t s = 139;
    for (int trial = 0; trial < 50; ++trial) {
        GridFunction b = test::random_grid_function(s, w, 8, -1.0, 1.0);
        const double a = w.lo() + test::urand(s);
        const double len = 0.05 + 0.4 * test::urand(s);
        const Interval Bi(a, a + len);
        const LowerBoundSets sets = lower_bound_sets(b, Bi, mu, 3.0, 5.0);

        // (i) covers and half-measure
        double mBt = 0.0, mF1 = 0.0, mF2 = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double cl = b.cell_left(i);
            const double cr = b.cell_right(i);
            if (cr <= sets.Btilde.a || cl >= sets.Btilde.b) continue;
            mBt += moment(mu.m_exponent(), std::max(cl, sets.Btilde.a),
                          std::min(cr, sets.Btilde.b));
        }
        auto setmass = [&](const std::vector<std::size_t>& cells) {
            double m = 0.0;
            for (std::size_t i : cells)
                m += moment(mu.m_exponent(), std::max(b.cell_left(i), sets.Btilde.a),
                            std::min(b.cell_right(i), sets.Btilde.b));
            return m;
        };
        mF1 = setmass(sets.F1);
        mF2 = setmass(sets.F2);
        CHECK(mF1 >= 0.5 * mBt * (1 - 1e-12));
        CHECK(mF2 >= 0.5 * mBt * (1 - 1e-12));

        // (ii) + (iii) cellwise on E_i x F_i
        auto check_pair = [&](const std::vector<std::size_t>& E,
                              const std::vector<std::size_t>& F) {
            for (std::size_t xi : E) {
                for (std::size_t yi : F) {
                    const double dx = b.values()[xi] - sets.alpha_median;
                    const double dxy = b.values()[xi] - b.values()[yi];
                    CHECK(dx * dxy >= -1e-15);            // same sign
                    CHECK(std::abs(dx) <= std::abs(dxy) + 1e-15);
                }
            }
        };
        check_pair(sets.E1, sets.F1);
        check_pair(sets.E2, sets.F2);
    }

    CHECK_THROWS_AS(lower_bound_sets(cb, Interval(10.0, 14.0), mu, 3.0, 5.0), std::domain_error);
}

TEST_CASE("oscillation lower estimate") {
    const LambdaMeasure mu(0.5);
    const Window w(4);
    const ModelLowerBoundKernel mk = make_model_kernel(mu);

    GridFunction cb = GridFunction::constant(w, 7, 1.0);
    const auto flat = oscillation_lower_estimate(cb, Weight::power(1.0), 2.0, mu, mk,
                                                 Interval(0.5, 1.0));
    CHECK(flat.osc == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(flat.probe >= 0.0);

    GridFunction lnb = GridFunction::sample(w, 7, [](double t) { return std::log(t); });
    const auto est =
        oscillation_lower_estimate(lnb, Weight::power(1.0), 2.0, mu, mk, Interval(0.5, 1.5));
    CHECK(est.osc > 0.0);
    CHECK(est.osc <= 1e3 * est.probe);

    // homogeneity in b
    GridFunction lnb2 = lnb;
    for (auto& v : lnb2.values()) v *= 2.0;
    const auto est2 =
        oscillation_lower_estimate(lnb2, Weight::power(1.0), 2.0, mu, mk, Interval(0.5, 1.5));
    CHECK(est2.osc == doctest::Approx(2.0 * est.osc).epsilon(1e-9));
    CHECK(est2.probe == doctest::Approx(2.0 * est.probe).epsilon(1e-6));
}

} // TEST_SUITE
