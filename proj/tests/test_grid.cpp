#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bwl/grid.hpp"
#include "oracles.hpp"

using namespace bwl;

TEST_SUITE("grid") {

TEST_CASE("construction and evaluation") {
    const Window w(2);
    GridFunction f = GridFunction::constant(w, 4, 3.0);
    CHECK(f.size() == (1u << 6) - (1u << 2));
    CHECK(f(1.0) == 3.0);
    CHECK(f(4.0) == 3.0);   // right window edge included
    CHECK(f(0.25) == 0.0);  // left edge excluded
    CHECK(f(5.0) == 0.0);
    CHECK_THROWS_AS(GridFunction(w, 1, std::vector<double>(8, 0.0)), std::domain_error);

    // half-open cells: a boundary point belongs to the cell ending there
    const std::size_t i = f.cell_index(f.cell_right(5));
    CHECK(i == 5);
}

TEST_CASE("integrate closed forms") {
    const Window w(2);
    GridFunction one = GridFunction::constant(w, 6, 1.0);
    CHECK(integrate(one, 0.0, Interval(1, 2)) == doctest::Approx(1.0).epsilon(1e-14));
    GridFunction ind = GridFunction::indicator(w, 6, 1.0, 2.0);
    CHECK(integrate(ind, 2.0, Interval(w.lo(), 4.0)) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(integrate(one, 0.0, Interval(0.1, 2.0)), std::domain_error);
}

TEST_CASE("integrate matches refined-quadrature oracle") {
    std::uint64_t s = 11;
    const Window w(3);
    for (int trial = 0; trial < 40; ++trial) {
        GridFunction f = test::random_grid_function(s, w, 7);
        const Interval B = test::random_interval(s, w);
        const double beta = -2.0 + 5.0 * test::urand(s);
        const double got = integrate(f, beta, B);
        const double want = test::oracle_integrate(f, beta, B);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("integrate linear and additive") {
    std::uint64_t s = 13;
    const Window w(3);
    GridFunction f = test::random_grid_function(s, w, 6);
    GridFunction g = test::random_grid_function(s, w, 6);
    GridFunction h = f;
    for (std::size_t i = 0; i < h.size(); ++i) h.values()[i] = 2.0 * f.values()[i] - 3.0 * g.values()[i];
    const Interval B(0.5, 6.0);
    const double lin = integrate(h, 1.0, B);
    const double parts = 2.0 * integrate(f, 1.0, B) - 3.0 * integrate(g, 1.0, B);
    CHECK(lin == doctest::Approx(parts).epsilon(1e-12));

    const double mid = 2.0;
    const double whole = integrate(f, 1.0, Interval(0.5, 6.0));
    const double split = integrate(f, 1.0, Interval(0.5, mid)) + integrate(f, 1.0, Interval(mid, 6.0));
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("lambda_average") {
    const Window w(4);
    const LambdaMeasure mu(0.5);
    GridFunction c = GridFunction::constant(w, 8, 2.5);
    for (const Interval& B : {Interval(0.5, 1.0), Interval(1, 16), Interval(w.lo(), 2)})
        CHECK(lambda_average(c, B, mu) == doctest::Approx(2.5).epsilon(1e-13));

    // f(t) = t on (eps, 1): -> 3/4 as the window grows
    GridFunction t8 = GridFunction::sample(w, 10, [](double t) { return t; });
    const double a8 = lambda_average(t8, Interval(w.lo(), 1.0), mu);
    CHECK(a8 == doctest::Approx(0.75).epsilon(2e-3));
    const Window w6(6);
    GridFunction t12 = GridFunction::sample(w6, 12, [](double t) { return t; });
    const double a12 = lambda_average(t12, Interval(w6.lo(), 1.0), mu);
    CHECK(std::abs(a12 - 0.75) < std::abs(a8 - 0.75));

    GridFunction ind = GridFunction::indicator(w, 8, 1.0, 2.0);
    CHECK(lambda_average(ind, Interval(w.lo(), 2.0), mu) ==
          doctest::Approx(7.0 / 8.0).epsilon(1e-4));

    // average sits between min and max
    std::uint64_t s = 17;
    for (int trial = 0; trial < 30; ++trial) {
        GridFunction f = test::random_grid_function(s, w, 7);
        const Interval B = test::random_interval(s, w);
        const double avg = lambda_average(f, B, mu);
        CHECK(avg >= f.min_value() - 1e-12);
        CHECK(avg <= f.max_value() + 1e-12);
    }
}

TEST_CASE("csv round trip and validation") {
    const Window w(2);
    GridFunction f = GridFunction::sample(w, 5, [](double t) { return std::sin(t); });
    std::ostringstream os;
    write_csv(f, os);
    std::istringstream is(os.str());
    GridFunction g = read_csv(is);
    CHECK(g.level() == f.level());
    CHECK(g.window().L == f.window().L);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.values()[i] == f.values()[i]);

    std::istringstream gap("t_left,t_right,value\n0.25,0.5,1\n0.75,1.0,2\n");
    CHECK_THROWS_AS(read_csv(gap), std::invalid_argument);
    std::istringstream overlap("t_left,t_right,value\n0.25,0.75,1\n0.5,1.0,2\n");
    CHECK_THROWS_AS(read_csv(overlap), std::invalid_argument);
    std::istringstream badheader("a,b,c\n0.25,0.5,1\n");
    CHECK_THROWS_AS(read_csv(badheader), std::invalid_argument);
}

} // TEST_SUITE
