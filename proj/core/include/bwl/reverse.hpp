#ifndef BWL_REVERSE_HPP
#define BWL_REVERSE_HPP

#include <vector>

#include "bwl/grid.hpp"
#include "bwl/measure.hpp"
#include "bwl/weights.hpp"

namespace bwl {

/// Reverse-Hoelder check for the kind's density against nu_lambda:
/// ap_lambda uses g = mu/nu = t^{p-2lambda-1} w, the tilde kind g = w/nu.
struct ReverseHolderReport {
    double epsilon = 0.0;
    double lhs = 0.0;    // ((1/nu(B)) integral g^{1+eps} d nu)^{1/(1+eps)}
    double rhs = 0.0;    // (1/nu(B)) integral g d nu
    double factor = 0.0; // lhs / rhs
    bool pass = false;   // lhs <= 2 rhs
    ClassKind::Family density_kind = ClassKind::Family::ap_lambda;
};

ReverseHolderReport reverse_holder(const Weight& w, double p, const LambdaMeasure& mu,
                                   const ClassKind& kind, double epsilon, const Interval& B);

/// epsilon = 1/(c [w]) from the reverse-type-constant proof; the theorem
/// statement's variant 1 + 1/(c [w]) sits behind `statement_form`.
double reverse_epsilon(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind,
                       const Window& window, int resolution, double c = 1024.0,
                       bool statement_form = false);

/// Shared context for the reverse-structure checks: the class constant, the
/// proof's epsilon, delta = eps/(1+eps), and the sweep's max reverse-Hoelder
/// factor over the mesh family.
struct ReverseContext {
    double p = 0.0;
    double lambda = 0.0;
    ClassKind kind;
    double class_constant = 0.0;
    double epsilon = 0.0;
    double delta = 0.0;
    double c_rh = 0.0; // max lhs/rhs over the enumerated family
    bool all_pass = false;
};

ReverseContext make_reverse_context(const Weight& w, double p, const LambdaMeasure& mu,
                                    const ClassKind& kind, const Window& window, int resolution,
                                    double c = 1024.0);

struct AbsoluteContinuity {
    double alpha = 0.0;      // nu(S)/nu(B)
    double beta_bound = 0.0; // 1 - (1-alpha)^p / C
    double mu_ratio = 0.0;   // induced(S)/induced(B)
    bool pass = false;
};

/// S is a union of disjoint subintervals of B (grid cells in practice).
AbsoluteContinuity absolute_continuity(const Weight& w, double p, const LambdaMeasure& mu,
                                       const ClassKind& kind, const Interval& B,
                                       const std::vector<Interval>& S, double class_constant);

struct RatioTesting {
    double ratio = 0.0; // induced(A)/induced(B)
    double bound = 0.0; // C_rh (nu(A)/nu(B))^delta
    double delta = 0.0;
};

RatioTesting ratio_testing(const ReverseContext& ctx, const Weight& w, const LambdaMeasure& mu,
                           const Interval& A, const Interval& B);

struct OpennessResult {
    double q_hat = 0.0;
    bool at_floor = false;
};

/// Bisection on q in (floor, p] for the smallest q keeping w in the tilde
/// class: exact-arithmetic membership for power weights, resolution-stability
/// of the measured constant for tabulated ones.
struct OpennessParams {
    double floor = 1.0 + 1e-3;
    int steps = 40;
    double stability_tol = 0.25;
};

OpennessResult openness_search(const Weight& w, double p, const LambdaMeasure& mu,
                               const Window& window, int resolution,
                               const OpennessParams& params = {});

struct TestingCharacterization {
    double lhs = 0.0; // mu(B) (lambda-average of f)^p
    double rhs = 0.0; // integral f^p d mu
    double constant = 0.0;
    bool skipped = false; // rhs == 0
};

TestingCharacterization testing_characterization(const Weight& w, double p,
                                                 const LambdaMeasure& mu, const GridFunction& f,
                                                 const Interval& B);

/// The proof's extremal function f = w^{-1/(p-1)} t^{(1+2lambda)/(p-1) - p'},
/// whose testing constant reproduces the ap_lambda per-interval product.
GridFunction extremal_testing_function(const Weight& w, double p, const LambdaMeasure& mu,
                                       Window window, int level);

} // namespace bwl

#endif
