#ifndef BWL_WEIGHTS_HPP
#define BWL_WEIGHTS_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bwl/grid.hpp"
#include "bwl/measure.hpp"

namespace bwl {

/// Power law t^alpha on the half line; integrals are closed form.
struct PowerWeight {
    double alpha;
};

/// Strictly positive weight on a window: either a power law or a tabulated
/// grid function. Tabulated values must lie in [1e-12, 1e12].
class Weight {
public:
    Weight(PowerWeight pw) : rep_(pw) {} // NOLINT(google-explicit-constructor)
    explicit Weight(GridFunction g);

    static Weight power(double alpha) { return Weight(PowerWeight{alpha}); }

    bool is_power() const { return std::holds_alternative<PowerWeight>(rep_); }
    double alpha() const { return std::get<PowerWeight>(rep_).alpha; }
    const GridFunction& grid() const { return std::get<GridFunction>(rep_); }

    double operator()(double t) const;

private:
    std::variant<PowerWeight, GridFunction> rep_;
};

/// Weight-class selector. Local variants restrict the interval family to
/// b <= k*a for a fixed k > 1.
struct ClassKind {
    enum class Family { ap, ap_lambda, ap_lambda_tilde };
    Family family = Family::ap_lambda;
    bool local = false;
    double k = 0.0;

    static ClassKind ap() { return {Family::ap, false, 0.0}; }
    static ClassKind ap_lambda() { return {Family::ap_lambda, false, 0.0}; }
    static ClassKind ap_lambda_tilde() { return {Family::ap_lambda_tilde, false, 0.0}; }
    static ClassKind ap_local(double k) { return {Family::ap, true, k}; }
    static ClassKind ap_lambda_local(double k) { return {Family::ap_lambda, true, k}; }
    static ClassKind ap_lambda_tilde_local(double k) { return {Family::ap_lambda_tilde, true, k}; }

    std::string name() const;
};

/// Value of a class constant over an enumerated interval family. The value is
/// the maximum of the per-interval products, hence a lower bound for the true
/// supremum; argmax ties resolve to smallest a, then smallest b.
struct WeightConstantReport {
    double value = 0.0;
    Interval argmax{1.0, 2.0};
    double p = 0.0;
    double lambda = 0.0;
    ClassKind kind;
    std::optional<double> alpha; // power weights only
    int window_L = 0;
    int resolution = 0;
    std::size_t interval_count = 0;
};

enum class InducedKind { mu, sigma }; // d(mu) = t^p w dt, d(sigma) = t^{2 lambda p'} w^{-1/(p-1)} dt

struct PowerMembership {
    bool member = false;
    double lo = 0.0; // open interval (lo, hi) of admissible alpha
    double hi = 0.0;
};

/// Dual weight together with the exponent p' it belongs to.
struct DualWeight {
    Weight weight;
    double p_prime;
};

double conjugate_exponent(double p);

/// Exact integral of t^gamma * w(t)^s over B.
double weighted_integral(const Weight& w, double gamma, double s, const Interval& B);

/// The kind's bracketed per-interval product on B.
double interval_product(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind,
                        const Interval& B);

/// Octave-uniform dyadic endpoint mesh for interval enumeration: per octave
/// (2^l, 2^{l+1}] the 2^resolution points 2^l (1 + m 2^{-resolution}), plus the
/// right window edge. When `align` is given, points are snapped to its cell
/// boundaries so tabulated integrals stay exact.
std::vector<double> endpoint_mesh(const Window& window, int resolution,
                                  const GridFunction* align = nullptr);

/// Supremum of interval_product over the mesh family (local kinds: b <= k*a).
WeightConstantReport weight_constant(const Weight& w, double p, const LambdaMeasure& mu,
                                     const ClassKind& kind, const Window& window, int resolution);

/// Local-kind entry point; requires kind.local and k > 1.
WeightConstantReport local_constant(const Weight& w, double p, const LambdaMeasure& mu,
                                    const ClassKind& kind, const Window& window, int resolution);

/// Exact-arithmetic power-weight membership oracle (non-local kinds).
PowerMembership power_membership(double alpha, double p, double lambda, const ClassKind& kind);

/// Dual factor: ap_lambda maps w to t^{(2 lambda - 1) p'} w^{-1/(p-1)}, the
/// tilde kind to t^{(2 lambda + 1) p'} w^{-1/(p-1)}, classical to w^{-1/(p-1)};
/// membership transfers with exponent p'.
DualWeight dual_weight(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind);

/// Integral of the induced density (mu or sigma) over (a, b), a >= 0.
double induced_integral(const Weight& w, double p, const LambdaMeasure& mu, InducedKind kind,
                        double a, double b);

/// Max over sampled mesh intervals of induced(eta B)/induced(B).
double induced_doubling_probe(const Weight& w, double p, const LambdaMeasure& mu, InducedKind kind,
                              const Window& window, double eta, int resolution = 3);

} // namespace bwl

#endif
