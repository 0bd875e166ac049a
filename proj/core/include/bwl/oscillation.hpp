#ifndef BWL_OSCILLATION_HPP
#define BWL_OSCILLATION_HPP

#include <vector>

#include "bwl/grid.hpp"
#include "bwl/measure.hpp"

namespace bwl {

/// Averaging measure for mean oscillation: nu_lambda (BMO_lambda) or
/// m_lambda (BMO for the Bessel-operator triple).
enum class BmoKind { nu_lambda, m_lambda };

/// Mean oscillation of f about its average on B, against the kind's measure.
double mean_oscillation(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                        BmoKind kind);

/// Sharp maximal function at x: max over dyadic-endpoint intervals containing
/// x of the mean oscillation.
double sharp_maximal(const GridFunction& f, const LambdaMeasure& mu, double x, BmoKind kind);

struct BmoResult {
    double norm = 0.0;
    Interval argmax{1.0, 2.0};
    int resolution = 0;
};

/// Sup of the mean oscillation over the octave-mesh interval family; a lower
/// bound of the true norm.
BmoResult bmo_norm(const GridFunction& f, const LambdaMeasure& mu, int resolution, BmoKind kind);

/// Smallest cell value alpha with m_lambda({f > alpha}) <= m_lambda(B)/2 and
/// m_lambda({f < alpha}) <= m_lambda(B)/2.
double median_value(const GridFunction& f, const Interval& B, const LambdaMeasure& mu);

/// John-Nirenberg profile on B: superlevel masses of |f - f_{B,nu}| against
/// the bound e * nu(B) * exp(-A t / ||f||), A = 1/(e c).
struct JnProfile {
    Interval base{1.0, 2.0};
    std::vector<double> thresholds;
    std::vector<double> masses;
    std::vector<double> bounds;
    double c_used = 0.0;
    double A = 0.0;
    double bmo = 0.0;
};

struct JnParams {
    double c = 0.0;          // 0: measure max doubling_ratio(nu, subcell, 2) over B
    int bmo_resolution = 6;  // octave mesh resolution for the norm
    int thresholds = 25;
};

JnProfile jn_profile(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                     const JnParams& params = {});

/// Exponential integrability per the John-Nirenberg corollary.
struct ExpIntegrability {
    double lhs = 0.0;     // (1/nu(B)) integral of e^{s |f - f_B|} d nu
    double cs = 0.0;      // 1 + e X/(1-X), X = |s| ||f|| / A
    double product = 0.0; // two-sided exponential product on B
    double cs_p = 0.0;    // cs^p
};

ExpIntegrability exp_integrability(const GridFunction& f, const Interval& B,
                                   const LambdaMeasure& mu, double s, double p,
                                   const JnParams& params = {});

} // namespace bwl

#endif
