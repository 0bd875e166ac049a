#ifndef BWL_MAXIMAL_HPP
#define BWL_MAXIMAL_HPP

#include <vector>

#include "bwl/grid.hpp"
#include "bwl/measure.hpp"
#include "bwl/weights.hpp"

namespace bwl {

/// lambda-maximal function at a point: max over dyadic-endpoint intervals
/// B containing x (within the window) of the nu_lambda-average of |f|.
double lambda_maximal(const GridFunction& f, const LambdaMeasure& mu, double x);

/// Per-cell values of the lambda-maximal function over the whole grid
/// (the maximal function is constant on cell interiors). Exact over the
/// endpoint family; O(n log^2 n).
GridFunction lambda_maximal_grid(const GridFunction& f, const LambdaMeasure& mu);

/// Conditional expectation at dyadic level k: on each level-k cell the
/// nu_lambda-average of |f| over it. Requires k <= f.level().
GridFunction dyadic_expectation(const GridFunction& f, const LambdaMeasure& mu, int k);

/// Dyadic maximal function: pointwise max of the expectations over levels
/// from the window scale (-L) to the grid resolution.
GridFunction dyadic_maximal(const GridFunction& f, const LambdaMeasure& mu);

/// Calderon-Zygmund decomposition of |f| at height alpha under nu_lambda.
struct CZDecomposition {
    double alpha = 0.0;
    std::vector<DyadicInterval> selected;
    std::vector<double> averages;   // nu-average of |f| per selected cell
    double good_bound = 0.0;        // sup of |f| on grid cells off the selected set
    double total_nu_measure = 0.0;  // sum of nu(selected)
    double l1_norm = 0.0;           // integral of |f| d nu over the window
};

/// Top-down stopping time from the window-scale root cell (0, 2^L]; if the
/// root average already exceeds alpha the root is lifted until it does not.
CZDecomposition cz_decompose(const GridFunction& f, const LambdaMeasure& mu, double alpha);

/// Geometric alpha grid 2^{k/per_octave}, |k| <= m*per_octave.
struct AlphaGrid {
    int m = 12;
    int per_octave = 2;
    std::vector<double> values() const;
};

struct ProbeEntry {
    bool skipped = false;  // zero-norm input
    double weak_constant = 0.0;
    double strong_ratio = 0.0;
};

/// Weak- and strong-type boundedness probe for the lambda-maximal operator on
/// L^p(w dt): per f, sup_alpha alpha^p w({M f > alpha}) / integral |f|^p w dt,
/// and ||M f||_{L^p(w dt)} / ||f||_{L^p(w dt)}.
std::vector<ProbeEntry> boundedness_probe(const std::vector<GridFunction>& family,
                                          const Weight& w, double p, const LambdaMeasure& mu,
                                          const AlphaGrid& alphas = {});

} // namespace bwl

#endif
