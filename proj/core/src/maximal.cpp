#include "bwl/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bwl {

namespace {

// Prefix tables over the n+1 cell boundaries of f: Nu[i] = nu((lo, b_i]),
// Fa[i] = integral of |f| d nu over (lo, b_i].
struct Prefixes {
    std::vector<double> Nu;
    std::vector<double> Fa;
};

Prefixes build_prefixes(const GridFunction& f, const LambdaMeasure& mu) {
    const std::size_t n = f.size();
    Prefixes px;
    px.Nu.assign(n + 1, 0.0);
    px.Fa.assign(n + 1, 0.0);
    const double e = mu.nu_exponent();
    for (std::size_t i = 0; i < n; ++i) {
        const double m = moment(e, f.cell_left(i), f.cell_right(i));
        px.Nu[i + 1] = px.Nu[i] + m;
        px.Fa[i + 1] = px.Fa[i] + std::abs(f.values()[i]) * m;
    }
    return px;
}

inline double slope(const Prefixes& px, std::size_t u, std::size_t v) {
    return (px.Fa[v] - px.Fa[u]) / (px.Nu[v] - px.Nu[u]);
}

// Tangent search helpers: hulls hold boundary indices; N is strictly
// increasing so all x-coordinates are distinct.
struct HullPoint {
    double n;
    double f;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
    return (a.n - o.n) * (b.f - o.f) - (a.f - o.f) * (b.n - o.n);
}

// Max slope from p to the upper hull (hull ordered by increasing n, all
// strictly right of p). Slopes to hull vertices are unimodal.
double tangent_to_upper(const std::vector<HullPoint>& hull, const HullPoint& p) {
    std::size_t lo = 0;
    std::size_t hi = hull.size() - 1;
    auto sl = [&](std::size_t i) { return (hull[i].f - p.f) / (hull[i].n - p.n); };
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (sl(mid) < sl(mid + 1))
            lo = mid + 1;
        else
            hi = mid;
    }
    return sl(lo);
}

// Max slope from p (strictly right of the hull) back to the lower hull.
double tangent_to_lower(const std::vector<HullPoint>& hull, const HullPoint& p) {
    std::size_t lo = 0;
    std::size_t hi = hull.size() - 1;
    auto sl = [&](std::size_t i) { return (p.f - hull[i].f) / (p.n - hull[i].n); };
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (sl(mid) <= sl(mid + 1))
            lo = mid + 1;
        else
            hi = mid;
    }
    return sl(lo);
}

// M[i] = max over boundary pairs u <= i < v of the nu-average of |f| on
// (b_u, b_v]. Divide and conquer over the boundary range.
void max_covering(const Prefixes& px, std::size_t lo, std::size_t hi, std::vector<double>& M) {
    if (hi - lo == 1) {
        M[lo] = std::max(M[lo], slope(px, lo, hi));
        return;
    }
    const std::size_t mid = (lo + hi) / 2;

    auto pt = [&](std::size_t i) { return HullPoint{px.Nu[i], px.Fa[i]}; };

    // upper hull of boundaries [mid+1 .. hi]
    std::vector<HullPoint> upper;
    upper.reserve(hi - mid);
    for (std::size_t v = mid + 1; v <= hi; ++v) {
        const HullPoint q = pt(v);
        while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), q) >= 0.0)
            upper.pop_back();
        upper.push_back(q);
    }
    // lower hull of boundaries [lo .. mid]
    std::vector<HullPoint> lower;
    lower.reserve(mid - lo + 1);
    for (std::size_t u = lo; u <= mid; ++u) {
        const HullPoint q = pt(u);
        while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), q) <= 0.0)
            lower.pop_back();
        lower.push_back(q);
    }

    // cells [lo .. mid]: prefix max over u of the tangent to [mid+1 .. hi]
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t u = lo; u <= mid; ++u) {
        best = std::max(best, tangent_to_upper(upper, pt(u)));
        if (u < mid) {
            // pairs (u', mid), u' <= u, cover cells [u' .. mid-1]
            M[u] = std::max(M[u], best); // tangent part; (u', mid) handled below
        } else {
            M[mid] = std::max(M[mid], best);
        }
    }
    // pairs ending exactly at mid: prefix max of slope(u, mid) for cells < mid
    double best_mid = -std::numeric_limits<double>::infinity();
    for (std::size_t u = lo; u < mid; ++u) {
        best_mid = std::max(best_mid, slope(px, u, mid));
        M[u] = std::max(M[u], best_mid);
    }

    // cells [mid .. hi-1]: suffix max over v of the tangent back to [lo .. mid]
    double best_r = -std::numeric_limits<double>::infinity();
    for (std::size_t v = hi; v >= mid + 1; --v) {
        best_r = std::max(best_r, tangent_to_lower(lower, pt(v)));
        M[v - 1] = std::max(M[v - 1], best_r);
    }

    max_covering(px, lo, mid, M);
    max_covering(px, mid, hi, M);
}

} // namespace

double lambda_maximal(const GridFunction& f, const LambdaMeasure& mu, double x) {
    if (!f.window().contains(x)) throw std::domain_error("lambda_maximal: x outside window");
    const Prefixes px = build_prefixes(f, mu);
    const std::size_t n = f.size();
    // boundaries strictly below x and boundaries >= x
    const std::size_t ix = f.cell_index(x);
    const std::size_t u_max = ix;          // b_{ix} = cell_left(ix) < x
    const std::size_t v_min = ix + 1;      // b_{ix+1} = cell_right(ix) >= x
    // Dinkelbach iteration on theta = achievable average.
    double theta = slope(px, u_max, v_min);
    for (int iter = 0; iter < 128; ++iter) {
        std::size_t bu = 0;
        double bu_val = -std::numeric_limits<double>::infinity();
        for (std::size_t u = 0; u <= u_max; ++u) {
            const double v = theta * px.Nu[u] - px.Fa[u];
            if (v > bu_val) {
                bu_val = v;
                bu = u;
            }
        }
        std::size_t bv = v_min;
        double bv_val = -std::numeric_limits<double>::infinity();
        for (std::size_t v = v_min; v <= n; ++v) {
            const double val = px.Fa[v] - theta * px.Nu[v];
            if (val > bv_val) {
                bv_val = val;
                bv = v;
            }
        }
        const double next = slope(px, bu, bv);
        if (!(next > theta * (1.0 + 1e-15) + 1e-300)) break;
        theta = next;
    }
    return theta;
}

GridFunction lambda_maximal_grid(const GridFunction& f, const LambdaMeasure& mu) {
    const Prefixes px = build_prefixes(f, mu);
    const std::size_t n = f.size();
    std::vector<double> M(n, -std::numeric_limits<double>::infinity());
    max_covering(px, 0, n, M);
    return GridFunction(f.window(), f.level(), std::move(M));
}

GridFunction dyadic_expectation(const GridFunction& f, const LambdaMeasure& mu, int k) {
    if (k > f.level()) throw std::domain_error("dyadic_expectation: level finer than grid");
    const Prefixes px = build_prefixes(f, mu);
    GridFunction out = GridFunction::constant(f.window(), f.level(), 0.0);
    const double lo = f.window().lo();
    const double hi = f.window().hi();
    const std::size_t n = f.size();

    // walk the level-k cells overlapping the window
    const double width = std::ldexp(1.0, -k);
    std::uint64_t j = k >= f.window().L
                          ? static_cast<std::uint64_t>(std::floor(lo / width))
                          : 0; // coarse cells start at the origin cell
    std::size_t fine = 0;
    while (fine < n) {
        DyadicInterval cell{k, j};
        const double cl = cell.lower();
        const double ch = cell.upper();
        // fine cells inside (cl, ch]
        std::size_t fine_end = fine;
        while (fine_end < n && f.cell_right(fine_end) <= ch) ++fine_end;
        const double mass_lo = std::max(cl, lo);
        const double mass_hi = std::min(ch, hi);
        double avg = 0.0;
        if (mass_hi > mass_lo) {
            // prefix integral of |f| over the in-window part of the cell
            const double fa = px.Fa[fine_end] - px.Fa[fine];
            avg = fa / measure_of(mu, MeasureKind::nu, cell);
        }
        for (std::size_t i = fine; i < fine_end; ++i) out.values()[i] = avg;
        fine = fine_end;
        ++j;
    }
    return out;
}

GridFunction dyadic_maximal(const GridFunction& f, const LambdaMeasure& mu) {
    GridFunction out = GridFunction::constant(f.window(), f.level(), 0.0);
    for (int k = -f.window().L; k <= f.level(); ++k) {
        GridFunction ek = dyadic_expectation(f, mu, k);
        for (std::size_t i = 0; i < out.size(); ++i)
            out.values()[i] = std::max(out.values()[i], ek.values()[i]);
    }
    return out;
}

namespace {

struct CZWalker {
    const GridFunction* f;
    const LambdaMeasure* mu;
    const Prefixes* px;
    double alpha;
    CZDecomposition* out;
    double lo, hi;
    std::size_t n;

    // integral of |f| d nu over the in-window part of a cell, via prefixes
    double cell_mass(const DyadicInterval& cell) const {
        const double cl = cell.lower();
        const double ch = cell.upper();
        if (ch <= lo || cl >= hi) return 0.0;
        const double w = f->cell_width();
        const std::size_t i0 =
            cl <= lo ? 0 : static_cast<std::size_t>(std::llround((cl - lo) / w));
        const std::size_t i1 =
            ch >= hi ? n : static_cast<std::size_t>(std::llround((ch - lo) / w));
        return px->Fa[i1] - px->Fa[i0];
    }

    void descend(const DyadicInterval& cell) {
        const double mass = cell_mass(cell);
        if (mass <= 0.0) return;
        const double avg = mass / measure_of(*mu, MeasureKind::nu, cell);
        if (avg > alpha) {
            out->selected.push_back(cell);
            out->averages.push_back(avg);
            out->total_nu_measure += measure_of(*mu, MeasureKind::nu, cell);
            return;
        }
        if (cell.k >= f->level()) return;
        descend(cell.left_child());
        descend(cell.right_child());
    }
};

} // namespace

CZDecomposition cz_decompose(const GridFunction& f, const LambdaMeasure& mu, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("cz_decompose: alpha > 0 required");
    const Prefixes px = build_prefixes(f, mu);
    CZDecomposition out;
    out.alpha = alpha;
    out.l1_norm = px.Fa.back();

    if (out.l1_norm > 0.0) {
        // lift the root while its own average still exceeds the height, so
        // every selected cell has a parent with average <= alpha
        DyadicInterval root{-f.window().L, 0};
        while (out.l1_norm / measure_of(mu, MeasureKind::nu, root) > alpha) root = root.parent();
        CZWalker walker{&f, &mu, &px, alpha, &out, f.window().lo(), f.window().hi(), f.size()};
        walker.descend(root);
    }

    // good part: |f| on grid cells outside the selected set
    std::vector<char> covered(f.size(), 0);
    const double w = f.cell_width();
    for (const auto& cell : out.selected) {
        const double cl = std::max(cell.lower(), f.window().lo());
        const double ch = std::min(cell.upper(), f.window().hi());
        if (ch <= cl) continue;
        const std::size_t i0 = static_cast<std::size_t>(std::llround((cl - f.window().lo()) / w));
        const std::size_t i1 = static_cast<std::size_t>(std::llround((ch - f.window().lo()) / w));
        for (std::size_t i = i0; i < i1; ++i) covered[i] = 1;
    }
    double good = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (!covered[i]) good = std::max(good, std::abs(f.values()[i]));
    out.good_bound = good;
    return out;
}

std::vector<double> AlphaGrid::values() const {
    std::vector<double> v;
    for (int k = -m * per_octave; k <= m * per_octave; ++k)
        v.push_back(std::pow(2.0, static_cast<double>(k) / per_octave));
    return v;
}

std::vector<ProbeEntry> boundedness_probe(const std::vector<GridFunction>& family, const Weight& w,
                                          double p, const LambdaMeasure& mu,
                                          const AlphaGrid& alphas) {
    if (!(p > 1.0)) throw std::domain_error("boundedness_probe: p > 1 required");
    std::vector<ProbeEntry> out;
    const std::vector<double> agrid = alphas.values();
    for (const auto& f : family) {
        ProbeEntry entry;
        // cellwise weight masses over f's grid
        const std::size_t n = f.size();
        std::vector<double> wcell(n);
        double fpw = 0.0; // integral |f|^p w dt
        for (std::size_t i = 0; i < n; ++i) {
            wcell[i] = weighted_integral(w, 0.0, 1.0, Interval(f.cell_left(i), f.cell_right(i)));
            fpw += std::pow(std::abs(f.values()[i]), p) * wcell[i];
        }
        if (!(fpw > 0.0)) {
            entry.skipped = true;
            out.push_back(entry);
            continue;
        }
        const GridFunction M = lambda_maximal_grid(f, mu);
        double mpw = 0.0;
        for (std::size_t i = 0; i < n; ++i) mpw += std::pow(M.values()[i], p) * wcell[i];
        entry.strong_ratio = std::pow(mpw / fpw, 1.0 / p);

        double weak = 0.0;
        for (double a : agrid) {
            double mass = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                if (M.values()[i] > a) mass += wcell[i];
            weak = std::max(weak, std::pow(a, p) * mass / fpw);
        }
        entry.weak_constant = weak;
        out.push_back(entry);
    }
    return out;
}

} // namespace bwl
