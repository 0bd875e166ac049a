#include "bwl/weights.hpp"

#include <algorithm>
#include <cmath>

#include "bwl/parallel.hpp"

namespace bwl {

Weight::Weight(GridFunction g) : rep_(std::move(g)) {
    const auto& gf = std::get<GridFunction>(rep_);
    for (double v : gf.values())
        if (!(v >= 1e-12 && v <= 1e12))
            throw std::domain_error("Weight: tabulated values must lie in [1e-12, 1e12]");
}

double Weight::operator()(double t) const {
    if (is_power()) return std::pow(t, alpha());
    return grid()(t);
}

std::string ClassKind::name() const {
    std::string base;
    switch (family) {
        case Family::ap: base = "ap"; break;
        case Family::ap_lambda: base = "apl"; break;
        case Family::ap_lambda_tilde: base = "aplt"; break;
    }
    return local ? base + "_local" : base;
}

double conjugate_exponent(double p) {
    if (!(p > 1.0)) throw std::domain_error("conjugate_exponent: p > 1 required");
    return p / (p - 1.0);
}

double weighted_integral(const Weight& w, double gamma, double s, const Interval& B) {
    if (w.is_power()) return moment(gamma + s * w.alpha(), B.a, B.b);
    const GridFunction& g = w.grid();
    const double lo = g.window().lo();
    const double hi = g.window().hi();
    if (B.a < lo * (1.0 - 1e-12) || B.b > hi * (1.0 + 1e-12))
        throw std::domain_error("weighted_integral: B outside tabulated window");
    double acc = 0.0;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double cl = g.cell_left(i);
        if (cl >= B.b) break;
        const double cr = g.cell_right(i);
        if (cr <= B.a) continue;
        const double clo = std::max(cl, B.a);
        const double chi = std::min(cr, B.b);
        acc += std::pow(g.values()[i], s) * moment(gamma, clo, chi);
    }
    return acc;
}

namespace {

// Integrand exponents for the kind's two brackets: integral of t^{g1} w and
// t^{g2} w^{-1/(p-1)}, both divided by the normalizer (Lebesgue or nu).
struct ProductShape {
    double g1;
    double g2;
    bool lebesgue_norm;
};

ProductShape shape_of(const ClassKind& kind, double p, const LambdaMeasure& mu) {
    const double pp = conjugate_exponent(p);
    switch (kind.family) {
        case ClassKind::Family::ap: return {0.0, 0.0, true};
        case ClassKind::Family::ap_lambda: return {p, 2.0 * mu.lambda() * pp, false};
        case ClassKind::Family::ap_lambda_tilde:
        default: return {0.0, (2.0 * mu.lambda() + 1.0) * pp, false};
    }
}

} // namespace

double interval_product(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind,
                        const Interval& B) {
    if (!(p > 1.0)) throw std::domain_error("interval_product: p > 1 required");
    const ProductShape sh = shape_of(kind, p, mu);
    const double norm = sh.lebesgue_norm ? B.length() : measure_of(mu, MeasureKind::nu, B);
    const double s = -1.0 / (p - 1.0);
    const double first = weighted_integral(w, sh.g1, 1.0, B) / norm;
    const double second = weighted_integral(w, sh.g2, s, B) / norm;
    return first * std::pow(second, p - 1.0);
}

std::vector<double> endpoint_mesh(const Window& window, int resolution,
                                  const GridFunction* align) {
    if (resolution < 0 || resolution > 16)
        throw std::domain_error("endpoint_mesh: resolution out of range");
    std::vector<double> pts;
    const int steps = 1 << resolution;
    pts.reserve(static_cast<std::size_t>(2 * window.L) * steps + 1);
    for (int l = -window.L; l < window.L; ++l)
        for (int m = 0; m < steps; ++m)
            pts.push_back(std::ldexp(1.0 + static_cast<double>(m) / steps, l));
    pts.push_back(window.hi());
    if (align) {
        // keep only points that are cell boundaries of the aligned grid
        const double wlo = align->window().lo();
        const double whi = align->window().hi();
        const double scale = std::ldexp(1.0, align->level());
        std::vector<double> kept;
        kept.reserve(pts.size());
        for (double t : pts) {
            if (t < wlo || t > whi) continue;
            const double idx = t * scale;
            if (idx == std::floor(idx)) kept.push_back(t);
        }
        pts.swap(kept);
        if (pts.size() < 2) throw std::domain_error("endpoint_mesh: empty family after alignment");
    }
    return pts;
}

namespace {

// Prefix-sum evaluator for tabulated weights so each mesh interval costs O(1).
struct TabulatedPrefix {
    const GridFunction* g = nullptr;
    std::vector<double> first;  // integral of t^{g1} w over cells [0, i)
    std::vector<double> second; // integral of t^{g2} w^{-1/(p-1)}
    std::vector<double> norm;   // Lebesgue length or nu measure
    std::vector<std::size_t> mesh_cell; // boundary index per mesh point

    TabulatedPrefix(const GridFunction& grid, const ProductShape& sh, double s,
                    const LambdaMeasure& mu, const std::vector<double>& mesh) {
        g = &grid;
        const std::size_t n = grid.size();
        first.assign(n + 1, 0.0);
        second.assign(n + 1, 0.0);
        norm.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double cl = grid.cell_left(i);
            const double cr = grid.cell_right(i);
            const double v = grid.values()[i];
            first[i + 1] = first[i] + v * moment(sh.g1, cl, cr);
            second[i + 1] = second[i] + std::pow(v, s) * moment(sh.g2, cl, cr);
            norm[i + 1] = norm[i] + (sh.lebesgue_norm ? (cr - cl) : moment(mu.nu_exponent(), cl, cr));
        }
        mesh_cell.reserve(mesh.size());
        const double scale = std::ldexp(1.0, grid.level());
        const double lo_scaled = grid.window().lo() * scale;
        for (double t : mesh)
            mesh_cell.push_back(static_cast<std::size_t>(std::llround(t * scale - lo_scaled)));
    }

    double product(std::size_t i, std::size_t j, double p) const {
        const std::size_t u = mesh_cell[i];
        const std::size_t v = mesh_cell[j];
        const double nm = norm[v] - norm[u];
        const double f = (first[v] - first[u]) / nm;
        const double sec = (second[v] - second[u]) / nm;
        return f * std::pow(sec, p - 1.0);
    }
};

struct BestInterval {
    double value = -1.0;
    std::size_t i = 0;
    std::size_t j = 0;

    bool better_than(const BestInterval& o) const {
        if (value != o.value) return value > o.value;
        if (i != o.i) return i < o.i;
        return j < o.j;
    }
};

} // namespace

WeightConstantReport weight_constant(const Weight& w, double p, const LambdaMeasure& mu,
                                     const ClassKind& kind, const Window& window, int resolution) {
    if (!(p > 1.0)) throw std::domain_error("weight_constant: p > 1 required");
    if (kind.local && !(kind.k > 1.0)) throw std::domain_error("weight_constant: local k > 1 required");

    const std::vector<double> mesh =
        endpoint_mesh(window, resolution, w.is_power() ? nullptr : &w.grid());
    const std::size_t n = mesh.size();
    if (n < 2) throw std::domain_error("weight_constant: empty interval family");

    const ProductShape sh = shape_of(kind, p, mu);
    const double s = -1.0 / (p - 1.0);
    std::optional<TabulatedPrefix> prefix;
    if (!w.is_power()) prefix.emplace(w.grid(), sh, s, mu, mesh);

    const double alpha = w.is_power() ? w.alpha() : 0.0;
    const double e1 = sh.g1 + alpha;
    const double e2 = sh.g2 + s * alpha;
    const double enu = mu.nu_exponent();

    // count intervals per left endpoint to keep a flat pair index
    std::vector<std::size_t> row_begin(n + 1, 0);
    std::vector<std::size_t> row_end(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t jmax = n;
        if (kind.local) {
            const double cap = kind.k * mesh[i];
            jmax = static_cast<std::size_t>(
                std::upper_bound(mesh.begin() + static_cast<std::ptrdiff_t>(i) + 1, mesh.end(), cap) -
                mesh.begin());
        }
        row_end[i] = jmax;
        row_begin[i + 1] = row_begin[i] + (jmax - i - 1);
    }
    const std::size_t total = row_begin[n];
    if (total == 0) throw std::domain_error("weight_constant: empty interval family");

    auto eval = [&](std::size_t i, std::size_t j) -> double {
        if (prefix) return prefix->product(i, j, p);
        const double a = mesh[i];
        const double b = mesh[j];
        const double nm = sh.lebesgue_norm ? (b - a) : moment(enu, a, b);
        return (moment(e1, a, b) / nm) * std::pow(moment(e2, a, b) / nm, p - 1.0);
    };

    const BestInterval best = par::reduce(
        n, BestInterval{},
        [&](BestInterval acc, std::size_t i) {
            for (std::size_t j = i + 1; j < row_end[i]; ++j) {
                const double v = eval(i, j);
                BestInterval cand{v, i, j};
                if (cand.better_than(acc)) acc = cand;
            }
            return acc;
        },
        [](BestInterval a, BestInterval b) { return b.better_than(a) ? b : a; });

    WeightConstantReport rep;
    rep.value = best.value;
    rep.argmax = Interval(mesh[best.i], mesh[best.j]);
    rep.p = p;
    rep.lambda = mu.lambda();
    rep.kind = kind;
    if (w.is_power()) rep.alpha = w.alpha();
    rep.window_L = window.L;
    rep.resolution = resolution;
    rep.interval_count = total;
    return rep;
}

WeightConstantReport local_constant(const Weight& w, double p, const LambdaMeasure& mu,
                                    const ClassKind& kind, const Window& window, int resolution) {
    if (!kind.local) throw std::domain_error("local_constant: non-local kind");
    if (!(kind.k > 1.0)) throw std::domain_error("local_constant: k > 1 required");
    return weight_constant(w, p, mu, kind, window, resolution);
}

PowerMembership power_membership(double alpha, double p, double lambda, const ClassKind& kind) {
    if (kind.local)
        throw std::domain_error("power_membership: local kinds admit every power weight");
    if (!(p > 1.0)) throw std::domain_error("power_membership: p > 1 required");
    LambdaMeasure mu(lambda); // validates lambda
    PowerMembership r;
    switch (kind.family) {
        case ClassKind::Family::ap:
            r.lo = -1.0;
            r.hi = p - 1.0;
            break;
        case ClassKind::Family::ap_lambda:
            r.lo = -1.0 - p;
            r.hi = p - 1.0 + 2.0 * lambda * p;
            break;
        case ClassKind::Family::ap_lambda_tilde:
            r.lo = -1.0;
            r.hi = p - 1.0 + (2.0 * lambda + 1.0) * p;
            break;
    }
    r.member = r.lo < alpha && alpha < r.hi;
    return r;
}

DualWeight dual_weight(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind) {
    const double pp = conjugate_exponent(p);
    const double s = -1.0 / (p - 1.0);
    double e = 0.0;
    switch (kind.family) {
        case ClassKind::Family::ap: e = 0.0; break;
        case ClassKind::Family::ap_lambda: e = (2.0 * mu.lambda() - 1.0) * pp; break;
        case ClassKind::Family::ap_lambda_tilde: e = (2.0 * mu.lambda() + 1.0) * pp; break;
    }
    if (w.is_power()) return {Weight::power(e + s * w.alpha()), pp};
    const GridFunction& g = w.grid();
    GridFunction dual = GridFunction::sample(g.window(), g.level(), [&](double t) {
        return std::pow(t, e) * std::pow(g(t), s);
    });
    return {Weight(std::move(dual)), pp};
}

double induced_integral(const Weight& w, double p, const LambdaMeasure& mu, InducedKind kind,
                        double a, double b) {
    const double pp = conjugate_exponent(p);
    const double gamma = kind == InducedKind::mu ? p : 2.0 * mu.lambda() * pp;
    const double s = kind == InducedKind::mu ? 1.0 : -1.0 / (p - 1.0);
    if (w.is_power()) {
        const double e = gamma + s * w.alpha();
        return a > 0.0 ? moment(e, a, b) : moment_from_zero(e, b);
    }
    const GridFunction& g = w.grid();
    const double lo = std::max(a, g.window().lo());
    if (!(b > lo)) return 0.0;
    return weighted_integral(w, gamma, s, Interval(lo, b));
}

double induced_doubling_probe(const Weight& w, double p, const LambdaMeasure& mu, InducedKind kind,
                              const Window& window, double eta, int resolution) {
    if (!(eta >= 1.0)) throw std::domain_error("induced_doubling_probe: eta >= 1 required");
    const std::vector<double> mesh =
        endpoint_mesh(window, resolution, w.is_power() ? nullptr : &w.grid());
    double worst = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        for (std::size_t j = i + 1; j < mesh.size(); ++j) {
            const Interval B(mesh[i], mesh[j]);
            const double c = B.center();
            const double h = eta * 0.5 * B.length();
            double lo = c - h;
            double hi = c + h;
            if (!w.is_power()) {
                lo = std::max(lo, w.grid().window().lo());
                hi = std::min(hi, w.grid().window().hi());
            } else {
                lo = std::max(lo, 0.0);
            }
            const double ratio =
                induced_integral(w, p, mu, kind, lo, hi) / induced_integral(w, p, mu, kind, B.a, B.b);
            worst = std::max(worst, ratio);
        }
    }
    return worst;
}

} // namespace bwl
