#include "bwl/reverse.hpp"

#include <cmath>

namespace bwl {

namespace {

void require_reverse_kind(const ClassKind& kind) {
    if (kind.local || kind.family == ClassKind::Family::ap)
        throw std::domain_error("reverse structure: kind must be ap_lambda or ap_lambda_tilde");
}

// integral of g^{1+eps} d nu over B, g the kind's density against nu
double density_power_integral(const Weight& w, double p, const LambdaMeasure& mu,
                              ClassKind::Family family, double one_plus_eps, const Interval& B) {
    const double base =
        family == ClassKind::Family::ap_lambda ? p - mu.nu_exponent() : -mu.nu_exponent();
    const double gamma = base * one_plus_eps + mu.nu_exponent();
    return weighted_integral(w, gamma, one_plus_eps, B);
}

} // namespace

ReverseHolderReport reverse_holder(const Weight& w, double p, const LambdaMeasure& mu,
                                   const ClassKind& kind, double epsilon, const Interval& B) {
    require_reverse_kind(kind);
    if (!(epsilon > 0.0)) throw std::domain_error("reverse_holder: epsilon > 0 required");
    const double nuB = measure_of(mu, MeasureKind::nu, B);
    ReverseHolderReport rep;
    rep.epsilon = epsilon;
    rep.density_kind = kind.family;
    rep.rhs = density_power_integral(w, p, mu, kind.family, 1.0, B) / nuB;
    const double hi = density_power_integral(w, p, mu, kind.family, 1.0 + epsilon, B) / nuB;
    rep.lhs = std::isfinite(hi) ? std::pow(hi, 1.0 / (1.0 + epsilon)) : infinity();
    rep.factor = rep.lhs / rep.rhs;
    rep.pass = std::isfinite(rep.lhs) && rep.lhs <= 2.0 * rep.rhs;
    return rep;
}

double reverse_epsilon(const Weight& w, double p, const LambdaMeasure& mu, const ClassKind& kind,
                       const Window& window, int resolution, double c, bool statement_form) {
    require_reverse_kind(kind);
    const double constant = weight_constant(w, p, mu, kind, window, resolution).value;
    if (!std::isfinite(constant)) throw std::domain_error("reverse_epsilon: infinite constant");
    const double eps = 1.0 / (c * constant);
    return statement_form ? 1.0 + eps : eps;
}

ReverseContext make_reverse_context(const Weight& w, double p, const LambdaMeasure& mu,
                                    const ClassKind& kind, const Window& window, int resolution,
                                    double c) {
    require_reverse_kind(kind);
    ReverseContext ctx;
    ctx.p = p;
    ctx.lambda = mu.lambda();
    ctx.kind = kind;
    ctx.class_constant = weight_constant(w, p, mu, kind, window, resolution).value;
    if (!std::isfinite(ctx.class_constant))
        throw std::domain_error("make_reverse_context: infinite constant");
    ctx.epsilon = 1.0 / (c * ctx.class_constant);
    ctx.delta = ctx.epsilon / (1.0 + ctx.epsilon);
    const std::vector<double> mesh =
        endpoint_mesh(window, resolution, w.is_power() ? nullptr : &w.grid());
    double worst = 0.0;
    bool all = true;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        for (std::size_t j = i + 1; j < mesh.size(); ++j) {
            const ReverseHolderReport r =
                reverse_holder(w, p, mu, kind, ctx.epsilon, Interval(mesh[i], mesh[j]));
            worst = std::max(worst, r.factor);
            all = all && r.pass;
        }
    }
    ctx.c_rh = worst;
    ctx.all_pass = all;
    return ctx;
}

AbsoluteContinuity absolute_continuity(const Weight& w, double p, const LambdaMeasure& mu,
                                       const ClassKind& kind, const Interval& B,
                                       const std::vector<Interval>& S, double class_constant) {
    require_reverse_kind(kind);
    if (!(class_constant >= 1.0))
        throw std::domain_error("absolute_continuity: class constant >= 1 required");
    const double nuB = measure_of(mu, MeasureKind::nu, B);
    // induced measure: d(mu) for ap_lambda, the plain w-measure for the tilde kind
    auto induced = [&](const Interval& I) {
        if (kind.family == ClassKind::Family::ap_lambda)
            return induced_integral(w, p, mu, InducedKind::mu, I.a, I.b);
        return weighted_integral(w, 0.0, 1.0, I);
    };
    AbsoluteContinuity out;
    double nuS = 0.0, indS = 0.0;
    for (const auto& piece : S) {
        if (!(piece.a >= B.a && piece.b <= B.b))
            throw std::domain_error("absolute_continuity: S must sit inside B");
        nuS += measure_of(mu, MeasureKind::nu, piece);
        indS += induced(piece);
    }
    out.alpha = nuS / nuB;
    if (!(out.alpha < 1.0)) throw std::domain_error("absolute_continuity: nu(S) must be < nu(B)");
    out.beta_bound = 1.0 - std::pow(1.0 - out.alpha, p) / class_constant;
    out.mu_ratio = indS / induced(B);
    out.pass = out.mu_ratio <= out.beta_bound + 1e-12;
    return out;
}

RatioTesting ratio_testing(const ReverseContext& ctx, const Weight& w, const LambdaMeasure& mu,
                           const Interval& A, const Interval& B) {
    if (!(A.a >= B.a && A.b <= B.b)) throw std::domain_error("ratio_testing: A must sit inside B");
    auto induced = [&](const Interval& I) {
        if (ctx.kind.family == ClassKind::Family::ap_lambda)
            return induced_integral(w, ctx.p, mu, InducedKind::mu, I.a, I.b);
        return weighted_integral(w, 0.0, 1.0, I);
    };
    RatioTesting out;
    out.delta = ctx.delta;
    out.ratio = induced(A) / induced(B);
    const double nuA = measure_of(mu, MeasureKind::nu, A);
    const double nuB = measure_of(mu, MeasureKind::nu, B);
    out.bound = ctx.c_rh * std::pow(nuA / nuB, ctx.delta);
    return out;
}

OpennessResult openness_search(const Weight& w, double p, const LambdaMeasure& mu,
                               const Window& window, int resolution,
                               const OpennessParams& params) {
    if (!(p > params.floor)) throw std::domain_error("openness_search: p must exceed the floor");
    const ClassKind kind = ClassKind::ap_lambda_tilde();

    auto member = [&](double q) -> bool {
        if (w.is_power()) return power_membership(w.alpha(), q, mu.lambda(), kind).member;
        // tabulated: finite and resolution-stable constant
        const double c1 = weight_constant(w, q, mu, kind, window, resolution).value;
        const double c2 = weight_constant(w, q, mu, kind, window, resolution + 2).value;
        if (!std::isfinite(c1) || !std::isfinite(c2)) return false;
        return std::abs(c2 - c1) <= params.stability_tol * c1;
    };

    if (!member(p)) throw std::domain_error("openness_search: w not in the tilde class at p");
    OpennessResult out;
    if (member(params.floor)) {
        out.q_hat = params.floor;
        out.at_floor = true;
        return out;
    }
    double lo = params.floor; // non-member
    double hi = p;            // member
    for (int i = 0; i < params.steps; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (member(mid))
            hi = mid;
        else
            lo = mid;
    }
    out.q_hat = hi;
    return out;
}

TestingCharacterization testing_characterization(const Weight& w, double p,
                                                 const LambdaMeasure& mu, const GridFunction& f,
                                                 const Interval& B) {
    TestingCharacterization out;
    const double muB = induced_integral(w, p, mu, InducedKind::mu, B.a, B.b);
    const double avg = lambda_average(f, B, mu);
    out.lhs = muB * std::pow(avg, p);
    double rhs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        if (cl >= B.b) break;
        const double cr = f.cell_right(i);
        if (cr <= B.a) continue;
        const double v = f.values()[i];
        if (v == 0.0) continue;
        rhs += std::pow(v, p) *
               induced_integral(w, p, mu, InducedKind::mu, std::max(cl, B.a), std::min(cr, B.b));
    }
    out.rhs = rhs;
    if (!(rhs > 0.0)) {
        out.skipped = true;
        return out;
    }
    out.constant = out.lhs / out.rhs;
    return out;
}

GridFunction extremal_testing_function(const Weight& w, double p, const LambdaMeasure& mu,
                                       Window window, int level) {
    const double pp = conjugate_exponent(p);
    const double e = (1.0 + 2.0 * mu.lambda()) / (p - 1.0) - pp;
    return GridFunction::sample(window, level, [&](double t) {
        return std::pow(w(t), -1.0 / (p - 1.0)) * std::pow(t, e);
    });
}

} // namespace bwl
