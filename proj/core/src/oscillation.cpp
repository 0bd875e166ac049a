#include "bwl/oscillation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bwl/parallel.hpp"
#include "bwl/weights.hpp"

namespace bwl {

namespace {

double kind_exponent(const LambdaMeasure& mu, BmoKind kind) {
    return kind == BmoKind::nu_lambda ? mu.nu_exponent() : mu.m_exponent();
}

// Value-indexed Fenwick trees over (measure, measure*value) so the mean
// oscillation of a growing interval costs O(log n) per evaluation.
class OscSweep {
public:
    OscSweep(const GridFunction& f, std::vector<double> cell_meas)
        : f_(&f), meas_(std::move(cell_meas)) {
        ranks_ = f.values();
        std::sort(ranks_.begin(), ranks_.end());
        ranks_.erase(std::unique(ranks_.begin(), ranks_.end()), ranks_.end());
        w_.assign(ranks_.size() + 1, 0.0);
        s_.assign(ranks_.size() + 1, 0.0);
    }

    void reset() {
        std::fill(w_.begin(), w_.end(), 0.0);
        std::fill(s_.begin(), s_.end(), 0.0);
        tot_w_ = tot_s_ = 0.0;
    }

    void add_cell(std::size_t i) {
        const double v = f_->values()[i];
        const double m = meas_[i];
        const std::size_t r =
            static_cast<std::size_t>(std::lower_bound(ranks_.begin(), ranks_.end(), v) -
                                     ranks_.begin());
        for (std::size_t k = r + 1; k < w_.size(); k += k & (~k + 1)) {
            w_[k] += m;
            s_[k] += m * v;
        }
        tot_w_ += m;
        tot_s_ += m * v;
    }

    // (1/meas) integral |f - avg| d meas over the cells added so far
    double oscillation() const {
        if (!(tot_w_ > 0.0)) return 0.0;
        const double c = tot_s_ / tot_w_;
        // prefix over values <= c
        const std::size_t r = static_cast<std::size_t>(
            std::upper_bound(ranks_.begin(), ranks_.end(), c) - ranks_.begin());
        double wle = 0.0, sle = 0.0;
        for (std::size_t k = r; k > 0; k -= k & (~k + 1)) {
            wle += w_[k];
            sle += s_[k];
        }
        const double below = c * wle - sle;
        const double above = (tot_s_ - sle) - c * (tot_w_ - wle);
        return (below + above) / tot_w_;
    }

private:
    const GridFunction* f_;
    std::vector<double> meas_;
    std::vector<double> ranks_;
    std::vector<double> w_, s_;
    double tot_w_ = 0.0, tot_s_ = 0.0;
};

std::vector<double> cell_measures(const GridFunction& f, const LambdaMeasure& mu, BmoKind kind) {
    const double e = kind_exponent(mu, kind);
    std::vector<double> m(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        m[i] = moment(e, f.cell_left(i), f.cell_right(i));
    return m;
}

} // namespace

double mean_oscillation(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                        BmoKind kind) {
    const double e = kind_exponent(mu, kind);
    const double meas = moment(e, B.a, B.b);
    if (!(meas > 0.0)) throw std::domain_error("mean_oscillation: degenerate interval");
    const double avg = integrate(f, e, B) / meas;
    // integral |f - avg| t^e dt, cellwise exact
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        if (cl >= B.b) break;
        const double cr = f.cell_right(i);
        if (cr <= B.a) continue;
        acc += std::abs(f.values()[i] - avg) * moment(e, std::max(cl, B.a), std::min(cr, B.b));
    }
    return acc / meas;
}

double sharp_maximal(const GridFunction& f, const LambdaMeasure& mu, double x, BmoKind kind) {
    if (!f.window().contains(x)) throw std::domain_error("sharp_maximal: x outside window");
    const std::size_t ix = f.cell_index(x);
    const std::size_t n = f.size();
    std::vector<double> meas = cell_measures(f, mu, kind);
    double best = 0.0;
    OscSweep sweep(f, meas);
    for (std::size_t u = 0; u <= ix; ++u) {
        sweep.reset();
        for (std::size_t i = u; i < n; ++i) {
            sweep.add_cell(i);
            if (i >= ix) best = std::max(best, sweep.oscillation());
        }
    }
    return best;
}

BmoResult bmo_norm(const GridFunction& f, const LambdaMeasure& mu, int resolution, BmoKind kind) {
    const std::vector<double> mesh = endpoint_mesh(f.window(), resolution, &f);
    const std::vector<double> meas = cell_measures(f, mu, kind);
    const std::size_t nm = mesh.size();
    const double scale = std::ldexp(1.0, f.level());
    const double lo_scaled = f.window().lo() * scale;
    std::vector<std::size_t> mesh_cell(nm);
    for (std::size_t i = 0; i < nm; ++i)
        mesh_cell[i] = static_cast<std::size_t>(std::llround(mesh[i] * scale - lo_scaled));

    struct Best {
        double v = -1.0;
        std::size_t i = 0, j = 0;
        bool better(const Best& o) const {
            if (v != o.v) return v > o.v;
            if (i != o.i) return i < o.i;
            return j < o.j;
        }
    };
    const Best best = par::reduce(
        nm - 1, Best{},
        [&](Best acc, std::size_t u) {
            OscSweep sweep(f, meas);
            std::size_t next = u + 1;
            for (std::size_t cell = mesh_cell[u]; cell < f.size(); ++cell) {
                sweep.add_cell(cell);
                while (next < nm && mesh_cell[next] == cell + 1) {
                    Best cand{sweep.oscillation(), u, next};
                    if (cand.better(acc)) acc = cand;
                    ++next;
                }
            }
            return acc;
        },
        [](Best a, Best b) { return b.better(a) ? b : a; });

    BmoResult r;
    r.norm = std::max(best.v, 0.0);
    r.argmax = Interval(mesh[best.i], mesh[best.j]);
    r.resolution = resolution;
    return r;
}

double median_value(const GridFunction& f, const Interval& B, const LambdaMeasure& mu) {
    const double e = mu.m_exponent();
    struct Cell {
        double v;
        double m;
    };
    std::vector<Cell> cells;
    double total = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        if (cl >= B.b) break;
        const double cr = f.cell_right(i);
        if (cr <= B.a) continue;
        const double m = moment(e, std::max(cl, B.a), std::min(cr, B.b));
        cells.push_back({f.values()[i], m});
        total += m;
    }
    if (!(total > 0.0)) throw std::domain_error("median_value: degenerate interval");
    std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) { return a.v < b.v; });
    const double half = 0.5 * total;
    double below = 0.0; // m({f < alpha})
    for (std::size_t i = 0; i < cells.size();) {
        std::size_t j = i;
        double at = 0.0;
        while (j < cells.size() && cells[j].v == cells[i].v) at += cells[j++].m;
        const double above = total - below - at; // m({f > alpha})
        if (below <= half && above <= half) return cells[i].v;
        below += at;
        i = j;
    }
    return cells.back().v;
}

namespace {

double measured_doubling_constant(const Interval& B, const GridFunction& f,
                                  const LambdaMeasure& mu) {
    // max doubling_ratio(nu, subcell, 2) over dyadic subcells of B
    double c = 1.0;
    const int kmin = std::max(-30, static_cast<int>(std::floor(-std::log2(B.length()))));
    for (int k = kmin; k <= f.level(); ++k) {
        const double w = std::ldexp(1.0, -k);
        std::uint64_t j = static_cast<std::uint64_t>(std::floor(B.a / w));
        std::size_t count = 0;
        for (; count < 4096; ++j, ++count) {
            const double cl = j * w;
            const double cr = cl + w;
            if (cl >= B.b) break;
            if (cl < B.a || cr > B.b) continue;
            if (!(cl > 0.0)) continue;
            c = std::max(c, doubling_ratio(mu, MeasureKind::nu, Interval(cl, cr), 2.0));
        }
    }
    return c;
}

} // namespace

JnProfile jn_profile(const GridFunction& f, const Interval& B, const LambdaMeasure& mu,
                     const JnParams& params) {
    JnProfile prof;
    prof.base = B;
    prof.bmo = bmo_norm(f, mu, params.bmo_resolution, BmoKind::nu_lambda).norm;
    prof.c_used = params.c > 0.0 ? params.c : measured_doubling_constant(B, f, mu);
    prof.A = 1.0 / (std::exp(1.0) * prof.c_used);

    const double e = mu.nu_exponent();
    const double nuB = moment(e, B.a, B.b);
    const double avg = integrate(f, e, B) / nuB;

    struct Dev {
        double d;
        double m;
    };
    std::vector<Dev> devs;
    double maxdev = 0.0;
    double maxabs = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        if (cl >= B.b) break;
        const double cr = f.cell_right(i);
        if (cr <= B.a) continue;
        const double d = std::abs(f.values()[i] - avg);
        devs.push_back({d, moment(e, std::max(cl, B.a), std::min(cr, B.b))});
        maxdev = std::max(maxdev, d);
        maxabs = std::max(maxabs, std::abs(f.values()[i]));
    }
    std::sort(devs.begin(), devs.end(), [](const Dev& a, const Dev& b) { return a.d > b.d; });

    // deviations at the floating-point dust level mean a constant function
    const double fuzz =
        64.0 * std::numeric_limits<double>::epsilon() * (std::abs(avg) + maxabs);
    if (prof.bmo <= fuzz || maxdev <= fuzz) {
        // constant f: all masses zero at one nominal threshold
        prof.thresholds = {1.0};
        prof.masses = {0.0};
        prof.bounds = {std::exp(1.0) * nuB * std::exp(-prof.A / std::max(prof.bmo, 1e-300))};
        return prof;
    }

    const double tmin = prof.bmo / 8.0;
    const double tmax = maxdev * 1.001;
    const int nt = std::max(2, params.thresholds);
    for (int k = 0; k < nt; ++k) {
        const double t = tmin * std::pow(tmax / tmin, static_cast<double>(k) / (nt - 1));
        double mass = 0.0;
        for (const auto& dv : devs) {
            if (dv.d > t)
                mass += dv.m;
            else
                break;
        }
        prof.thresholds.push_back(t);
        prof.masses.push_back(mass);
        prof.bounds.push_back(std::exp(1.0) * nuB * std::exp(-prof.A * t / prof.bmo));
    }
    return prof;
}

ExpIntegrability exp_integrability(const GridFunction& f, const Interval& B,
                                   const LambdaMeasure& mu, double s, double p,
                                   const JnParams& params) {
    if (!(p > 1.0)) throw std::domain_error("exp_integrability: p > 1 required");
    const double bmo = bmo_norm(f, mu, params.bmo_resolution, BmoKind::nu_lambda).norm;
    const double c = params.c > 0.0 ? params.c : measured_doubling_constant(B, f, mu);
    const double A = 1.0 / (std::exp(1.0) * c);

    ExpIntegrability out;
    if (bmo > 0.0) {
        const double limit1 = A / bmo;
        const double limit2 = A * std::min(1.0, p - 1.0) / bmo;
        if (!(std::abs(s) < limit1))
            throw std::domain_error("exp_integrability: |s| must be below A/||f||_BMO = " +
                                    std::to_string(limit1));
        if (!(std::abs(s) < limit2))
            throw std::domain_error(
                "exp_integrability: |s| must be below A*min(1,p-1)/||f||_BMO = " +
                std::to_string(limit2));
    }

    const double e = mu.nu_exponent();
    const double nuB = moment(e, B.a, B.b);
    const double avg = integrate(f, e, B) / nuB;

    double lhs = 0.0, pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double cl = f.cell_left(i);
        if (cl >= B.b) break;
        const double cr = f.cell_right(i);
        if (cr <= B.a) continue;
        const double m = moment(e, std::max(cl, B.a), std::min(cr, B.b));
        const double v = f.values()[i];
        lhs += std::exp(s * std::abs(v - avg)) * m;
        pos += std::exp(s * v) * m;
        neg += std::exp(-s * v / (p - 1.0)) * m;
    }
    out.lhs = lhs / nuB;
    const double X = A > 0.0 ? std::abs(s) * bmo / A : 0.0;
    out.cs = X > 0.0 ? 1.0 + std::exp(1.0) * X / (1.0 - X) : 1.0;
    out.product = (pos / nuB) * std::pow(neg / nuB, p - 1.0);
    out.cs_p = std::pow(out.cs, p);
    return out;
}

} // namespace bwl
