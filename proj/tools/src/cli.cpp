#include "bwl_cli/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bwl/maximal.hpp"
#include "bwl/operators.hpp"
#include "bwl/oscillation.hpp"
#include "bwl/reverse.hpp"
#include "bwl/weights.hpp"

namespace bwl::cli {

using json = nlohmann::ordered_json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

GridFunction make_function(const std::string& spec, Window w, int level) {
    if (spec == "one") return GridFunction::constant(w, level, 1.0);
    if (spec == "ln") return GridFunction::sample(w, level, [](double t) { return std::log(t); });
    if (spec == "t") return GridFunction::sample(w, level, [](double t) { return t; });
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "indicator") {
        const auto comma = tail.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--f", "indicator needs a,b");
        const double a = std::stod(tail.substr(0, comma));
        const double b = std::stod(tail.substr(comma + 1));
        return GridFunction::indicator(w, level, a, b);
    }
    if (head == "power") return GridFunction::sample(w, level, [e = std::stod(tail)](double t) {
        return std::pow(t, e);
    });
    if (head == "staircase") {
        std::uint64_t state = tail.empty() ? 1 : std::stoull(tail);
        GridFunction g = GridFunction::constant(w, level, 0.0);
        // bounded-oscillation random walk over octaves
        double value = 0.0;
        int cur_oct = -w.L - 1;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const int oct = static_cast<int>(std::floor(std::log2(g.cell_mid(i))));
            if (oct != cur_oct) {
                value += uniform01(state) - 0.5;
                cur_oct = oct;
            }
            g.values()[i] = value;
        }
        return g;
    }
    if (head == "csv") return read_csv_file(tail);
    throw CLI::ValidationError("--f", "unknown function spec: " + spec);
}

ClassKind parse_kind(const std::string& name, double local_k) {
    ClassKind k;
    if (name == "ap")
        k = ClassKind::ap();
    else if (name == "apl")
        k = ClassKind::ap_lambda();
    else if (name == "aplt")
        k = ClassKind::ap_lambda_tilde();
    else
        throw CLI::ValidationError("--kind", "expected ap|apl|aplt");
    if (local_k > 0.0) {
        k.local = true;
        k.k = local_k;
    }
    return k;
}

Weight parse_weight(const RunConfig& cfg, const std::string& weight_csv) {
    if (!weight_csv.empty()) return Weight(read_csv_file(weight_csv));
    if (!cfg.alpha) throw CLI::ValidationError("--alpha", "power weight needs --alpha");
    return Weight::power(*cfg.alpha);
}

json config_json(const RunConfig& cfg) {
    json j;
    j["window_L"] = cfg.window_L;
    j["resolution"] = cfg.resolution;
    j["p"] = cfg.p;
    j["lambda"] = cfg.lambda;
    j["alpha"] = cfg.alpha ? json(*cfg.alpha) : json(nullptr);
    j["kind"] = cfg.kind;
    j["c"] = cfg.c;
    j["alpha_grid_m"] = cfg.alpha_grid_m;
    j["alpha_grid_per_octave"] = cfg.alpha_grid_per_octave;
    j["seed"] = cfg.seed;
    j["format"] = cfg.format;
    return j;
}

json report_json(const WeightConstantReport& rep) {
    json j;
    j["kind"] = rep.kind.name();
    j["p"] = rep.p;
    j["lambda"] = rep.lambda;
    j["alpha"] = rep.alpha ? json(*rep.alpha) : json(nullptr);
    j["value"] = std::isfinite(rep.value) ? json(rep.value) : json(nullptr);
    j["infinite"] = !std::isfinite(rep.value);
    j["argmax"] = {{"a", rep.argmax.a}, {"b", rep.argmax.b}};
    j["window_L"] = rep.window_L;
    j["resolution"] = rep.resolution;
    j["interval_count"] = rep.interval_count;
    return j;
}

json envelope(const std::string& command, const RunConfig& cfg) {
    json j;
    j["command"] = command;
    j["config"] = config_json(cfg);
    return j;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& fallback) {
    if (cfg.out.empty()) {
        fallback << text;
        if (text.empty() || text.back() != '\n') fallback << '\n';
        return;
    }
    std::ofstream os(cfg.out);
    if (!os) throw std::runtime_error("cannot open --out file: " + cfg.out);
    os << text;
    if (text.empty() || text.back() != '\n') os << '\n';
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    json j = json::parse(is);
    if (j.contains("window_L")) cfg.window_L = j["window_L"].get<int>();
    if (j.contains("resolution")) cfg.resolution = j["resolution"].get<int>();
    if (j.contains("p")) cfg.p = j["p"].get<double>();
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("alpha") && !j["alpha"].is_null()) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
    if (j.contains("c")) cfg.c = j["c"].get<double>();
    if (j.contains("alpha_grid_m")) cfg.alpha_grid_m = j["alpha_grid_m"].get<int>();
    if (j.contains("alpha_grid_per_octave"))
        cfg.alpha_grid_per_octave = j["alpha_grid_per_octave"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
}

struct AlphaRange {
    double lo = 0.0, hi = 0.0, step = 0.0;
    std::vector<double> values() const {
        std::vector<double> v;
        for (double a = lo; a <= hi + 1e-12; a += step) v.push_back(a);
        return v;
    }
};

AlphaRange parse_alpha_range(const std::string& text) {
    AlphaRange r;
    std::istringstream is(text);
    std::string tok;
    if (!std::getline(is, tok, ':')) throw CLI::ValidationError("--alphas", "expected lo:hi:step");
    r.lo = std::stod(tok);
    if (!std::getline(is, tok, ':')) throw CLI::ValidationError("--alphas", "expected lo:hi:step");
    r.hi = std::stod(tok);
    if (!std::getline(is, tok)) throw CLI::ValidationError("--alphas", "expected lo:hi:step");
    r.step = std::stod(tok);
    if (!(r.step > 0.0) || !(r.hi >= r.lo))
        throw CLI::ValidationError("--alphas", "expected lo <= hi, step > 0");
    return r;
}

} // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bwl - weighted-norm verification toolkit for the Bessel half line"};
    app.require_subcommand(1);

    RunConfig cfg;
    // config file seeds defaults before flag parsing
    for (std::size_t i = 0; i + 1 < argv.size(); ++i)
        if (argv[i] == "--config") load_config_file(cfg, argv[i + 1]);

    std::string weight_csv, fspec = "one", bspec = "ln", kernel_name = "model";
    std::string alphas_text = "-4:8:0.5";
    std::string interval_text;
    double x = 0.0, cz_alpha = 1.0, delta = -1.0, contour_eps = 0.0;
    int contour_points = 64;
    std::string bmo_kind = "nu";
    bool probe = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", "JSON config file (applied before flags)");
        sub->add_option("--L", cfg.window_L, "window exponent: domain (2^-L, 2^L]")
            ->capture_default_str();
        sub->add_option("--res", cfg.resolution, "per-octave dyadic resolution")
            ->capture_default_str();
        sub->add_option("--p", cfg.p, "Lebesgue exponent, p > 1")->capture_default_str();
        sub->add_option("--lambda", cfg.lambda, "Bessel parameter")->capture_default_str();
        sub->add_option("--c", cfg.c, "reverse-type constant c")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
        sub->add_option("--out", cfg.out, "write the report to a file instead of stdout");
        sub->add_option("--alpha-grid-m", cfg.alpha_grid_m)->capture_default_str();
        sub->add_option("--alpha-grid-per-octave", cfg.alpha_grid_per_octave)
            ->capture_default_str();
    };

    auto* wc = app.add_subcommand("weight-constant", "supremum of the per-interval product");
    add_common(wc);
    wc->add_option("--kind", cfg.kind, "ap|apl|aplt")->capture_default_str();
    wc->add_option("--local-k", cfg.local_k, "restrict family to b <= k a (k > 1)");
    double alpha_flag = std::nan("");
    wc->add_option("--alpha", alpha_flag, "power weight exponent");
    wc->add_option("--weight-csv", weight_csv, "tabulated weight grid csv");

    auto* scan = app.add_subcommand("power-scan", "membership oracle vs measured constants");
    add_common(scan);
    scan->add_option("--alphas", alphas_text, "alpha sweep lo:hi:step")->capture_default_str();

    auto* maximal = app.add_subcommand("maximal", "lambda-maximal function at a point");
    add_common(maximal);
    maximal->add_option("--f", fspec, "function spec")->capture_default_str();
    maximal->add_option("--x", x, "evaluation point")->required();
    maximal->add_flag("--probe", probe, "also run the boundedness probe for f");
    maximal->add_option("--alpha", alpha_flag, "probe weight exponent");

    auto* cz = app.add_subcommand("cz", "Calderon-Zygmund decomposition");
    add_common(cz);
    cz->add_option("--f", fspec, "function spec")->capture_default_str();
    cz->add_option("--height", cz_alpha, "decomposition height")->required();

    auto* bmo = app.add_subcommand("bmo", "BMO norm over the interval family");
    add_common(bmo);
    bmo->add_option("--f", fspec, "function spec")->capture_default_str();
    bmo->add_option("--measure", bmo_kind, "nu|m averaging measure")->capture_default_str();

    auto* jn = app.add_subcommand("jn", "John-Nirenberg profile csv");
    add_common(jn);
    jn->add_option("--f", fspec, "function spec")->capture_default_str();
    jn->add_option("--B", interval_text, "base interval a,b")->required();

    auto* reverse = app.add_subcommand("reverse", "reverse-Hoelder sweep csv");
    add_common(reverse);
    reverse->add_option("--kind", cfg.kind, "apl|aplt")->capture_default_str();
    reverse->add_option("--alphas", alphas_text, "alpha sweep lo:hi:step")->capture_default_str();

    auto* openness = app.add_subcommand("openness", "smallest q below p keeping the tilde class");
    add_common(openness);
    openness->add_option("--alpha", alpha_flag, "power weight exponent")->required();

    auto* comm = app.add_subcommand("commutator", "Cauchy-contour vs direct commutator");
    add_common(comm);
    comm->add_option("--b", bspec, "symbol spec")->capture_default_str();
    comm->add_option("--f", fspec, "function spec")->capture_default_str();
    comm->add_option("--x", x, "evaluation point")->required();
    comm->add_option("--kernel", kernel_name, "const|hilbert|model")->capture_default_str();
    comm->add_option("--delta", delta, "truncation (default: one cell)");
    comm->add_option("--eps", contour_eps, "contour radius (default 1/(4 max|b|))");
    comm->add_option("--N", contour_points, "contour points")->capture_default_str();

    auto* demo = app.add_subcommand("separation-demo",
                                    "the alpha=-2 / alpha=5 story at p=2, lambda=1");
    add_common(demo);

    try {
        app.parse(std::vector<std::string>(argv.rbegin(), argv.rend()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    if (!std::isnan(alpha_flag)) cfg.alpha = alpha_flag;

    try {
        const Window window(cfg.window_L);
        const int level = std::min(cfg.window_L + 10, std::max(cfg.resolution, cfg.window_L));

        if (wc->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const Weight w = parse_weight(cfg, weight_csv);
            const ClassKind kind = parse_kind(cfg.kind, cfg.local_k);
            const WeightConstantReport rep =
                weight_constant(w, cfg.p, mu, kind, window, cfg.resolution);
            json j = envelope("weight-constant", cfg);
            j["report"] = report_json(rep);
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (scan->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            std::ostringstream csv;
            csv << "alpha,p,lambda,kind,member_oracle,constant_L8,constant_L10\n";
            csv.precision(12);
            for (double a : parse_alpha_range(alphas_text).values()) {
                for (const ClassKind& kind :
                     {ClassKind::ap(), ClassKind::ap_lambda(), ClassKind::ap_lambda_tilde()}) {
                    const PowerMembership m = power_membership(a, cfg.p, cfg.lambda, kind);
                    const double c8 =
                        weight_constant(Weight::power(a), cfg.p, mu, kind, Window(8), cfg.resolution)
                            .value;
                    const double c10 =
                        weight_constant(Weight::power(a), cfg.p, mu, kind, Window(10),
                                        cfg.resolution)
                            .value;
                    csv << a << ',' << cfg.p << ',' << cfg.lambda << ',' << kind.name() << ','
                        << (m.member ? 1 : 0) << ',' << c8 << ',' << c10 << '\n';
                }
            }
            emit(cfg, csv.str(), out);
            return 0;
        }

        if (maximal->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const GridFunction f = make_function(fspec, window, level);
            json j = envelope("maximal", cfg);
            j["report"]["x"] = x;
            j["report"]["value"] = lambda_maximal(f, mu, x);
            if (probe) {
                const Weight w = parse_weight(cfg, weight_csv);
                const auto entries = boundedness_probe(
                    {f}, w, cfg.p, mu, AlphaGrid{cfg.alpha_grid_m, cfg.alpha_grid_per_octave});
                j["report"]["weak_constant"] = entries[0].weak_constant;
                j["report"]["strong_ratio"] = entries[0].strong_ratio;
            }
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (cz->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const GridFunction f = make_function(fspec, window, level);
            const CZDecomposition d = cz_decompose(f, mu, cz_alpha);
            json j = envelope("cz", cfg);
            json cells = json::array();
            for (std::size_t i = 0; i < d.selected.size(); ++i) {
                const auto& cell = d.selected[i];
                cells.push_back({{"k", cell.k},
                                 {"j", cell.j},
                                 {"a", cell.lower()},
                                 {"b", cell.upper()},
                                 {"average", d.averages[i]}});
            }
            j["report"] = {{"alpha", d.alpha},
                           {"cells", cells},
                           {"total_nu_measure", d.total_nu_measure},
                           {"l1_norm", d.l1_norm},
                           {"good_bound", d.good_bound}};
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (bmo->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const GridFunction f = make_function(fspec, window, level);
            const BmoKind kind = bmo_kind == "m" ? BmoKind::m_lambda : BmoKind::nu_lambda;
            const BmoResult r = bmo_norm(f, mu, cfg.resolution, kind);
            json j = envelope("bmo", cfg);
            j["report"] = {{"kind", bmo_kind == "m" ? "bmo_m" : "bmo_nu"},
                           {"p", cfg.p},
                           {"lambda", cfg.lambda},
                           {"alpha", nullptr},
                           {"value", r.norm},
                           {"infinite", false},
                           {"argmax", {{"a", r.argmax.a}, {"b", r.argmax.b}}},
                           {"window_L", cfg.window_L},
                           {"resolution", r.resolution},
                           {"interval_count", 0}};
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (jn->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const GridFunction f = make_function(fspec, window, level);
            const auto comma = interval_text.find(',');
            if (comma == std::string::npos)
                throw std::domain_error("jn: --B expects a,b");
            const Interval B(std::stod(interval_text.substr(0, comma)),
                             std::stod(interval_text.substr(comma + 1)));
            JnParams params;
            const JnProfile prof = jn_profile(f, B, mu, params);
            std::ostringstream csv;
            csv << "t,mass,bound\n";
            csv.precision(12);
            for (std::size_t i = 0; i < prof.thresholds.size(); ++i)
                csv << prof.thresholds[i] << ',' << prof.masses[i] << ',' << prof.bounds[i]
                    << '\n';
            emit(cfg, csv.str(), out);
            return 0;
        }

        if (reverse->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const ClassKind kind = parse_kind(cfg.kind, 0.0);
            std::ostringstream csv;
            csv << "kind,alpha,p,lambda,epsilon,max_factor,pass\n";
            csv.precision(12);
            bool all_pass = true;
            for (double a : parse_alpha_range(alphas_text).values()) {
                if (!power_membership(a, cfg.p, cfg.lambda, kind).member) continue;
                const ReverseContext ctx = make_reverse_context(Weight::power(a), cfg.p, mu, kind,
                                                                window, cfg.resolution, cfg.c);
                csv << kind.name() << ',' << a << ',' << cfg.p << ',' << cfg.lambda << ','
                    << ctx.epsilon << ',' << ctx.c_rh << ',' << (ctx.all_pass ? 1 : 0) << '\n';
                all_pass = all_pass && ctx.all_pass;
            }
            emit(cfg, csv.str(), out);
            return all_pass ? 0 : 1;
        }

        if (openness->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const OpennessResult r =
                openness_search(Weight::power(*cfg.alpha), cfg.p, mu, window, cfg.resolution);
            json j = envelope("openness", cfg);
            j["report"] = {{"q_hat", r.q_hat},
                           {"at_floor", r.at_floor},
                           {"algebraic_threshold", (*cfg.alpha + 1.0) / (2.0 * cfg.lambda + 2.0)}};
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (comm->parsed()) {
            const LambdaMeasure mu(cfg.lambda);
            const GridFunction b = make_function(bspec, window, level);
            const GridFunction f = make_function(fspec, window, level);
            Kernel K;
            if (kernel_name == "const")
                K = constant_kernel(1.0);
            else if (kernel_name == "hilbert")
                K = hilbert_kernel();
            else
                K = make_model_kernel(mu).kernel;
            const double d = delta >= 0.0 ? delta : (K.singular ? f.cell_width() : 0.0);
            const double direct = commutator_apply(b, K, f, mu, d, x);
            const double cauchy =
                cauchy_commutator(b, K, f, mu, d, x, contour_eps, contour_points);
            json j = envelope("commutator", cfg);
            j["report"] = {{"x", x},
                           {"kernel", K.name},
                           {"delta", d},
                           {"direct", direct},
                           {"cauchy", cauchy},
                           {"difference", std::abs(direct - cauchy)}};
            emit(cfg, j.dump(2), out);
            return 0;
        }

        if (demo->parsed()) {
            const LambdaMeasure mu(1.0);
            const double p = 2.0;
            json j = envelope("separation-demo", cfg);
            json members = json::array();
            for (double a : {-2.0, 5.0}) {
                const PowerMembership apl = power_membership(a, p, 1.0, ClassKind::ap_lambda());
                const PowerMembership tld =
                    power_membership(a, p, 1.0, ClassKind::ap_lambda_tilde());
                json row;
                row["alpha"] = a;
                row["in_ap_lambda"] = apl.member;
                row["in_ap_lambda_tilde"] = tld.member;
                for (int L : {6, 10}) {
                    const std::string tag = "L" + std::to_string(L);
                    row["apl_constant_" + tag] =
                        weight_constant(Weight::power(a), p, mu, ClassKind::ap_lambda(), Window(L),
                                        cfg.resolution)
                            .value;
                    row["tilde_constant_" + tag] =
                        weight_constant(Weight::power(a), p, mu, ClassKind::ap_lambda_tilde(),
                                        Window(L), cfg.resolution)
                            .value;
                }
                members.push_back(row);
            }
            j["report"]["membership"] = members;

            // maximal-operator probe: the tilde-excluded weight blows up with
            // the window, the two-sided weight stays put
            json probes = json::array();
            bool ok = true;
            for (double a : {-2.0, 3.0}) {
                json row;
                row["weight_alpha"] = a;
                double ratio_small = 0.0, ratio_big = 0.0;
                for (int L : {5, 10}) {
                    const Window win(L);
                    const GridFunction f = GridFunction::indicator(win, L, 0.5, 1.0);
                    const auto entries = boundedness_probe(
                        {f}, Weight::power(a), p, mu,
                        AlphaGrid{cfg.alpha_grid_m, cfg.alpha_grid_per_octave});
                    (L == 5 ? ratio_small : ratio_big) = entries[0].strong_ratio;
                    row["strong_ratio_L" + std::to_string(L)] = entries[0].strong_ratio;
                }
                row["growth"] = ratio_big / ratio_small;
                if (a == -2.0) ok = ok && ratio_big >= 4.0 * ratio_small;
                if (a == 3.0) ok = ok && std::abs(ratio_big - ratio_small) <= 0.25 * ratio_small;
                probes.push_back(row);
            }
            j["report"]["maximal_probe"] = probes;
            j["report"]["pass"] = ok;
            emit(cfg, j.dump(2), out);
            return ok ? 0 : 1;
        }
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no subcommand\n";
    return 2;
}

} // namespace bwl::cli
