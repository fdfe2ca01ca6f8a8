// Batch experiment runner: one subcommand per checkable statement, each
// reading a JSON config and emitting CSV (authoritative), a flat JSON
// summary, and optional SVG plots. Exit codes: 0 pass, 1 contract
// failure (the failing report path is printed), 2 schema/parse error.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sharpnorm/json_io.hpp"
#include "sharpnorm/sharpnorm.hpp"

namespace fs = std::filesystem;
using namespace sharpnorm;

namespace {

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SchemaError("cannot open config file '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("config parse error: ") + e.what());
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << text;
}

void write_summary(const fs::path& path, const json& summary) {
    write_text(path, summary.dump(2) + "\n");
}

MeasureRegime parse_regime(const std::string& s) {
    if (s == "finite_measure") return MeasureRegime::finite_measure;
    if (s == "infinite_measure") return MeasureRegime::infinite_measure;
    if (s == "small_support") return MeasureRegime::small_support;
    throw SchemaError("unknown regime '" + s + "'");
}

/// Ratio-per-seed convenience chart; the CSV stays authoritative.
void plot_ratios(const fs::path& path, const std::string& title,
                 const std::vector<std::uint64_t>& seeds, const std::vector<double>& ratios) {
    std::vector<double> xs(seeds.begin(), seeds.end());
    write_text(path, svg_line_chart(title, xs, {ratios}, {"ratio"}));
}

int report_failure(const fs::path& report) {
    std::cerr << "contract failure: " << report.string() << "\n";
    return 1;
}

int run_lattice_validate(const json& cfg, const fs::path& out, bool) {
    check_keys(cfg, "config", {"domain", "lattice"});
    Domain d = parse_domain(cfg.at("domain"));
    DyadicLattice lat = parse_lattice(cfg.at("lattice"), d);
    ValidationReport rep = validate_lattice(lat);

    CsvWriter csv({"check", "pass", "detail"});
    for (const auto& c : rep.checks) csv.add_row({c.name, c.pass ? "1" : "0", c.detail});
    const fs::path csv_path = out / "lattice-validate.csv";
    csv.write(csv_path.string());
    write_summary(out / "lattice-validate_summary.json",
                  {{"all_pass", rep.all_pass()},
                   {"parent_child_ratio", rep.measured_parent_child_ratio},
                   {"n1", lat.n1()},
                   {"n0", rep.n0},
                   {"eps0", rep.eps0}});
    return rep.all_pass() ? 0 : report_failure(csv_path);
}

int run_ap_constant(const json& cfg, const fs::path& out, bool) {
    check_keys(cfg, "config", {"domain", "weight", "p", "family"}, {"max"});
    Domain d = parse_domain(cfg.at("domain"));
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p = cfg.at("p").get<double>();
    BallFamily fam = parse_family(cfg.at("family"));
    const double ap = ap_characteristic(w, p, fam);

    CsvWriter csv({"p", "ap"});
    csv.add_row({fmt_double(p), fmt_double(ap)});
    const fs::path csv_path = out / "ap-constant.csv";
    csv.write(csv_path.string());
    write_summary(out / "ap-constant_summary.json", {{"ap", ap}, {"p", p}});
    if (cfg.contains("max") && ap > cfg.at("max").get<double>()) return report_failure(csv_path);
    return 0;
}

int run_maximal_bound(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "weight", "p", "family", "suite"}, {"support_radius"});
    Domain d = parse_domain(cfg.at("domain"));
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p = cfg.at("p").get<double>();
    BallFamily fam = parse_family(cfg.at("family"));
    SuiteConfig sc = parse_suite(cfg.at("suite"));
    auto suite = make_suite(d, sc, cfg.value("support_radius", 0.0));
    auto seeds = suite_seeds(sc);
    HlBoundReport rep = check_hl_bound(suite, w, p, fam);

    CsvWriter csv({"seed", "ratio"});
    for (std::size_t j = 0; j < rep.ratios.size(); ++j)
        csv.add_row({std::to_string(seeds[j]), fmt_double(rep.ratios[j])});
    const fs::path csv_path = out / "maximal-bound.csv";
    csv.write(csv_path.string());
    write_summary(out / "maximal-bound_summary.json", {{"sup_ratio", rep.sup_ratio}, {"p", p}});
    if (plots)
        plot_ratios(out / "maximal-bound.svg", "weighted maximal norm ratio", seeds, rep.ratios);
    return std::isfinite(rep.sup_ratio) ? 0 : report_failure(csv_path);
}

int run_fs_check(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "lattice", "weight", "p", "regime", "suite"},
               {"support_radius", "epsilon", "mixed"});
    Domain d = parse_domain(cfg.at("domain"));
    DyadicLattice lat = parse_lattice(cfg.at("lattice"), d);
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p = cfg.at("p").get<double>();
    const MeasureRegime regime = parse_regime(cfg.at("regime").get<std::string>());
    SuiteConfig sc = parse_suite(cfg.at("suite"));
    auto suite = make_suite(d, sc, cfg.value("support_radius", 0.0));
    std::optional<MixedNormSpec> mixed;
    if (cfg.contains("mixed")) mixed = parse_mixed_spec(cfg.at("mixed"), d);

    FsReport rep = fefferman_stein_check(suite, w, p, mixed, lat, regime,
                                         cfg.value("epsilon", 1.0 / 64.0), suite_seeds(sc));

    const bool finite_regime = regime == MeasureRegime::finite_measure;
    CsvWriter csv(finite_regime ? std::vector<std::string>{"seed", "ratio", "ratio_no_residual"}
                                : std::vector<std::string>{"seed", "ratio"});
    for (std::size_t j = 0; j < rep.ratios.size(); ++j) {
        std::vector<std::string> row{std::to_string(rep.seeds[j]), fmt_double(rep.ratios[j])};
        if (finite_regime) row.push_back(fmt_double(rep.ratios_no_residual[j]));
        csv.add_row(std::move(row));
    }
    const fs::path csv_path = out / "fs-check.csv";
    csv.write(csv_path.string());
    json summary{{"sup_ratio", rep.sup_ratio},
                 {"regime", rep.regime},
                 {"p", p},
                 {"epsilon", rep.epsilon},
                 {"zero_over_zero", rep.zero_over_zero_flag}};
    if (finite_regime) summary["sup_ratio_no_residual"] = rep.sup_ratio_no_residual;
    write_summary(out / "fs-check_summary.json", summary);
    if (plots) plot_ratios(out / "fs-check.svg", "sharp-function norm ratio", rep.seeds, rep.ratios);
    return std::isfinite(rep.sup_ratio) ? 0 : report_failure(csv_path);
}

int run_gfs_check(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "lattice", "weight", "p", "beta", "regime", "suite"},
               {"support_radius", "epsilon"});
    Domain d = parse_domain(cfg.at("domain"));
    DyadicLattice lat = parse_lattice(cfg.at("lattice"), d);
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p = cfg.at("p").get<double>();
    const double beta = cfg.at("beta").get<double>();
    const MeasureRegime regime = parse_regime(cfg.at("regime").get<std::string>());
    SuiteConfig sc = parse_suite(cfg.at("suite"));
    auto suite = make_suite(d, sc, cfg.value("support_radius", 0.0));
    auto seeds = suite_seeds(sc);

    // canonical reduction: f^Q = v = |f| with majorant g = 2 f#_dy
    CsvWriter csv({"seed", "lhs", "base", "residual", "n_estimate"});
    double max_n = 0.0;
    std::vector<double> n_estimates;
    for (std::size_t j = 0; j < suite.size(); ++j) {
        const GridFunction& f = suite[j];
        GridFunction v = f.abs();
        GridFunction g = dyadic_sharp(f, lat).values * 2.0;
        auto provider = [&](int, std::size_t) { return f.abs(); };
        GfsReport rep = generalized_fs_check(f, v, g, provider, w, p, beta, lat, regime,
                                             cfg.value("epsilon", 1.0 / 64.0));
        csv.add_row({std::to_string(seeds[j]), fmt_double(rep.lhs), fmt_double(rep.base),
                     fmt_double(rep.residual), fmt_double(rep.n_estimate)});
        max_n = std::max(max_n, rep.n_estimate);
        n_estimates.push_back(rep.n_estimate);
    }
    const fs::path csv_path = out / "gfs-check.csv";
    csv.write(csv_path.string());
    write_summary(out / "gfs-check_summary.json",
                  {{"max_n_estimate", max_n},
                   {"beta", beta},
                   {"p", p},
                   {"regime", to_string(regime)}});
    if (plots)
        plot_ratios(out / "gfs-check.svg", "generalized bound constant", seeds, n_estimates);
    return std::isfinite(max_n) ? 0 : report_failure(csv_path);
}

int run_levelset(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "lattice", "weight", "p", "suite", "pairs"},
               {"support_radius", "lambda_count", "regime"});
    Domain d = parse_domain(cfg.at("domain"));
    DyadicLattice lat = parse_lattice(cfg.at("lattice"), d);
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p = cfg.at("p").get<double>();
    const MeasureRegime regime =
        parse_regime(cfg.value("regime", std::string("finite_measure")));
    SuiteConfig sc = parse_suite(cfg.at("suite"));
    auto suite = make_suite(d, sc, cfg.value("support_radius", 0.0));
    auto seeds = suite_seeds(sc);
    const int lambda_count = cfg.value("lambda_count", 4);
    if (lambda_count < 1) throw SchemaError("lambda_count must be >= 1");

    const json& pj = cfg.at("pairs");
    check_keys(pj, "pairs", {"count", "seed"});
    auto pairs = make_measure_pairs(lat, pj.at("count").get<int>(),
                                    pj.at("seed").get<std::uint64_t>());
    auto fit = measure_comparison_fit(w, p, lat, pairs);

    CsvWriter csv({"seed", "lambda", "lhs", "rhs", "pass"});
    bool all_pass = true;
    double max_n = 0.0;
    std::vector<double> lhs_trace, lambda_trace;
    for (std::size_t j = 0; j < suite.size(); ++j) {
        const double floor = lambda_floor(suite[j], lat, regime);
        std::vector<double> grid;
        for (int k = 0; k < lambda_count; ++k) grid.push_back((floor + 1e-12) * (1.05 + 0.6 * k));
        LevelSetReport rep = level_set_check(suite[j], w, p, lat, grid, fit, regime);
        for (std::size_t k = 0; k < rep.lambdas.size(); ++k) {
            csv.add_row({std::to_string(seeds[j]), fmt_double(rep.lambdas[k]),
                         fmt_double(rep.lhs[k]), fmt_double(rep.rhs[k]),
                         rep.pass[k] ? "1" : "0"});
            if (j == 0) {
                lambda_trace.push_back(rep.lambdas[k]);
                lhs_trace.push_back(rep.lhs[k]);
            }
        }
        all_pass = all_pass && rep.all_pass;
        max_n = std::max(max_n, rep.n_estimate);
    }
    const fs::path csv_path = out / "levelset.csv";
    csv.write(csv_path.string());
    write_summary(out / "levelset_summary.json",
                  {{"all_pass", all_pass},
                   {"beta", fit.beta},
                   {"fit_n", fit.n},
                   {"max_n_estimate", max_n}});
    if (plots)
        write_text(out / "levelset.svg",
                   svg_line_chart("level-set measure vs lambda (first seed)", lambda_trace,
                                  {lhs_trace}, {"omega{|f| >= lambda}"}));
    return all_pass ? 0 : report_failure(csv_path);
}

int run_extrapolate(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "weight", "p0", "family", "suite"}, {"k_terms"});
    Domain d = parse_domain(cfg.at("domain"));
    Weight w = parse_weight(cfg.at("weight"), d);
    const double p0 = cfg.at("p0").get<double>();
    BallFamily fam = parse_family(cfg.at("family"));
    SuiteConfig sc = parse_suite(cfg.at("suite"));
    auto gs = make_suite(d, sc);
    SuiteConfig sh = sc;
    sh.seed += 1000003;  // independent right-hand suite
    auto hs = make_suite(d, sh);
    auto seeds = suite_seeds(sc);

    auto calibrate = [&](const std::vector<GridFunction>& suite, const Weight& cw) {
        std::vector<GridFunction> widened;
        for (const GridFunction& f : suite) {
            widened.push_back(f);
            GridFunction t = ball_maximal(f, fam).values;
            widened.push_back(t);
            widened.push_back(ball_maximal(t, fam).values);
        }
        return std::max(1.0, check_hl_bound(widened, cw, p0, fam).sup_ratio) * 1.05;
    };

    RdFConfig rcfg;
    rcfg.p0 = p0;
    rcfg.p = p0;
    rcfg.k_terms = cfg.value("k_terms", 40);
    rcfg.n1_hat = calibrate(gs, w);
    {
        GridFunction dual_base = w.base();
        for (double& v : dual_base.values()) v = std::pow(v, 1.0 - p0 / (p0 - 1.0));
        Weight wdual(dual_base);
        std::vector<GridFunction> hw;
        for (const GridFunction& h : hs) {
            GridFunction t = h;
            for (std::size_t i = 0; i < t.size(); ++i) t[i] *= w[i];
            hw.push_back(std::move(t));
        }
        rcfg.n2_hat = calibrate(hw, wdual);
    }
    const double budget = lambda0_constant(p0, rcfg.n1_hat, rcfg.n2_hat);

    CsvWriter csv({"seed", "ap_tilde", "budget"});
    double sup_ap = 0.0;
    std::vector<double> aps;
    for (std::size_t j = 0; j < gs.size(); ++j) {
        Weight wt = build_extrapolation_weight(gs[j], hs[j], w, rcfg, fam);
        const double ap = ap_characteristic(wt, p0, fam);
        csv.add_row({std::to_string(seeds[j]), fmt_double(ap), fmt_double(budget)});
        sup_ap = std::max(sup_ap, ap);
        aps.push_back(ap);
    }

    std::vector<TransferPair> tpairs;
    for (std::size_t j = 0; j < gs.size(); ++j)
        tpairs.push_back({gs[j].abs(), gs[j].abs(), 1.0, "identity"});
    RatioReport transfer = transfer_check(tpairs, w, p0, p0);

    const fs::path csv_path = out / "extrapolate.csv";
    csv.write(csv_path.string());
    write_summary(out / "extrapolate_summary.json",
                  {{"lambda0", budget},
                   {"n1_hat", rcfg.n1_hat},
                   {"n2_hat", rcfg.n2_hat},
                   {"sup_ap_tilde", sup_ap},
                   {"transfer_sup_ratio", transfer.sup_ratio}});
    if (plots) plot_ratios(out / "extrapolate.svg", "constructed weight A_p", seeds, aps);
    const bool pass = sup_ap <= budget * 1.01 && transfer.sup_ratio <= 1.0 + 1e-6;
    return pass ? 0 : report_failure(csv_path);
}

int run_pde_ratio(const json& cfg, const fs::path& out, bool plots) {
    check_keys(cfg, "config", {"domain", "form", "lambdas", "suite", "coefficient", "mixed"},
               {"m", "delta"});
    Domain d = parse_domain(cfg.at("domain"));
    const std::string form_s = cfg.at("form").get<std::string>();
    OperatorForm form;
    if (form_s == "higher_order")
        form = OperatorForm::higher_order;
    else if (form_s == "nondivergence")
        form = OperatorForm::nondivergence;
    else
        throw SchemaError("unknown operator form '" + form_s + "'");

    const json& cj = cfg.at("coefficient");
    check_keys(cj, "coefficient", {"kind"}, {"value", "seed", "pieces", "delta", "axis"});
    GridFunction coef = GridFunction::constant(d, 1.0);
    if (cj.at("kind") == "constant") {
        coef = GridFunction::constant(d, cj.value("value", 1.0));
    } else if (cj.at("kind") == "rough") {
        check_keys(cj, "coefficient", {"kind", "seed", "pieces", "delta"}, {"axis"});
        const std::string axis = cj.value("axis", std::string("x1"));
        if (axis != "x1" && axis != "t") throw SchemaError("coefficient axis must be x1 or t");
        coef = rough_coefficient(d, cj.at("seed").get<std::uint64_t>(),
                                 cj.at("delta").get<double>(), cj.at("pieces").get<int>(),
                                 axis == "t" ? RoughAxis::t : RoughAxis::x1);
    } else {
        throw SchemaError("unknown coefficient kind");
    }

    EstimateConfig ecfg(d, coef);
    ecfg.form = form;
    ecfg.m = cfg.value("m", 1);
    // a rough profile needs the operator's ellipticity band to match it
    ecfg.delta = cfg.value("delta", cj.value("delta", 1.0));
    ecfg.lambdas = cfg.at("lambdas").get<std::vector<double>>();
    ecfg.suite = parse_suite(cfg.at("suite"));
    MixedNormSpec spec = parse_mixed_spec(cfg.at("mixed"), d);

    EstimateSuiteReport rep = estimate_suite(ecfg, spec);

    CsvWriter csv({"seed", "lambda", "ratio"});
    bool finite = true;
    for (const EstimateRow& r : rep.rows) {
        csv.add_row({std::to_string(r.seed), fmt_double(r.lambda), fmt_double(r.ratio)});
        finite = finite && std::isfinite(r.ratio);
    }
    const fs::path csv_path = out / "pde-ratio.csv";
    csv.write(csv_path.string());

    json lambdas = json::array(), sups = json::array();
    std::vector<double> xs, ys;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& [lambda, sup] : rep.sup_per_lambda) {
        lambdas.push_back(lambda);
        sups.push_back(sup);
        xs.push_back(lambda);
        ys.push_back(sup);
        lo = std::min(lo, sup);
        hi = std::max(hi, sup);
    }
    write_summary(out / "pde-ratio_summary.json",
                  {{"lambdas", lambdas},
                   {"sup_ratios", sups},
                   {"lambda_spread", lo > 0.0 ? hi / lo : 0.0}});
    if (plots)
        write_text(out / "pde-ratio.svg",
                   svg_line_chart("estimate ratio vs lambda", xs, {ys}, {"sup ratio"}));
    return finite ? 0 : report_failure(csv_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic-analysis experiment runner"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".";
    bool plots = false;
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--plots", plots, "also emit SVG line charts");

    using Runner = int (*)(const json&, const fs::path&, bool);
    const std::vector<std::pair<std::string, Runner>> commands = {
        {"lattice-validate", run_lattice_validate},
        {"ap-constant", run_ap_constant},
        {"maximal-bound", run_maximal_bound},
        {"fs-check", run_fs_check},
        {"gfs-check", run_gfs_check},
        {"levelset", run_levelset},
        {"extrapolate", run_extrapolate},
        {"pde-ratio", run_pde_ratio},
    };
    for (const auto& [name, fn] : commands) app.add_subcommand(name, "");

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(config_path);
        fs::path out(out_dir);
        fs::create_directories(out);
        for (const auto& [name, fn] : commands)
            if (app.got_subcommand(name)) return fn(cfg, out, plots);
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
