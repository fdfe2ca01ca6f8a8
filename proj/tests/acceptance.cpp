// Acceptance harness: one pass/fail line per criterion, nonzero exit if
// any fails. argv[1] (optional) is the path to the CLI binary used by
// the determinism criterion.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sharpnorm/sharpnorm.hpp"

namespace fs = std::filesystem;
using namespace sharpnorm;

namespace {

struct Criterion {
    std::string name;
    bool pass = true;
    std::vector<std::string> failures;
    double seconds = 0.0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
};

template <class Fn>
Criterion timed(const std::string& name, double budget_seconds, Fn&& fn) {
    Criterion c;
    c.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(c.seconds < budget_seconds,
              "runtime " + std::to_string(c.seconds) + "s exceeds budget " +
                  std::to_string(budget_seconds) + "s");
    return c;
}

// ---------------------------------------------------------------- 1
void lattice_exactness(Criterion& c) {
    struct Case {
        Domain domain;
        int n_max;
        double ratio;
    };
    std::vector<Case> cases;
    cases.push_back({Domain(DomainKind::euclidean_box, 1, 1, {{0.0, 1.0}}, {64}), 4, 2.0});
    cases.push_back(
        {Domain(DomainKind::euclidean_box, 2, 1, {{0.0, 1.0}, {0.0, 1.0}}, {32, 32}), 4, 4.0});
    cases.push_back({Domain(DomainKind::euclidean_box, 3, 1,
                            {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {16, 16, 16}),
                     3, 8.0});
    cases.push_back(
        {Domain(DomainKind::parabolic_box, 1, 1, {{0.0, 1.0}, {0.0, 1.0}}, {16, 16}), 2, 8.0});
    cases.push_back(
        {Domain(DomainKind::parabolic_box, 1, 2, {{0.0, 1.0}, {0.0, 1.0}}, {16, 16}), 1, 32.0});
    cases.push_back({Domain(DomainKind::parabolic_box, 2, 1,
                            {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {16, 16, 16}),
                     2, 16.0});
    cases.push_back({Domain(DomainKind::parabolic_box, 2, 2,
                            {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}, {16, 8, 8}),
                     1, 64.0});
    for (const Case& cs : cases) {
        DyadicLattice lat(cs.domain, 0, cs.n_max);
        ValidationReport rep = validate_lattice(lat);
        const std::string id = to_string(cs.domain.kind()) + " d=" +
                               std::to_string(cs.domain.spatial_dim()) +
                               " m=" + std::to_string(cs.domain.parabolic_order());
        c.require(rep.all_pass(), id + ": a filtration property failed");
        c.require(rep.measured_parent_child_ratio == cs.ratio,
                  id + ": parent/child ratio not exactly " + fmt_double(cs.ratio));
        c.require(lat.n1() == cs.ratio, id + ": N1 mismatch");
    }
}

// ---------------------------------------------------------------- 2
void weight_sanity(Criterion& c) {
    Domain d(DomainKind::euclidean_box, 1, 1, {{-1.0, 1.0}}, {1 << 10});
    BallFamily fam = BallFamily::geometric(1.0 / 64.0, 7, 16);
    Weight u = Weight::unit(d);
    for (double p : {1.5, 2.0, 3.0})
        c.require(std::abs(ap_characteristic(u, p, fam) - 1.0) <= 1e-12,
                  "[1]_{A_p} != 1 at p = " + fmt_double(p));

    for (int k = 0; k < 10; ++k) {
        const double exponent = -0.9 + 1.8 * k / 9.0;
        Weight w = power_weight(0, exponent, d);
        c.require(check_ap_inclusion(w, 2.0, 3.0, fam),
                  "A_2 characteristic below A_3 failed at exponent " + fmt_double(exponent));
        c.require(check_ap_inclusion(w, 1.5, 2.5, fam),
                  "A_1.5 characteristic below A_2.5 failed at exponent " + fmt_double(exponent));
    }

    Weight w = power_weight(0, 0.5, d);
    ap_characteristic(w, 2.0, fam);  // cache for the bound
    std::mt19937_64 rng(41);
    int violations = 0;
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction f = band_limited(d, 8, 6, rng).abs();
        const std::size_t center = 16 * (trial % 64);
        const double r = fam.radii[trial % fam.radii.size()];
        auto b = holder_ap_bound(w, 2.0, f, center, r, fam);
        if (b.lhs > b.rhs * (1.0 + 1e-10)) ++violations;
    }
    c.require(violations == 0,
              std::to_string(violations) + " weighted-average bound violations");
}

// ---------------------------------------------------------------- 3
void fefferman_stein(Criterion& c) {
    const double rel = 0.25;
    // 1-D torus, compactly supported suite, two grids for stability
    for (double p : {2.0, 3.0}) {
        for (int wexp = 0; wexp < 2; ++wexp) {
            std::vector<double> sups;
            for (int cells : {1 << 10, 1 << 12}) {
                Domain d(DomainKind::euclidean_torus, 1, 1, {{-8.0, 8.0}}, {cells});
                DyadicLattice lat(d, 0, static_cast<int>(std::log2(cells)));
                SuiteConfig sc;
                sc.count = 200;
                sc.seed = 7;
                sc.max_mode = 24;
                auto suite = make_suite(d, sc, 0.5);
                Weight w = wexp ? power_weight(0, 0.5, d) : Weight::unit(d);
                auto rep = fefferman_stein_check(suite, w, p, std::nullopt, lat,
                                                 MeasureRegime::infinite_measure);
                c.require(std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0,
                          "non-finite sup ratio (p=" + fmt_double(p) + ")");
                sups.push_back(rep.sup_ratio);
            }
            const std::string id = "p=" + fmt_double(p) + (wexp ? " w=|x|^{1/2}" : " w=1");
            c.require(std::abs(sups[1] / sups[0] - 1.0) <= rel,
                      id + ": refinement change " + fmt_double(sups[1] / sups[0]));
        }
    }

    // mixed (2,3) on a 2-D split, same refinement stability
    {
        std::vector<double> sups;
        for (int n : {32, 64}) {
            Domain d(DomainKind::euclidean_torus, 2, 1, {{-8.0, 8.0}, {-8.0, 8.0}}, {n, n});
            DyadicLattice lat(d, 0, static_cast<int>(std::log2(n)));
            SuiteConfig sc;
            sc.count = 200;
            sc.seed = 7;
            sc.max_mode = 6;
            auto suite = make_suite(d, sc, 1.5);
            auto spec = MixedNormSpec::unit(d, {0}, 2.0, 3.0);
            auto rep = fefferman_stein_check(suite, Weight::unit(d), 2.0, spec, lat,
                                             MeasureRegime::infinite_measure);
            c.require(std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0,
                      "mixed-norm sup ratio not finite");
            sups.push_back(rep.sup_ratio);
        }
        c.require(std::abs(sups[1] / sups[0] - 1.0) <= rel,
                  "mixed-norm refinement change " + fmt_double(sups[1] / sups[0]));
    }

    // finite-measure regime with the residual term
    {
        Domain d(DomainKind::euclidean_torus, 1, 1, {{-8.0, 8.0}}, {1 << 12});
        DyadicLattice lat(d, 0, 12);
        SuiteConfig sc;
        sc.count = 200;
        sc.seed = 7;
        sc.max_mode = 24;
        auto suite = make_suite(d, sc, 0.5);
        for (double p : {2.0, 3.0}) {
            for (int wexp = 0; wexp < 2; ++wexp) {
                Weight w = wexp ? power_weight(0, 0.5, d) : Weight::unit(d);
                auto rep = fefferman_stein_check(suite, w, p, std::nullopt, lat,
                                                 MeasureRegime::finite_measure);
                c.require(std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0,
                          "finite-measure sup ratio not finite (p=" + fmt_double(p) + ")");
            }
        }
        // small-support branch at the configured cap
        SuiteConfig ss = sc;
        ss.count = 50;
        auto small = make_suite(d, ss, 0.1);  // support measure well under eps * mu(X)
        auto rep = fefferman_stein_check(small, Weight::unit(d), 2.0, std::nullopt, lat,
                                         MeasureRegime::small_support, 1.0 / 64.0);
        c.require(std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0,
                  "small-support sup ratio not finite");
    }
}

// ---------------------------------------------------------------- 4
void stopping_level_set(Criterion& c) {
    Domain d(DomainKind::euclidean_box, 1, 1, {{-1.0, 1.0}}, {256});
    DyadicLattice lat(d, 0, 8);
    const double alpha = 1.0 / (2.0 * lat.n1());
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction f = band_limited(d, 12, 8, rng).abs();
        const double floor = lambda_floor(f, lat);
        const auto mdy = dyadic_maximal(f, lat);
        for (int k = 0; k < 8; ++k) {
            const double lambda = floor * (1.05 + 0.45 * k);
            auto st = stopping_time(f, lat, lambda, alpha);
            for (std::size_t i = 0; i < f.size(); ++i) {
                const bool finite_tau = st.tau[i] != StoppingTimeMap::infinite;
                if (finite_tau != (mdy.values[i] > alpha * lambda)) {
                    c.require(false, "{tau < inf} != {M_dy f > alpha lambda}");
                    return;
                }
            }
            for (int n = lat.n_min() + 1; n <= lat.n_max(); ++n) {
                const auto means = lat.cube_means(f, n);
                for (std::size_t qi : st.selected_cubes[n - lat.n_min()])
                    if (means[qi] > lambda / 2.0 * (1.0 + 1e-12)) {
                        c.require(false, "selected-cube average above lambda/2");
                        return;
                    }
            }
        }
    }

    // level-set estimate with fitted (beta, N) on a compactly supported suite
    Weight w = power_weight(0, 0.5, d);
    auto fit = measure_comparison_fit(w, 2.0, lat, make_measure_pairs(lat, 80, 23));
    SuiteConfig sc;
    sc.count = 100;
    sc.seed = 55;
    sc.max_mode = 12;
    auto suite = make_suite(d, sc, 0.4);
    int nontrivial = 0;
    for (const GridFunction& f : suite) {
        const double floor = lambda_floor(f, lat);
        std::vector<double> grid;
        for (int k = 0; k < 8; ++k) grid.push_back(floor * (1.02 + 0.3 * k));
        auto rep = level_set_check(f, w, 2.0, lat, grid, fit);
        c.require(rep.all_pass, "level-set estimate failed");
        for (double lhs : rep.lhs)
            if (lhs > 0.0) ++nontrivial;
        if (!rep.all_pass) return;
    }
    c.require(nontrivial > 0, "level-set estimate never exercised (all lhs zero)");
}

// ---------------------------------------------------------------- 5
void extrapolation(Criterion& c) {
    Domain d(DomainKind::euclidean_box, 1, 1, {{-1.0, 1.0}}, {256});
    BallFamily fam = BallFamily::geometric(1.0 / 64.0, 7, 1);
    Weight w = power_weight(0, 0.5, d);
    Weight wdual = power_weight(0, -0.5, d);
    const double p0 = 2.0, tol = 1e-3;

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

    SuiteConfig sc;
    sc.count = 50;
    sc.seed = 31;
    auto gs = make_suite(d, sc);
    SuiteConfig sh = sc;
    sh.seed = 131;
    auto hs = make_suite(d, sh);

    RdFConfig cfg;
    cfg.p0 = p0;
    cfg.p = p0;
    cfg.k_terms = 40;
    cfg.n1_hat = calibrate(gs, w);
    {
        std::vector<GridFunction> hw;
        for (const GridFunction& h : hs) {
            GridFunction t = h;
            for (std::size_t i = 0; i < t.size(); ++i) t[i] *= w[i];
            hw.push_back(std::move(t));
        }
        cfg.n2_hat = calibrate(hw, wdual);
    }
    const double budget = lambda0_constant(p0, cfg.n1_hat, cfg.n2_hat);

    for (int j = 0; j < 50; ++j) {
        GridFunction rg = rubio_r(gs[j], cfg, fam, &w);
        for (std::size_t i = 0; i < rg.size(); ++i)
            if (std::abs(gs[j][i]) > rg[i]) {
                c.require(false, "|h| <= Rh violated");
                return;
            }
        if (lp_norm(rg, p0, w.base()) > 2.0 * lp_norm(gs[j], p0, w.base()) * (1.0 + tol)) {
            c.require(false, "||Rh|| <= 2||h|| violated");
            return;
        }
        GridFunction mrg = ball_maximal(rg, fam).values;
        for (std::size_t i = 0; i < rg.size(); ++i)
            if (mrg[i] > 2.0 * cfg.n1_hat * rg[i] * (1.0 + tol)) {
                c.require(false, "M(Rh) <= 2 N1 Rh violated");
                return;
            }

        GridFunction rh = rubio_r_dual(hs[j], w, cfg, fam);
        GridFunction rhw = rh;
        for (std::size_t i = 0; i < rhw.size(); ++i) rhw[i] *= w[i];
        GridFunction mrhw = ball_maximal(rhw, fam).values;
        for (std::size_t i = 0; i < rh.size(); ++i)
            if (mrhw[i] / w[i] > 2.0 * cfg.n2_hat * rh[i] * (1.0 + tol)) {
                c.require(false, "M'(R'h) <= 2 N2 R'h violated");
                return;
            }

        Weight wt = build_extrapolation_weight(gs[j], hs[j], w, cfg, fam);
        const double ap = ap_characteristic(wt, p0, fam);
        if (ap > budget * 1.01) {
            c.require(false, "constructed weight exceeds the A_2 budget: " + fmt_double(ap) +
                                 " > " + fmt_double(budget));
            return;
        }
    }

    std::vector<TransferPair> pairs;
    const double n0 = calibrate(gs, w);
    for (int j = 0; j < 50; ++j) {
        pairs.push_back({gs[j].abs(), gs[j].abs(), 1.0, "identity"});
        pairs.push_back(
            {ball_maximal(gs[j], fam).values, gs[j], n0, "calibrated weighted maximal norm"});
    }
    auto rep = transfer_check(pairs, w, p0, 2.0);
    c.require(rep.sup_ratio <= 1.0 + 1e-6,
              "transfer sup ratio " + fmt_double(rep.sup_ratio) + " above 1");
}

// ---------------------------------------------------------------- 6
double symbol_ratio(double omega, double k, double a, double lambda, int m) {
    const double w = 2.0 * M_PI * omega, kap = 2.0 * M_PI * k;
    double num = w;
    for (int j = 0; j <= 2 * m; ++j)
        num += std::pow(lambda, 1.0 - static_cast<double>(j) / (2 * m)) * std::pow(kap, j);
    const std::complex<double> sym(a * std::pow(kap, 2 * m) + lambda, w);
    return num / std::abs(sym);
}

void pde_harness(Criterion& c) {
    // (a) closed form
    {
        Domain d(DomainKind::euclidean_torus, 1, 1, {{0.0, 1.0}}, {128});
        GridFunction u = GridFunction::sample(d, [](const std::vector<double>& x) {
            return std::sin(2.0 * M_PI * x[0]);
        });
        auto st = differentiate(u, DiffBackend::spectral, 2);
        const double lambda = 4.0 * M_PI * M_PI;
        auto op = ModelOperator::constant_coefficient(OperatorForm::higher_order, 1, lambda, d);
        const double r =
            apriori_ratio(st, manufacture_rhs(st, op), op, MixedNormSpec::unit(d, {}, 2.0, 2.0));
        c.require(std::abs(r - 1.5) <= 1e-6, "closed-form ratio " + fmt_double(r) + " != 1.5");
    }

    // (b) 32-mode symbol sweep per order
    {
        Domain d(DomainKind::parabolic_box, 1, 1, {{0.0, 1.0}, {0.0, 1.0}}, {64, 64});
        auto spec = MixedNormSpec::unit(d, {1}, 2.0, 2.0);
        for (int m : {1, 2}) {
            const double lambda = 7.0;
            auto op =
                ModelOperator::constant_coefficient(OperatorForm::higher_order, m, lambda, d);
            for (int k = 1; k <= 8; ++k) {
                for (int omega = 0; omega <= 3; ++omega) {
                    GridFunction u = GridFunction::sample(d, [&](const std::vector<double>& x) {
                        return std::cos(2.0 * M_PI * (omega * x[0] + k * x[1]));
                    });
                    auto st = differentiate(u, DiffBackend::spectral, 2 * m, true);
                    const double r = apriori_ratio(st, manufacture_rhs(st, op), op, spec);
                    const double oracle = symbol_ratio(omega, k, 1.0, lambda, m);
                    if (std::abs(r / oracle - 1.0) > 1e-6) {
                        c.require(false, "symbol mismatch at m=" + std::to_string(m) +
                                             " k=" + std::to_string(k) +
                                             " omega=" + std::to_string(omega));
                        return;
                    }
                }
            }
        }
    }

    // (c) rough-coefficient robustness
    {
        Domain d(DomainKind::parabolic_box, 1, 1, {{0.0, 1.0}, {-1.0, 1.0}}, {32, 64});
        auto weight1 = [](const std::vector<double>& x) { return std::sqrt(std::abs(x[0])); };
        for (double q : {2.0, 3.0}) {
            MixedNormSpec spec(d, {1}, 2.0, q, weight1, nullptr);
            EstimateConfig smooth(d, GridFunction::constant(d, 1.0));
            smooth.form = OperatorForm::nondivergence;
            smooth.delta = 0.2;
            smooth.lambdas = {16.0, 64.0, 256.0};
            smooth.suite.count = 100;
            smooth.suite.seed = 5;
            smooth.suite.max_mode = 4;
            EstimateConfig rough = smooth;
            rough.coefficient = rough_coefficient(d, 29, 0.2, 64);

            auto rs = estimate_suite(smooth, spec);
            auto rr = estimate_suite(rough, spec);
            double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
            for (const auto& [lambda, sup] : rr.sup_per_lambda) {
                lo = std::min(lo, sup);
                hi = std::max(hi, sup);
                const double ss = rs.sup_per_lambda[lambda];
                c.require(sup <= 3.0 * ss && ss <= 3.0 * sup,
                          "smooth/rough spread above 3 at lambda " + fmt_double(lambda) +
                              " q=" + fmt_double(q));
            }
            c.require(hi <= 3.0 * lo, "per-lambda spread above 3 (q=" + fmt_double(q) + ")");
        }
    }

    // (d) extension invariants
    {
        Domain h(DomainKind::half_space_box, 1, 1, {{0.0, 1.0}}, {64});
        GridFunction lin =
            GridFunction::sample(h, [](const std::vector<double>& x) { return x[0]; });
        GridFunction odd = halfspace_extension(lin, ExtensionParity::odd);
        for (std::size_t i = 0; i < odd.size(); ++i)
            if (std::abs(odd[i] - odd.domain().cell_center(0, i)) > 1e-14) {
                c.require(false, "odd extension of x not exact");
                return;
            }
        GridFunction quad = GridFunction::sample(
            h, [](const std::vector<double>& x) { return 1.0 + x[0] * x[0]; });
        GridFunction even = halfspace_extension(quad, ExtensionParity::even);
        GridFunction deven = detail::central_first(even, 0);
        const std::size_t n = even.size();
        for (std::size_t i = 2; i + 2 < n; ++i)
            if (std::abs(deven[i] + deven[n - 1 - i]) > 1e-10) {
                c.require(false, "even extension derivative not odd");
                return;
            }
        bool threw = false;
        try {
            halfspace_extension(GridFunction::constant(h, 1.0), ExtensionParity::odd);
        } catch (const std::invalid_argument&) {
            threw = true;
        }
        c.require(threw, "nonzero wall trace not rejected by the odd extension");
    }
}

// ---------------------------------------------------------------- 7
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void determinism(Criterion& c, const std::string& cli) {
    if (cli.empty()) {
        c.require(false, "no CLI binary path supplied (argv[1])");
        return;
    }
    const fs::path work = fs::temp_directory_path() / "sharpnorm-acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    const std::string dom = R"({"kind":"euclidean_box","d":1,"m":1,"extents":[[-1.0,1.0]],"points":[256]})";
    const std::string torus = R"({"kind":"euclidean_torus","d":1,"m":1,"extents":[[-8.0,8.0]],"points":[512]})";
    const std::string par = R"({"kind":"parabolic_box","d":1,"m":1,"extents":[[0.0,1.0],[-1.0,1.0]],"points":[32,64]})";
    const std::vector<std::pair<std::string, std::string>> configs = {
        {"lattice-validate", R"({"domain":)" + par + R"(,"lattice":{"n_min":0,"n_max":2}})"},
        {"ap-constant", R"({"domain":)" + dom +
                            R"(,"weight":{"structure":"plain"},"p":2.0,"family":{"r0":0.0625,"count":5,"stride":8},"max":1.5})"},
        {"maximal-bound",
         R"({"domain":)" + dom +
             R"(,"weight":{"structure":"power","axis":0,"exponent":0.5},"p":2.0,"family":{"r0":0.015625,"count":7},"suite":{"count":20,"seed":7}})"},
        {"fs-check",
         R"({"domain":)" + torus +
             R"(,"lattice":{"n_min":0,"n_max":9},"weight":{"structure":"plain"},"p":2.0,"regime":"infinite_measure","suite":{"count":20,"seed":7,"max_mode":24},"support_radius":0.5})"},
        {"gfs-check",
         R"({"domain":)" + torus +
             R"(,"lattice":{"n_min":0,"n_max":9},"weight":{"structure":"plain"},"p":2.0,"beta":0.8,"regime":"infinite_measure","suite":{"count":10,"seed":7,"max_mode":24},"support_radius":0.5})"},
        {"levelset",
         R"({"domain":)" + dom +
             R"(,"lattice":{"n_min":0,"n_max":8},"weight":{"structure":"power","axis":0,"exponent":0.5},"p":2.0,"suite":{"count":15,"seed":5},"support_radius":0.4,"pairs":{"count":60,"seed":23}})"},
        {"extrapolate",
         R"({"domain":)" + dom +
             R"(,"weight":{"structure":"power","axis":0,"exponent":0.5},"p0":2.0,"family":{"r0":0.03125,"count":6},"suite":{"count":10,"seed":31}})"},
        {"pde-ratio",
         R"({"domain":)" + par +
             R"(,"form":"nondivergence","lambdas":[16.0,64.0],"suite":{"count":5,"seed":3,"max_mode":4},"coefficient":{"kind":"rough","seed":29,"pieces":16,"delta":0.2},"mixed":{"split":[1],"p":2.0,"q":2.0}})"},
    };

    for (const auto& [name, body] : configs) {
        const fs::path cfg = work / (name + ".json");
        {
            std::ofstream f(cfg);
            f << body;
        }
        std::string csv1, csv2;
        for (int run = 0; run < 2; ++run) {
            const fs::path out = work / (name + "-run" + std::to_string(run));
            const std::string cmd = "\"" + cli + "\" " + name + " --config \"" + cfg.string() +
                                    "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) {
                c.require(false, name + ": CLI exited nonzero");
                return;
            }
            (run == 0 ? csv1 : csv2) = slurp(out / (name + ".csv"));
        }
        c.require(!csv1.empty(), name + ": empty CSV");
        c.require(csv1 == csv2, name + ": CSV differs between runs");
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    std::vector<Criterion> results;
    results.push_back(timed("1 lattice exactness", 5.0, lattice_exactness));
    results.push_back(timed("2 weight sanity", 60.0, weight_sanity));
    results.push_back(timed("3 sharp-function norm equivalence", 180.0, fefferman_stein));
    results.push_back(timed("4 stopping time / level set", 60.0, stopping_level_set));
    results.push_back(timed("5 extrapolation", 120.0, extrapolation));
    results.push_back(timed("6 a priori estimate harness", 300.0, pde_harness));
    results.push_back(
        timed("7 determinism", 300.0, [&](Criterion& c) { determinism(c, cli); }));

    bool all = true;
    for (const Criterion& c : results) {
        std::printf("[%s] criterion %s (%.1fs)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.seconds);
        for (const std::string& f : c.failures) std::printf("       %s\n", f.c_str());
        all = all && c.pass;
    }
    return all ? 0 : 1;
}
