#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharpnorm/ball.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/lattice.hpp"
#include "sharpnorm/maximal.hpp"
#include "sharpnorm/mixed_norm.hpp"
#include "sharpnorm/report.hpp"
#include "sharpnorm/weight.hpp"

namespace sharpnorm {

enum class MeasureRegime { finite_measure, infinite_measure, small_support };

inline std::string to_string(MeasureRegime r) {
    switch (r) {
        case MeasureRegime::finite_measure: return "finite_measure";
        case MeasureRegime::infinite_measure: return "infinite_measure";
        case MeasureRegime::small_support: return "small_support";
    }
    return "unknown";
}

/// First level at which the running average exceeds alpha * lambda.
struct StoppingTimeMap {
    static constexpr int infinite = std::numeric_limits<int>::max();

    std::vector<int> tau;  // per grid cell; `infinite` when never exceeded
    double lambda = 0.0;
    double alpha = 0.0;
    int n_min = 0;
    // selected_cubes[n - n_min]: level-n cube indices where tau = n
    std::vector<std::vector<std::size_t>> selected_cubes;
};

/// Threshold floor for the stopping construction: averages at the
/// coarsest level cannot stay below alpha*lambda unless lambda exceeds
/// 2 N1 ||f||_1 / mu(X); an infinite-measure setup (compact support in a
/// large box) has floor 0.
inline double lambda_floor(const GridFunction& f, const DyadicLattice& lat,
                           MeasureRegime regime = MeasureRegime::finite_measure) {
    if (regime != MeasureRegime::finite_measure) return 0.0;
    return 2.0 * lat.n1() * f.abs().integral() / f.domain().measure();
}

inline StoppingTimeMap stopping_time(const GridFunction& f, const DyadicLattice& lat,
                                     double lambda, double alpha,
                                     MeasureRegime regime = MeasureRegime::finite_measure) {
    if (!f.domain().same_grid(lat.domain()))
        throw std::invalid_argument("function and lattice domains differ");
    for (double v : f.values())
        if (v < 0.0) throw std::invalid_argument("stopping_time requires f >= 0");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    if (!(lambda > lambda_floor(f, lat, regime)))
        throw std::invalid_argument("lambda must exceed the threshold floor");

    StoppingTimeMap st;
    st.lambda = lambda;
    st.alpha = alpha;
    st.n_min = lat.n_min();
    st.tau.assign(f.size(), StoppingTimeMap::infinite);
    st.selected_cubes.resize(lat.level_count());

    const double thr = alpha * lambda;
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        const auto means = lat.cube_means(f, n);
        std::vector<std::uint8_t> taken(means.size(), 0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (st.tau[i] != StoppingTimeMap::infinite) continue;
            const std::size_t q = lat.cube_of_cell(n, i);
            if (means[q] > thr) {
                st.tau[i] = n;
                if (!taken[q]) {
                    taken[q] = 1;
                    st.selected_cubes[n - lat.n_min()].push_back(q);
                }
            }
        }
    }
    return st;
}

/// Both sides of the weighted level-set estimate
///   omega{|f| >= lambda} <= N lambda^{-beta} int_{M_dy f > alpha lambda}
///                             (f#_dy)^beta domega
/// across a lambda grid. N is calibrated from the per-cube Chebyshev
/// chain (smallest constant making each selected-cube step valid), so a
/// failing pass flag indicates the covering step broke, not the local one.
struct LevelSetReport {
    std::vector<double> lambdas, lhs, rhs;
    std::vector<bool> pass;
    double beta = 1.0;
    double n_estimate = 1.0;  // calibrated N (chain constant times 2^beta)
    double alpha = 0.0;
    bool all_pass = false;
};

inline LevelSetReport level_set_check(const GridFunction& f, const Weight& w, double /*p*/,
                                      const DyadicLattice& lat,
                                      const std::vector<double>& lambda_grid,
                                      const std::optional<MeasureComparisonFit>& fit,
                                      MeasureRegime regime = MeasureRegime::finite_measure) {
    if (!fit) throw std::runtime_error("level_set_check requires a measure-comparison fit");
    if (lambda_grid.empty()) throw std::invalid_argument("empty lambda grid");
    if (!w.domain().same_grid(f.domain()))
        throw std::invalid_argument("weight and function domains differ");

    const double beta = fit->beta;
    const GridFunction absf = f.abs();
    const double alpha = 1.0 / (2.0 * lat.n1());
    const auto sharp = dyadic_sharp(f, lat);
    const auto mdy = dyadic_maximal(f, lat);
    const double mu_cell = f.domain().cell_measure();

    LevelSetReport rep;
    rep.beta = beta;
    rep.alpha = alpha;
    rep.lambdas = lambda_grid;

    // Per-cube calibration across the whole grid first.
    double n_chain = 1.0;
    for (double lambda : lambda_grid) {
        const auto st = stopping_time(absf, lat, lambda, alpha, regime);
        for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
            const auto means = lat.cube_means(absf, n);
            for (std::size_t q : st.selected_cubes[n - lat.n_min()]) {
                double omega_e = 0.0, integral_q = 0.0;
                lat.for_each_cell_in_cube(lat.cube(n, q), [&](std::size_t i) {
                    if (st.tau[i] == n && absf[i] - means[q] >= lambda / 2.0)
                        omega_e += w[i];
                    integral_q += std::pow(sharp.values[i], beta) * w[i];
                });
                omega_e *= mu_cell;
                integral_q *= mu_cell;
                const double denom = std::pow(2.0 / lambda, beta) * integral_q;
                if (omega_e > 0.0 && denom > 0.0)
                    n_chain = std::max(n_chain, omega_e / denom);
            }
        }
    }
    rep.n_estimate = n_chain * std::pow(2.0, beta);

    for (double lambda : lambda_grid) {
        double lhs = 0.0, integral = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (absf[i] >= lambda) lhs += w[i];
            if (mdy.values[i] > alpha * lambda)
                integral += std::pow(sharp.values[i], beta) * w[i];
        }
        lhs *= mu_cell;
        integral *= mu_cell;
        const double rhs = rep.n_estimate * std::pow(lambda, -beta) * integral;
        rep.lhs.push_back(lhs);
        rep.rhs.push_back(rhs);
        rep.pass.push_back(lhs <= rhs * (1.0 + 1e-12) || lhs == 0.0);
    }
    rep.all_pass = std::all_of(rep.pass.begin(), rep.pass.end(), [](bool b) { return b; });
    return rep;
}

namespace detail {

inline std::vector<std::size_t> support_cells(const GridFunction& f) {
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] != 0.0) cells.push_back(i);
    return cells;
}

/// Smallest-center metric ball around the support centroid; returns its
/// mu measure (grid count times cell measure).
inline double support_ball_measure(const GridFunction& f, const std::vector<std::size_t>& cells) {
    const Domain& d = f.domain();
    const int na = d.axes();
    std::vector<double> centroid(na, 0.0), x(na);
    std::vector<int> idx(na);
    for (std::size_t i : cells) {
        d.unflatten(i, idx);
        for (int a = 0; a < na; ++a) centroid[a] += d.cell_center(a, idx[a]);
    }
    for (double& c : centroid) c /= static_cast<double>(cells.size());
    std::vector<int> cidx(na);
    for (int a = 0; a < na; ++a) {
        cidx[a] = std::clamp(static_cast<int>((centroid[a] - d.lo(a)) / d.cell_width(a)), 0,
                             d.points()[a] - 1);
        centroid[a] = d.cell_center(a, cidx[a]);
    }
    double r = 0.0;
    for (std::size_t i : cells) {
        d.unflatten(i, idx);
        for (int a = 0; a < na; ++a) x[a] = d.cell_center(a, idx[a]);
        r = std::max(r, d.distance(x, centroid));
    }
    r *= 1.0 + 1e-12;
    std::size_t count = 0;
    for_each_cell_in_ball(d, d.flatten(cidx), r + d.cell_width(0), [&](std::size_t) { ++count; });
    return static_cast<double>(count) * d.cell_measure();
}

}  // namespace detail

/// Ratio report of the sharp-function norm equivalence, with the
/// finite-measure two-term variant kept alongside its residual-free
/// counterpart (the latter is the blow-up control, not a bound).
struct FsReport : RatioReport {
    std::vector<double> ratios_no_residual;
    double sup_ratio_no_residual = 0.0;
    double epsilon = 0.0;
};

inline FsReport fefferman_stein_check(const std::vector<GridFunction>& suite, const Weight& w,
                                      double p, const std::optional<MixedNormSpec>& mixed,
                                      const DyadicLattice& lat, MeasureRegime regime,
                                      double epsilon = 1.0 / 64.0,
                                      const std::vector<std::uint64_t>& seeds = {}) {
    if (suite.empty()) throw std::invalid_argument("empty suite");
    if (mixed && regime == MeasureRegime::finite_measure)
        throw std::invalid_argument(
            "the finite-measure two-term bound is stated for the unmixed norm only");

    FsReport rep;
    rep.regime = to_string(regime);
    rep.epsilon = epsilon;
    const Domain& d = lat.domain();
    const double mu_x = d.measure();

    for (std::size_t j = 0; j < suite.size(); ++j) {
        const GridFunction& f = suite[j];
        const std::uint64_t seed = j < seeds.size() ? seeds[j] : j;
        const auto sharp = dyadic_sharp(f, lat);
        const double nf = mixed ? mixed->norm(f) : lp_norm(f, p, w.base());
        const double ns = mixed ? mixed->norm(sharp.values) : lp_norm(sharp.values, p, w.base());

        if (regime == MeasureRegime::small_support) {
            const auto cells = detail::support_cells(f);
            if (!cells.empty() &&
                detail::support_ball_measure(f, cells) > epsilon * mu_x * (1.0 + 1e-9))
                throw std::invalid_argument("suite member " + std::to_string(j) +
                                            " exceeds the small-support measure cap");
        }

        double ratio = 0.0;
        if (regime == MeasureRegime::finite_measure) {
            const double resid = std::pow(w.measure(detail::support_cells(f)), 1.0 / p) *
                                 f.abs().integral() / mu_x;
            const double denom = ns + resid;
            ratio = denom > 0.0 ? nf / denom : 0.0;
            if (denom == 0.0 && nf > 0.0) ratio = std::numeric_limits<double>::infinity();
            const double bare = ns > 0.0 ? nf / ns
                                : nf > 0.0 ? std::numeric_limits<double>::infinity()
                                           : 0.0;
            rep.ratios_no_residual.push_back(bare);
            rep.sup_ratio_no_residual = std::max(rep.sup_ratio_no_residual, bare);
        } else {
            if (ns > 0.0)
                ratio = nf / ns;
            else if (nf > 0.0)
                ratio = std::numeric_limits<double>::infinity();
            else
                rep.zero_over_zero_flag = true;
        }
        rep.add(seed, ratio);
    }
    return rep;
}

/// Oscillation-majorant generalization: each cube Q carries a function
/// f^Q with |f| <= f^Q <= v whose mean oscillation on Q is dominated by
/// g everywhere on Q; the conclusion bounds ||f||^p by
/// N ||g||^beta ||v||^{p-beta} plus the regime's residual.
struct GfsReport {
    double lhs = 0.0;       // ||f||_p^p
    double base = 0.0;      // ||g||^beta ||v||^{p-beta}
    double residual = 0.0;  // regime-dependent second term (with N = 1)
    double beta = 1.0;
    double n_estimate = 0.0;  // lhs / (base + residual)
    std::string regime;
};

using CubeFunctionProvider = std::function<GridFunction(int level, std::size_t cube_index)>;

inline GfsReport generalized_fs_check(const GridFunction& f, const GridFunction& v,
                                      const GridFunction& g, const CubeFunctionProvider& provider,
                                      const Weight& w, double p, double beta,
                                      const DyadicLattice& lat,
                                      MeasureRegime regime = MeasureRegime::finite_measure,
                                      double epsilon = 1.0 / 64.0) {
    if (!provider) throw std::invalid_argument("missing cube function provider");
    const double tol = 1e-10;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (std::abs(f[i]) > v[i] + tol)
            throw std::invalid_argument("|f| <= v fails at cell " + std::to_string(i));

    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        for (std::size_t q = 0; q < lat.cube_count(n); ++q) {
            const GridFunction fq = provider(n, q);
            const Cube cube = lat.cube(n, q);
            const std::string id = "level " + std::to_string(n) + " cube " + std::to_string(q);
            double sum = 0.0, gmin = std::numeric_limits<double>::infinity();
            std::size_t cells = 0;
            lat.for_each_cell_in_cube(cube, [&](std::size_t i) {
                if (std::abs(f[i]) > fq[i] + tol || fq[i] > v[i] + tol)
                    throw std::invalid_argument("|f| <= f^Q <= v fails on " + id);
                sum += fq[i];
                gmin = std::min(gmin, g[i]);
                ++cells;
            });
            const double mean = sum / static_cast<double>(cells);
            double osc = 0.0;
            lat.for_each_cell_in_cube(cube, [&](std::size_t i) { osc += std::abs(fq[i] - mean); });
            osc /= static_cast<double>(cells);
            if (osc > gmin + tol)
                throw std::invalid_argument("oscillation hypothesis fails on " + id);
        }
    }

    GfsReport rep;
    rep.beta = beta;
    rep.regime = to_string(regime);
    rep.lhs = std::pow(lp_norm(f, p, w.base()), p);
    rep.base = std::pow(lp_norm(g, p, w.base()), beta) *
               std::pow(lp_norm(v, p, w.base()), p - beta);
    switch (regime) {
        case MeasureRegime::finite_measure: {
            const double mu_x = f.domain().measure();
            rep.residual = std::pow(mu_x, -p) * w.measure(detail::support_cells(v)) *
                           std::pow(v.abs().integral(), p);
            break;
        }
        case MeasureRegime::small_support:
            rep.residual = std::pow(epsilon, p) * std::pow(lp_norm(v, p, w.base()), p);
            break;
        case MeasureRegime::infinite_measure:
            rep.residual = 0.0;
            break;
    }
    const double denom = rep.base + rep.residual;
    rep.n_estimate = denom > 0.0 ? rep.lhs / denom : 0.0;
    return rep;
}

}  // namespace sharpnorm
