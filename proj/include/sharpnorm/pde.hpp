#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sharpnorm/derivative.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/mixed_norm.hpp"
#include "sharpnorm/report.hpp"
#include "sharpnorm/suite.hpp"

namespace sharpnorm {

/// Which a priori estimate the manufactured right-hand side targets:
///   higher_order:    f =  u_t + (-1)^m a Delta^m u + lambda u
///   nondivergence:   f = -u_t + a^{ij} D_ij u + b^i D_i u + c u - lambda u
enum class OperatorForm { higher_order, nondivergence };

/// Scalar model operator with possibly rough leading coefficients.
struct ModelOperator {
    OperatorForm form = OperatorForm::nondivergence;
    int m = 1;
    double delta = 1.0;   // ellipticity: delta <= a11 <= 1/delta
    double lambda = 1.0;
    GridFunction a;       // leading profile (a for higher_order, a^{11} otherwise)
    std::map<std::pair<int, int>, GridFunction> aij;  // off-(1,1) entries, keys i <= j, 0-based
    std::vector<std::optional<GridFunction>> b;       // per spatial axis
    std::optional<GridFunction> c;

    ModelOperator(OperatorForm form_, int m_, double delta_, double lambda_, GridFunction a_)
        : form(form_), m(m_), delta(delta_), lambda(lambda_), a(std::move(a_)) {
        if (m < 1) throw std::invalid_argument("operator order m must be >= 1");
        if (!(delta > 0.0 && delta < 1.0 + 1e-15))
            throw std::invalid_argument("ellipticity delta must lie in (0,1]");
        if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
        if (form == OperatorForm::nondivergence && m != 1)
            throw std::invalid_argument("the nondivergence form is second order (m = 1)");
        const double lo = delta * (1.0 - 1e-12), hi = (1.0 + 1e-12) / delta;
        for (double v : a.values())
            if (v < lo || v > hi)
                throw std::invalid_argument("leading coefficient escapes [delta, 1/delta]");
    }

    static ModelOperator constant_coefficient(OperatorForm form, int m, double lambda,
                                              const Domain& d, double a_value = 1.0) {
        return ModelOperator(form, m, std::min(a_value, 1.0 / a_value), lambda,
                             GridFunction::constant(d, a_value));
    }
};

namespace detail {

inline double multinomial(int m, const std::vector<int>& k) {
    double v = std::tgamma(m + 1.0);
    for (int ki : k) v /= std::tgamma(ki + 1.0);
    return v;
}

/// Delta^m u from the derivative stack:
/// sum over |k| = m of (m choose k) D^{2k} u.
inline GridFunction laplacian_power(const DerivativeStack& st, int m) {
    const int ns = static_cast<int>(st.spatial_axes().size());
    GridFunction out = GridFunction::constant(st.u.domain(), 0.0);
    for (const auto& k : multi_indices_up_to(ns, m)) {
        int total = 0;
        for (int ki : k) total += ki;
        if (total != m) continue;
        std::vector<int> alpha(ns);
        for (int a = 0; a < ns; ++a) alpha[a] = 2 * k[a];
        const GridFunction& dk = st.d(alpha);
        const double coef = multinomial(m, k);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += coef * dk[i];
    }
    return out;
}

}  // namespace detail

/// Assembles the right-hand side pointwise from the derivative stack and
/// the coefficients, with the sign convention of the selected form.
inline GridFunction manufacture_rhs(const DerivativeStack& stack, const ModelOperator& op) {
    if (stack.max_order < 2 * op.m)
        throw std::invalid_argument("derivative stack misses orders up to 2m");
    if (!stack.u.domain().same_grid(op.a.domain()))
        throw std::invalid_argument("stack and coefficient domains differ");
    const Domain& d = stack.u.domain();
    const int ns = static_cast<int>(stack.spatial_axes().size());
    GridFunction f = GridFunction::constant(d, 0.0);

    if (op.form == OperatorForm::higher_order) {
        const GridFunction lap = detail::laplacian_power(stack, op.m);
        const double sign = op.m % 2 == 0 ? 1.0 : -1.0;
        const GridFunction& ut = stack.dt();
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = ut[i] + sign * op.a[i] * lap[i] + op.lambda * stack.u[i];
        return f;
    }

    // nondivergence: f = -u_t + a^{ij} D_ij u + b^i D_i u + c u - lambda u
    const GridFunction& ut = stack.dt();
    for (std::size_t i = 0; i < f.size(); ++i)
        f[i] = -ut[i] - op.lambda * stack.u[i] + (op.c ? (*op.c)[i] * stack.u[i] : 0.0);
    for (int i = 0; i < ns; ++i) {
        for (int j = i; j < ns; ++j) {
            const GridFunction* coef = nullptr;
            if (i == 0 && j == 0)
                coef = &op.a;
            else if (auto it = op.aij.find({i, j}); it != op.aij.end())
                coef = &it->second;
            if (!coef) continue;
            std::vector<int> alpha(ns, 0);
            ++alpha[i];
            ++alpha[j];
            const GridFunction& dij = stack.d(alpha);
            const double mult = i == j ? 1.0 : 2.0;  // symmetric pair counted once
            for (std::size_t k = 0; k < f.size(); ++k) f[k] += mult * (*coef)[k] * dij[k];
        }
        if (i < static_cast<int>(op.b.size()) && op.b[i]) {
            std::vector<int> alpha(ns, 0);
            alpha[i] = 1;
            const GridFunction& di = stack.d(alpha);
            for (std::size_t k = 0; k < f.size(); ++k) f[k] += (*op.b[i])[k] * di[k];
        }
    }
    return f;
}

/// lambda_scaled_sum(u) / ||f|| in the mixed norm.
inline double apriori_ratio(const DerivativeStack& stack, const GridFunction& f,
                            const ModelOperator& op, const MixedNormSpec& spec) {
    const double nf = mixed_norm(f, spec);
    const double nu = lambda_scaled_sum(stack, op.lambda, op.m, spec);
    if (nf == 0.0) {
        if (nu == 0.0) return 0.0;
        throw std::invalid_argument("degenerate input: f vanishes while u does not");
    }
    return nu / nf;
}

enum class RoughAxis { x1, t };

/// Piecewise-constant coefficient profile along one distinguished axis,
/// values uniform in [delta, 1/delta], constant along every other axis.
inline GridFunction rough_coefficient(const Domain& d, std::uint64_t seed, double delta, int pieces,
                                      RoughAxis axis = RoughAxis::x1) {
    if (pieces < 1) throw std::invalid_argument("pieces must be >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
    const int ax = axis == RoughAxis::t
                       ? (d.has_time_axis() ? d.time_axis()
                                            : throw std::invalid_argument("domain has no time axis"))
                       : (d.has_time_axis() ? 1 : 0);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(delta, 1.0 / delta);
    std::vector<double> vals(pieces);
    for (double& v : vals) v = unif(rng);

    std::vector<double> per_cell(d.points()[ax]);
    for (int i = 0; i < d.points()[ax]; ++i) {
        int piece = static_cast<int>(static_cast<double>(i) * pieces / d.points()[ax]);
        per_cell[i] = vals[std::min(piece, pieces - 1)];
    }
    GridFunction g = GridFunction::constant(d, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = per_cell[d.axis_index_of(i, ax)];
    return g;
}

enum class ExtensionParity { odd, even };

/// Reflects a half-space function through the wall x1 = lo onto the
/// doubled box. For the odd (Dirichlet) extension the wall trace,
/// estimated by linear extrapolation from the first two cell rows, must
/// vanish.
inline GridFunction halfspace_extension(const GridFunction& u, ExtensionParity parity,
                                        double trace_tol = 1e-8) {
    const Domain& d = u.domain();
    if (d.kind() != DomainKind::half_space_box)
        throw std::invalid_argument("extension requires a half-space domain");
    const int ax = 0;
    const int n1 = d.points()[ax];

    if (parity == ExtensionParity::odd) {
        double worst = 0.0;
        const std::size_t stride = d.stride(ax);
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (d.axis_index_of(i, ax) != 0) continue;
            const double trace = 1.5 * u[i] - 0.5 * u[i + stride];
            worst = std::max(worst, std::abs(trace));
        }
        if (worst > trace_tol)
            throw std::invalid_argument("odd extension requires a vanishing wall trace (got " +
                                        fmt_double(worst) + ")");
    }

    auto extents = d.extents();
    extents[ax][0] = 2.0 * extents[ax][0] - extents[ax][1];
    auto points = d.points();
    points[ax] *= 2;
    Domain dd(DomainKind::euclidean_box, d.spatial_dim(), d.parabolic_order(), std::move(extents),
              std::move(points));

    GridFunction out = GridFunction::constant(dd, 0.0);
    const double sign = parity == ExtensionParity::odd ? -1.0 : 1.0;
    std::vector<int> idx;
    for (std::size_t i = 0; i < out.size(); ++i) {
        dd.unflatten(i, idx);
        const int j = idx[ax];
        const bool mirrored = j < n1;
        idx[ax] = mirrored ? n1 - 1 - j : j - n1;
        out[i] = (mirrored ? sign : 1.0) * u[d.flatten(idx)];
    }
    return out;
}

/// Mean-oscillation seminorms of a coefficient profile over cylinders of
/// radius up to R: sharp1 oscillates in all spatial variables at fixed
/// time, sharp2 in (t, x-hat) at fixed x1, sharp in x-hat alone. These
/// label experiments by coefficient roughness; they gate nothing.
struct OscillationSeminorms {
    double sharp1 = 0.0;
    double sharp2 = 0.0;
    double sharp = 0.0;
    double radius = 0.0;
};

namespace detail {

/// Average over "slices" of the mean oscillation within each slice, over
/// the index window [lo, hi] per axis (clipped). Cells with equal keys
/// along `slice_axes` form one slice.
template <class KeyFn>
double window_oscillation(const GridFunction& g, const std::vector<int>& lo,
                          const std::vector<int>& hi, KeyFn&& key) {
    const Domain& d = g.domain();
    const int na = d.axes();
    std::map<long long, std::pair<double, std::vector<std::size_t>>> slices;
    std::vector<int> idx(na);
    for (int a = 0; a < na; ++a) idx[a] = lo[a];
    while (true) {
        const std::size_t i = d.flatten(idx);
        auto& s = slices[key(idx)];
        s.first += g[i];
        s.second.push_back(i);
        int a = na - 1;
        while (a >= 0) {
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
    double total = 0.0;
    for (auto& [k, s] : slices) {
        const double mean = s.first / static_cast<double>(s.second.size());
        double osc = 0.0;
        for (std::size_t i : s.second) osc += std::abs(g[i] - mean);
        total += osc / static_cast<double>(s.second.size());
    }
    return total / static_cast<double>(slices.size());
}

}  // namespace detail

inline OscillationSeminorms oscillation_seminorms(const GridFunction& g, double R,
                                                  int center_stride = 4) {
    if (!(R > 0.0)) throw std::invalid_argument("R must be positive");
    const Domain& d = g.domain();
    const int na = d.axes();
    const int ta = d.time_axis();
    const int x1 = d.has_time_axis() ? 1 : 0;
    const int m2 = 2 * d.parabolic_order();

    OscillationSeminorms out;
    out.radius = R;
    std::vector<int> lo(na), hi(na), idx(na, 0);
    for (double r = R; r >= R / 4.0 - 1e-15; r /= 2.0) {
        std::vector<int> cidx(na, 0);
        while (true) {
            for (int a = 0; a < na; ++a) {
                const double reach = a == ta ? std::pow(r, m2) : r;
                const int off = std::max(1, static_cast<int>(std::floor(reach / d.cell_width(a))));
                if (a == ta) {  // time window trails the center
                    lo[a] = std::max(0, cidx[a] - off);
                    hi[a] = cidx[a];
                } else {
                    lo[a] = std::max(0, cidx[a] - off);
                    hi[a] = std::min(d.points()[a] - 1, cidx[a] + off);
                }
            }
            auto key_axes = [&](const std::vector<int>& ix, auto&& keep) {
                long long k = 0;
                for (int a = 0; a < na; ++a)
                    if (keep(a)) k = k * (d.points()[a] + 1) + ix[a];
                return k;
            };
            out.sharp1 = std::max(
                out.sharp1, detail::window_oscillation(g, lo, hi, [&](const std::vector<int>& ix) {
                    return key_axes(ix, [&](int a) { return a == ta; });
                }));
            out.sharp2 = std::max(
                out.sharp2, detail::window_oscillation(g, lo, hi, [&](const std::vector<int>& ix) {
                    return key_axes(ix, [&](int a) { return a == x1; });
                }));
            if (na > x1 + 1)
                out.sharp = std::max(
                    out.sharp, detail::window_oscillation(g, lo, hi, [&](const std::vector<int>& ix) {
                        return key_axes(ix, [&](int a) { return a == ta || a == x1; });
                    }));
            int a = na - 1;
            while (a >= 0) {
                cidx[a] += center_stride;
                if (cidx[a] < d.points()[a]) break;
                cidx[a] = 0;
                --a;
            }
            if (a < 0) break;
        }
    }
    return out;
}

/// One manufactured-solution sweep: seeded band-limited u, manufactured
/// f, apriori_ratio per (seed, lambda).
struct EstimateRow {
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double ratio = 0.0;
};

struct EstimateSuiteReport {
    std::vector<EstimateRow> rows;
    std::map<double, double> sup_per_lambda;
};

struct EstimateConfig {
    Domain domain;
    OperatorForm form = OperatorForm::nondivergence;
    int m = 1;
    double delta = 1.0;
    std::vector<double> lambdas;
    SuiteConfig suite;
    DiffBackend backend = DiffBackend::spectral;
    GridFunction coefficient;  // leading profile on `domain`

    EstimateConfig(Domain dom, GridFunction coef)
        : domain(std::move(dom)), coefficient(std::move(coef)) {}
};

inline EstimateSuiteReport estimate_suite(const EstimateConfig& cfg, const MixedNormSpec& spec) {
    if (cfg.suite.count < 1) throw std::invalid_argument("empty suite");
    if (cfg.lambdas.empty()) throw std::invalid_argument("empty lambda list");
    const auto members = make_suite(cfg.domain, cfg.suite);
    const auto seeds = suite_seeds(cfg.suite);

    EstimateSuiteReport rep;
    for (std::size_t j = 0; j < members.size(); ++j) {
        const auto stack = differentiate(members[j], cfg.backend, 2 * cfg.m, true);
        for (double lambda : cfg.lambdas) {
            ModelOperator op(cfg.form, cfg.m, cfg.delta, lambda, cfg.coefficient);
            const GridFunction f = manufacture_rhs(stack, op);
            const double r = apriori_ratio(stack, f, op, spec);
            rep.rows.push_back({seeds[j], lambda, r});
            auto [it, inserted] = rep.sup_per_lambda.try_emplace(lambda, r);
            if (!inserted) it->second = std::max(it->second, r);
        }
    }
    std::sort(rep.rows.begin(), rep.rows.end(), [](const EstimateRow& a, const EstimateRow& b) {
        return a.seed != b.seed ? a.seed < b.seed : a.lambda < b.lambda;
    });
    return rep;
}

}  // namespace sharpnorm
