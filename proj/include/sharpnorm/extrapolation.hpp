#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharpnorm/ball.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/maximal.hpp"
#include "sharpnorm/report.hpp"
#include "sharpnorm/weight.hpp"

namespace sharpnorm {

/// Configuration of the geometric maximal-iterate series. N1_hat and
/// N2_hat are the empirically calibrated maximal-operator norms on
/// L_p(w) and on L_{p'}(w^{1-p'}) respectively (check_hl_bound); the
/// series construction is homogeneous in these constants, so calibrated
/// substitutes preserve every checkable inequality.
struct RdFConfig {
    double p0 = 2.0;
    double p = 2.0;
    int k_terms = 40;
    double n1_hat = 1.0;
    double n2_hat = 1.0;

    void validate() const {
        if (k_terms < 1) throw std::invalid_argument("k_terms must be >= 1");
        if (!(n1_hat >= 1.0) || !(n2_hat >= 1.0))
            throw std::invalid_argument("calibrated norms must be >= 1");
        if (!(p0 > 1.0) || !(p > 1.0)) throw std::invalid_argument("exponents must exceed 1");
    }
};

namespace detail {

/// Shared series driver: out = sum of t_k, t_0 = |h|, t_k = Step(t_{k-1})
/// / (2 n_hat). Divergence (consecutive-term control-norm ratio > 1)
/// means n_hat underestimates the operator norm.
template <class Step, class ControlNorm>
GridFunction rubio_series(const GridFunction& h, int k_terms, double n_hat, Step&& step,
                          ControlNorm&& control) {
    GridFunction term = h.abs();
    GridFunction out = term;
    double prev = control(term);
    for (int k = 1; k <= k_terms; ++k) {
        term = step(term);
        term *= 1.0 / (2.0 * n_hat);
        const double cur = control(term);
        if (prev > 0.0 && cur > prev * (1.0 + 1e-9))
            throw std::runtime_error(
                "maximal-iterate series diverges; recalibrate the maximal norm estimate");
        prev = cur;
        out += term;
        if (cur == 0.0) break;
    }
    return out;
}

}  // namespace detail

/// R h = sum_{k=0}^{K} M^k h / (2 N1)^k with M^0 h = |h|. Satisfies
/// |h| <= Rh exactly and ||Rh||_{L_p(w)} <= 2||h||_{L_p(w)} up to the
/// series tail. Pass w to enable divergence detection in the norm that
/// matters; without it only trivially divergent series are caught.
inline GridFunction rubio_r(const GridFunction& h, const RdFConfig& cfg, const BallFamily& fam,
                            const Weight* w = nullptr) {
    cfg.validate();
    for (double v : h.values())
        if (!std::isfinite(v)) throw std::invalid_argument("h must be finite");
    auto control = [&](const GridFunction& t) {
        return w ? lp_norm(t, cfg.p, w->base()) : lp_norm(t, cfg.p);
    };
    auto step = [&](const GridFunction& t) { return ball_maximal(t, fam).values; };
    return detail::rubio_series(h, cfg.k_terms, cfg.n1_hat, step, control);
}

/// R' h built from the conjugate operator M'h = M(hw)/w, controlled in
/// L_{p'}(w) (equivalently M on L_{p'}(w^{1-p'})).
inline GridFunction rubio_r_dual(const GridFunction& h, const Weight& w, const RdFConfig& cfg,
                                 const BallFamily& fam) {
    cfg.validate();
    if (!h.domain().same_grid(w.domain()))
        throw std::invalid_argument("function and weight domains differ");
    const double p_conj = cfg.p / (cfg.p - 1.0);
    auto control = [&](const GridFunction& t) { return lp_norm(t, p_conj, w.base()); };
    auto step = [&](const GridFunction& t) {
        GridFunction tw = t;
        for (std::size_t i = 0; i < tw.size(); ++i) tw[i] *= w[i];
        GridFunction m = ball_maximal(tw, fam).values;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] /= w[i];
        return m;
    };
    return detail::rubio_series(h, cfg.k_terms, cfg.n2_hat, step, control);
}

/// Lambda_0 = 2^{p0} N1^{p0-1} N2: the A_{p0} budget of the constructed
/// weights.
inline double lambda0_constant(double p0, double n1_hat, double n2_hat) {
    if (!(p0 > 1.0)) throw std::invalid_argument("p0 must exceed 1");
    if (!(n1_hat >= 1.0) || !(n2_hat >= 1.0))
        throw std::invalid_argument("calibrated norms must be >= 1");
    return std::pow(2.0, p0) * std::pow(n1_hat, p0 - 1.0) * n2_hat;
}

/// w~ = (Rg)^{1-p0} (R'h) w; its A_{p0} characteristic over the family
/// is bounded by lambda0_constant for honestly calibrated N1, N2.
inline Weight build_extrapolation_weight(const GridFunction& g, const GridFunction& h,
                                         const Weight& w, const RdFConfig& cfg,
                                         const BallFamily& fam) {
    cfg.validate();
    const bool g_zero = std::all_of(g.values().begin(), g.values().end(),
                                    [](double v) { return v == 0.0; });
    const bool h_zero = std::all_of(h.values().begin(), h.values().end(),
                                    [](double v) { return v == 0.0; });
    if (g_zero || h_zero)
        throw std::invalid_argument("extrapolation weight degenerate for identically zero input");

    const GridFunction rg = rubio_r(g, cfg, fam, &w);
    const GridFunction rh = rubio_r_dual(h, w, cfg, fam);
    GridFunction wt = w.base();
    for (std::size_t i = 0; i < wt.size(); ++i)
        wt[i] *= std::pow(rg[i], 1.0 - cfg.p0) * rh[i];
    return Weight(std::move(wt));
}

/// A pair whose hypothesis bound ||f||_{L_{p0}(w~)} <= N0 ||g||_{L_{p0}(w~)}
/// is certified to hold uniformly over the constructed A_{p0} weights.
struct TransferPair {
    GridFunction f, g;
    double n0 = 1.0;
    std::string certificate;  // how N0 was obtained; empty = uncertified
};

/// Conclusion of the transfer: ||f||_{L_p(w)} <= 4 N0 ||g||_{L_p(w)};
/// the report's ratios divide by 4 N0 ||g||, so the contract is <= 1.
inline RatioReport transfer_check(const std::vector<TransferPair>& pairs, const Weight& w,
                                  double p0, double p) {
    if (pairs.empty()) throw std::invalid_argument("empty pair suite");
    if (!(p0 > 1.0) || !(p > 1.0)) throw std::invalid_argument("exponents must exceed 1");
    RatioReport rep;
    rep.suite_id = "transfer";
    for (std::size_t j = 0; j < pairs.size(); ++j) {
        const TransferPair& pr = pairs[j];
        if (pr.certificate.empty())
            throw std::invalid_argument("uncertified transfer pair at index " + std::to_string(j));
        if (!(pr.n0 > 0.0)) throw std::invalid_argument("transfer pair needs a positive N0");
        const double ng = lp_norm(pr.g, p, w.base());
        const double nf = lp_norm(pr.f, p, w.base());
        double ratio = 0.0;
        if (ng > 0.0)
            ratio = nf / (4.0 * pr.n0 * ng);
        else if (nf > 0.0)
            ratio = std::numeric_limits<double>::infinity();
        else
            rep.zero_over_zero_flag = true;
        rep.add(j, ratio);
    }
    return rep;
}

}  // namespace sharpnorm
