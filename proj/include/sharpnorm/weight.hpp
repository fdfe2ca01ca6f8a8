#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sharpnorm/ball.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/lattice.hpp"

namespace sharpnorm {

/// Structural tag describing how a weight was built, kept for JSON
/// round-trips and for the product-splitting checks.
struct WeightStructure {
    enum class Kind { plain, power, product } kind = Kind::plain;
    // power
    int axis = 0;
    double exponent = 0.0;
    double offset = 0.0;
    // product: axes belonging to the first factor
    std::vector<int> split;
    std::shared_ptr<const WeightStructure> w1, w2;
};

/// Strictly positive grid function with its A_p characteristic cache.
class Weight {
public:
    Weight(GridFunction base, WeightStructure structure = {})
        : base_(std::move(base)), structure_(std::move(structure)) {
        for (double v : base_.values())
            if (!(v > 0.0) || !std::isfinite(v))
                throw std::invalid_argument("weight values must be positive and finite");
    }

    static Weight unit(const Domain& d) { return Weight(GridFunction::constant(d, 1.0)); }

    const GridFunction& base() const { return base_; }
    const Domain& domain() const { return base_.domain(); }
    const WeightStructure& structure() const { return structure_; }
    double operator[](std::size_t i) const { return base_[i]; }
    std::size_t size() const { return base_.size(); }

    /// omega(E) for E given as cell indices.
    double measure(const std::vector<std::size_t>& cells) const {
        double s = 0.0;
        for (std::size_t i : cells) s += base_[i];
        return s * base_.cell_measure();
    }

    double total_measure() const { return base_.integral(); }

    std::optional<double> cached_ap(double p) const {
        auto it = cached_ap_.find(p);
        return it == cached_ap_.end() ? std::nullopt : std::optional<double>(it->second);
    }
    void cache_ap(double p, double value) const { cached_ap_[p] = value; }

private:
    GridFunction base_;
    WeightStructure structure_;
    mutable std::map<double, double> cached_ap_;
};

/// |coordinate|^exponent along one axis (distance to the wall for
/// half-space domains, where the wall is the lower edge of the axis).
inline Weight power_weight(int axis, double exponent, const Domain& domain, double offset = 0.0) {
    if (axis < 0 || axis >= domain.axes()) throw std::invalid_argument("power weight axis out of range");
    std::vector<double> v(domain.total_cells());
    const bool half_space = domain.kind() == DomainKind::half_space_box;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double c = domain.cell_center(axis, domain.axis_index_of(i, axis));
        const double base = half_space ? (c - domain.lo(axis)) : std::abs(c - offset);
        if (base == 0.0 && exponent != 0.0)
            throw std::invalid_argument("grid point lies on the singular hyperplane of the power weight");
        v[i] = exponent == 0.0 ? 1.0 : std::pow(base, exponent);
    }
    WeightStructure st;
    st.kind = WeightStructure::Kind::power;
    st.axis = axis;
    st.exponent = exponent;
    st.offset = offset;
    return Weight(GridFunction(domain, std::move(v)), std::move(st));
}

/// Pointwise product of two weights on the same grid; the structure
/// records the axis split of the factors.
inline Weight product_weight(const Weight& w1, const Weight& w2, std::vector<int> split) {
    if (!w1.domain().same_grid(w2.domain()))
        throw std::invalid_argument("product factors must share the grid");
    GridFunction g = w1.base();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= w2[i];
    WeightStructure st;
    st.kind = WeightStructure::Kind::product;
    st.split = std::move(split);
    st.w1 = std::make_shared<WeightStructure>(w1.structure());
    st.w2 = std::make_shared<WeightStructure>(w2.structure());
    return Weight(std::move(g), std::move(st));
}

/// Family estimate of [w]_{A_p}: max over balls of
/// (avg w)(avg w^{-1/(p-1)})^{p-1}. A lower bound for the true sup.
inline double ap_characteristic(const Weight& w, double p, const BallFamily& fam) {
    if (!(p > 1.0)) throw std::invalid_argument("A_p requires p > 1");
    if (fam.empty()) throw std::invalid_argument("empty ball family");
    const Domain& d = w.domain();
    const double dual_exp = -1.0 / (p - 1.0);
    GridFunction dual = w.base();
    for (double& v : dual.values()) v = std::pow(v, dual_exp);

    double best = 0.0;
    for_each_ball(d, fam, [&](std::size_t c, double r) {
        double s1 = 0.0, s2 = 0.0;
        std::size_t n = 0;
        detail::for_each_cell_in_ball(d, c, r, [&](std::size_t i) {
            s1 += w[i];
            s2 += dual[i];
            ++n;
        });
        if (!n) return;
        const double v = (s1 / n) * std::pow(s2 / n, p - 1.0);
        best = std::max(best, v);
    });
    w.cache_ap(p, best);
    return best;
}

/// A_p inclusion (monotonicity of the characteristic in the exponent):
/// 1 - tol <= estimate(A_q) <= estimate(A_p) + tol for p < q.
inline bool check_ap_inclusion(const Weight& w, double p, double q, const BallFamily& fam,
                               double tol = 1e-9) {
    if (!(p < q)) throw std::invalid_argument("inclusion check requires p < q");
    const double ap = ap_characteristic(w, p, fam);
    const double aq = ap_characteristic(w, q, fam);
    return aq >= 1.0 - tol && aq <= ap + tol;
}

/// Both sides of the weighted average bound
/// (avg_B f)^p <= [w]_{A_p}/omega(B) * int_B f^p w dmu.
struct HolderApBound {
    double lhs = 0.0;
    double rhs = 0.0;
};

inline HolderApBound holder_ap_bound(const Weight& w, double p, const GridFunction& f,
                                     std::size_t center, double r, const BallFamily& fam) {
    for (double v : f.values())
        if (v < 0.0) throw std::invalid_argument("holder_ap_bound requires f >= 0");
    const Domain& d = f.domain();
    double fsum = 0.0, fpw = 0.0, wsum = 0.0;
    std::size_t n = 0;
    detail::for_each_cell_in_ball(d, center, r, [&](std::size_t i) {
        fsum += f[i];
        fpw += std::pow(f[i], p) * w[i];
        wsum += w[i];
        ++n;
    });
    HolderApBound out;
    if (!n) return out;
    const double mu_cell = d.cell_measure();
    const double omega_b = wsum * mu_cell;
    out.lhs = std::pow(fsum / n, p);
    out.rhs = ap_characteristic(w, p, fam) / omega_b * (fpw * mu_cell);
    return out;
}

/// Fit of the comparison-of-measures inequality
/// omega(E)/omega(Q) <= N (mu(E)/mu(Q))^beta over a suite of (E, Q) pairs
/// with E a union of cells inside cube Q.
struct MeasureComparisonFit {
    double beta = 1.0;
    double n = 1.0;
};

struct MeasurePair {
    std::vector<std::size_t> subset_cells;  // E
    Cube cube;                              // Q
};

inline MeasureComparisonFit measure_comparison_fit(const Weight& w, double /*p*/,
                                                   const DyadicLattice& lat,
                                                   const std::vector<MeasurePair>& suite) {
    if (suite.empty()) throw std::invalid_argument("empty measure-comparison suite");
    const Domain& d = lat.domain();
    std::vector<double> xs, ys;  // log mu-ratio, log omega-ratio
    xs.reserve(suite.size());
    ys.reserve(suite.size());
    for (const auto& pair : suite) {
        double wq = 0.0;
        std::size_t nq = 0;
        for_each_cell_in_cube(d, pair.cube, [&](std::size_t i) {
            wq += w[i];
            ++nq;
        });
        double we = 0.0;
        for (std::size_t i : pair.subset_cells) we += w[i];
        const std::size_t ne = pair.subset_cells.size();
        if (ne == 0 || ne == nq) continue;  // ratio 0 or 1: no constraint content
        xs.push_back(std::log(static_cast<double>(ne) / static_cast<double>(nq)));
        ys.push_back(std::log(we / wq));
    }
    MeasureComparisonFit fit;
    if (xs.empty()) return fit;  // all pairs degenerate: beta = 1, N = 1

    // Least-squares slope, then clamp to (0, 1] and lift N so the
    // inequality holds for every pair in the suite.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double m = static_cast<double>(xs.size());
    const double denom = m * sxx - sx * sx;
    double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 1.0;
    slope = std::min(1.0, std::max(slope, 1e-3));
    fit.beta = slope;
    double logn = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) logn = std::max(logn, ys[i] - slope * xs[i]);
    fit.n = std::exp(logn);
    return fit;
}

}  // namespace sharpnorm
