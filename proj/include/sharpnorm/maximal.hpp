#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <vector>

#include "sharpnorm/ball.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/lattice.hpp"
#include "sharpnorm/weight.hpp"

namespace sharpnorm {

enum class MaximalFlavor { ball, dyadic };

struct MaximalOutput {
    GridFunction values;
    MaximalFlavor flavor;
};

/// M_dy f = max over lattice levels of |f|_{|n}.
inline MaximalOutput dyadic_maximal(const GridFunction& f, const DyadicLattice& lat) {
    if (!f.domain().same_grid(lat.domain()))
        throw std::invalid_argument("function and lattice domains differ");
    const GridFunction absf = f.abs();
    GridFunction out = GridFunction::constant(f.domain(), 0.0);
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        const auto means = lat.cube_means(absf, n);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::max(out[i], means[lat.cube_of_cell(n, i)]);
    }
    return {std::move(out), MaximalFlavor::dyadic};
}

/// f#_dy = max over levels of the mean oscillation of f on the
/// containing cube (on the grid f_{|n}(x) is the cube mean, so the
/// oscillation is constant per cube).
inline MaximalOutput dyadic_sharp(const GridFunction& f, const DyadicLattice& lat) {
    if (!f.domain().same_grid(lat.domain()))
        throw std::invalid_argument("function and lattice domains differ");
    GridFunction out = GridFunction::constant(f.domain(), 0.0);
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        const auto means = lat.cube_means(f, n);
        std::vector<double> osc(means.size(), 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const std::size_t q = lat.cube_of_cell(n, i);
            osc[q] += std::abs(f[i] - means[q]);
        }
        const double inv = 1.0 / static_cast<double>(lat.cube_measure_cells(n));
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = std::max(out[i], osc[lat.cube_of_cell(n, i)] * inv);
    }
    return {std::move(out), MaximalFlavor::dyadic};
}

namespace detail {

/// Dense 1-D fast path: per radius the ball averages form a sliding
/// window over prefix sums, and the per-point max over admissible
/// centers is a sliding-window maximum.
inline void maximal_1d_dense(const GridFunction& absf, double r, std::vector<double>& out) {
    const Domain& d = absf.domain();
    const int n = d.points()[0];
    const double h = d.cell_width(0);
    const int off = std::max(0, static_cast<int>(std::ceil(r / h)) - 1);  // |j-c| <= off
    const bool wrap = d.periodic();

    std::vector<double> prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + absf[i];
    auto range_avg = [&](int lo, int hi) {  // clipped [lo, hi]
        lo = std::max(lo, 0);
        hi = std::min(hi, n - 1);
        return (prefix[hi + 1] - prefix[lo]) / (hi - lo + 1);
    };
    auto wrapped_avg = [&](int lo, int hi) {  // circular [lo, hi], hi - lo < n
        double s = 0.0;
        int lo_m = ((lo % n) + n) % n;
        int len = hi - lo + 1;
        if (len >= n) return prefix[n] / n;
        if (lo_m + len <= n) {
            s = prefix[lo_m + len] - prefix[lo_m];
        } else {
            s = (prefix[n] - prefix[lo_m]) + prefix[lo_m + len - n];
        }
        return s / len;
    };

    std::vector<double> avg(n);
    for (int c = 0; c < n; ++c)
        avg[c] = wrap ? wrapped_avg(c - off, c + off) : range_avg(c - off, c + off);

    // out[x] = max over |c - x| <= off of avg[c] (centers admissible when
    // x lies in the ball around c, which is symmetric on a uniform grid).
    std::deque<int> dq;
    auto value_at = [&](int c) { return avg[((c % n) + n) % n]; };
    const int lo0 = wrap ? -off : 0;
    const int hi_total = wrap ? n - 1 + off : n - 1;
    int right = lo0 - 1;
    for (int x = 0; x < n; ++x) {
        const int wlo = x - off, whi = std::min(x + off, hi_total);
        while (right < whi) {
            ++right;
            while (!dq.empty() && value_at(dq.back()) <= value_at(right)) dq.pop_back();
            dq.push_back(right);
        }
        while (!dq.empty() && dq.front() < std::max(wlo, lo0)) dq.pop_front();
        out[x] = std::max(out[x], value_at(dq.front()));
    }
}

inline bool dense_1d_applicable(const Domain& d, const BallFamily& fam) {
    return d.axes() == 1 && !d.has_time_axis() && fam.center_stride == 1;
}

}  // namespace detail

/// M f(x) = max over family balls containing x of the ball average of |f|.
inline MaximalOutput ball_maximal(const GridFunction& f, const BallFamily& fam) {
    const Domain& d = f.domain();
    if (fam.empty()) throw std::runtime_error("coverage error: empty ball family");
    const GridFunction absf = f.abs();
    GridFunction out = GridFunction::constant(d, -1.0);

    if (detail::dense_1d_applicable(d, fam)) {
        for (double& v : out.values()) v = 0.0;
        for (double r : fam.radii) detail::maximal_1d_dense(absf, r, out.values());
        return {std::move(out), MaximalFlavor::ball};
    }

    for_each_ball(d, fam, [&](std::size_t c, double r) {
        const BallStats s = ball_mean(absf, c, r);
        if (!s.cells) return;
        detail::for_each_cell_in_ball(d, c, r, [&](std::size_t i) { out[i] = std::max(out[i], s.mean); });
    });
    for (double v : out.values())
        if (v < 0.0) throw std::runtime_error("coverage error: family leaves grid points uncovered");
    return {std::move(out), MaximalFlavor::ball};
}

/// f#(x) = max over family balls containing x of the mean oscillation.
inline MaximalOutput ball_sharp(const GridFunction& f, const BallFamily& fam) {
    const Domain& d = f.domain();
    if (fam.empty()) throw std::runtime_error("coverage error: empty ball family");
    GridFunction out = GridFunction::constant(d, -1.0);
    for_each_ball(d, fam, [&](std::size_t c, double r) {
        const double osc = ball_mean_oscillation(f, c, r);
        const BallStats s = ball_mean(f, c, r);
        if (!s.cells) return;
        detail::for_each_cell_in_ball(d, c, r, [&](std::size_t i) { out[i] = std::max(out[i], osc); });
    });
    for (double& v : out.values())
        if (v < 0.0) throw std::runtime_error("coverage error: family leaves grid points uncovered");
    return {std::move(out), MaximalFlavor::ball};
}

/// Dyadic-vs-ball comparison: records the cube-in-ball measure ratio of
/// the construction and the observed sup ratios. A ratio 0/0 is treated
/// as a pass and flagged.
struct ComparisonReport {
    double sup_maximal_ratio = 0.0;
    double sup_sharp_ratio = 0.0;
    double c_geom = 0.0;  // 2 * max over cubes of min covering-ball measure ratio
    bool zero_over_zero = false;
    bool pass = false;
};

inline ComparisonReport check_comparison(const GridFunction& f, const DyadicLattice& lat,
                                         const BallFamily& fam) {
    const Domain& d = f.domain();
    // Scale precondition: the smallest family ball must be able to
    // contain the finest cube.
    {
        const Cube q0 = lat.cube(lat.n_max(), 0);
        const double diam = detail::cube_diameter(d, q0);
        const double rmin = *std::min_element(fam.radii.begin(), fam.radii.end());
        if (rmin < diam / 2.0)
            throw std::invalid_argument("family's smallest radius below finest-cube scale");
    }

    // C_geom from the construction: for every cube, the smallest family
    // ball (centered at the cube center cell) containing it; the constant
    // is twice the worst cells(B)/cells(Q) ratio. Boundary clipping makes
    // this position-dependent, hence the max over all cubes.
    double max_ratio = 1.0;
    const GridFunction zero = GridFunction::constant(d, 0.0);
    std::vector<int> cidx(d.axes());
    for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
        for (std::size_t qi = 0; qi < lat.cube_count(n); ++qi) {
            const Cube q = lat.cube(n, qi);
            for (int a = 0; a < d.axes(); ++a) cidx[a] = (q.cells[a][0] + q.cells[a][1]) / 2;
            const std::size_t center = d.flatten(cidx);
            const double diam = detail::cube_diameter(d, q);
            double best = -1.0;
            for (double r : fam.radii) {
                if (r < diam) continue;  // ball centered in the cube with r >= diam covers it
                const BallStats s = ball_mean(zero, center, r);
                const double ratio = static_cast<double>(s.cells) /
                                     static_cast<double>(lat.cube_measure_cells(n));
                if (best < 0.0 || ratio < best) best = ratio;
            }
            if (best > 0.0) max_ratio = std::max(max_ratio, best);
        }
    }

    ComparisonReport rep;
    rep.c_geom = 2.0 * max_ratio;

    const auto mdy = dyadic_maximal(f, lat);
    const auto mball = ball_maximal(f, fam);
    const auto sdy = dyadic_sharp(f, lat);
    const auto sball = ball_sharp(f, fam);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (mball.values[i] > 0.0)
            rep.sup_maximal_ratio = std::max(rep.sup_maximal_ratio, mdy.values[i] / mball.values[i]);
        else if (mdy.values[i] > 0.0)
            rep.sup_maximal_ratio = std::numeric_limits<double>::infinity();
        else
            rep.zero_over_zero = true;
        if (sball.values[i] > 0.0)
            rep.sup_sharp_ratio = std::max(rep.sup_sharp_ratio, sdy.values[i] / sball.values[i]);
        else if (sdy.values[i] > 1e-14)
            rep.sup_sharp_ratio = std::numeric_limits<double>::infinity();
        else
            rep.zero_over_zero = true;
    }
    rep.pass = rep.sup_maximal_ratio <= rep.c_geom && rep.sup_sharp_ratio <= rep.c_geom;
    return rep;
}

/// Empirical weighted Hardy-Littlewood norm: sup over the suite of
/// ||M f||_{L_p(w)} / ||f||_{L_p(w)}.
struct HlBoundReport {
    double sup_ratio = 0.0;
    std::vector<double> ratios;
};

inline HlBoundReport check_hl_bound(const std::vector<GridFunction>& suite, const Weight& w,
                                    double p, const BallFamily& fam) {
    if (suite.empty()) throw std::invalid_argument("empty suite");
    if (!(p > 1.0) || std::isinf(p)) throw std::invalid_argument("p must lie in (1, inf)");
    HlBoundReport rep;
    for (const GridFunction& f : suite) {
        const double nf = lp_norm(f, p, w.base());
        if (nf == 0.0) {
            rep.ratios.push_back(0.0);
            continue;
        }
        const auto mf = ball_maximal(f, fam);
        const double r = lp_norm(mf.values, p, w.base()) / nf;
        rep.ratios.push_back(r);
        rep.sup_ratio = std::max(rep.sup_ratio, r);
    }
    return rep;
}

}  // namespace sharpnorm
