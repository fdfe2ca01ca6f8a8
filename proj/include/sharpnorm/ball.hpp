#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sharpnorm/domain.hpp"

namespace sharpnorm {

/// Finite family of metric balls discretizing the sup over centers and
/// radii in the A_p and maximal-function definitions. Centers are every
/// center_stride-th grid cell along each axis; radii form a geometric
/// sequence r0 * 2^k.
struct BallFamily {
    std::vector<double> radii;
    int center_stride = 1;

    static BallFamily geometric(double r0, int k_count, int stride = 1) {
        if (r0 <= 0.0 || k_count < 1) throw std::invalid_argument("radii must be positive and nonempty");
        BallFamily fam;
        fam.center_stride = stride;
        fam.radii.reserve(k_count);
        double r = r0;
        for (int k = 0; k < k_count; ++k, r *= 2.0) fam.radii.push_back(r);
        return fam;
    }

    bool empty() const { return radii.empty(); }
};

namespace detail {

/// Visits every grid cell whose center lies within quasi-metric distance
/// r of the given cell center. Torus axes wrap; box/half-space axes clip.
template <class Fn>
void for_each_cell_in_ball(const Domain& d, std::size_t center, double r, Fn&& fn) {
    const int na = d.axes();
    std::vector<int> cidx(na), idx(na), lo(na), hi(na);
    std::vector<double> cx(na), x(na);
    d.unflatten(center, cidx);
    for (int a = 0; a < na; ++a) cx[a] = d.cell_center(a, cidx[a]);

    for (int a = 0; a < na; ++a) {
        const double reach = (a == d.time_axis()) ? std::pow(r, 2.0 * d.parabolic_order()) : r;
        const int off = static_cast<int>(std::ceil(reach / d.cell_width(a)));
        if (d.periodic() && 2 * off + 1 >= d.points()[a]) {
            lo[a] = 0;
            hi[a] = d.points()[a] - 1;
        } else if (d.periodic()) {
            lo[a] = cidx[a] - off;
            hi[a] = cidx[a] + off;
        } else {
            lo[a] = std::max(0, cidx[a] - off);
            hi[a] = std::min(d.points()[a] - 1, cidx[a] + off);
        }
    }

    for (int a = 0; a < na; ++a) idx[a] = lo[a];
    std::vector<int> widx(na);
    while (true) {
        for (int a = 0; a < na; ++a) {
            int j = idx[a];
            if (d.periodic()) j = ((j % d.points()[a]) + d.points()[a]) % d.points()[a];
            widx[a] = j;
            x[a] = d.cell_center(a, widx[a]);
            // unwrapped coordinate so axis_delta sees the short way around
        }
        if (d.distance(x, cx) < r) fn(d.flatten(widx));
        int a = na - 1;
        while (a >= 0) {
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            --a;
        }
        if (a < 0) break;
    }
}

}  // namespace detail

/// Mean of f over the discrete ball; cells counts as relative measure,
/// so half-space clipping is automatic. Returns 0 mean for empty balls.
struct BallStats {
    double mean = 0.0;
    std::size_t cells = 0;
};

inline BallStats ball_mean(const GridFunction& f, std::size_t center, double r) {
    BallStats s;
    double sum = 0.0;
    detail::for_each_cell_in_ball(f.domain(), center, r, [&](std::size_t i) {
        sum += f[i];
        ++s.cells;
    });
    if (s.cells) s.mean = sum / static_cast<double>(s.cells);
    return s;
}

/// Mean of |f - (f)_B| over the ball (needs a second pass).
inline double ball_mean_oscillation(const GridFunction& f, std::size_t center, double r) {
    const BallStats s = ball_mean(f, center, r);
    if (!s.cells) return 0.0;
    double sum = 0.0;
    detail::for_each_cell_in_ball(f.domain(), center, r, [&](std::size_t i) {
        sum += std::abs(f[i] - s.mean);
    });
    return sum / static_cast<double>(s.cells);
}

/// Visits (center_cell, radius) for every ball in the family.
template <class Fn>
void for_each_ball(const Domain& d, const BallFamily& fam, Fn&& fn) {
    const int na = d.axes();
    std::vector<int> idx(na, 0);
    while (true) {
        const std::size_t c = d.flatten(idx);
        for (double r : fam.radii) fn(c, r);
        int a = na - 1;
        while (a >= 0) {
            idx[a] += fam.center_stride;
            if (idx[a] < d.points()[a]) break;
            idx[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
}

}  // namespace sharpnorm
