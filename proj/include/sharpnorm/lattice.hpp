#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sharpnorm/domain.hpp"

namespace sharpnorm {

/// One cube of a partition, stored as per-axis half-open cell ranges.
struct Cube {
    std::vector<std::array<int, 2>> cells;  // [begin, end) per axis

    std::size_t cell_count() const {
        std::size_t n = 1;
        for (auto& r : cells) n *= static_cast<std::size_t>(r[1] - r[0]);
        return n;
    }
};

struct CubeId {
    int level = 0;
    std::size_t index = 0;
    bool operator==(const CubeId&) const = default;
};

template <class Fn>
void for_each_cell_in_cube(const Domain& d, const Cube& q, Fn&& fn) {
    const int na = d.axes();
    std::vector<int> idx(na);
    for (int a = 0; a < na; ++a) idx[a] = q.cells[a][0];
    while (true) {
        fn(d.flatten(idx));
        int a = na - 1;
        while (a >= 0) {
            if (++idx[a] < q.cells[a][1]) break;
            idx[a] = q.cells[a][0];
            --a;
        }
        if (a < 0) break;
    }
}

/// Dyadic filtration of partitions on a grid domain. Level n splits the
/// domain into 2^n cubes per spatial axis; the time axis of a parabolic
/// domain refines by 2^{2m} per level. Cube boundaries align with cell
/// boundaries, so covering and disjointness are exact on the grid.
class DyadicLattice {
public:
    DyadicLattice(Domain domain, int n_min, int n_max)
        : domain_(std::move(domain)), n_min_(n_min), n_max_(n_max) {
        if (n_max_ < n_min_) throw std::invalid_argument("n_max < n_min");
        if (n_min_ < 0) throw std::invalid_argument("n_min must be >= 0");
        const int na = domain_.axes();
        const int m = domain_.parabolic_order();
        for (int a = 0; a < na; ++a) {
            const long long cubes = cubes_on_axis(n_max_, a);
            const int pts = domain_.points()[a];
            if (cubes > pts || pts % cubes != 0 || !is_pow2(pts / cubes)) {
                std::ostringstream os;
                os << "grid resolution misaligned with level " << n_max_ << " cubes on axis " << a
                   << " (" << pts << " cells vs " << cubes << " cubes)";
                throw std::invalid_argument(os.str());
            }
        }
        n1_ = std::ldexp(1.0, domain_.spatial_dim() + (domain_.has_time_axis() ? 2 * m : 0));
    }

    const Domain& domain() const { return domain_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_max_; }
    int level_count() const { return n_max_ - n_min_ + 1; }

    /// Exact parent/child measure ratio: 2^d Euclidean, 2^{d+2m} parabolic.
    double n1() const { return n1_; }

    long long cubes_on_axis(int n, int axis) const {
        const bool time = axis == domain_.time_axis();
        const int shift = time ? 2 * domain_.parabolic_order() * n : n;
        return 1LL << shift;
    }

    std::size_t cube_count(int n) const {
        check_level(n);
        std::size_t c = 1;
        for (int a = 0; a < domain_.axes(); ++a) c *= static_cast<std::size_t>(cubes_on_axis(n, a));
        return c;
    }

    int cells_per_cube_axis(int n, int axis) const {
        return static_cast<int>(domain_.points()[axis] / cubes_on_axis(n, axis));
    }

    std::size_t cube_measure_cells(int n) const {
        std::size_t c = 1;
        for (int a = 0; a < domain_.axes(); ++a) c *= static_cast<std::size_t>(cells_per_cube_axis(n, a));
        return c;
    }

    /// Level-n cube containing the given grid cell.
    std::size_t cube_of_cell(int n, std::size_t flat_cell) const {
        check_level(n);
        std::size_t idx = 0;
        for (int a = 0; a < domain_.axes(); ++a) {
            const int ci = domain_.axis_index_of(flat_cell, a) / cells_per_cube_axis(n, a);
            idx = idx * static_cast<std::size_t>(cubes_on_axis(n, a)) + static_cast<std::size_t>(ci);
        }
        return idx;
    }

    Cube cube(int n, std::size_t cube_index) const {
        check_level(n);
        Cube q;
        q.cells.resize(domain_.axes());
        std::size_t rem = cube_index;
        for (int a = domain_.axes() - 1; a >= 0; --a) {
            const auto cubes = static_cast<std::size_t>(cubes_on_axis(n, a));
            const int ci = static_cast<int>(rem % cubes);
            rem /= cubes;
            const int w = cells_per_cube_axis(n, a);
            q.cells[a] = {ci * w, (ci + 1) * w};
        }
        return q;
    }

    /// Level-(n-1) cube containing the given level-n cube.
    std::size_t parent_of(int n, std::size_t cube_index) const {
        if (n <= n_min_) throw std::invalid_argument("level has no parent in range");
        std::size_t rem = cube_index, parent = 0;
        std::vector<int> per_axis(domain_.axes());
        for (int a = domain_.axes() - 1; a >= 0; --a) {
            const auto cubes = static_cast<std::size_t>(cubes_on_axis(n, a));
            per_axis[a] = static_cast<int>(rem % cubes);
            rem /= cubes;
        }
        for (int a = 0; a < domain_.axes(); ++a) {
            const long long ratio = cubes_on_axis(n, a) / cubes_on_axis(n - 1, a);
            parent = parent * static_cast<std::size_t>(cubes_on_axis(n - 1, a)) +
                     static_cast<std::size_t>(per_axis[a] / ratio);
        }
        return parent;
    }

    template <class Fn>
    void for_each_cell_in_cube(const Cube& q, Fn&& fn) const {
        sharpnorm::for_each_cell_in_cube(domain_, q, fn);
    }

    /// Per-cube means of f at level n, indexed by cube index.
    std::vector<double> cube_means(const GridFunction& f, int n) const {
        check_level(n);
        std::vector<double> sums(cube_count(n), 0.0);
        for (std::size_t i = 0; i < f.size(); ++i) sums[cube_of_cell(n, i)] += f[i];
        const double inv = 1.0 / static_cast<double>(cube_measure_cells(n));
        for (double& s : sums) s *= inv;
        return sums;
    }

private:
    static bool is_pow2(long long v) { return v > 0 && (v & (v - 1)) == 0; }
    void check_level(int n) const {
        if (n < n_min_ || n > n_max_) throw std::invalid_argument("level out of range");
    }

    Domain domain_;
    int n_min_, n_max_;
    double n1_ = 0.0;
};

inline DyadicLattice build_lattice(const Domain& domain, int n_min, int n_max) {
    return DyadicLattice(domain, n_min, n_max);
}

/// f_{|n}: cell-measure-weighted average of f over its level-n cube,
/// written back as a grid function constant on each cube.
inline GridFunction conditional_expectation(const GridFunction& f, const DyadicLattice& lat, int n) {
    if (!f.domain().same_grid(lat.domain()))
        throw std::invalid_argument("function and lattice domains differ");
    const auto means = lat.cube_means(f, n);
    GridFunction out = f;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = means[lat.cube_of_cell(n, i)];
    return out;
}

inline CubeId cube_containing(const DyadicLattice& lat, const std::vector<double>& point, int n) {
    const Domain& d = lat.domain();
    std::vector<int> idx(d.axes());
    for (int a = 0; a < d.axes(); ++a) idx[a] = d.cell_index(a, point[a]);
    return CubeId{n, lat.cube_of_cell(n, d.flatten(idx))};
}

/// A lattice given by explicit cube lists, used by the validator so that
/// hand-built (possibly broken) partitions can be checked too.
struct ExplicitLattice {
    Domain domain;
    int n_min = 0;
    std::vector<std::vector<Cube>> levels;  // levels[k] holds level n_min + k

    static ExplicitLattice from(const DyadicLattice& lat) {
        ExplicitLattice ex{lat.domain(), lat.n_min(), {}};
        ex.levels.resize(lat.level_count());
        for (int n = lat.n_min(); n <= lat.n_max(); ++n) {
            auto& lvl = ex.levels[n - lat.n_min()];
            lvl.reserve(lat.cube_count(n));
            for (std::size_t q = 0; q < lat.cube_count(n); ++q) lvl.push_back(lat.cube(n, q));
        }
        return ex;
    }
};

struct ValidationCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double measured_parent_child_ratio = 0.0;
    double n0 = 0.0;    // diameter bound constant, delta = 1/2
    double eps0 = 0.0;  // inscribed-ball constant

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

namespace detail {

inline double cube_diameter(const Domain& d, const Cube& q) {
    // Opposite-corner distance; extents are axis-aligned so this is the diameter.
    double s2 = 0.0;
    double dt = 0.0;
    for (int a = 0; a < d.axes(); ++a) {
        const double w = (q.cells[a][1] - q.cells[a][0]) * d.cell_width(a);
        if (a == d.time_axis())
            dt = w;
        else
            s2 += w * w;
    }
    double diam = std::sqrt(s2);
    if (d.has_time_axis()) diam += std::pow(dt, 1.0 / (2.0 * d.parabolic_order()));
    return diam;
}

inline double cube_inradius(const Domain& d, const Cube& q) {
    // Largest metric ball centered at the cube center that fits inside.
    double r = std::numeric_limits<double>::infinity();
    for (int a = 0; a < d.axes(); ++a) {
        const double half = 0.5 * (q.cells[a][1] - q.cells[a][0]) * d.cell_width(a);
        if (a == d.time_axis())
            r = std::min(r, std::pow(half, 1.0 / (2.0 * d.parabolic_order())));
        else
            r = std::min(r, half);
    }
    return r;
}

}  // namespace detail

/// Checks the defining partition properties on the grid: disjoint cover,
/// nesting, diameter and inscribed-ball bounds with delta = 1/2, and the
/// exact parent/child measure ratio.
inline ValidationReport validate_lattice(const ExplicitLattice& ex, double expected_n1) {
    ValidationReport rep;
    const Domain& d = ex.domain;
    const std::size_t ncells = d.total_cells();
    const int nlevels = static_cast<int>(ex.levels.size());

    // Exact Euclidean/parabolic constants for this instantiation (delta = 1/2).
    {
        double s2 = 0.0, lt = 0.0, emin = std::numeric_limits<double>::infinity();
        const double m2 = 2.0 * d.parabolic_order();
        for (int a = 0; a < d.axes(); ++a) {
            if (a == d.time_axis()) {
                lt = d.length(a);
                emin = std::min(emin, std::pow(d.length(a) / 2.0, 1.0 / m2));
            } else {
                s2 += d.length(a) * d.length(a);
                emin = std::min(emin, d.length(a) / 2.0);
            }
        }
        rep.n0 = std::sqrt(s2) + (d.has_time_axis() ? std::pow(lt, 1.0 / m2) : 0.0);
        rep.eps0 = emin;
    }

    // Property (1): disjointness and covering, exact on cells.
    {
        ValidationCheck c{"disjoint_cover", true, ""};
        std::vector<std::uint8_t> hits(ncells);
        for (int k = 0; k < nlevels && c.pass; ++k) {
            std::fill(hits.begin(), hits.end(), 0);
            for (const Cube& q : ex.levels[k])
                for_each_cell_in_cube(d, q, [&](std::size_t i) { ++hits[i]; });
            for (std::size_t i = 0; i < ncells; ++i) {
                if (hits[i] != 1) {
                    c.pass = false;
                    c.detail = "cell " + std::to_string(i) + " covered " + std::to_string(hits[i]) +
                               " times at level " + std::to_string(ex.n_min + k);
                    break;
                }
            }
        }
        rep.checks.push_back(std::move(c));
    }

    // Property (2): each cube is contained in exactly one coarser cube,
    // plus the exact measure ratio of (4.57)-type pairs.
    {
        ValidationCheck c{"nesting", true, ""};
        double ratio = 0.0;
        bool ratio_uniform = true;
        for (int k = 1; k < nlevels && c.pass; ++k) {
            for (const Cube& q : ex.levels[k]) {
                int parents = 0;
                const Cube* parent = nullptr;
                for (const Cube& p : ex.levels[k - 1]) {
                    bool inside = true;
                    for (int a = 0; a < d.axes(); ++a)
                        inside &= p.cells[a][0] <= q.cells[a][0] && q.cells[a][1] <= p.cells[a][1];
                    if (inside) {
                        ++parents;
                        parent = &p;
                    }
                }
                if (parents != 1) {
                    c.pass = false;
                    c.detail = "cube at level " + std::to_string(ex.n_min + k) + " has " +
                               std::to_string(parents) + " parents";
                    break;
                }
                const double r = static_cast<double>(parent->cell_count()) /
                                 static_cast<double>(q.cell_count());
                if (ratio == 0.0) ratio = r;
                if (r != ratio) ratio_uniform = false;
            }
        }
        rep.measured_parent_child_ratio = ratio;
        rep.checks.push_back(std::move(c));

        ValidationCheck cr{"measure_ratio", true, ""};
        if (nlevels > 1 && (!ratio_uniform || ratio != expected_n1)) {
            cr.pass = false;
            cr.detail = "measured ratio " + std::to_string(ratio) + " expected " +
                        std::to_string(expected_n1);
        }
        rep.checks.push_back(std::move(cr));
    }

    // Properties (3) and (4): diameter and inscribed ball, delta = 1/2.
    {
        ValidationCheck c3{"diameter_bound", true, ""};
        ValidationCheck c4{"inscribed_ball", true, ""};
        const double tol = 1e-12;
        for (int k = 0; k < nlevels; ++k) {
            const int n = ex.n_min + k;
            const double scale = std::ldexp(1.0, -n);
            for (const Cube& q : ex.levels[k]) {
                if (detail::cube_diameter(d, q) > rep.n0 * scale * (1.0 + tol)) {
                    c3.pass = false;
                    c3.detail = "cube at level " + std::to_string(n) + " too wide";
                }
                if (detail::cube_inradius(d, q) < rep.eps0 * scale * (1.0 - tol)) {
                    c4.pass = false;
                    c4.detail = "cube at level " + std::to_string(n) + " lacks inscribed ball";
                }
            }
        }
        rep.checks.push_back(std::move(c3));
        rep.checks.push_back(std::move(c4));
    }

    return rep;
}

inline ValidationReport validate_lattice(const DyadicLattice& lat) {
    return validate_lattice(ExplicitLattice::from(lat), lat.n1());
}

}  // namespace sharpnorm
