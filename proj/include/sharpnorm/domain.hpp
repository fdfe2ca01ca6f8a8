#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace sharpnorm {

enum class DomainKind {
    euclidean_box,
    euclidean_torus,
    parabolic_box,
    half_space_box,
};

inline std::string to_string(DomainKind k) {
    switch (k) {
        case DomainKind::euclidean_box: return "euclidean_box";
        case DomainKind::euclidean_torus: return "euclidean_torus";
        case DomainKind::parabolic_box: return "parabolic_box";
        case DomainKind::half_space_box: return "half_space_box";
    }
    return "unknown";
}

/// Uniform cell-centered grid over a box, torus, half space, or
/// space-time cylinder. For parabolic domains axis 0 is time and the
/// remaining axes are spatial; otherwise every axis is spatial.
class Domain {
public:
    Domain(DomainKind kind, int spatial_dim, int parabolic_order,
           std::vector<std::array<double, 2>> extents, std::vector<int> points)
        : kind_(kind),
          spatial_dim_(spatial_dim),
          parabolic_order_(parabolic_order),
          extents_(std::move(extents)),
          points_(std::move(points)) {
        const int na = axes();
        if (spatial_dim_ < 1) throw std::invalid_argument("spatial_dim must be >= 1");
        if (parabolic_order_ < 1) throw std::invalid_argument("parabolic_order must be >= 1");
        if (kind_ != DomainKind::parabolic_box && parabolic_order_ != 1)
            throw std::invalid_argument("parabolic_order must be 1 for non-parabolic domains");
        if (static_cast<int>(extents_.size()) != na || static_cast<int>(points_.size()) != na)
            throw std::invalid_argument("extents/points size must match axis count");
        for (int a = 0; a < na; ++a) {
            if (points_[a] < 2)
                throw std::invalid_argument("axis " + std::to_string(a) + " needs >= 2 grid points");
            if (!(extents_[a][1] > extents_[a][0]))
                throw std::invalid_argument("axis " + std::to_string(a) + " extent has nonpositive length");
        }
        strides_.assign(na, 1);
        for (int a = na - 2; a >= 0; --a)
            strides_[a] = strides_[a + 1] * static_cast<std::size_t>(points_[a + 1]);
    }

    static Domain unit_interval(int cells, DomainKind kind = DomainKind::euclidean_box) {
        return Domain(kind, 1, 1, {{0.0, 1.0}}, {cells});
    }

    DomainKind kind() const { return kind_; }
    int spatial_dim() const { return spatial_dim_; }
    int parabolic_order() const { return parabolic_order_; }
    bool has_time_axis() const { return kind_ == DomainKind::parabolic_box; }
    bool periodic() const { return kind_ == DomainKind::euclidean_torus; }
    int axes() const { return spatial_dim_ + (kind_ == DomainKind::parabolic_box ? 1 : 0); }
    int time_axis() const { return has_time_axis() ? 0 : -1; }

    const std::vector<std::array<double, 2>>& extents() const { return extents_; }
    const std::vector<int>& points() const { return points_; }

    double lo(int a) const { return extents_[a][0]; }
    double hi(int a) const { return extents_[a][1]; }
    double length(int a) const { return extents_[a][1] - extents_[a][0]; }
    double cell_width(int a) const { return length(a) / points_[a]; }

    double cell_measure() const {
        double m = 1.0;
        for (int a = 0; a < axes(); ++a) m *= cell_width(a);
        return m;
    }

    double measure() const {
        double m = 1.0;
        for (int a = 0; a < axes(); ++a) m *= length(a);
        return m;
    }

    std::size_t total_cells() const {
        std::size_t n = 1;
        for (int p : points_) n *= static_cast<std::size_t>(p);
        return n;
    }

    std::size_t stride(int a) const { return strides_[a]; }

    std::size_t flatten(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < axes(); ++a) f += strides_[a] * static_cast<std::size_t>(idx[a]);
        return f;
    }

    void unflatten(std::size_t flat, std::vector<int>& idx) const {
        idx.resize(axes());
        for (int a = 0; a < axes(); ++a) {
            idx[a] = static_cast<int>(flat / strides_[a]);
            flat %= strides_[a];
        }
    }

    int axis_index_of(std::size_t flat, int a) const {
        return static_cast<int>((flat / strides_[a]) % static_cast<std::size_t>(points_[a]));
    }

    double cell_center(int a, int i) const {
        return extents_[a][0] + (i + 0.5) * cell_width(a);
    }

    /// Cell index along one axis for a coordinate inside the extent
    /// (half-open convention along every axis).
    int cell_index(int a, double x) const {
        if (x < extents_[a][0] || x >= extents_[a][1])
            throw std::domain_error("coordinate outside domain extent on axis " + std::to_string(a));
        int i = static_cast<int>(std::floor((x - extents_[a][0]) / cell_width(a)));
        if (i >= points_[a]) i = points_[a] - 1;
        return i;
    }

    /// Per-axis displacement honoring torus wrap.
    double axis_delta(int a, double xa, double ya) const {
        double d = xa - ya;
        if (periodic()) {
            const double L = length(a);
            d -= L * std::round(d / L);
        }
        return d;
    }

    /// Quasi-metric distance: Euclidean, or |x-y| + |dt|^{1/2m} for
    /// parabolic space-time grids.
    double distance(const std::vector<double>& x, const std::vector<double>& y) const {
        if (has_time_axis()) {
            double s2 = 0.0;
            for (int a = 1; a < axes(); ++a) {
                const double d = axis_delta(a, x[a], y[a]);
                s2 += d * d;
            }
            const double dt = std::abs(axis_delta(0, x[0], y[0]));
            return std::sqrt(s2) + std::pow(dt, 1.0 / (2.0 * parabolic_order_));
        }
        double s2 = 0.0;
        for (int a = 0; a < axes(); ++a) {
            const double d = axis_delta(a, x[a], y[a]);
            s2 += d * d;
        }
        return std::sqrt(s2);
    }

    bool same_grid(const Domain& o) const {
        return kind_ == o.kind_ && spatial_dim_ == o.spatial_dim_ &&
               parabolic_order_ == o.parabolic_order_ && extents_ == o.extents_ &&
               points_ == o.points_;
    }

private:
    DomainKind kind_;
    int spatial_dim_;
    int parabolic_order_;
    std::vector<std::array<double, 2>> extents_;
    std::vector<int> points_;
    std::vector<std::size_t> strides_;
};

/// Sampled real scalar field on a Domain, one value per grid cell,
/// integrated with the uniform midpoint quadrature measure.
class GridFunction {
public:
    GridFunction(Domain domain, std::vector<double> values)
        : domain_(std::move(domain)), values_(std::move(values)) {
        if (values_.size() != domain_.total_cells())
            throw std::invalid_argument("value count must equal product of grid points");
    }

    static GridFunction constant(const Domain& d, double c) {
        return GridFunction(d, std::vector<double>(d.total_cells(), c));
    }

    /// Samples fn at cell centers. fn receives the coordinate vector.
    template <class Fn>
    static GridFunction sample(const Domain& d, Fn&& fn) {
        std::vector<double> v(d.total_cells());
        std::vector<int> idx(d.axes());
        std::vector<double> x(d.axes());
        for (std::size_t i = 0; i < v.size(); ++i) {
            d.unflatten(i, idx);
            for (int a = 0; a < d.axes(); ++a) x[a] = d.cell_center(a, idx[a]);
            v[i] = fn(x);
        }
        return GridFunction(d, std::move(v));
    }

    const Domain& domain() const { return domain_; }
    double cell_measure() const { return domain_.cell_measure(); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double integral() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s * cell_measure();
    }

    GridFunction abs() const {
        GridFunction g = *this;
        for (double& v : g.values_) v = std::abs(v);
        return g;
    }

    GridFunction& operator*=(double c) {
        for (double& v : values_) v *= c;
        return *this;
    }
    GridFunction& operator+=(const GridFunction& o) {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
        return *this;
    }
    GridFunction& operator-=(const GridFunction& o) {
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
        return *this;
    }

    friend GridFunction operator*(GridFunction f, double c) { return f *= c; }
    friend GridFunction operator*(double c, GridFunction f) { return f *= c; }
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }

private:
    Domain domain_;
    std::vector<double> values_;
};

/// Unweighted L_p norm with the grid quadrature; p = INFINITY gives sup.
inline double lp_norm(const GridFunction& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : f.values()) s += std::pow(std::abs(v), p);
    return std::pow(s * f.cell_measure(), 1.0 / p);
}

/// Weighted L_p(w dmu) norm.
inline double lp_norm(const GridFunction& f, double p, const GridFunction& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * w[i];
    return std::pow(s * f.cell_measure(), 1.0 / p);
}

}  // namespace sharpnorm
