#pragma once

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "sharpnorm/domain.hpp"

namespace sharpnorm {

enum class DiffBackend { spectral, central2 };

/// u together with D^alpha u for |alpha| <= max_order (spatial axes) and
/// u_t, all produced by one differentiation backend.
struct DerivativeStack {
    GridFunction u;
    int max_order;
    DiffBackend backend;
    std::map<std::vector<int>, GridFunction> spatial;  // key: per-spatial-axis orders
    std::optional<GridFunction> du_dt;

    const GridFunction& d(const std::vector<int>& alpha) const {
        auto it = spatial.find(alpha);
        if (it == spatial.end()) throw std::invalid_argument("missing derivative order in stack");
        return it->second;
    }

    const GridFunction& dt() const {
        if (!du_dt) throw std::invalid_argument("stack has no time derivative");
        return *du_dt;
    }

    std::vector<int> spatial_axes() const {
        std::vector<int> ax;
        for (int a = 0; a < u.domain().axes(); ++a)
            if (a != u.domain().time_axis()) ax.push_back(a);
        return ax;
    }
};

namespace detail {

inline std::vector<std::vector<int>> multi_indices_up_to(int nvars, int max_order) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(nvars, 0);
    auto total = [&] {
        int s = 0;
        for (int v : cur) s += v;
        return s;
    };
    while (true) {
        if (total() <= max_order) out.push_back(cur);
        int a = nvars - 1;
        while (a >= 0) {
            if (++cur[a] <= max_order) break;
            cur[a] = 0;
            --a;
        }
        if (a < 0) break;
    }
    return out;
}

class SpectralTransform {
public:
    explicit SpectralTransform(const Domain& d) : domain_(d), n_(d.total_cells()) {
        dims_.assign(d.points().begin(), d.points().end());
        buf_.resize(n_);
        hat_.resize(n_);
        work_.resize(n_);
    }

    void forward(const GridFunction& f) {
        for (std::size_t i = 0; i < n_; ++i) buf_[i] = {f[i], 0.0};
        run(buf_.data(), hat_.data(), FFTW_FORWARD);
        const double inv = 1.0 / static_cast<double>(n_);
        for (auto& c : hat_) c *= inv;
    }

    /// Inverse transform of hat multiplied by the derivative symbol
    /// prod_a (2 pi i k_a / L_a)^{orders[a]}; Nyquist modes are zeroed
    /// for odd per-axis orders.
    GridFunction derivative(const std::vector<int>& orders) const {
        const int na = domain_.axes();
        std::vector<std::complex<double>> tmp = hat_;
        std::vector<int> idx(na);
        for (std::size_t i = 0; i < n_; ++i) {
            std::complex<double> sym{1.0, 0.0};
            bool zero = false;
            for (int a = 0; a < na && !zero; ++a) {
                const int o = orders[a];
                if (o == 0) continue;
                const int pts = dims_[a];
                int k = static_cast<int>((i / domain_.stride(a)) % static_cast<std::size_t>(pts));
                if (k > pts / 2) k -= pts;
                if (k == pts / 2 && pts % 2 == 0 && o % 2 == 1) {
                    zero = true;
                    break;
                }
                const std::complex<double> ik{0.0, 2.0 * M_PI * k / domain_.length(a)};
                for (int j = 0; j < o; ++j) sym *= ik;
            }
            tmp[i] = zero ? std::complex<double>{0.0, 0.0} : tmp[i] * sym;
        }
        run(tmp.data(), const_cast<std::complex<double>*>(work_.data()), FFTW_BACKWARD);
        std::vector<double> v(n_);
        for (std::size_t i = 0; i < n_; ++i) v[i] = work_[i].real();
        return GridFunction(domain_, std::move(v));
    }

private:
    void run(std::complex<double>* in, std::complex<double>* out, int sign) const {
        fftw_plan plan = fftw_plan_dft(static_cast<int>(dims_.size()), dims_.data(),
                                       reinterpret_cast<fftw_complex*>(in),
                                       reinterpret_cast<fftw_complex*>(out), sign, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    Domain domain_;
    std::size_t n_;
    std::vector<int> dims_;
    std::vector<std::complex<double>> buf_, hat_;
    mutable std::vector<std::complex<double>> work_;
};

/// Periodic second-order central first difference along one axis.
inline GridFunction central_first(const GridFunction& f, int axis) {
    const Domain& d = f.domain();
    const int pts = d.points()[axis];
    const double inv2h = 1.0 / (2.0 * d.cell_width(axis));
    GridFunction out = GridFunction::constant(d, 0.0);
    const std::size_t stride = d.stride(axis);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const int j = d.axis_index_of(i, axis);
        const std::size_t base = i - static_cast<std::size_t>(j) * stride;
        const int jp = (j + 1) % pts, jm = (j + pts - 1) % pts;
        out[i] = (f[base + jp * stride] - f[base + jm * stride]) * inv2h;
    }
    return out;
}

}  // namespace detail

/// Builds the full derivative stack. The spectral backend is exact for
/// band-limited data below Nyquist and requires a periodic grid (pass
/// assume_periodic for space-time grids built with periodic test data).
inline DerivativeStack differentiate(const GridFunction& u, DiffBackend backend, int max_order,
                                     bool assume_periodic = false) {
    const Domain& d = u.domain();
    if (backend == DiffBackend::spectral && !d.periodic() && !assume_periodic)
        throw std::invalid_argument("spectral backend requires a periodic domain");
    if (max_order < 1) throw std::invalid_argument("max_order must be >= 1");

    DerivativeStack st{u, max_order, backend, {}, std::nullopt};
    const auto sp_axes = st.spatial_axes();
    const int ns = static_cast<int>(sp_axes.size());
    const auto alphas = detail::multi_indices_up_to(ns, max_order);

    if (backend == DiffBackend::spectral) {
        detail::SpectralTransform ft(d);
        ft.forward(u);
        std::vector<int> full(d.axes(), 0);
        for (const auto& alpha : alphas) {
            std::fill(full.begin(), full.end(), 0);
            for (int a = 0; a < ns; ++a) full[sp_axes[a]] = alpha[a];
            st.spatial.emplace(alpha, ft.derivative(full));
        }
        if (d.has_time_axis()) {
            std::fill(full.begin(), full.end(), 0);
            full[d.time_axis()] = 1;
            st.du_dt = ft.derivative(full);
        } else {
            st.du_dt = GridFunction::constant(d, 0.0);
        }
        return st;
    }

    // central2: higher orders by repeated application of the first
    // difference, so composition consistency is exact.
    for (const auto& alpha : alphas) {
        GridFunction g = u;
        for (int a = 0; a < ns; ++a)
            for (int j = 0; j < alpha[a]; ++j) g = detail::central_first(g, sp_axes[a]);
        st.spatial.emplace(alpha, std::move(g));
    }
    st.du_dt = d.has_time_axis() ? detail::central_first(u, d.time_axis())
                                 : GridFunction::constant(d, 0.0);
    return st;
}

}  // namespace sharpnorm
