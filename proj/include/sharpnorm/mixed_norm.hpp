#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "sharpnorm/derivative.hpp"
#include "sharpnorm/domain.hpp"

namespace sharpnorm {

/// Weighted mixed L_{p,q} norm specification: the split axes form the
/// inner x' block with exponent p and weight w1; the remaining axes
/// (including time, if present) form the outer x'' block with exponent q
/// and weight w2.
class MixedNormSpec {
public:
    MixedNormSpec(const Domain& domain, std::vector<int> split, double p, double q,
                  const std::function<double(const std::vector<double>&)>& w1_fn,
                  const std::function<double(const std::vector<double>&)>& w2_fn)
        : domain_(domain), split_(std::move(split)), p_(p), q_(q) {
        if (!(p_ > 1.0) || !(q_ > 1.0) || std::isinf(p_) || std::isinf(q_))
            throw std::invalid_argument("mixed norm exponents must lie in (1, inf)");
        std::sort(split_.begin(), split_.end());
        for (int a = 0; a < domain_.axes(); ++a)
            if (!std::binary_search(split_.begin(), split_.end(), a)) rest_.push_back(a);
        for (int a : split_)
            if (a < 0 || a >= domain_.axes()) throw std::invalid_argument("split axis out of range");
        if (domain_.has_time_axis() &&
            std::binary_search(split_.begin(), split_.end(), domain_.time_axis()))
            throw std::invalid_argument("time axis must belong to the outer block");

        mu1_ = 1.0;
        for (int a : split_) mu1_ *= domain_.cell_width(a);
        mu2_ = 1.0;
        for (int a : rest_) mu2_ *= domain_.cell_width(a);

        inner_count_ = 1;
        for (int a : split_) inner_count_ *= static_cast<std::size_t>(domain_.points()[a]);
        outer_count_ = 1;
        for (int a : rest_) outer_count_ *= static_cast<std::size_t>(domain_.points()[a]);

        const std::size_t n = domain_.total_cells();
        inner_of_.resize(n);
        outer_of_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t in = 0, out = 0;
            for (int a : split_)
                in = in * static_cast<std::size_t>(domain_.points()[a]) +
                     static_cast<std::size_t>(domain_.axis_index_of(i, a));
            for (int a : rest_)
                out = out * static_cast<std::size_t>(domain_.points()[a]) +
                      static_cast<std::size_t>(domain_.axis_index_of(i, a));
            inner_of_[i] = in;
            outer_of_[i] = out;
        }

        w1_.assign(inner_count_, 1.0);
        w2_.assign(outer_count_, 1.0);
        std::vector<double> x;
        std::vector<int> idx(domain_.axes(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            x.clear();
            for (int a : split_) x.push_back(domain_.cell_center(a, domain_.axis_index_of(i, a)));
            w1_[inner_of_[i]] = w1_fn ? w1_fn(x) : 1.0;
            x.clear();
            for (int a : rest_) x.push_back(domain_.cell_center(a, domain_.axis_index_of(i, a)));
            w2_[outer_of_[i]] = w2_fn ? w2_fn(x) : 1.0;
        }
        for (double v : w1_)
            if (!(v > 0.0)) throw std::invalid_argument("w1 must be positive");
        for (double v : w2_)
            if (!(v > 0.0)) throw std::invalid_argument("w2 must be positive");
    }

    static MixedNormSpec unit(const Domain& d, std::vector<int> split, double p, double q) {
        return MixedNormSpec(d, std::move(split), p, q, nullptr, nullptr);
    }

    const Domain& domain() const { return domain_; }
    const std::vector<int>& split() const { return split_; }
    double p() const { return p_; }
    double q() const { return q_; }

    double norm(const GridFunction& f) const {
        if (!f.domain().same_grid(domain_))
            throw std::invalid_argument("function domain does not match mixed norm spec");
        std::vector<double> acc(outer_count_, 0.0);
        for (std::size_t i = 0; i < f.size(); ++i)
            acc[outer_of_[i]] += std::pow(std::abs(f[i]), p_) * w1_[inner_of_[i]];
        double total = 0.0;
        for (std::size_t o = 0; o < outer_count_; ++o)
            total += std::pow(acc[o] * mu1_, q_ / p_) * w2_[o];
        return std::pow(total * mu2_, 1.0 / q_);
    }

private:
    Domain domain_;
    std::vector<int> split_, rest_;
    double p_, q_;
    double mu1_ = 1.0, mu2_ = 1.0;
    std::size_t inner_count_ = 1, outer_count_ = 1;
    std::vector<std::size_t> inner_of_, outer_of_;
    std::vector<double> w1_, w2_;
};

inline double mixed_norm(const GridFunction& f, const MixedNormSpec& spec) {
    return spec.norm(f);
}

/// ||u_t|| + sum_{|alpha| <= 2m} lambda^{1 - |alpha|/(2m)} ||D^alpha u||
/// in the mixed norm.
inline double lambda_scaled_sum(const DerivativeStack& stack, double lambda, int m,
                                const MixedNormSpec& spec) {
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (stack.max_order < 2 * m) throw std::invalid_argument("stack misses orders up to 2m");
    double total = spec.norm(stack.dt());
    for (const auto& [alpha, g] : stack.spatial) {
        int order = 0;
        for (int o : alpha) order += o;
        if (order > 2 * m) continue;
        total += std::pow(lambda, 1.0 - order / (2.0 * m)) * spec.norm(g);
    }
    return total;
}

}  // namespace sharpnorm
