#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sharpnorm/domain.hpp"
#include "sharpnorm/lattice.hpp"
#include "sharpnorm/weight.hpp"

namespace sharpnorm {

/// Seeded test-data generators. Every generator is a pure function of
/// (domain, parameters, seed), so suites are reproducible and reports can
/// record the seed instead of the data.
struct SuiteConfig {
    int count = 50;
    int max_mode = 8;    // per-axis frequency cap (band limit)
    int terms = 8;       // cosine terms per member
    std::uint64_t seed = 1;
    bool mean_zero = false;
};

/// Band-limited trigonometric polynomial
///   f(x) = sum_j a_j cos(2 pi k_j . theta + phi_j),
/// theta the per-axis fraction of the extent. Resolved exactly by the
/// spectral backend whenever max_mode is below the per-axis Nyquist.
inline GridFunction band_limited(const Domain& d, int max_mode, int terms, std::mt19937_64& rng,
                                 bool mean_zero = false) {
    std::uniform_int_distribution<int> mode(-max_mode, max_mode);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::normal_distribution<double> amp(0.0, 1.0);

    std::vector<std::vector<double>> freq(terms);
    std::vector<double> amps(terms), phases(terms);
    const int na = d.axes();
    for (int j = 0; j < terms; ++j) {
        freq[j].resize(na);
        bool all_zero = true;
        do {
            all_zero = true;
            for (int a = 0; a < na; ++a) {
                freq[j][a] = mode(rng);
                all_zero &= freq[j][a] == 0;
            }
        } while (mean_zero && all_zero);
        amps[j] = amp(rng) / (1.0 + 0.25 * static_cast<double>(j));
        phases[j] = phase(rng);
    }

    return GridFunction::sample(d, [&](const std::vector<double>& x) {
        double v = 0.0;
        for (int j = 0; j < terms; ++j) {
            double arg = phases[j];
            for (int a = 0; a < na; ++a)
                arg += 2.0 * M_PI * freq[j][a] * (x[a] - d.lo(a)) / d.length(a);
            v += amps[j] * std::cos(arg);
        }
        return v;
    });
}

/// Smooth compactly supported bump: exp(1 - 1/(1 - s^2)) for s < 1 with
/// s the quasi-metric distance to the center divided by radius; zero
/// outside. Multiplying by it confines support to the metric ball.
inline GridFunction bump(const Domain& d, const std::vector<double>& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
    return GridFunction::sample(d, [&](const std::vector<double>& x) {
        const double s = d.distance(x, center) / radius;
        if (s >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - s * s));
    });
}

inline std::vector<double> domain_center(const Domain& d) {
    std::vector<double> c(d.axes());
    for (int a = 0; a < d.axes(); ++a) c[a] = 0.5 * (d.lo(a) + d.hi(a));
    return c;
}

/// Suite of band-limited members; if support_radius > 0 each member is
/// masked by a bump of that radius around the domain center.
inline std::vector<GridFunction> make_suite(const Domain& d, const SuiteConfig& cfg,
                                            double support_radius = 0.0) {
    if (cfg.count < 1) throw std::invalid_argument("suite count must be >= 1");
    std::mt19937_64 rng(cfg.seed);
    std::vector<GridFunction> out;
    out.reserve(cfg.count);
    GridFunction mask = GridFunction::constant(d, 1.0);
    if (support_radius > 0.0) mask = bump(d, domain_center(d), support_radius);
    for (int j = 0; j < cfg.count; ++j) {
        GridFunction f = band_limited(d, cfg.max_mode, cfg.terms, rng, cfg.mean_zero);
        if (support_radius > 0.0)
            for (std::size_t i = 0; i < f.size(); ++i) f[i] *= mask[i];
        out.push_back(std::move(f));
    }
    return out;
}

/// Per-member seeds paired with members, for reports.
inline std::vector<std::uint64_t> suite_seeds(const SuiteConfig& cfg) {
    std::vector<std::uint64_t> s(cfg.count);
    for (int j = 0; j < cfg.count; ++j) s[j] = cfg.seed + static_cast<std::uint64_t>(j);
    return s;
}

/// Random (E, Q) pairs for the measure-comparison fit: cubes drawn across
/// levels, subsets either uniformly random cells or a concentrated
/// contiguous block, so small-μ-ratio points appear in the fit.
inline std::vector<MeasurePair> make_measure_pairs(const DyadicLattice& lat, int count,
                                                   std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("pair count must be >= 1");
    std::mt19937_64 rng(seed);
    const Domain& d = lat.domain();
    std::uniform_int_distribution<int> level(lat.n_min(), lat.n_max());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<MeasurePair> pairs;
    pairs.reserve(count);
    for (int j = 0; j < count; ++j) {
        const int n = level(rng);
        std::uniform_int_distribution<std::size_t> qi(0, lat.cube_count(n) - 1);
        MeasurePair pr;
        pr.cube = lat.cube(n, qi(rng));
        std::vector<std::size_t> cells;
        for_each_cell_in_cube(d, pr.cube, [&](std::size_t i) { cells.push_back(i); });
        if (j % 2 == 0) {
            const double keep = unif(rng);
            for (std::size_t i : cells)
                if (unif(rng) < keep) pr.subset_cells.push_back(i);
        } else {
            // contiguous block anchored at a random offset, length a random
            // power-of-two fraction so mu-ratios spread over decades
            const int shift = 1 + static_cast<int>(unif(rng) * 6.0);
            std::size_t len = std::max<std::size_t>(1, cells.size() >> shift);
            std::uniform_int_distribution<std::size_t> off(0, cells.size() - len);
            const std::size_t o = off(rng);
            pr.subset_cells.assign(cells.begin() + o, cells.begin() + o + len);
        }
        pairs.push_back(std::move(pr));
    }
    return pairs;
}

}  // namespace sharpnorm
