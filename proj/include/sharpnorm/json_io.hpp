#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "sharpnorm/ball.hpp"
#include "sharpnorm/domain.hpp"
#include "sharpnorm/lattice.hpp"
#include "sharpnorm/mixed_norm.hpp"
#include "sharpnorm/suite.hpp"
#include "sharpnorm/weight.hpp"

namespace sharpnorm {

using nlohmann::json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Strict schema guard: every listed required key present, no key
/// outside required + optional.
inline void check_keys(const json& j, const std::string& where,
                       const std::vector<std::string>& required,
                       const std::vector<std::string>& optional = {}) {
    if (!j.is_object()) throw SchemaError(where + ": expected a JSON object");
    std::set<std::string> allowed(required.begin(), required.end());
    allowed.insert(optional.begin(), optional.end());
    for (const std::string& k : required)
        if (!j.contains(k)) throw SchemaError(where + ": missing field '" + k + "'");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw SchemaError(where + ": unknown field '" + k + "'");
}

inline DomainKind parse_domain_kind(const std::string& s) {
    if (s == "euclidean_box") return DomainKind::euclidean_box;
    if (s == "euclidean_torus") return DomainKind::euclidean_torus;
    if (s == "parabolic_box") return DomainKind::parabolic_box;
    if (s == "half_space_box") return DomainKind::half_space_box;
    throw SchemaError("unknown domain kind '" + s + "'");
}

/// {kind, d, m, extents:[[lo,hi],...], points:[...]}
inline Domain parse_domain(const json& j) {
    check_keys(j, "domain", {"kind", "d", "m", "extents", "points"});
    std::vector<std::array<double, 2>> extents;
    for (const auto& e : j.at("extents")) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("domain.extents entries must be [lo, hi]");
        extents.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    try {
        return Domain(parse_domain_kind(j.at("kind").get<std::string>()), j.at("d").get<int>(),
                      j.at("m").get<int>(), std::move(extents), j.at("points").get<std::vector<int>>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("domain: ") + e.what());
    }
}

inline json domain_to_json(const Domain& d) {
    json extents = json::array();
    for (const auto& e : d.extents()) extents.push_back({e[0], e[1]});
    return {{"kind", to_string(d.kind())},
            {"d", d.spatial_dim()},
            {"m", d.parabolic_order()},
            {"extents", extents},
            {"points", d.points()}};
}

/// {structure:"plain"} | {structure:"power", axis, exponent, offset?}
/// | {structure:"product", split:[...], w1:..., w2:...}
inline Weight parse_weight(const json& j, const Domain& d) {
    check_keys(j, "weight", {"structure"}, {"axis", "exponent", "offset", "split", "w1", "w2"});
    const std::string structure = j.at("structure").get<std::string>();
    try {
        if (structure == "plain") return Weight::unit(d);
        if (structure == "power") {
            check_keys(j, "weight", {"structure", "axis", "exponent"}, {"offset"});
            return power_weight(j.at("axis").get<int>(), j.at("exponent").get<double>(), d,
                                j.value("offset", 0.0));
        }
        if (structure == "product") {
            check_keys(j, "weight", {"structure", "split", "w1", "w2"});
            return product_weight(parse_weight(j.at("w1"), d), parse_weight(j.at("w2"), d),
                                  j.at("split").get<std::vector<int>>());
        }
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("weight: ") + e.what());
    }
    throw SchemaError("unknown weight structure '" + structure + "'");
}

/// Sub-block weight as a coordinate function (for mixed-norm factors):
/// plain, or a power weight indexed within the block's coordinates.
inline std::function<double(const std::vector<double>&)> parse_block_weight(const json& j) {
    check_keys(j, "block weight", {"structure"}, {"axis", "exponent", "offset"});
    const std::string structure = j.at("structure").get<std::string>();
    if (structure == "plain") return nullptr;
    if (structure == "power") {
        check_keys(j, "block weight", {"structure", "axis", "exponent"}, {"offset"});
        const int axis = j.at("axis").get<int>();
        const double exponent = j.at("exponent").get<double>();
        const double offset = j.value("offset", 0.0);
        return [axis, exponent, offset](const std::vector<double>& x) {
            if (axis < 0 || axis >= static_cast<int>(x.size()))
                throw std::invalid_argument("block weight axis out of range");
            return std::pow(std::abs(x[axis] - offset), exponent);
        };
    }
    throw SchemaError("unknown block weight structure '" + structure + "'");
}

/// {split:[...], p, q, w1:..., w2:...}
inline MixedNormSpec parse_mixed_spec(const json& j, const Domain& d) {
    check_keys(j, "mixed norm spec", {"split", "p", "q"}, {"w1", "w2"});
    try {
        return MixedNormSpec(d, j.at("split").get<std::vector<int>>(), j.at("p").get<double>(),
                             j.at("q").get<double>(),
                             j.contains("w1") ? parse_block_weight(j.at("w1")) : nullptr,
                             j.contains("w2") ? parse_block_weight(j.at("w2")) : nullptr);
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("mixed norm spec: ") + e.what());
    }
}

/// {r0, count, stride?}
inline BallFamily parse_family(const json& j) {
    check_keys(j, "ball family", {"r0", "count"}, {"stride"});
    try {
        return BallFamily::geometric(j.at("r0").get<double>(), j.at("count").get<int>(),
                                     j.value("stride", 1));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("ball family: ") + e.what());
    }
}

/// {count, max_mode?, terms?, seed, mean_zero?}
inline SuiteConfig parse_suite(const json& j) {
    check_keys(j, "suite", {"count", "seed"}, {"max_mode", "terms", "mean_zero"});
    SuiteConfig cfg;
    cfg.count = j.at("count").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.max_mode = j.value("max_mode", cfg.max_mode);
    cfg.terms = j.value("terms", cfg.terms);
    cfg.mean_zero = j.value("mean_zero", cfg.mean_zero);
    return cfg;
}

/// {n_min, n_max}
inline DyadicLattice parse_lattice(const json& j, const Domain& d) {
    check_keys(j, "lattice", {"n_min", "n_max"});
    try {
        return DyadicLattice(d, j.at("n_min").get<int>(), j.at("n_max").get<int>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("lattice: ") + e.what());
    }
}

}  // namespace sharpnorm
