#include <catch2/catch_amalgamated.hpp>

#include "sharpnorm/json_io.hpp"

using namespace sharpnorm;

TEST_CASE("strict key checking") {
    json j = {{"a", 1}, {"b", 2}};
    REQUIRE_NOTHROW(check_keys(j, "x", {"a"}, {"b"}));
    REQUIRE_THROWS_WITH(check_keys(j, "x", {"a", "c"}, {"b"}),
                        Catch::Matchers::ContainsSubstring("missing field 'c'"));
    REQUIRE_THROWS_WITH(check_keys(j, "x", {"a"}),
                        Catch::Matchers::ContainsSubstring("unknown field 'b'"));
    REQUIRE_THROWS_AS(check_keys(json::array(), "x", {}), SchemaError);
}

TEST_CASE("domain parsing round-trips") {
    json j = {{"kind", "parabolic_box"},
              {"d", 2},
              {"m", 2},
              {"extents", {{0.0, 1.0}, {-1.0, 1.0}, {0.0, 1.0}}},
              {"points", {16, 32, 16}}};
    Domain d = parse_domain(j);
    REQUIRE(d.kind() == DomainKind::parabolic_box);
    REQUIRE(d.spatial_dim() == 2);
    REQUIRE(d.parabolic_order() == 2);
    REQUIRE(d.axes() == 3);
    Domain d2 = parse_domain(domain_to_json(d));
    REQUIRE(d2.same_grid(d));

    json bad = j;
    bad["kind"] = "weird";
    REQUIRE_THROWS_WITH(parse_domain(bad), Catch::Matchers::ContainsSubstring("weird"));
    bad = j;
    bad["extents"] = {{0.0, 1.0}};
    REQUIRE_THROWS_AS(parse_domain(bad), SchemaError);  // axis count mismatch
    bad = j;
    bad["comment"] = "nope";
    REQUIRE_THROWS_WITH(parse_domain(bad), Catch::Matchers::ContainsSubstring("unknown field"));
    bad = j;
    bad.erase("points");
    REQUIRE_THROWS_WITH(parse_domain(bad), Catch::Matchers::ContainsSubstring("missing field"));
}

TEST_CASE("weight parsing") {
    Domain d(DomainKind::euclidean_box, 1, 1, {{-1.0, 1.0}}, {64});
    Weight u = parse_weight({{"structure", "plain"}}, d);
    for (std::size_t i = 0; i < u.size(); ++i) REQUIRE(u[i] == 1.0);

    Weight w = parse_weight({{"structure", "power"}, {"axis", 0}, {"exponent", 0.5}}, d);
    Weight ref = power_weight(0, 0.5, d);
    for (std::size_t i = 0; i < w.size(); ++i) REQUIRE(w[i] == ref[i]);

    json prod = {{"structure", "product"},
                 {"split", {0}},
                 {"w1", {{"structure", "power"}, {"axis", 0}, {"exponent", 0.5}}},
                 {"w2", {{"structure", "plain"}}}};
    Weight pw = parse_weight(prod, d);
    for (std::size_t i = 0; i < pw.size(); ++i) REQUIRE(pw[i] == ref[i]);

    REQUIRE_THROWS_AS(parse_weight({{"structure", "nope"}}, d), SchemaError);
    REQUIRE_THROWS_AS(parse_weight({{"structure", "power"}, {"axis", 0}}, d), SchemaError);
    REQUIRE_THROWS_AS(parse_weight({{"structure", "power"}, {"axis", 7}, {"exponent", 1.0}}, d),
                      SchemaError);  // domain errors surface as schema errors
}

TEST_CASE("mixed-norm spec parsing") {
    Domain d(DomainKind::euclidean_torus, 2, 1, {{-1.0, 1.0}, {0.0, 1.0}}, {32, 16});
    json j = {{"split", {0}},
              {"p", 2.0},
              {"q", 2.0},
              {"w1", {{"structure", "power"}, {"axis", 0}, {"exponent", 0.5}}}};
    MixedNormSpec spec = parse_mixed_spec(j, d);
    GridFunction one = GridFunction::constant(d, 1.0);
    REQUIRE(mixed_norm(one, spec) == Catch::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-3));

    json plain = {{"split", {0}}, {"p", 2.0}, {"q", 3.0}};
    MixedNormSpec ps = parse_mixed_spec(plain, d);
    REQUIRE(mixed_norm(one, ps) == Catch::Approx(std::sqrt(2.0)));  // inner axis has length 2

    json bad = plain;
    bad["p"] = 0.5;
    REQUIRE_THROWS_AS(parse_mixed_spec(bad, d), SchemaError);
    bad = plain;
    bad["w1"] = {{"structure", "mystery"}};
    REQUIRE_THROWS_AS(parse_mixed_spec(bad, d), SchemaError);
}

TEST_CASE("ball family, suite, and lattice parsing") {
    BallFamily fam = parse_family({{"r0", 0.125}, {"count", 3}, {"stride", 4}});
    REQUIRE(fam.radii == std::vector<double>{0.125, 0.25, 0.5});
    REQUIRE(fam.center_stride == 4);
    REQUIRE_THROWS_AS(parse_family({{"r0", -1.0}, {"count", 3}}), SchemaError);

    SuiteConfig sc = parse_suite({{"count", 7}, {"seed", 42}, {"mean_zero", true}});
    REQUIRE(sc.count == 7);
    REQUIRE(sc.seed == 42);
    REQUIRE(sc.mean_zero);
    REQUIRE(sc.max_mode == SuiteConfig{}.max_mode);
    REQUIRE_THROWS_AS(parse_suite({{"count", 7}}), SchemaError);

    Domain d(DomainKind::euclidean_box, 1, 1, {{0.0, 1.0}}, {64});
    DyadicLattice lat = parse_lattice({{"n_min", 0}, {"n_max", 6}}, d);
    REQUIRE(lat.n_max() == 6);
    REQUIRE_THROWS_AS(parse_lattice({{"n_min", 0}, {"n_max", 7}}, d), SchemaError);  // misaligned
    REQUIRE_THROWS_AS(parse_lattice({{"n_min", 0}}, d), SchemaError);
}
