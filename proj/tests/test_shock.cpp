#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "support/builders.hpp"
#include "tradeshock/shock.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using tradeshock::AggregateResult;
using tradeshock::ClampMode;
using tradeshock::data_error;
using tradeshock::GravityPanel;
using tradeshock::RouteClass;
using tradeshock::RouteResult;
using tradeshock::RouteScope;
using tradeshock::ShockParams;
using tradeshock::validation_error;

namespace {

ShockParams default_params(const std::string& epicenter = "EPI") {
    ShockParams params;
    params.epicenter_iso3 = epicenter;
    return params;
}

RouteResult route(std::string o, std::string d, double f_norm, double f_shock,
                  double dist_epicenter_km = 100.0, bool involves_epicenter = false) {
    RouteResult r;
    r.iso3_o = std::move(o);
    r.iso3_d = std::move(d);
    r.f_norm = f_norm;
    r.f_shock = f_shock;
    r.f_diff = f_norm - f_shock;
    r.pct_change = 100.0 * (f_shock - f_norm) / f_norm;
    r.dist_epicenter_km = dist_epicenter_km;
    r.involves_epicenter = involves_epicenter;
    return r;
}

// Equatorial panel: distances to the epicenter are multiples of one degree
// of longitude, so ordering by epicenter distance is easy to reason about.
GravityPanel equator_panel() {
    return testutil::make_panel(
        {
            testutil::country("EPI", 0.0, 0.0, {{2019, 100.0}}),
            testutil::country("AAA", 0.0, 5.0, {{2019, 100.0}}, /*eu=*/true),
            testutil::country("BBB", 0.0, 10.0, {{2019, 200.0}}, /*eu=*/true),
            testutil::country("CCC", 0.0, 20.0, {{2019, 300.0}}),
            testutil::country("FAR", 0.0, 60.0, {{2019, 400.0}}, /*eu=*/true),
        },
        {
            testutil::pair("AAA", "BBB", 10.0, {{2019, 1.0}}),
            testutil::pair("BBB", "AAA", 20.0, {{2019, 1.0}}),
            testutil::pair("AAA", "CCC", 10.0, {{2019, 1.0}}),
            testutil::pair("CCC", "AAA", 100.0, {{2019, 1.0}}),
            testutil::pair("BBB", "CCC", 50.0, {{2019, 1.0}}),
            testutil::pair("EPI", "AAA", 10.0, {{2019, 1.0}}),
            testutil::pair("AAA", "EPI", 10.0, {{2019, 1.0}}),
            testutil::pair("FAR", "AAA", 10.0, {{2019, 1.0}}),
            testutil::pair("AAA", "FAR", 10.0, {{2019, 1.0}}),
        },
        {2019});
}

}  // namespace

TEST_CASE("baseline_force follows the gravity form", "[shock]") {
    CHECK(tradeshock::baseline_force(2.0, 3.0, 1.0) == 6.0);
    CHECK(tradeshock::baseline_force(100.0, 50.0, 10.0) == 50.0);
    CHECK(tradeshock::baseline_force(3.0, 2.0, 1.0) ==
          tradeshock::baseline_force(2.0, 3.0, 1.0));
    CHECK_THROWS_AS(tradeshock::baseline_force(1.0, 1.0, 0.0), validation_error);
    CHECK_THROWS_AS(tradeshock::baseline_force(0.0, 1.0, 1.0), validation_error);
    CHECK_THROWS_AS(tradeshock::baseline_force(1.0, -1.0, 1.0), validation_error);
}

TEST_CASE("shock_factor evaluates the inverse-square kernel", "[shock]") {
    const ShockParams params = default_params();
    CHECK_THAT(tradeshock::shock_factor(100.0, params), WithinAbs(30.25, 1e-9));
    CHECK_THAT(tradeshock::shock_factor(550.0, params), WithinAbs(1.0, 1e-9));
    CHECK_THAT(tradeshock::shock_factor(5500.0, params), WithinAbs(0.01, 1e-9));
    CHECK_THROWS_AS(tradeshock::shock_factor(-1.0, params), validation_error);
    CHECK_THROWS_AS(tradeshock::shock_factor(std::nan(""), params), validation_error);
}

TEST_CASE("shock_factor decays strictly with distance", "[shock]") {
    const ShockParams params = default_params();
    double previous = tradeshock::shock_factor(0.0, params);
    for (double d = 50.0; d <= 8000.0; d += 50.0) {
        const double s = tradeshock::shock_factor(d, params);
        CHECK(s < previous);
        CHECK(s > 0.0);
        previous = s;
    }
}

TEST_CASE("shock_factor is invariant under joint distance/radius scaling", "[shock]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dist(10.0, 5000.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    for (int i = 0; i < 100; ++i) {
        ShockParams params = default_params();
        params.r_km = dist(rng);
        const double d = dist(rng);
        const double c = scale(rng);
        ShockParams scaled = params;
        scaled.r_km = c * params.r_km;
        CHECK_THAT(tradeshock::shock_factor(c * d, scaled),
                   WithinRel(tradeshock::shock_factor(d, params), 1e-12));
    }
}

TEST_CASE("shocked_force applies shock, clamp floor, then mask", "[shock]") {
    ShockParams params = default_params();

    SECTION("literal mode, unmasked") {
        const auto [f_shock, f_diff] = tradeshock::shocked_force(100.0, 0.1, params, false);
        CHECK_THAT(f_shock, WithinRel(70.0, 1e-12));
        CHECK_THAT(f_diff, WithinRel(30.0, 1e-12));
    }
    SECTION("literal mode, masked") {
        const auto [f_shock, f_diff] = tradeshock::shocked_force(100.0, 0.1, params, true);
        CHECK_THAT(f_shock, WithinRel(7.0, 1e-9));
        CHECK_THAT(f_diff, WithinRel(93.0, 1e-9));
    }
    SECTION("literal mode lets strong shocks flip the sign") {
        const auto [f_shock, f_diff] = tradeshock::shocked_force(100.0, 30.25, params, false);
        CHECK_THAT(f_shock, WithinRel(-8975.0, 1e-12));
        CHECK_THAT(f_diff, WithinRel(9075.0, 1e-12));
    }
    SECTION("clamp floors the shocked flow at zero before masking") {
        params.clamp_mode = ClampMode::clamp_at_zero;
        const auto unmasked = tradeshock::shocked_force(100.0, 30.25, params, false);
        CHECK(unmasked.first == 0.0);
        CHECK(unmasked.second == 100.0);
        const auto masked = tradeshock::shocked_force(100.0, 30.25, params, true);
        CHECK(masked.first == 0.0);
        CHECK(masked.second == 100.0);
    }
    SECTION("validation") {
        CHECK_THROWS_AS(tradeshock::shocked_force(-1.0, 0.1, params, false), validation_error);
        CHECK_THROWS_AS(tradeshock::shocked_force(std::nan(""), 0.1, params, false),
                        validation_error);
    }
}

TEST_CASE("shocked_force obeys the clamp bounds everywhere", "[shock]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> norm(0.0, 1e6);
    std::uniform_real_distribution<double> shock(0.0, 50.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);
    for (int i = 0; i < 500; ++i) {
        ShockParams params = default_params();
        params.clamp_mode = ClampMode::clamp_at_zero;
        params.s_p = shock(rng) / 10.0;
        params.mask_reduction = unit(rng);
        const double f_norm = norm(rng);
        const auto [f_shock, f_diff] =
            tradeshock::shocked_force(f_norm, shock(rng), params, coin(rng));
        CHECK(f_shock >= 0.0);
        CHECK(f_shock <= f_norm);
        CHECK_THAT(f_diff, WithinAbs(f_norm - f_shock, 1e-9));
    }
}

TEST_CASE("literal unmasked loss equals s_p * s * F_norm", "[shock]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> norm(1.0, 1e6);
    std::uniform_real_distribution<double> shock(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        ShockParams params = default_params();
        params.s_p = shock(rng);
        const double f_norm = norm(rng);
        const double s = shock(rng);
        const auto [f_shock, f_diff] = tradeshock::shocked_force(f_norm, s, params, false);
        (void)f_shock;
        CHECK_THAT(f_diff, WithinAbs(params.s_p * s * f_norm, 1e-9 * f_norm));
    }
}

TEST_CASE("normalize_forces rescales log1p to the unit interval", "[shock]") {
    const double e1 = 1.718281828459045;       // e - 1
    const double e2 = 6.3890560989306495;      // e^2 - 1
    const auto normalized = tradeshock::normalize_forces({0.0, e1, e2});
    REQUIRE(normalized.size() == 3);
    CHECK(normalized[0] == 0.0);
    CHECK_THAT(normalized[1], WithinAbs(0.5, 1e-12));
    CHECK(normalized[2] == 1.0);
}

TEST_CASE("normalize_forces maps extremes exactly and preserves order", "[shock]") {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> value(0.0, 1e9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> values(20);
        for (double& v : values) v = value(rng);
        const auto normalized = tradeshock::normalize_forces(values);
        const auto min_it = std::min_element(values.begin(), values.end());
        const auto max_it = std::max_element(values.begin(), values.end());
        CHECK(normalized[min_it - values.begin()] == 0.0);
        CHECK(normalized[max_it - values.begin()] == 1.0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (values[i] < values[j]) CHECK(normalized[i] <= normalized[j]);
            }
        }
    }
}

TEST_CASE("normalize_forces maps constant lists to zeros", "[shock]") {
    const auto normalized = tradeshock::normalize_forces({5.0, 5.0, 5.0});
    CHECK(normalized == std::vector<double>{0.0, 0.0, 0.0});
    // Range at or below epsilon counts as constant.
    const auto near = tradeshock::normalize_forces({5.0, 5.0 + 1e-12});
    CHECK(near == std::vector<double>{0.0, 0.0});
}

TEST_CASE("normalize_forces validates its input", "[shock]") {
    CHECK_THROWS_AS(tradeshock::normalize_forces({}), validation_error);
    CHECK_THROWS_AS(tradeshock::normalize_forces({1.0, -0.5}), validation_error);
    CHECK_THROWS_AS(tradeshock::normalize_forces({1.0, std::nan("")}), validation_error);
}

TEST_CASE("compute_forces walks every panel pair", "[shock]") {
    const GravityPanel panel = equator_panel();
    const ShockParams params = default_params();
    const auto routes = tradeshock::compute_forces(panel, params, 2019);
    REQUIRE(routes.size() == panel.pairs.size());

    for (const RouteResult& r : routes) {
        const auto& origin = panel.country(r.iso3_o);
        const auto& dest = panel.country(r.iso3_d);
        CHECK_THAT(r.dist_epicenter_km,
                   WithinAbs(tradeshock::haversine_km(origin.location,
                                                      panel.country("EPI").location),
                             1e-9));
        CHECK(r.involves_epicenter == (r.iso3_o == "EPI" || r.iso3_d == "EPI"));
        const double dist = [&] {
            for (const auto& p : panel.pairs) {
                if (p.iso3_o == r.iso3_o && p.iso3_d == r.iso3_d) return p.dist_km;
            }
            return 0.0;
        }();
        CHECK_THAT(r.f_norm,
                   WithinRel(origin.gdp_at(2019) * dest.gdp_at(2019) / (dist * dist), 1e-12));
        CHECK_THAT(r.pct_change, WithinAbs(100.0 * (r.f_shock - r.f_norm) / r.f_norm, 1e-9));
        CHECK_THAT(r.f_diff, WithinAbs(r.f_norm - r.f_shock, 1e-6 * std::fabs(r.f_norm) + 1e-9));
    }

    CHECK_THROWS_AS(tradeshock::compute_forces(panel, params, 1999), data_error);
    CHECK_THROWS_AS(tradeshock::compute_forces(panel, default_params("ZZZ"), 2019), data_error);
    ShockParams bad = params;
    bad.r_km = -5.0;
    CHECK_THROWS_WITH(tradeshock::compute_forces(panel, bad, 2019),
                      Catch::Matchers::ContainsSubstring("r_km"));
}

TEST_CASE("significance_filter keeps large shares plus epicenter routes", "[shock]") {
    ShockParams params = default_params();
    params.min_share = 0.1;
    std::vector<RouteResult> routes = {
        route("AAA", "BBB", 100.0, 50.0),
        route("BBB", "CCC", 100.0, 49.0),
        route("CCC", "DDD", 100.0, 1.0),
    };
    auto kept = tradeshock::significance_filter(routes, params);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].iso3_o == "AAA");
    CHECK(kept[1].iso3_o == "BBB");

    // Epicenter routes survive regardless of share.
    routes[2].involves_epicenter = true;
    kept = tradeshock::significance_filter(routes, params);
    REQUIRE(kept.size() == 3);

    // Shares sit strictly above the threshold, never at it.
    std::vector<RouteResult> boundary = {
        route("AAA", "BBB", 100.0, 10.0),
        route("BBB", "CCC", 100.0, 90.0),
    };
    kept = tradeshock::significance_filter(boundary, params);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].iso3_o == "BBB");
}

TEST_CASE("significance_filter requires positive total shocked flow", "[shock]") {
    const ShockParams params = default_params();
    std::vector<RouteResult> routes = {route("AAA", "BBB", 100.0, -1.0)};
    CHECK_THROWS_AS(tradeshock::significance_filter(routes, params), data_error);
    routes = {route("AAA", "BBB", 100.0, 0.0)};
    CHECK_THROWS_AS(tradeshock::significance_filter(routes, params), data_error);
}

TEST_CASE("route_report orders by epicenter distance with lexicographic ties", "[shock]") {
    const GravityPanel panel = equator_panel();
    const auto routes =
        tradeshock::route_report(panel, default_params(), RouteScope::eu_any(), 2019);
    REQUIRE(routes.size() == 8);  // FAR-origin route sits beyond route_max_km
    CHECK(routes[0].iso3_o == "EPI");
    CHECK(routes[0].iso3_d == "AAA");
    CHECK(routes[1].iso3_o == "AAA");
    CHECK(routes[1].iso3_d == "BBB");
    CHECK(routes[2].iso3_d == "CCC");
    CHECK(routes[3].iso3_d == "EPI");
    CHECK(routes[4].iso3_d == "FAR");
    CHECK(routes[5].iso3_o == "BBB");
    CHECK(routes[5].iso3_d == "AAA");
    CHECK(routes[6].iso3_o == "BBB");
    CHECK(routes[6].iso3_d == "CCC");
    CHECK(routes[7].iso3_o == "CCC");
    for (std::size_t i = 1; i < routes.size(); ++i) {
        CHECK(routes[i - 1].dist_epicenter_km <= routes[i].dist_epicenter_km);
    }
}

TEST_CASE("route_report applies the distance cutoff in every scope", "[shock]") {
    const GravityPanel panel = equator_panel();
    const ShockParams params = default_params();
    for (const RouteScope& scope :
         {RouteScope::top_outliers(100), RouteScope::eu_any(), RouteScope::eu_only()}) {
        const auto routes = tradeshock::route_report(panel, params, scope, 2019);
        for (const RouteResult& r : routes) {
            CHECK(r.iso3_o != "FAR");
            CHECK(r.dist_epicenter_km <= params.route_max_km);
        }
    }
    // Raising the cutoff admits the distant origin again.
    ShockParams wide = params;
    wide.route_max_km = 20000.0;
    const auto routes =
        tradeshock::route_report(panel, wide, RouteScope::top_outliers(100), 2019);
    CHECK(std::any_of(routes.begin(), routes.end(),
                      [](const RouteResult& r) { return r.iso3_o == "FAR"; }));
}

TEST_CASE("route_report restricts membership per scope", "[shock]") {
    const GravityPanel panel = equator_panel();
    const ShockParams params = default_params();

    const auto eu_only =
        tradeshock::route_report(panel, params, RouteScope::eu_only(), 2019);
    REQUIRE(eu_only.size() == 3);  // AAA<->BBB plus AAA->FAR (all-EU endpoints)
    for (const RouteResult& r : eu_only) {
        CHECK(panel.country(r.iso3_o).eu_member);
        CHECK(panel.country(r.iso3_d).eu_member);
    }

    const auto epicenter =
        tradeshock::route_report(panel, params, RouteScope::epicenter_only(), 2019);
    REQUIRE(epicenter.size() == 2);
    for (const RouteResult& r : epicenter) CHECK(r.involves_epicenter);
    CHECK(epicenter[0].iso3_o == "EPI");  // distance zero sorts first
    CHECK(epicenter[1].iso3_d == "EPI");
}

TEST_CASE("top_outliers ranks by baseline force before truncating", "[shock]") {
    const GravityPanel panel = equator_panel();
    const auto top =
        tradeshock::route_report(panel, default_params(), RouteScope::top_outliers(3), 2019);
    REQUIRE(top.size() == 3);
    // The three largest baseline forces all originate from AAA; the report is
    // then re-sorted by distance with lexicographic tie-breaks.
    CHECK(top[0].iso3_d == "BBB");
    CHECK(top[1].iso3_d == "CCC");
    CHECK(top[2].iso3_d == "FAR");
    for (const RouteResult& r : top) CHECK(r.f_norm >= 200.0);
}

TEST_CASE("top_outliers breaks baseline-force ties lexicographically", "[shock]") {
    const GravityPanel panel = testutil::make_panel(
        {
            testutil::country("EPI", 0.0, 0.0, {{2019, 100.0}}),
            testutil::country("PPP", 0.0, 5.0, {{2019, 100.0}}),
            testutil::country("QQQ", 0.0, 6.0, {{2019, 100.0}}),
            testutil::country("RRR", 0.0, 7.0, {{2019, 100.0}}),
        },
        {
            testutil::pair("QQQ", "RRR", 10.0, {{2019, 1.0}}),
            testutil::pair("PPP", "RRR", 10.0, {{2019, 1.0}}),
            testutil::pair("PPP", "QQQ", 10.0, {{2019, 1.0}}),
        },
        {2019});
    const auto top =
        tradeshock::route_report(panel, default_params(), RouteScope::top_outliers(2), 2019);
    REQUIRE(top.size() == 2);
    CHECK(top[0].iso3_o == "PPP");
    CHECK(top[0].iso3_d == "QQQ");
    CHECK(top[1].iso3_o == "PPP");
    CHECK(top[1].iso3_d == "RRR");
}

TEST_CASE("route_report classifies the extreme routes apart", "[shock]") {
    const GravityPanel panel = equator_panel();
    const auto routes =
        tradeshock::route_report(panel, default_params(), RouteScope::epicenter_only(), 2019);
    REQUIRE(routes.size() == 2);
    // The epicenter-origin route suffers a vastly larger loss, so it carries
    // the normalized maximum; the other end of the range stays below threshold.
    CHECK(routes[0].iso3_o == "EPI");
    CHECK(routes[0].cls == RouteClass::redirection);
    CHECK(routes[1].cls == RouteClass::repulsion);
}

TEST_CASE("route_report rejects empty selections and zero top_n", "[shock]") {
    const GravityPanel no_epi_routes = testutil::make_panel(
        {
            testutil::country("EPI", 0.0, 0.0, {{2019, 100.0}}),
            testutil::country("AAA", 0.0, 5.0, {{2019, 100.0}}),
            testutil::country("BBB", 0.0, 10.0, {{2019, 100.0}}),
        },
        {testutil::pair("AAA", "BBB", 10.0, {{2019, 1.0}})}, {2019});
    CHECK_THROWS_AS(tradeshock::route_report(no_epi_routes, default_params(),
                                             RouteScope::epicenter_only(), 2019),
                    data_error);
    CHECK_THROWS_AS(tradeshock::route_report(no_epi_routes, default_params(),
                                             RouteScope::eu_any(), 2019),
                    data_error);
    CHECK_THROWS_AS(tradeshock::route_report(no_epi_routes, default_params(),
                                             RouteScope::top_outliers(0), 2019),
                    validation_error);
}

TEST_CASE("routes_csv emits a stable byte-identical table", "[shock]") {
    const GravityPanel panel = equator_panel();
    const auto first =
        tradeshock::routes_csv(tradeshock::route_report(panel, default_params(),
                                                        RouteScope::eu_any(), 2019));
    const auto second =
        tradeshock::routes_csv(tradeshock::route_report(panel, default_params(),
                                                        RouteScope::eu_any(), 2019));
    CHECK(first == second);
    CHECK(first.rfind("iso3_o,iso3_d,dist_epicenter_km,f_norm,f_shock,f_diff,pct_change,class\n",
                      0) == 0);
    CHECK(tradeshock::routes_csv({}) ==
          "iso3_o,iso3_d,dist_epicenter_km,f_norm,f_shock,f_diff,pct_change,class\n");
}

TEST_CASE("anti_gravity_aggregate reduces masked flows", "[shock]") {
    SECTION("no masked routes means zero aggregate") {
        const std::vector<RouteResult> routes = {route("AAA", "BBB", 10.0, 5.0)};
        const AggregateResult agg = tradeshock::anti_gravity_aggregate(routes, "EPI");
        CHECK(agg.f_tg == 0.0);
        CHECK(agg.local_conflict_force == 0.0);
        CHECK(agg.masked_flow_count == 0);
    }
    SECTION("single epicenter route") {
        const std::vector<RouteResult> routes = {route("EPI", "AAA", 10.0, 1.0)};
        const AggregateResult agg = tradeshock::anti_gravity_aggregate(routes, "EPI");
        CHECK_THAT(agg.f_tg, WithinRel(-9.0, 1e-12));
        CHECK_THAT(agg.local_conflict_force, WithinRel(9.0, 1e-12));
        CHECK(agg.masked_flow_count == 1);
    }
    SECTION("weights come from the whole route list") {
        const std::vector<RouteResult> routes = {
            route("EPI", "AAA", 10.0, 1.0),
            route("AAA", "BBB", 10.0, 3.0),
        };
        const AggregateResult agg = tradeshock::anti_gravity_aggregate(routes, "EPI");
        CHECK_THAT(agg.f_tg, WithinRel(0.25 * -9.0, 1e-12));
        CHECK_THAT(agg.local_conflict_force, WithinRel(9.0, 1e-12));
        CHECK(agg.masked_flow_count == 1);
    }
    SECTION("destination-side epicenter routes count as masked") {
        const std::vector<RouteResult> routes = {route("AAA", "EPI", 10.0, 2.0)};
        const AggregateResult agg = tradeshock::anti_gravity_aggregate(routes, "EPI");
        CHECK(agg.masked_flow_count == 1);
        CHECK_THAT(agg.f_tg, WithinRel(-8.0, 1e-12));
    }
}

TEST_CASE("anti_gravity_aggregate scales linearly with flow magnitude", "[shock]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> norm(1.0, 100.0);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<RouteResult> routes;
        for (int i = 0; i < 10; ++i) {
            const double f_norm = norm(rng);
            routes.push_back(route(i < 3 ? "EPI" : "XXX", "YYY", f_norm, frac(rng) * f_norm));
        }
        const AggregateResult base = tradeshock::anti_gravity_aggregate(routes, "EPI");
        const double c = 7.0;
        for (RouteResult& r : routes) {
            r.f_norm *= c;
            r.f_shock *= c;
            r.f_diff *= c;
        }
        const AggregateResult scaled = tradeshock::anti_gravity_aggregate(routes, "EPI");
        CHECK_THAT(scaled.f_tg, WithinRel(c * base.f_tg, 1e-9));
        CHECK_THAT(scaled.local_conflict_force, WithinRel(c * base.local_conflict_force, 1e-9));
        CHECK(scaled.masked_flow_count == base.masked_flow_count);
    }
}

TEST_CASE("aggregate pull is negative whenever masked flows lose mass", "[shock]") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> norm(1.0, 1e6);
    std::uniform_real_distribution<double> frac(0.01, 0.99);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RouteResult> routes;
        for (int i = 0; i < 12; ++i) {
            const double f_norm = norm(rng);
            routes.push_back(
                route(i == 0 ? "EPI" : "XXX", "YYY", f_norm, frac(rng) * f_norm));
        }
        CHECK(tradeshock::anti_gravity_aggregate(routes, "EPI").f_tg < 0.0);
    }
}

TEST_CASE("anti_gravity_aggregate requires positive total shocked flow", "[shock]") {
    const std::vector<RouteResult> routes = {route("EPI", "AAA", 10.0, -1.0)};
    CHECK_THROWS_AS(tradeshock::anti_gravity_aggregate(routes, "EPI"), data_error);
}

TEST_CASE("income_potential sums distance-discounted partner output", "[shock]") {
    const GravityPanel panel = testutil::make_panel(
        {
            testutil::country("AAA", 0.0, 0.0, {{2019, 1.0}}),
            testutil::country("BBB", 0.0, 10.0, {{2019, 10.0}}),
            testutil::country("CCC", 0.0, 20.0, {{2019, 5.0}}),
        },
        {
            testutil::pair("AAA", "BBB", 2.0, {{2019, 1.0}}),
            testutil::pair("CCC", "AAA", 2.0, {{2019, 1.0}}),  // reverse direction works too
        },
        {2019});
    tradeshock::PotentialParams pp;
    CHECK_THAT(tradeshock::income_potential("AAA", panel, pp, 2019), WithinRel(7.5, 1e-12));

    pp.k = 2.0;
    CHECK_THAT(tradeshock::income_potential("AAA", panel, pp, 2019), WithinRel(15.0, 1e-12));

    pp.k = 1.0;
    pp.a = 2.0;
    CHECK_THAT(tradeshock::income_potential("AAA", panel, pp, 2019), WithinRel(3.75, 1e-12));

    CHECK_THROWS_AS(tradeshock::income_potential("ZZZ", panel, pp, 2019), data_error);
    // BBB has no recorded distance to CCC.
    CHECK_THROWS_AS(tradeshock::income_potential("BBB", panel, pp, 2019), data_error);

    tradeshock::PotentialParams bad;
    bad.k = 0.0;
    CHECK_THROWS_AS(tradeshock::income_potential("AAA", panel, bad, 2019), validation_error);
}

TEST_CASE("total_potential subtracts conflict pull", "[shock]") {
    const GravityPanel panel = testutil::make_panel(
        {
            testutil::country("AAA", 0.0, 0.0, {{2019, 1.0}}),
            testutil::country("BBB", 0.0, 10.0, {{2019, 10.0}}),
            testutil::country("CCC", 0.0, 20.0, {{2019, 5.0}}),
        },
        {
            testutil::pair("AAA", "BBB", 2.0, {{2019, 1.0}}),
            testutil::pair("CCC", "AAA", 2.0, {{2019, 1.0}}),
        },
        {2019});
    const tradeshock::PotentialParams pp;
    CHECK_THAT(tradeshock::total_potential("AAA", panel, {}, pp, 2019), WithinRel(7.5, 1e-12));
    CHECK_THAT(tradeshock::total_potential("AAA", panel, {{10.0, 2.0}}, pp, 2019),
               WithinRel(2.5, 1e-12));
    CHECK_THAT(tradeshock::total_potential("AAA", panel, {{3.0, 1.0}, {4.0, 2.0}}, pp, 2019),
               WithinRel(2.5, 1e-12));
    // Each added conflict lowers the total.
    const double without = tradeshock::total_potential("AAA", panel, {{1.0, 5.0}}, pp, 2019);
    const double with = tradeshock::total_potential("AAA", panel, {{1.0, 5.0}, {2.0, 4.0}},
                                                    pp, 2019);
    CHECK(with < without);
    CHECK_THROWS_AS(tradeshock::total_potential("AAA", panel, {{1.0, 0.0}}, pp, 2019),
                    validation_error);
    CHECK_THROWS_AS(tradeshock::total_potential("AAA", panel, {{1.0, -2.0}}, pp, 2019),
                    validation_error);
}
