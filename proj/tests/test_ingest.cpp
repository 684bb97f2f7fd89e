#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "support/builders.hpp"
#include "tradeshock/ingest.hpp"

using tradeshock::data_error;
using tradeshock::load_countries;
using tradeshock::load_pair_table;
using tradeshock::validation_error;

namespace {

std::string country_path(const std::string& tag, const std::string& content) {
    return testutil::write_scratch_file(testutil::scratch_dir(tag), "countries.csv", content)
        .string();
}

std::string pair_path(const std::string& tag, const std::string& content) {
    return testutil::write_scratch_file(testutil::scratch_dir(tag), "pairs.csv", content).string();
}

}  // namespace

TEST_CASE("load_countries reads records with flags and multiple GDP years", "[ingest]") {
    const auto path = country_path("countries_ok",
                                   "iso3,name,lat,lng,gdp_2019,gdp_2023,eu_member,sanctioning,"
                                   "energy_exporter\n"
                                   "DEU,Germany,51.1657,10.4515,3.9e12,4.4e12,1,1,0\n"
                                   "RUS,Russia,61.524,105.3188,1.7e12,2.0e12,0,0,1\n");
    const auto countries = load_countries(path);
    REQUIRE(countries.size() == 2);
    CHECK(countries[0].iso3 == "DEU");
    CHECK(countries[0].name == "Germany");
    CHECK(countries[0].location.lat == 51.1657);
    CHECK(countries[0].location.lng == 10.4515);
    CHECK(countries[0].gdp_at(2019) == 3.9e12);
    CHECK(countries[0].gdp_at(2023) == 4.4e12);
    CHECK(countries[0].eu_member);
    CHECK(countries[0].sanctioning);
    CHECK_FALSE(countries[0].energy_exporter);
    CHECK(countries[1].energy_exporter);
}

TEST_CASE("load_countries defaults flags to false when columns are absent", "[ingest]") {
    const auto path = country_path("countries_noflags",
                                   "iso3,name,lat,lng,gdp_2019\n"
                                   "FRA,France,46.2276,2.2137,2.7e12\n");
    const auto countries = load_countries(path);
    REQUIRE(countries.size() == 1);
    CHECK_FALSE(countries[0].eu_member);
    CHECK_FALSE(countries[0].sanctioning);
    CHECK_FALSE(countries[0].energy_exporter);
}

TEST_CASE("load_countries treats an empty GDP cell as an unreported year", "[ingest]") {
    const auto path = country_path("countries_gap",
                                   "iso3,name,lat,lng,gdp_2019,gdp_2023\n"
                                   "POL,Poland,51.9194,19.1451,5.9e11,\n");
    const auto countries = load_countries(path);
    REQUIRE(countries.size() == 1);
    CHECK(countries[0].has_gdp(2019));
    CHECK_FALSE(countries[0].has_gdp(2023));
    CHECK_THROWS_AS(countries[0].gdp_at(2023), data_error);
}

TEST_CASE("load_countries accepts quoted names with embedded commas", "[ingest]") {
    const auto path = country_path("countries_quoted",
                                   "iso3,name,lat,lng,gdp_2019\n"
                                   "KOR,\"Korea, Republic of\",35.9078,127.7669,1.6e12\n");
    const auto countries = load_countries(path);
    REQUIRE(countries.size() == 1);
    CHECK(countries[0].name == "Korea, Republic of");
}

TEST_CASE("load_countries rejects malformed tables", "[ingest]") {
    CHECK_THROWS_AS(load_countries(country_path("countries_dup",
                                                "iso3,name,lat,lng,gdp_2019\n"
                                                "DEU,Germany,51,10,1e12\n"
                                                "DEU,Germany,51,10,1e12\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_badcode",
                                                "iso3,name,lat,lng,gdp_2019\n"
                                                "de,Germany,51,10,1e12\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_unknowncol",
                                                "iso3,name,lat,lng,gdp_2019,population\n"
                                                "DEU,Germany,51,10,1e12,83\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_badlat",
                                                "iso3,name,lat,lng,gdp_2019\n"
                                                "DEU,Germany,95,10,1e12\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_zerogdp",
                                                "iso3,name,lat,lng,gdp_2019\n"
                                                "DEU,Germany,51,10,0\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_noname",
                                                "iso3,name,lat,lng,gdp_2019\n"
                                                "DEU,,51,10,1e12\n")),
                    validation_error);
    CHECK_THROWS_AS(load_countries(country_path("countries_nogdpcol",
                                                "iso3,name,lat,lng\n"
                                                "DEU,Germany,51,10\n")),
                    validation_error);
    CHECK_THROWS_AS(
        load_countries(country_path("countries_empty", "iso3,name,lat,lng,gdp_2019\n")),
        data_error);
}

TEST_CASE("load_pair_table reads distances and trade years", "[ingest]") {
    const auto path = pair_path("pairs_ok",
                                "iso3_o,iso3_d,dist_km,trade_2019,trade_2023\n"
                                "DEU,FRA,879.6,1.2e11,1.5e11\n"
                                "FRA,DEU,879.6,9.0e10,\n");
    const auto pairs = load_pair_table(path);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0].iso3_o == "DEU");
    CHECK(pairs[0].iso3_d == "FRA");
    CHECK(pairs[0].dist_km == 879.6);
    CHECK(pairs[0].trade_at(2019) == 1.2e11);
    CHECK(pairs[0].trade_at(2023) == 1.5e11);
    CHECK_FALSE(pairs[1].trade_at(2023).has_value());
}

TEST_CASE("load_pair_table keeps zero trade as a reported value", "[ingest]") {
    const auto path = pair_path("pairs_zero",
                                "iso3_o,iso3_d,dist_km,trade_2019\n"
                                "DEU,FRA,879.6,0\n");
    const auto pairs = load_pair_table(path);
    REQUIRE(pairs.size() == 1);
    REQUIRE(pairs[0].trade_at(2019).has_value());
    CHECK(*pairs[0].trade_at(2019) == 0.0);
}

TEST_CASE("load_pair_table rejects malformed tables", "[ingest]") {
    CHECK_THROWS_AS(load_pair_table(pair_path("pairs_self",
                                              "iso3_o,iso3_d,dist_km,trade_2019\n"
                                              "DEU,DEU,1,1\n")),
                    validation_error);
    CHECK_THROWS_AS(load_pair_table(pair_path("pairs_dup",
                                              "iso3_o,iso3_d,dist_km,trade_2019\n"
                                              "DEU,FRA,879.6,1\n"
                                              "DEU,FRA,879.6,2\n")),
                    validation_error);
    CHECK_THROWS_AS(load_pair_table(pair_path("pairs_negtrade",
                                              "iso3_o,iso3_d,dist_km,trade_2019\n"
                                              "DEU,FRA,879.6,-1\n")),
                    validation_error);
    CHECK_THROWS_AS(load_pair_table(pair_path("pairs_zerodist",
                                              "iso3_o,iso3_d,dist_km,trade_2019\n"
                                              "DEU,FRA,0,1\n")),
                    validation_error);
    CHECK_THROWS_AS(load_pair_table(pair_path("pairs_unknowncol",
                                              "iso3_o,iso3_d,dist_km,tariff\n"
                                              "DEU,FRA,879.6,1\n")),
                    validation_error);
    CHECK_THROWS_AS(
        load_pair_table(pair_path("pairs_empty", "iso3_o,iso3_d,dist_km,trade_2019\n")),
        data_error);
}

TEST_CASE("build_panel sorts countries and pairs and drops unusable pairs", "[ingest]") {
    std::vector<tradeshock::CountryRecord> countries = {
        testutil::country("FRA", 46.0, 2.0, {{2019, 2.7e12}}),
        testutil::country("DEU", 51.0, 10.0, {{2019, 3.9e12}}),
        testutil::country("POL", 52.0, 19.0, {{2023, 6.8e11}}),  // no 2019 GDP
    };
    std::vector<tradeshock::PairObservation> pairs = {
        testutil::pair("FRA", "DEU", 879.6, {{2019, 9e10}}),
        testutil::pair("DEU", "FRA", 879.6, {{2019, 1.2e11}}),
        testutil::pair("DEU", "POL", 515.0, {{2019, 8e10}}),  // dropped: POL GDP gap
        testutil::pair("DEU", "ITA", 1200.0, {{2019, 7e10}}),  // dropped: unknown country
    };
    const auto report = tradeshock::build_panel(countries, pairs, {2019});
    CHECK(report.pairs_seen == 4);
    CHECK(report.pairs_dropped == 2);
    REQUIRE(report.panel.pairs.size() == 2);
    CHECK(report.panel.pairs[0].iso3_o == "DEU");
    CHECK(report.panel.pairs[1].iso3_o == "FRA");
    REQUIRE(report.panel.countries.size() == 3);
    CHECK(report.panel.countries[0].iso3 == "DEU");
    CHECK(report.panel.countries[1].iso3 == "FRA");
    CHECK(report.panel.countries[2].iso3 == "POL");
    CHECK(report.panel.has_year(2019));
    CHECK_FALSE(report.panel.has_year(2023));
    CHECK(report.panel.country("DEU").iso3 == "DEU");
    CHECK(report.panel.find_country("ITA") == nullptr);
    CHECK_THROWS_AS(report.panel.country("ITA"), data_error);
}

TEST_CASE("build_panel dedupes years and validates emptiness", "[ingest]") {
    std::vector<tradeshock::CountryRecord> countries = {
        testutil::country("DEU", 51.0, 10.0, {{2019, 3.9e12}}),
        testutil::country("FRA", 46.0, 2.0, {{2019, 2.7e12}}),
    };
    std::vector<tradeshock::PairObservation> pairs = {
        testutil::pair("DEU", "FRA", 879.6, {{2019, 1.2e11}}),
    };
    const auto report = tradeshock::build_panel(countries, pairs, {2019, 2019, 2019});
    CHECK(report.panel.years == std::vector<int>{2019});

    CHECK_THROWS_AS(tradeshock::build_panel(countries, pairs, {}), validation_error);
    CHECK_THROWS_AS(tradeshock::build_panel(countries, pairs, {2023}), data_error);
}

TEST_CASE("fixture tables load cleanly end to end", "[ingest]") {
    const auto panel = testutil::load_fixture_panel({2019, 2023});
    CHECK(panel.countries.size() == 60);
    CHECK(panel.pairs.size() == 3481);
    CHECK(panel.years == std::vector<int>{2019, 2023});
    CHECK(panel.country("UKR").iso3 == "UKR");
}
