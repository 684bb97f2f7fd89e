#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tradeshock/csv.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/geo.hpp"

namespace tradeshock {

struct CountryRecord {
    std::string iso3;
    std::string name;
    GeoPoint location;
    std::map<int, double> gdp;  // year -> GDP; absent year means unreported
    bool eu_member = false;
    bool sanctioning = false;
    bool energy_exporter = false;

    bool has_gdp(int year) const { return gdp.count(year) != 0; }

    double gdp_at(int year) const {
        const auto it = gdp.find(year);
        if (it == gdp.end()) {
            throw data_error(iso3 + ": no GDP for year " + std::to_string(year));
        }
        return it->second;
    }
};

struct PairObservation {
    std::string iso3_o;
    std::string iso3_d;
    double dist_km = 0.0;
    std::map<int, double> trade;  // year -> trade value; absent year means unreported

    std::optional<double> trade_at(int year) const {
        const auto it = trade.find(year);
        if (it == trade.end()) return std::nullopt;
        return it->second;
    }
};

// Joined country/pair data restricted to years with full GDP coverage.
// Countries are sorted by code, pairs by (origin, destination).
struct GravityPanel {
    std::vector<CountryRecord> countries;
    std::vector<PairObservation> pairs;
    std::vector<int> years;

    bool has_year(int year) const {
        return std::binary_search(years.begin(), years.end(), year);
    }

    const CountryRecord* find_country(const std::string& iso3) const {
        const auto it = std::lower_bound(
            countries.begin(), countries.end(), iso3,
            [](const CountryRecord& c, const std::string& code) { return c.iso3 < code; });
        if (it == countries.end() || it->iso3 != iso3) return nullptr;
        return &*it;
    }

    const CountryRecord& country(const std::string& iso3) const {
        const CountryRecord* c = find_country(iso3);
        if (c == nullptr) {
            throw data_error("unknown country code: " + iso3);
        }
        return *c;
    }
};

namespace detail {

inline bool is_iso3(std::string_view s) {
    if (s.size() != 3) return false;
    for (const char c : s) {
        if (c < 'A' || c > 'Z') return false;
    }
    return true;
}

inline std::string require_iso3(std::string_view field, const std::string& where) {
    const std::string_view t = trim(field);
    if (!is_iso3(t)) {
        throw validation_error(where + ": not a 3-letter uppercase country code: '" +
                               std::string(field) + "'");
    }
    return std::string(t);
}

inline bool parse_flag(std::string_view field, const std::string& where) {
    const std::string_view t = trim(field);
    if (t == "0") return false;
    if (t == "1") return true;
    throw validation_error(where + ": flag must be 0 or 1, got '" + std::string(field) + "'");
}

// Extracts the year from a column name like "gdp_2019"; -1 when the prefix
// does not match.
inline int column_year(const std::string& column, const std::string& prefix,
                       const std::string& where) {
    if (column.size() <= prefix.size() || column.compare(0, prefix.size(), prefix) != 0) {
        return -1;
    }
    const std::string suffix = column.substr(prefix.size());
    for (const char c : suffix) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw validation_error(where + ": malformed year column '" + column + "'");
        }
    }
    return static_cast<int>(parse_long(suffix, where + ": " + column));
}

}  // namespace detail

// Loads a country table: iso3,name,lat,lng,gdp_<year>...,eu_member,sanctioning,
// energy_exporter. Flag columns are optional and default to false.
inline std::vector<CountryRecord> load_countries(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::string here = path + ": header";
    const std::vector<std::string> fixed = {"iso3", "name", "lat", "lng"};
    if (table.header.size() < fixed.size()) {
        throw validation_error(here + ": expected columns iso3,name,lat,lng,gdp_<year>...");
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (table.header[i] != fixed[i]) {
            throw validation_error(here + ": column " + std::to_string(i + 1) + " must be '" +
                                   fixed[i] + "', got '" + table.header[i] + "'");
        }
    }

    std::vector<std::pair<std::size_t, int>> gdp_columns;  // column index -> year
    std::map<std::string, std::size_t> flag_columns;
    for (std::size_t i = fixed.size(); i < table.header.size(); ++i) {
        const std::string& col = table.header[i];
        const int year = detail::column_year(col, "gdp_", here);
        if (year >= 0) {
            gdp_columns.emplace_back(i, year);
        } else if (col == "eu_member" || col == "sanctioning" || col == "energy_exporter") {
            if (!flag_columns.emplace(col, i).second) {
                throw validation_error(here + ": duplicate column '" + col + "'");
            }
        } else {
            throw validation_error(here + ": unknown column '" + col + "'");
        }
    }
    if (gdp_columns.empty()) {
        throw validation_error(here + ": at least one gdp_<year> column is required");
    }

    std::vector<CountryRecord> countries;
    std::set<std::string> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
        CountryRecord rec;
        rec.iso3 = detail::require_iso3(row[0], where + ": iso3");
        if (!seen.insert(rec.iso3).second) {
            throw validation_error(where + ": duplicate country code '" + rec.iso3 + "'");
        }
        rec.name = std::string(trim(row[1]));
        if (rec.name.empty()) {
            throw validation_error(where + ": name: must not be empty");
        }
        const double lat = parse_double(row[2], where + ": lat");
        const double lng = parse_double(row[3], where + ": lng");
        if (lat < -90.0 || lat > 90.0 || !std::isfinite(lat)) {
            throw validation_error(where + ": lat: out of [-90, 90]");
        }
        rec.location = GeoPoint(lat, lng);
        for (const auto& [col, year] : gdp_columns) {
            if (trim(row[col]).empty()) continue;  // unreported year
            const std::string label = where + ": " + table.header[col];
            const double gdp = parse_double(row[col], label);
            if (!std::isfinite(gdp) || gdp <= 0.0) {
                throw validation_error(label + ": GDP must be finite and > 0");
            }
            rec.gdp[year] = gdp;
        }
        const auto flag_at = [&](const char* name, bool& out) {
            const auto it = flag_columns.find(name);
            if (it == flag_columns.end()) return;
            out = detail::parse_flag(row[it->second], where + ": " + name);
        };
        flag_at("eu_member", rec.eu_member);
        flag_at("sanctioning", rec.sanctioning);
        flag_at("energy_exporter", rec.energy_exporter);
        countries.push_back(std::move(rec));
    }
    if (countries.empty()) {
        throw data_error(path + ": no country rows");
    }
    return countries;
}

// Loads a directed pair table: iso3_o,iso3_d,dist_km,trade_<year>....
// Empty trade cells mean unreported; zero is a reported value.
inline std::vector<PairObservation> load_pair_table(const std::string& path) {
    const CsvTable table = read_csv(path);
    const std::string here = path + ": header";
    const std::vector<std::string> fixed = {"iso3_o", "iso3_d", "dist_km"};
    if (table.header.size() < fixed.size()) {
        throw validation_error(here + ": expected columns iso3_o,iso3_d,dist_km,trade_<year>...");
    }
    for (std::size_t i = 0; i < fixed.size(); ++i) {
        if (table.header[i] != fixed[i]) {
            throw validation_error(here + ": column " + std::to_string(i + 1) + " must be '" +
                                   fixed[i] + "', got '" + table.header[i] + "'");
        }
    }
    std::vector<std::pair<std::size_t, int>> trade_columns;
    for (std::size_t i = fixed.size(); i < table.header.size(); ++i) {
        const int year = detail::column_year(table.header[i], "trade_", here);
        if (year < 0) {
            throw validation_error(here + ": unknown column '" + table.header[i] + "'");
        }
        trade_columns.emplace_back(i, year);
    }

    std::vector<PairObservation> pairs;
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path + ":" + std::to_string(table.line_numbers[r]);
        PairObservation obs;
        obs.iso3_o = detail::require_iso3(row[0], where + ": iso3_o");
        obs.iso3_d = detail::require_iso3(row[1], where + ": iso3_d");
        if (obs.iso3_o == obs.iso3_d) {
            throw validation_error(where + ": self-pair " + obs.iso3_o + " -> " + obs.iso3_d);
        }
        if (!seen.emplace(obs.iso3_o, obs.iso3_d).second) {
            throw validation_error(where + ": duplicate pair " + obs.iso3_o + " -> " + obs.iso3_d);
        }
        obs.dist_km = parse_double(row[2], where + ": dist_km");
        if (!std::isfinite(obs.dist_km) || obs.dist_km <= 0.0) {
            throw validation_error(where + ": dist_km: must be finite and > 0");
        }
        for (const auto& [col, year] : trade_columns) {
            if (trim(row[col]).empty()) continue;  // unreported year
            const std::string label = where + ": " + table.header[col];
            const double trade = parse_double(row[col], label);
            if (!std::isfinite(trade) || trade < 0.0) {
                throw validation_error(label + ": trade must be finite and >= 0");
            }
            obs.trade[year] = trade;
        }
        pairs.push_back(std::move(obs));
    }
    if (pairs.empty()) {
        throw data_error(path + ": no pair rows");
    }
    return pairs;
}

struct PanelBuildReport {
    GravityPanel panel;
    std::size_t pairs_seen = 0;
    std::size_t pairs_dropped = 0;  // unknown endpoint or GDP gap in a panel year
};

// Joins countries and pairs for the given years. Pairs referencing unknown
// countries, or countries without GDP in every requested year, are dropped.
inline PanelBuildReport build_panel(std::vector<CountryRecord> countries,
                                    std::vector<PairObservation> pairs,
                                    std::vector<int> years) {
    if (years.empty()) {
        throw validation_error("build_panel: year list must not be empty");
    }
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
    std::sort(countries.begin(), countries.end(),
              [](const CountryRecord& a, const CountryRecord& b) { return a.iso3 < b.iso3; });

    PanelBuildReport report;
    report.panel.countries = std::move(countries);
    report.panel.years = years;
    report.pairs_seen = pairs.size();

    const auto usable = [&](const std::string& iso3) {
        const CountryRecord* c = report.panel.find_country(iso3);
        if (c == nullptr) return false;
        for (const int year : years) {
            if (!c->has_gdp(year)) return false;
        }
        return true;
    };

    for (auto& pair : pairs) {
        if (usable(pair.iso3_o) && usable(pair.iso3_d)) {
            report.panel.pairs.push_back(std::move(pair));
        } else {
            ++report.pairs_dropped;
        }
    }
    std::sort(report.panel.pairs.begin(), report.panel.pairs.end(),
              [](const PairObservation& a, const PairObservation& b) {
                  if (a.iso3_o != b.iso3_o) return a.iso3_o < b.iso3_o;
                  return a.iso3_d < b.iso3_d;
              });
    if (report.panel.pairs.empty()) {
        throw data_error("build_panel: no usable pairs after joining countries");
    }
    return report;
}

}  // namespace tradeshock
