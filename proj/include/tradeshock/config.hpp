#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tradeshock/csv.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/estimator.hpp"
#include "tradeshock/geo.hpp"
#include "tradeshock/sensitivity.hpp"
#include "tradeshock/shock.hpp"

namespace tradeshock {

// Full run description parsed from an INI-style config file.
struct RunConfig {
    std::filesystem::path countries_path;
    std::filesystem::path pairs_path;
    std::filesystem::path out_dir;

    int sim_year = 0;
    ShockParams shock;
    std::vector<RouteScope> scopes;

    GridSpec grid;
    double idw_max_km = 2000.0;

    std::map<SweepParameter, std::vector<double>> sweep_grids;
    double sweep_tol = 1e-6;

    std::optional<int> fit_year;
    std::vector<std::pair<std::string, ModelSpec>> chain;  // (name, spec), fit order
    std::optional<int> delta_t0;
    std::optional<int> delta_t1;
    std::size_t delta_top_n = 10;
};

namespace detail {

struct IniEntry {
    std::size_t line = 0;
    std::string value;
    bool used = false;
};

struct IniSection {
    std::size_t line = 0;
    std::map<std::string, IniEntry> entries;
};

inline std::map<std::string, IniSection> parse_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw validation_error(path.string() + ": cannot open config file");
    }
    std::map<std::string, IniSection> sections;
    std::string current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty() || text.front() == '#' || text.front() == ';') continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (text.front() == '[') {
            if (text.back() != ']' || text.size() < 3) {
                throw validation_error(where + ": malformed section header");
            }
            current = std::string(trim(text.substr(1, text.size() - 2)));
            if (current.empty()) {
                throw validation_error(where + ": empty section name");
            }
            auto [it, inserted] = sections.emplace(current, IniSection{lineno, {}});
            if (!inserted) {
                throw validation_error(where + ": duplicate section [" + current + "]");
            }
            continue;
        }
        const std::size_t eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw validation_error(where + ": expected key = value");
        }
        if (current.empty()) {
            throw validation_error(where + ": key outside any [section]");
        }
        const std::string key(trim(text.substr(0, eq)));
        const std::string value(trim(text.substr(eq + 1)));
        if (key.empty()) {
            throw validation_error(where + ": empty key");
        }
        auto& section = sections[current];
        if (!section.entries.emplace(key, IniEntry{lineno, value, false}).second) {
            throw validation_error(where + ": duplicate key '" + key + "' in [" + current + "]");
        }
    }
    return sections;
}

// Access helper that remembers which keys were read so leftovers can be
// reported as unknown.
class SectionReader {
public:
    SectionReader(const std::filesystem::path& path, const std::string& name,
                  std::map<std::string, IniSection>& sections)
        : path_(path), name_(name) {
        const auto it = sections.find(name);
        section_ = it == sections.end() ? nullptr : &it->second;
    }

    bool present() const { return section_ != nullptr; }

    std::optional<std::string> get(const std::string& key) {
        if (section_ == nullptr) return std::nullopt;
        const auto it = section_->entries.find(key);
        if (it == section_->entries.end()) return std::nullopt;
        it->second.used = true;
        return it->second.value;
    }

    std::string require(const std::string& key) {
        auto v = get(key);
        if (!v.has_value()) {
            throw validation_error(path_.string() + ": [" + name_ + "] " + key +
                                   ": required key is missing");
        }
        return *v;
    }

    std::string context(const std::string& key) const {
        std::string where = path_.string();
        if (section_ != nullptr) {
            const auto it = section_->entries.find(key);
            if (it != section_->entries.end()) {
                where += ":" + std::to_string(it->second.line);
            }
        }
        return where + ": [" + name_ + "] " + key;
    }

    double get_double(const std::string& key, double fallback) {
        const auto v = get(key);
        if (!v.has_value()) return fallback;
        return parse_double(*v, context(key));
    }

    long get_long(const std::string& key, long fallback) {
        const auto v = get(key);
        if (!v.has_value()) return fallback;
        return parse_long(*v, context(key));
    }

    std::optional<long> get_optional_long(const std::string& key) {
        const auto v = get(key);
        if (!v.has_value()) return std::nullopt;
        return parse_long(*v, context(key));
    }

    void finish() const {
        if (section_ == nullptr) return;
        for (const auto& [key, entry] : section_->entries) {
            if (!entry.used) {
                throw validation_error(path_.string() + ":" + std::to_string(entry.line) + ": [" +
                                       name_ + "] unknown key '" + key + "'");
            }
        }
    }

    const IniSection* raw() const { return section_; }

private:
    std::filesystem::path path_;
    std::string name_;
    IniSection* section_;
};

inline std::vector<std::string> split_list(std::string_view value) {
    std::vector<std::string> items;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        if (comma == std::string_view::npos) comma = value.size();
        const std::string item(trim(value.substr(start, comma - start)));
        if (!item.empty()) items.push_back(item);
        start = comma + 1;
    }
    return items;
}

// Grid syntax: either "start:stop:step" (stop inclusive) or a comma list.
inline std::vector<double> parse_value_grid(const std::string& value, const std::string& where) {
    std::vector<double> values;
    if (value.find(':') != std::string::npos) {
        const auto first = value.find(':');
        const auto second = value.find(':', first + 1);
        if (second == std::string::npos || value.find(':', second + 1) != std::string::npos) {
            throw validation_error(where + ": expected start:stop:step");
        }
        const double start = parse_double(value.substr(0, first), where);
        const double stop = parse_double(value.substr(first + 1, second - first - 1), where);
        const double step = parse_double(value.substr(second + 1), where);
        if (!(step > 0.0) || stop < start) {
            throw validation_error(where + ": need stop >= start and step > 0");
        }
        const double slack = 1e-9 * std::max(1.0, std::fabs(stop));
        for (int i = 0;; ++i) {
            const double v = start + static_cast<double>(i) * step;
            if (v > stop + slack) break;
            values.push_back(v);
            if (i > 1000000) {
                throw validation_error(where + ": grid has too many points");
            }
        }
    } else {
        for (const std::string& item : split_list(value)) {
            values.push_back(parse_double(item, where));
        }
    }
    if (values.size() < 3) {
        throw validation_error(where + ": a sweep grid needs at least 3 values");
    }
    return values;
}

inline RouteScope parse_scope(const std::string& text, const std::string& where) {
    const std::size_t colon = text.find(':');
    const std::string name = text.substr(0, colon);
    if (name == "top_outliers") {
        std::size_t n = 20;
        if (colon != std::string::npos) {
            const long parsed = parse_long(text.substr(colon + 1), where);
            if (parsed <= 0) {
                throw validation_error(where + ": top_outliers count must be > 0");
            }
            n = static_cast<std::size_t>(parsed);
        }
        return RouteScope::top_outliers(n);
    }
    if (colon != std::string::npos) {
        throw validation_error(where + ": only top_outliers takes a count");
    }
    if (name == "eu_any") return RouteScope::eu_any();
    if (name == "eu_only") return RouteScope::eu_only();
    if (name == "epicenter_only") return RouteScope::epicenter_only();
    throw validation_error(where + ": unknown scope '" + text + "'");
}

inline std::vector<Term> parse_term_list(const std::string& value, const std::string& where) {
    std::vector<Term> terms;
    for (const std::string& item : split_list(value)) {
        try {
            terms.push_back(parse_term(item));
        } catch (const validation_error& e) {
            throw validation_error(where + ": " + e.what());
        }
    }
    return terms;
}

inline std::filesystem::path resolve_path(const std::filesystem::path& base,
                                          const std::string& value) {
    const std::filesystem::path p(value);
    return (p.is_absolute() ? p : base / p).lexically_normal();
}

}  // namespace detail

// Parses and validates a config file. Relative paths resolve against the
// config file's directory. Errors name the file, line, and key.
inline RunConfig load_config(const std::filesystem::path& path) {
    auto sections = detail::parse_ini(path);
    for (const auto& [name, section] : sections) {
        if (name != "io" && name != "shock" && name != "grid" && name != "sweep" &&
            name != "fit") {
            throw validation_error(path.string() + ":" + std::to_string(section.line) +
                                   ": unknown section [" + name + "]");
        }
    }
    RunConfig config;
    const std::filesystem::path base = path.parent_path();

    detail::SectionReader io(path, "io", sections);
    config.countries_path = detail::resolve_path(base, io.require("countries"));
    config.pairs_path = detail::resolve_path(base, io.require("pairs"));
    config.out_dir = detail::resolve_path(base, io.require("out_dir"));
    io.finish();

    detail::SectionReader shock(path, "shock", sections);
    config.sim_year = static_cast<int>(
        parse_long(shock.require("year"), shock.context("year")));
    config.shock.epicenter_iso3 = std::string(trim(shock.require("epicenter")));
    config.shock.r_km = shock.get_double("r_km", config.shock.r_km);
    config.shock.s_p = shock.get_double("s_p", config.shock.s_p);
    config.shock.mask_reduction = shock.get_double("mask_reduction", config.shock.mask_reduction);
    config.shock.epsilon = shock.get_double("epsilon", config.shock.epsilon);
    config.shock.min_share = shock.get_double("min_share", config.shock.min_share);
    config.shock.route_max_km = shock.get_double("route_max_km", config.shock.route_max_km);
    config.shock.classification_threshold =
        shock.get_double("classification_threshold", config.shock.classification_threshold);
    if (const auto mode = shock.get("clamp_mode"); mode.has_value()) {
        if (*mode == "literal") config.shock.clamp_mode = ClampMode::literal;
        else if (*mode == "clamp_at_zero") config.shock.clamp_mode = ClampMode::clamp_at_zero;
        else {
            throw validation_error(shock.context("clamp_mode") +
                                   ": must be 'literal' or 'clamp_at_zero'");
        }
    }
    if (const auto scopes = shock.get("scopes"); scopes.has_value()) {
        std::set<std::string> names;
        for (const std::string& item : detail::split_list(*scopes)) {
            const RouteScope scope = detail::parse_scope(item, shock.context("scopes"));
            if (!names.insert(scope.name()).second) {
                throw validation_error(shock.context("scopes") + ": duplicate scope '" +
                                       scope.name() + "'");
            }
            config.scopes.push_back(scope);
        }
        if (config.scopes.empty()) {
            throw validation_error(shock.context("scopes") + ": scope list must not be empty");
        }
    } else {
        config.scopes = {RouteScope::top_outliers(20), RouteScope::eu_any(), RouteScope::eu_only(),
                         RouteScope::epicenter_only()};
    }
    shock.finish();
    try {
        config.shock.validate();
    } catch (const validation_error& e) {
        throw validation_error(path.string() + ": [shock] " + e.what());
    }

    detail::SectionReader grid(path, "grid", sections);
    config.grid.resolution = grid.get_double("resolution", 1.0);
    const auto lat_min = grid.get("lat_min");
    const auto lat_max = grid.get("lat_max");
    const auto lng_min = grid.get("lng_min");
    const auto lng_max = grid.get("lng_max");
    const int bounds_given = static_cast<int>(lat_min.has_value()) +
                             static_cast<int>(lat_max.has_value()) +
                             static_cast<int>(lng_min.has_value()) +
                             static_cast<int>(lng_max.has_value());
    if (bounds_given != 0 && bounds_given != 4) {
        throw validation_error(path.string() +
                               ": [grid] lat_min/lat_max/lng_min/lng_max must be given together");
    }
    if (bounds_given == 4) {  // otherwise the grid stays global
        config.grid.lat_min = parse_double(*lat_min, grid.context("lat_min"));
        config.grid.lat_max = parse_double(*lat_max, grid.context("lat_max"));
        config.grid.lng_min = parse_double(*lng_min, grid.context("lng_min"));
        config.grid.lng_max = parse_double(*lng_max, grid.context("lng_max"));
    }
    config.idw_max_km = grid.get_double("idw_max_km", 2000.0);
    if (!(config.idw_max_km > 0.0)) {
        throw validation_error(grid.context("idw_max_km") + ": must be > 0");
    }
    grid.finish();
    try {
        config.grid.validate();
    } catch (const validation_error& e) {
        throw validation_error(path.string() + ": [grid] " + e.what());
    }

    detail::SectionReader sweep(path, "sweep", sections);
    const auto grid_for = [&](const char* key, SweepParameter param, const char* fallback) {
        const auto v = sweep.get(key);
        config.sweep_grids[param] =
            detail::parse_value_grid(v.value_or(fallback), sweep.context(key));
    };
    grid_for("s_p", SweepParameter::s_p, "1.0:5.0:0.5");
    grid_for("r_km", SweepParameter::r_km, "100:1500:100");
    grid_for("mask_reduction", SweepParameter::mask_reduction, "0.0:0.99:0.11");
    config.sweep_tol = sweep.get_double("tol", 1e-6);
    if (!(config.sweep_tol > 0.0)) {
        throw validation_error(sweep.context("tol") + ": must be > 0");
    }
    sweep.finish();

    detail::SectionReader fit(path, "fit", sections);
    if (const auto year = fit.get_optional_long("year"); year.has_value()) {
        config.fit_year = static_cast<int>(*year);
    }
    std::string sanctions_destination = "RUS";
    if (const auto dest = fit.get("sanctions_destination"); dest.has_value()) {
        sanctions_destination = std::string(trim(*dest));
        if (sanctions_destination.size() != 3) {
            throw validation_error(fit.context("sanctions_destination") +
                                   ": must be a 3-letter code");
        }
    }
    std::map<std::string, std::vector<Term>> models = {
        {"m1", {Term::intercept, Term::ln_gdp_o, Term::ln_gdp_d, Term::ln_dist}},
        {"m2", {Term::intercept, Term::ln_gdp_o, Term::ln_gdp_d, Term::ln_dist, Term::intra_eu}},
        {"m3",
         {Term::intercept, Term::ln_gdp_o, Term::ln_gdp_d, Term::ln_dist, Term::intra_eu,
          Term::sanctions}},
        {"m4",
         {Term::intercept, Term::ln_gdp_o, Term::ln_gdp_d, Term::ln_dist, Term::intra_eu,
          Term::sanctions, Term::energy_exporter_o}},
    };
    if (fit.raw() != nullptr) {
        for (const auto& [key, entry] : fit.raw()->entries) {
            if (key.rfind("model.", 0) != 0) continue;
            const std::string name = key.substr(6);
            if (name.empty()) {
                throw validation_error(fit.context(key) + ": empty model name");
            }
            models[name] = detail::parse_term_list(*fit.get(key), fit.context(key));
        }
    }
    const std::string chain_value = fit.get("chain").value_or("m1,m2,m3,m4");
    for (const std::string& name : detail::split_list(chain_value)) {
        const auto it = models.find(name);
        if (it == models.end()) {
            throw validation_error(fit.context("chain") + ": unknown model '" + name + "'");
        }
        ModelSpec spec;
        spec.terms = it->second;
        spec.sanctions_destination = sanctions_destination;
        try {
            spec.validate();
        } catch (const validation_error& e) {
            throw validation_error(fit.context("chain") + ": model '" + name + "': " + e.what());
        }
        config.chain.emplace_back(name, spec);
    }
    if (config.chain.empty()) {
        throw validation_error(fit.context("chain") + ": chain must not be empty");
    }
    if (const auto t0 = fit.get_optional_long("delta_t0"); t0.has_value()) {
        config.delta_t0 = static_cast<int>(*t0);
    }
    if (const auto t1 = fit.get_optional_long("delta_t1"); t1.has_value()) {
        config.delta_t1 = static_cast<int>(*t1);
    }
    const long top_n = fit.get_long("top_n", 10);
    if (top_n <= 0) {
        throw validation_error(fit.context("top_n") + ": must be > 0");
    }
    config.delta_top_n = static_cast<std::size_t>(top_n);
    fit.finish();

    // Inputs must live outside the output directory.
    const auto inside_out_dir = [&](const std::filesystem::path& p) {
        const std::string out = config.out_dir.string();
        const std::string candidate = p.string();
        return candidate == out ||
               (candidate.size() > out.size() && candidate.compare(0, out.size(), out) == 0 &&
                candidate[out.size()] == '/');
    };
    if (inside_out_dir(config.countries_path)) {
        throw validation_error(path.string() + ": [io] countries: input lies inside out_dir");
    }
    if (inside_out_dir(config.pairs_path)) {
        throw validation_error(path.string() + ": [io] pairs: input lies inside out_dir");
    }
    return config;
}

}  // namespace tradeshock
