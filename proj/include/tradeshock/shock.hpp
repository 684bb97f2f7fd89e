#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tradeshock/csv.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/geo.hpp"
#include "tradeshock/ingest.hpp"

namespace tradeshock {

enum class ClampMode { literal, clamp_at_zero };

// Full shock scenario: epicenter, decay radius, intensity, and thresholds.
struct ShockParams {
    std::string epicenter_iso3;
    double r_km = 550.0;
    double s_p = 3.0;
    double mask_reduction = 0.9;
    double epsilon = 1e-10;
    double min_share = 5e-5;
    double route_max_km = 6000.0;
    ClampMode clamp_mode = ClampMode::literal;
    double classification_threshold = 0.05;

    void validate() const {
        if (epicenter_iso3.size() != 3) {
            throw validation_error("ShockParams: epicenter_iso3 must be a 3-letter code");
        }
        require(std::isfinite(r_km) && r_km > 0.0, "r_km must be > 0");
        require(std::isfinite(s_p) && s_p >= 0.0, "s_p must be >= 0");
        require(std::isfinite(mask_reduction) && mask_reduction >= 0.0 && mask_reduction <= 1.0,
                "mask_reduction must be in [0, 1]");
        require(std::isfinite(epsilon) && epsilon > 0.0, "epsilon must be > 0");
        require(std::isfinite(min_share) && min_share >= 0.0, "min_share must be >= 0");
        require(std::isfinite(route_max_km) && route_max_km > 0.0, "route_max_km must be > 0");
        require(std::isfinite(classification_threshold) && classification_threshold > 0.0 &&
                    classification_threshold < 1.0,
                "classification_threshold must be in (0, 1)");
    }

private:
    static void require(bool ok, const char* msg) {
        if (!ok) throw validation_error(std::string("ShockParams: ") + msg);
    }
};

enum class RouteClass { redirection, repulsion };

inline const char* to_string(RouteClass cls) {
    return cls == RouteClass::redirection ? "Redirection" : "Repulsion";
}

struct RouteResult {
    std::string iso3_o;
    std::string iso3_d;
    double f_norm = 0.0;
    double f_shock = 0.0;
    double f_diff = 0.0;       // f_norm - f_shock, exactly
    double pct_change = 0.0;   // 100 * (f_shock - f_norm) / f_norm
    double dist_epicenter_km = 0.0;  // origin to epicenter
    bool involves_epicenter = false;
    RouteClass cls = RouteClass::repulsion;
};

struct AggregateResult {
    double f_tg = 0.0;                 // shock-weighted global effect, <= 0 under masking
    double local_conflict_force = 0.0; // sum of F_diff over masked routes
    std::size_t masked_flow_count = 0;
};

struct PotentialParams {
    double k = 1.0;
    double a = 1.0;

    void validate() const {
        if (!std::isfinite(k) || k <= 0.0) {
            throw validation_error("PotentialParams: k must be > 0");
        }
        if (!std::isfinite(a) || a <= 0.0) {
            throw validation_error("PotentialParams: a must be > 0");
        }
    }
};

// F = gdp_o * gdp_d / dist^2.
inline double baseline_force(double gdp_o, double gdp_d, double dist_km) {
    if (!std::isfinite(gdp_o) || gdp_o <= 0.0 || !std::isfinite(gdp_d) || gdp_d <= 0.0) {
        throw validation_error("baseline_force: GDPs must be finite and > 0");
    }
    if (!std::isfinite(dist_km) || dist_km <= 0.0) {
        throw validation_error("baseline_force: distance must be finite and > 0");
    }
    return gdp_o * gdp_d / (dist_km * dist_km);
}

// s = R^2 / (d^2 + eps); strictly decreasing in d, eps guards d = 0.
inline double shock_factor(double dist_epicenter_km, const ShockParams& params) {
    if (!std::isfinite(dist_epicenter_km) || dist_epicenter_km < 0.0) {
        throw validation_error("shock_factor: distance must be finite and >= 0");
    }
    return params.r_km * params.r_km /
           (dist_epicenter_km * dist_epicenter_km + params.epsilon);
}

// Applies the shock multiplier and, for epicenter routes, the mask reduction.
// The clamp floor (if any) applies before the mask.
inline std::pair<double, double> shocked_force(double f_norm, double s, const ShockParams& params,
                                               bool involves_epicenter) {
    if (!std::isfinite(f_norm) || f_norm < 0.0) {
        throw validation_error("shocked_force: F_norm must be finite and >= 0");
    }
    double raw = f_norm * (1.0 - params.s_p * s);
    if (params.clamp_mode == ClampMode::clamp_at_zero && raw < 0.0) {
        raw = 0.0;
    }
    const double f_shock = involves_epicenter ? raw * (1.0 - params.mask_reduction) : raw;
    return {f_shock, f_norm - f_shock};
}

// Min-max rescaling of log(1 + v) to [0, 1]. Constant lists map to all zeros.
inline std::vector<double> normalize_forces(const std::vector<double>& values,
                                            double epsilon = 1e-10) {
    if (values.empty()) {
        throw validation_error("normalize_forces: empty list");
    }
    std::vector<double> logged;
    logged.reserve(values.size());
    for (const double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            throw validation_error("normalize_forces: values must be finite and >= 0");
        }
        logged.push_back(std::log1p(v));
    }
    const auto [min_it, max_it] = std::minmax_element(logged.begin(), logged.end());
    const double lo = *min_it;  // copy before the loop overwrites the element
    const double range = *max_it - lo;
    if (range <= epsilon) {
        return std::vector<double>(values.size(), 0.0);
    }
    for (double& v : logged) {
        v = (v - lo) / range;
    }
    return logged;
}

// Baseline and shocked forces for every panel pair in panel order.
// Epicenter distance is measured origin to epicenter from country coordinates;
// the pair's own trade distance stays as ingested.
inline std::vector<RouteResult> compute_forces(const GravityPanel& panel,
                                               const ShockParams& params, int year) {
    params.validate();
    if (!panel.has_year(year)) {
        throw data_error("compute_forces: year " + std::to_string(year) + " not in panel");
    }
    const CountryRecord* epicenter = panel.find_country(params.epicenter_iso3);
    if (epicenter == nullptr) {
        throw data_error("compute_forces: epicenter " + params.epicenter_iso3 +
                         " not in country table");
    }
    // Each origin's epicenter distance is shared across its destinations.
    std::map<std::string, double> origin_dist;
    std::vector<RouteResult> routes;
    routes.reserve(panel.pairs.size());
    for (const PairObservation& pair : panel.pairs) {
        const CountryRecord& origin = panel.country(pair.iso3_o);
        const CountryRecord& dest = panel.country(pair.iso3_d);
        auto [it, inserted] = origin_dist.emplace(pair.iso3_o, 0.0);
        if (inserted) {
            it->second = haversine_km(origin.location, epicenter->location);
        }
        RouteResult route;
        route.iso3_o = pair.iso3_o;
        route.iso3_d = pair.iso3_d;
        route.dist_epicenter_km = it->second;
        route.involves_epicenter =
            pair.iso3_o == params.epicenter_iso3 || pair.iso3_d == params.epicenter_iso3;
        route.f_norm = baseline_force(origin.gdp_at(year), dest.gdp_at(year), pair.dist_km);
        const double s = shock_factor(route.dist_epicenter_km, params);
        const auto [f_shock, f_diff] =
            shocked_force(route.f_norm, s, params, route.involves_epicenter);
        route.f_shock = f_shock;
        route.f_diff = f_diff;
        route.pct_change = 100.0 * (route.f_shock - route.f_norm) / route.f_norm;
        routes.push_back(std::move(route));
    }
    return routes;
}

// Keeps routes whose shocked share exceeds min_share, then re-adds every
// epicenter route regardless of share (index union).
inline std::vector<RouteResult> significance_filter(const std::vector<RouteResult>& routes,
                                                    const ShockParams& params) {
    double total = 0.0;
    for (const RouteResult& r : routes) total += r.f_shock;
    if (!(total > 0.0)) {
        throw data_error("significance_filter: total shocked force must be > 0");
    }
    std::vector<RouteResult> kept;
    for (const RouteResult& r : routes) {
        if (r.f_shock / total > params.min_share || r.involves_epicenter) {
            kept.push_back(r);
        }
    }
    return kept;
}

struct RouteScope {
    enum class Kind { top_outliers, eu_any, eu_only, epicenter_only };

    Kind kind = Kind::top_outliers;
    std::size_t top_n = 20;  // used by top_outliers only

    static RouteScope top_outliers(std::size_t n) { return {Kind::top_outliers, n}; }
    static RouteScope eu_any() { return {Kind::eu_any, 0}; }
    static RouteScope eu_only() { return {Kind::eu_only, 0}; }
    static RouteScope epicenter_only() { return {Kind::epicenter_only, 0}; }

    std::string name() const {
        switch (kind) {
            case Kind::top_outliers: return "top_outliers";
            case Kind::eu_any: return "eu_any";
            case Kind::eu_only: return "eu_only";
            case Kind::epicenter_only: return "epicenter_only";
        }
        return "unknown";
    }
};

namespace detail {

inline void classify_routes(std::vector<RouteResult>& routes, double threshold) {
    std::vector<double> diffs;
    diffs.reserve(routes.size());
    for (const RouteResult& r : routes) diffs.push_back(r.f_diff);
    const std::vector<double> normalized = normalize_forces(diffs);
    for (std::size_t i = 0; i < routes.size(); ++i) {
        routes[i].cls = normalized[i] >= threshold ? RouteClass::redirection
                                                   : RouteClass::repulsion;
    }
}

inline bool lexicographic_route_less(const RouteResult& a, const RouteResult& b) {
    if (a.iso3_o != b.iso3_o) return a.iso3_o < b.iso3_o;
    return a.iso3_d < b.iso3_d;
}

}  // namespace detail

// Scoped, classified route table ordered from the epicenter outward.
// Classification normalizes F_diff over the selected routes only.
inline std::vector<RouteResult> route_report(const GravityPanel& panel, const ShockParams& params,
                                             const RouteScope& scope, int year) {
    if (scope.kind == RouteScope::Kind::top_outliers && scope.top_n == 0) {
        throw validation_error("route_report: top_outliers needs n > 0");
    }
    std::vector<RouteResult> routes = compute_forces(panel, params, year);
    std::vector<RouteResult> selected;
    for (RouteResult& r : routes) {
        if (r.dist_epicenter_km > params.route_max_km) continue;
        bool keep = false;
        switch (scope.kind) {
            case RouteScope::Kind::top_outliers:
                keep = true;  // ranked below
                break;
            case RouteScope::Kind::eu_any:
                keep = panel.country(r.iso3_o).eu_member || panel.country(r.iso3_d).eu_member;
                break;
            case RouteScope::Kind::eu_only:
                keep = panel.country(r.iso3_o).eu_member && panel.country(r.iso3_d).eu_member;
                break;
            case RouteScope::Kind::epicenter_only:
                keep = r.involves_epicenter;
                break;
        }
        if (keep) selected.push_back(std::move(r));
    }
    if (scope.kind == RouteScope::Kind::top_outliers && selected.size() > scope.top_n) {
        std::sort(selected.begin(), selected.end(), [](const RouteResult& a, const RouteResult& b) {
            if (a.f_norm != b.f_norm) return a.f_norm > b.f_norm;
            return detail::lexicographic_route_less(a, b);
        });
        selected.resize(scope.top_n);
    }
    if (selected.empty()) {
        throw data_error("route_report: scope '" + scope.name() + "' selected no routes");
    }
    detail::classify_routes(selected, params.classification_threshold);
    std::sort(selected.begin(), selected.end(), [](const RouteResult& a, const RouteResult& b) {
        if (a.dist_epicenter_km != b.dist_epicenter_km) {
            return a.dist_epicenter_km < b.dist_epicenter_km;
        }
        return detail::lexicographic_route_less(a, b);
    });
    return selected;
}

// Route table serialization used by the report files.
inline std::string routes_csv(const std::vector<RouteResult>& routes) {
    std::string out = "iso3_o,iso3_d,dist_epicenter_km,f_norm,f_shock,f_diff,pct_change,class\n";
    for (const RouteResult& r : routes) {
        out += r.iso3_o;
        out.push_back(',');
        out += r.iso3_d;
        out.push_back(',');
        out += format_double(r.dist_epicenter_km);
        out.push_back(',');
        out += format_double(r.f_norm);
        out.push_back(',');
        out += format_double(r.f_shock);
        out.push_back(',');
        out += format_double(r.f_diff);
        out.push_back(',');
        out += format_double(r.pct_change);
        out.push_back(',');
        out += to_string(r.cls);
        out.push_back('\n');
    }
    return out;
}

// Shock-weighted aggregate. F_eff is loss-negative (F_shock - F_norm) on
// epicenter routes and zero elsewhere, so F_tg comes out negative whenever the
// mask removes force.
inline AggregateResult anti_gravity_aggregate(const std::vector<RouteResult>& routes,
                                              const std::string& epicenter_iso3) {
    double total = 0.0;
    for (const RouteResult& r : routes) total += r.f_shock;
    if (!(total > 0.0)) {
        throw data_error("anti_gravity_aggregate: total shocked force must be > 0");
    }
    AggregateResult agg;
    for (const RouteResult& r : routes) {
        const bool masked = r.iso3_o == epicenter_iso3 || r.iso3_d == epicenter_iso3;
        if (!masked) continue;
        const double weight = r.f_shock / total;
        agg.f_tg += weight * (r.f_shock - r.f_norm);
        agg.local_conflict_force += r.f_diff;
        ++agg.masked_flow_count;
    }
    return agg;
}

// Sum over partners j of k * GDP_j / d_ij^a; the pair table supplies d_ij in
// either direction. Every other panel country must be reachable.
inline double income_potential(const std::string& iso3, const GravityPanel& panel,
                               const PotentialParams& pp, int year) {
    pp.validate();
    if (panel.find_country(iso3) == nullptr) {
        throw data_error("income_potential: unknown country " + iso3);
    }
    std::map<std::string, double> partner_dist;
    for (const PairObservation& pair : panel.pairs) {
        if (pair.iso3_o == iso3) partner_dist.emplace(pair.iso3_d, pair.dist_km);
        else if (pair.iso3_d == iso3) partner_dist.emplace(pair.iso3_o, pair.dist_km);
    }
    double sum = 0.0;
    for (const CountryRecord& c : panel.countries) {
        if (c.iso3 == iso3) continue;
        const auto it = partner_dist.find(c.iso3);
        if (it == partner_dist.end()) {
            throw data_error("income_potential: no distance between " + iso3 + " and " + c.iso3);
        }
        sum += pp.k * c.gdp_at(year) / std::pow(it->second, pp.a);
    }
    return sum;
}

// income_potential minus the pull of each conflict: sum of size / distance.
inline double total_potential(const std::string& iso3, const GravityPanel& panel,
                              const std::vector<std::pair<double, double>>& conflicts,
                              const PotentialParams& pp, int year) {
    double value = income_potential(iso3, panel, pp, year);
    for (const auto& [size, dist] : conflicts) {
        if (!std::isfinite(dist) || dist <= 0.0) {
            throw validation_error("total_potential: conflict distance must be > 0");
        }
        value -= size / dist;
    }
    return value;
}

}  // namespace tradeshock
