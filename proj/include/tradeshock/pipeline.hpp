#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tradeshock/config.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/estimator.hpp"
#include "tradeshock/field.hpp"
#include "tradeshock/ingest.hpp"
#include "tradeshock/io.hpp"
#include "tradeshock/sensitivity.hpp"
#include "tradeshock/sha256.hpp"
#include "tradeshock/shock.hpp"

namespace tradeshock {

enum class Stage { simulate, field, sweep, fit, deltas };

inline const char* to_string(Stage stage) {
    switch (stage) {
        case Stage::simulate: return "simulate";
        case Stage::field: return "field";
        case Stage::sweep: return "sweep";
        case Stage::fit: return "fit";
        case Stage::deltas: return "deltas";
    }
    return "unknown";
}

inline Stage parse_stage(const std::string& name) {
    for (const Stage s :
         {Stage::simulate, Stage::field, Stage::sweep, Stage::fit, Stage::deltas}) {
        if (name == to_string(s)) return s;
    }
    throw validation_error("unknown stage '" + name + "'");
}

struct RunReport {
    std::vector<std::string> files;               // relative names, write order
    std::map<std::string, std::string> digests;   // name -> sha256 hex
    std::vector<std::string> log;                 // one line per reported event
};

namespace detail {

class OutputWriter {
public:
    OutputWriter(const std::filesystem::path& out_dir, RunReport& report)
        : out_dir_(out_dir), report_(report) {}

    void write(const std::string& name, const std::string& content) {
        atomic_write_file(out_dir_ / name, content);
        report_.digests[name] = sha256_hex(content);
        report_.files.push_back(name);
    }

    void write_manifest() {
        std::string manifest;
        for (const auto& [name, digest] : report_.digests) {  // map order = sorted names
            manifest += digest;
            manifest += "  ";
            manifest += name;
            manifest.push_back('\n');
        }
        atomic_write_file(out_dir_ / "manifest.txt", manifest);
    }

private:
    std::filesystem::path out_dir_;
    RunReport& report_;
};

inline std::string sweep_csv(const ResponseCurve& curve, const ResponseClassification& cls) {
    std::string out = "parameter,value,total\n";
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
        out += to_string(curve.parameter);
        out.push_back(',');
        out += format_double(curve.values[i]);
        out.push_back(',');
        out += format_double(curve.totals[i]);
        out.push_back('\n');
    }
    out += "classification,,";
    out += to_string(cls.shape);
    out.push_back('\n');
    return out;
}

inline std::string fit_table_csv(const FitResult& fit) {
    std::string out = "term,beta,se,t,p\n";
    for (std::size_t j = 0; j < fit.terms.size(); ++j) {
        out += to_string(fit.terms[j]);
        out.push_back(',');
        out += format_double(fit.betas[j]);
        out.push_back(',');
        out += format_double(fit.standard_errors[j]);
        out.push_back(',');
        out += format_double(fit.t_stats[j]);
        out.push_back(',');
        out += format_double(fit.p_values[j]);
        out.push_back('\n');
    }
    out += "n," + std::to_string(fit.n) + ",,,\n";
    out += "k," + std::to_string(fit.k) + ",,,\n";
    out += "r2," + format_double(fit.r2) + ",,,\n";
    out += "adj_r2," + format_double(fit.adj_r2) + ",,,\n";
    return out;
}

inline std::string fit_report_text(const std::vector<std::pair<std::string, ModelSpec>>& chain,
                                   const std::vector<NestedFit>& fits, std::size_t excluded) {
    std::string out = "log-linear gravity fit, nested model chain\n";
    out += "rows excluded (missing or non-positive trade): " + std::to_string(excluded) + "\n\n";
    for (std::size_t i = 0; i < fits.size(); ++i) {
        out += "model " + chain[i].first + ": ";
        for (std::size_t j = 0; j < fits[i].fit.terms.size(); ++j) {
            if (j > 0) out += " + ";
            out += to_string(fits[i].fit.terms[j]);
        }
        out.push_back('\n');
        out += "  n = " + std::to_string(fits[i].fit.n) + ", k = " + std::to_string(fits[i].fit.k);
        out += ", r2 = " + format_double(fits[i].fit.r2);
        out += ", adj_r2 = " + format_double(fits[i].fit.adj_r2) + "\n";
    }
    const FitResult& final_fit = fits.back().fit;
    out += "\ncoefficients (" + chain.back().first + "):\n";
    out += "  term                beta                 se                   t                    p\n";
    for (std::size_t j = 0; j < final_fit.terms.size(); ++j) {
        char line[256];
        std::snprintf(line, sizeof(line), "  %-18s %-20.17g %-20.17g %-20.17g %-20.17g\n",
                      to_string(final_fit.terms[j]), final_fit.betas[j],
                      final_fit.standard_errors[j], final_fit.t_stats[j], final_fit.p_values[j]);
        out += line;
    }
    out += "\neffect sizes, exp(beta) - 1:\n";
    for (std::size_t j = 0; j < final_fit.terms.size(); ++j) {
        const Term term = final_fit.terms[j];
        if (term != Term::intra_eu && term != Term::sanctions &&
            term != Term::energy_exporter_o) {
            continue;
        }
        out += "  ";
        out += to_string(term);
        out += ": " + format_double(effect_size(final_fit.betas[j])) + "\n";
    }
    return out;
}

inline std::string deltas_csv(const TradeDeltas& deltas) {
    std::string out = "iso3_o,iso3_d,trade_t0,trade_t1,delta\n";
    const auto append = [&](const DeltaRecord& r) {
        out += r.iso3_o;
        out.push_back(',');
        out += r.iso3_d;
        out.push_back(',');
        out += format_double(r.trade_t0);
        out.push_back(',');
        out += format_double(r.trade_t1);
        out.push_back(',');
        out += format_double(r.delta);
        out.push_back('\n');
    };
    for (const DeltaRecord& r : deltas.gains) append(r);
    for (const DeltaRecord& r : deltas.losses) append(r);
    return out;
}

}  // namespace detail

// Runs the requested stages in dependency order and writes their artifacts
// plus a manifest of content digests. The field stage interpolates the
// significance-filtered simulate output, so it requires simulate in the same
// run.
inline RunReport run_pipeline(const RunConfig& config, std::set<Stage> stages) {
    if (stages.empty()) {
        throw validation_error("run_pipeline: no stages requested");
    }
    if (stages.count(Stage::field) != 0 && stages.count(Stage::simulate) == 0) {
        throw data_error("field stage requires simulate in the same run");
    }
    if (stages.count(Stage::fit) != 0 && !config.fit_year.has_value()) {
        throw validation_error("config: [fit] year: required by the fit stage");
    }
    if (stages.count(Stage::deltas) != 0 &&
        (!config.delta_t0.has_value() || !config.delta_t1.has_value())) {
        throw validation_error("config: [fit] delta_t0/delta_t1: required by the deltas stage");
    }

    std::vector<int> years = {config.sim_year};
    if (stages.count(Stage::fit) != 0) {
        years.push_back(*config.fit_year);
    }
    const PanelBuildReport built =
        build_panel(load_countries(config.countries_path.string()),
                    load_pair_table(config.pairs_path.string()), years);
    const GravityPanel& panel = built.panel;

    RunReport report;
    detail::OutputWriter writer(config.out_dir, report);
    const auto logf = [&report](const std::string& line) { report.log.push_back(line); };
    logf("panel: " + std::to_string(panel.countries.size()) + " countries, " +
         std::to_string(panel.pairs.size()) + " pairs, " +
         std::to_string(built.pairs_dropped) + " dropped");

    std::vector<RouteResult> filtered;  // simulate's output, consumed by field
    if (stages.count(Stage::simulate) != 0) {
        const std::vector<RouteResult> routes =
            compute_forces(panel, config.shock, config.sim_year);
        filtered = significance_filter(routes, config.shock);
        const AggregateResult agg = anti_gravity_aggregate(filtered, config.shock.epicenter_iso3);
        logf("simulate: " + std::to_string(routes.size()) + " routes, " +
             std::to_string(filtered.size()) + " after filter, " +
             std::to_string(agg.masked_flow_count) + " masked");
        logf("simulate: f_tg = " + format_double(agg.f_tg) +
             ", local_conflict_force = " + format_double(agg.local_conflict_force));
        for (const RouteScope& scope : config.scopes) {
            const std::vector<RouteResult> scoped =
                route_report(panel, config.shock, scope, config.sim_year);
            const std::string name = "routes_" + scope.name() + ".csv";
            writer.write(name, routes_csv(scoped));
            logf("simulate: wrote " + name + " (" + std::to_string(scoped.size()) + " routes)");
        }
    }

    if (stages.count(Stage::field) != 0) {
        const std::map<std::string, double> origin_values = aggregate_by_origin(filtered);
        std::map<std::string, GeoPoint> locations;
        for (const CountryRecord& c : panel.countries) {
            locations.emplace(c.iso3, c.location);
        }
        const FieldGrid grid = idw_field(origin_values, locations, config.grid,
                                         config.idw_max_km, config.shock.epsilon);
        writer.write("field.csv", field_csv(grid));
        writer.write("field.geojson", field_geojson(grid));
        const FieldCounts counts = field_counts(grid);
        logf("field: " + std::to_string(grid.cells.size()) + " cells, redirection = " +
             std::to_string(counts.redirection) + ", repulsion = " +
             std::to_string(counts.repulsion) + ", empty = " + std::to_string(counts.empty));
    }

    if (stages.count(Stage::sweep) != 0) {
        for (const auto& [parameter, values] : config.sweep_grids) {
            const ResponseCurve curve =
                sweep(panel, config.shock, parameter, values, config.sim_year);
            const ResponseClassification cls = classify_response(curve, config.sweep_tol);
            const std::string name = std::string("sweep_") + to_string(parameter) + ".csv";
            writer.write(name, detail::sweep_csv(curve, cls));
            std::string line = std::string("sweep: ") + to_string(parameter) + " -> " +
                               to_string(cls.shape);
            if (!cls.clean) line += " (" + cls.diagnostics + ")";
            logf(line);
        }
    }

    if (stages.count(Stage::fit) != 0) {
        std::vector<ModelSpec> specs;
        specs.reserve(config.chain.size());
        for (const auto& [name, spec] : config.chain) specs.push_back(spec);
        const std::vector<NestedFit> fits = nested_comparison(panel, *config.fit_year, specs);
        std::size_t excluded = 0;
        detail::usable_rows(panel, *config.fit_year, excluded);
        writer.write("fit_report.txt", detail::fit_report_text(config.chain, fits, excluded));
        writer.write("fit_table.csv", detail::fit_table_csv(fits.back().fit));
        for (std::size_t i = 0; i < fits.size(); ++i) {
            logf("fit: " + config.chain[i].first + " r2 = " + format_double(fits[i].fit.r2) +
                 ", adj_r2 = " + format_double(fits[i].fit.adj_r2));
        }
    }

    if (stages.count(Stage::deltas) != 0) {
        const TradeDeltas deltas =
            trade_deltas(panel, *config.delta_t0, *config.delta_t1, config.delta_top_n);
        writer.write("deltas.csv", detail::deltas_csv(deltas));
        logf("deltas: " + std::to_string(deltas.compared) + " pairs compared, " +
             std::to_string(deltas.excluded) + " excluded");
    }

    writer.write_manifest();
    logf("manifest: " + std::to_string(report.files.size()) + " files");
    return report;
}

}  // namespace tradeshock
