#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tradeshock/csv.hpp"
#include "tradeshock/error.hpp"
#include "tradeshock/geo.hpp"
#include "tradeshock/io.hpp"
#include "tradeshock/shock.hpp"

namespace tradeshock {

enum class CellClass { redirection, repulsion, empty };

inline const char* to_string(CellClass cls) {
    switch (cls) {
        case CellClass::redirection: return "Redirection";
        case CellClass::repulsion: return "Repulsion";
        case CellClass::empty: return "Empty";
    }
    return "unknown";
}

struct FieldCell {
    GeoPoint center;
    double value = 0.0;  // meaningful only when cls != empty
    CellClass cls = CellClass::empty;
};

// Interpolated field over a regular grid, cells in row-major order.
struct FieldGrid {
    GridSpec spec;
    std::vector<FieldCell> cells;
};

// Per-origin sum of (F_shock - F_norm); losses come out negative.
inline std::map<std::string, double> aggregate_by_origin(const std::vector<RouteResult>& routes) {
    std::map<std::string, double> sums;
    for (const RouteResult& r : routes) {
        sums[r.iso3_o] += r.f_shock - r.f_norm;
    }
    return sums;
}

// Inverse-distance-weighted interpolation of origin values onto the grid.
// Cells with no source within max_km stay Empty. A negative value marks
// redirection (strong loss), positive or zero marks repulsion.
inline FieldGrid idw_field(const std::map<std::string, double>& origin_values,
                           const std::map<std::string, GeoPoint>& country_locations,
                           const GridSpec& spec, double max_km = 2000.0, double epsilon = 1e-10) {
    if (origin_values.empty()) {
        throw validation_error("idw_field: at least one origin value required");
    }
    if (!std::isfinite(max_km) || max_km <= 0.0) {
        throw validation_error("idw_field: max_km must be > 0");
    }
    if (!std::isfinite(epsilon) || epsilon <= 0.0) {
        throw validation_error("idw_field: epsilon must be > 0");
    }
    struct Source {
        GeoPoint location;
        double value;
    };
    std::vector<Source> sources;
    sources.reserve(origin_values.size());
    for (const auto& [iso3, value] : origin_values) {
        const auto it = country_locations.find(iso3);
        if (it == country_locations.end()) {
            throw data_error("idw_field: no coordinates for " + iso3);
        }
        sources.push_back({it->second, value});
    }

    FieldGrid grid;
    grid.spec = spec;
    const std::vector<GeoPoint> centers = make_grid(spec);
    grid.cells.reserve(centers.size());
    for (const GeoPoint& center : centers) {
        FieldCell cell;
        cell.center = center;
        double weight_sum = 0.0;
        double weighted_value = 0.0;
        for (const Source& src : sources) {
            const double d = haversine_km(center, src.location);
            if (d > max_km) continue;
            const double w = 1.0 / (d * d + epsilon);
            weight_sum += w;
            weighted_value += w * src.value;
        }
        if (weight_sum > 0.0) {
            cell.value = weighted_value / weight_sum;
            cell.cls = cell.value < 0.0 ? CellClass::redirection : CellClass::repulsion;
        }
        grid.cells.push_back(cell);
    }
    return grid;
}

struct FieldCounts {
    std::size_t redirection = 0;
    std::size_t repulsion = 0;
    std::size_t empty = 0;
};

inline FieldCounts field_counts(const FieldGrid& grid) {
    FieldCounts counts;
    for (const FieldCell& cell : grid.cells) {
        switch (cell.cls) {
            case CellClass::redirection: ++counts.redirection; break;
            case CellClass::repulsion: ++counts.repulsion; break;
            case CellClass::empty: ++counts.empty; break;
        }
    }
    return counts;
}

inline std::string field_csv(const FieldGrid& grid) {
    std::string out = "lat,lng,value,class\n";
    for (const FieldCell& cell : grid.cells) {
        out += format_double(cell.center.lat);
        out.push_back(',');
        out += format_double(cell.center.lng);
        out.push_back(',');
        if (cell.cls != CellClass::empty) {
            out += format_double(cell.value);
        }
        out.push_back(',');
        out += to_string(cell.cls);
        out.push_back('\n');
    }
    return out;
}

// RFC 7946 FeatureCollection of populated cell centers; coordinates [lng, lat].
inline std::string field_geojson(const FieldGrid& grid) {
    std::string out = "{\"type\":\"FeatureCollection\",\"features\":[";
    bool first = true;
    for (const FieldCell& cell : grid.cells) {
        if (cell.cls == CellClass::empty) continue;
        if (!first) out.push_back(',');
        first = false;
        out += "\n{\"type\":\"Feature\",\"geometry\":{\"type\":\"Point\",\"coordinates\":[";
        out += format_double(cell.center.lng);
        out.push_back(',');
        out += format_double(cell.center.lat);
        out += "]},\"properties\":{\"value\":";
        out += format_double(cell.value);
        out += ",\"class\":\"";
        out += to_string(cell.cls);
        out += "\"}}";
    }
    out += "\n]}\n";
    return out;
}

// Writes the grid as CSV (all cells) and GeoJSON (populated cells only) and
// tallies the class partition.
inline FieldCounts partition_and_export(const FieldGrid& grid, const std::string& csv_path,
                                        const std::string& geojson_path) {
    atomic_write_file(csv_path, field_csv(grid));
    atomic_write_file(geojson_path, field_geojson(grid));
    return field_counts(grid);
}

}  // namespace tradeshock
