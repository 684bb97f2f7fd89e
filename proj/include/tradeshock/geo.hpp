#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tradeshock/error.hpp"

namespace tradeshock {

// Mean Earth radius in kilometres (IUGG).
inline constexpr double earth_radius_km = 6371.0088;

// Wraps a longitude into [-180, 180); +180 maps to -180.
inline double normalize_lng(double lng) {
    if (!std::isfinite(lng)) {
        throw validation_error("normalize_lng: longitude must be finite");
    }
    if (lng >= -180.0 && lng < 180.0) return lng;  // keep in-range values bit-exact
    double wrapped = std::fmod(lng + 180.0, 360.0);
    if (wrapped < 0.0) wrapped += 360.0;
    return wrapped - 180.0;
}

struct GeoPoint {
    double lat = 0.0;
    double lng = 0.0;  // stored normalized to [-180, 180)

    GeoPoint() = default;
    GeoPoint(double lat_deg, double lng_deg) : lat(lat_deg), lng(normalize_lng(lng_deg)) {
        if (!std::isfinite(lat_deg) || lat_deg < -90.0 || lat_deg > 90.0) {
            throw validation_error("GeoPoint: latitude out of [-90, 90]");
        }
    }
};

// Great-circle distance in km on a sphere of radius earth_radius_km.
inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
    if (!std::isfinite(a.lat) || !std::isfinite(a.lng) || !std::isfinite(b.lat) ||
        !std::isfinite(b.lng)) {
        throw validation_error("haversine_km: coordinates must be finite");
    }
    constexpr double deg = 3.14159265358979323846 / 180.0;
    const double phi1 = a.lat * deg;
    const double phi2 = b.lat * deg;
    const double dphi = (b.lat - a.lat) * deg;
    const double dlng = (b.lng - a.lng) * deg;
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlng / 2.0);
    const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    // h may exceed 1 by rounding for near-antipodal points; clamp before asin.
    const double root = std::sqrt(std::min(1.0, h));
    return 2.0 * earth_radius_km * std::asin(root);
}

// Regular lat/lng grid. Cell centers sit at offset resolution/2 from the
// south-west corner; the spans must divide into whole cells.
struct GridSpec {
    double resolution = 1.0;
    double lat_min = -90.0;
    double lat_max = 90.0;
    double lng_min = -180.0;
    double lng_max = 180.0;

    void validate() const {
        if (!std::isfinite(resolution) || resolution <= 0.0) {
            throw validation_error("GridSpec: resolution must be > 0");
        }
        if (lat_min < -90.0 || lat_max > 90.0 || lat_min >= lat_max) {
            throw validation_error("GridSpec: latitude bounds must satisfy -90 <= min < max <= 90");
        }
        if (lng_min < -180.0 || lng_max > 180.0 || lng_min >= lng_max) {
            throw validation_error(
                "GridSpec: longitude bounds must satisfy -180 <= min < max <= 180");
        }
        check_divides(lat_max - lat_min, "latitude span");
        check_divides(lng_max - lng_min, "longitude span");
    }

    std::size_t rows() const { return cell_count(lat_max - lat_min); }
    std::size_t cols() const { return cell_count(lng_max - lng_min); }

private:
    std::size_t cell_count(double span) const {
        return static_cast<std::size_t>(std::llround(span / resolution));
    }

    void check_divides(double span, const char* what) const {
        const double ratio = span / resolution;
        const double nearest = std::round(ratio);
        if (nearest < 0.5 || std::fabs(ratio - nearest) > 1e-9 * std::max(1.0, ratio)) {
            throw validation_error(std::string("GridSpec: ") + what +
                                   " is not a whole multiple of the resolution");
        }
    }
};

// Cell centers in row-major order: south to north, west to east within a row.
inline std::vector<GeoPoint> make_grid(const GridSpec& spec) {
    spec.validate();
    const std::size_t nrows = spec.rows();
    const std::size_t ncols = spec.cols();
    std::vector<GeoPoint> centers;
    centers.reserve(nrows * ncols);
    for (std::size_t i = 0; i < nrows; ++i) {
        const double lat = spec.lat_min + (static_cast<double>(i) + 0.5) * spec.resolution;
        for (std::size_t j = 0; j < ncols; ++j) {
            const double lng = spec.lng_min + (static_cast<double>(j) + 0.5) * spec.resolution;
            centers.emplace_back(lat, lng);
        }
    }
    return centers;
}

}  // namespace tradeshock
