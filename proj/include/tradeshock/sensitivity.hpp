#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tradeshock/error.hpp"
#include "tradeshock/shock.hpp"

namespace tradeshock {

enum class SweepParameter { s_p, r_km, mask_reduction };

inline const char* to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::s_p: return "s_p";
        case SweepParameter::r_km: return "r_km";
        case SweepParameter::mask_reduction: return "mask_reduction";
    }
    return "unknown";
}

struct ResponseCurve {
    SweepParameter parameter = SweepParameter::s_p;
    std::vector<double> values;  // strictly increasing
    std::vector<double> totals;  // global force change per value
};

// Reruns the shock for each parameter value, holding everything else fixed,
// and records the total force change sum(F_shock - F_norm). By default the sum
// runs over all panel pairs; filtered_only restricts it to the significance-
// filtered route set.
inline ResponseCurve sweep(const GravityPanel& panel, const ShockParams& base_params,
                           SweepParameter parameter, const std::vector<double>& values, int year,
                           bool filtered_only = false) {
    if (values.size() < 3) {
        throw validation_error("sweep: at least 3 values required");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw validation_error("sweep: values must be strictly increasing");
        }
    }
    for (const double v : values) {
        const bool legal = std::isfinite(v) &&
                           (parameter == SweepParameter::s_p     ? v >= 0.0
                            : parameter == SweepParameter::r_km ? v > 0.0
                                                                : (v >= 0.0 && v <= 1.0));
        if (!legal) {
            throw validation_error(std::string("sweep: value ") + format_double(v) +
                                   " outside the legal range of " + to_string(parameter));
        }
    }

    ResponseCurve curve;
    curve.parameter = parameter;
    curve.values = values;
    curve.totals.reserve(values.size());
    for (const double v : values) {
        ShockParams params = base_params;
        switch (parameter) {
            case SweepParameter::s_p: params.s_p = v; break;
            case SweepParameter::r_km: params.r_km = v; break;
            case SweepParameter::mask_reduction: params.mask_reduction = v; break;
        }
        std::vector<RouteResult> routes = compute_forces(panel, params, year);
        if (filtered_only) {
            routes = significance_filter(routes, params);
        }
        double total = 0.0;
        for (const RouteResult& r : routes) {
            total += r.f_shock - r.f_norm;
        }
        curve.totals.push_back(total);
    }
    return curve;
}

enum class ResponseShape { linear, nonlinear_accelerating, insensitive };

inline const char* to_string(ResponseShape s) {
    switch (s) {
        case ResponseShape::linear: return "Linear";
        case ResponseShape::nonlinear_accelerating: return "NonlinearAccelerating";
        case ResponseShape::insensitive: return "Insensitive";
    }
    return "unknown";
}

struct ResponseClassification {
    ResponseShape shape = ResponseShape::insensitive;
    bool clean = true;          // false when only a dominant label applies
    std::string diagnostics;    // non-empty when clean is false
    double max_abs_step = 0.0;  // max |t[i+1] - t[i]|
    double max_abs_second_diff = 0.0;
    double range = 0.0;         // max(totals) - min(totals)
};

// Shape test in order: Insensitive (steps negligible against the mean level),
// Linear (second differences negligible against the range), accelerating
// (consistent curvature that grows the loss magnitude). Anything else gets the
// dominant label plus diagnostics.
inline ResponseClassification classify_response(const ResponseCurve& curve, double tol = 1e-6) {
    const std::size_t n = curve.values.size();
    if (n < 3 || curve.totals.size() != n) {
        throw validation_error("classify_response: curve needs >= 3 value/total pairs");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw validation_error("classify_response: tol must be > 0");
    }
    const double span = curve.values.back() - curve.values.front();
    const double step = span / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs((curve.values[i] - curve.values[i - 1]) - step) > 1e-9 * std::fabs(span)) {
            throw validation_error("classify_response: values must be equally spaced");
        }
    }

    ResponseClassification result;
    double mean = 0.0;
    double lo = curve.totals.front();
    double hi = curve.totals.front();
    for (const double t : curve.totals) {
        mean += t;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    mean /= static_cast<double>(n);
    result.range = hi - lo;

    std::vector<double> deltas(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        deltas[i] = curve.totals[i + 1] - curve.totals[i];
        result.max_abs_step = std::max(result.max_abs_step, std::fabs(deltas[i]));
    }
    std::vector<double> second(n - 2);
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        second[i] = deltas[i + 1] - deltas[i];
        result.max_abs_second_diff = std::max(result.max_abs_second_diff, std::fabs(second[i]));
    }

    if (result.max_abs_step <= tol * std::fabs(mean)) {
        result.shape = ResponseShape::insensitive;
        return result;
    }
    if (result.max_abs_second_diff <= tol * result.range) {
        result.shape = ResponseShape::linear;
        return result;
    }

    int sign = 0;
    bool consistent = true;
    for (const double d2 : second) {
        if (std::fabs(d2) <= tol * result.range) continue;  // insignificant curvature
        const int s = d2 > 0.0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) consistent = false;
    }
    const bool magnitude_grows =
        std::fabs(curve.totals.back()) >= std::fabs(curve.totals.front());
    if (consistent && sign != 0 && magnitude_grows) {
        result.shape = ResponseShape::nonlinear_accelerating;
        return result;
    }

    result.shape = ResponseShape::nonlinear_accelerating;
    result.clean = false;
    result.diagnostics = consistent ? "curvature present but loss magnitude does not grow"
                                    : "second differences change sign across the sweep";
    return result;
}

}  // namespace tradeshock
