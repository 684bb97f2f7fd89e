#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "tradeshock/error.hpp"
#include "tradeshock/ingest.hpp"
#include "tradeshock/linalg.hpp"
#include "tradeshock/stats.hpp"

namespace tradeshock {

enum class Term {
    intercept,
    ln_gdp_o,
    ln_gdp_d,
    ln_dist,
    intra_eu,
    sanctions,
    energy_exporter_o,
};

inline const char* to_string(Term t) {
    switch (t) {
        case Term::intercept: return "intercept";
        case Term::ln_gdp_o: return "ln_gdp_o";
        case Term::ln_gdp_d: return "ln_gdp_d";
        case Term::ln_dist: return "ln_dist";
        case Term::intra_eu: return "intra_eu";
        case Term::sanctions: return "sanctions";
        case Term::energy_exporter_o: return "energy_exporter_o";
    }
    return "unknown";
}

inline Term parse_term(const std::string& name) {
    for (const Term t : {Term::intercept, Term::ln_gdp_o, Term::ln_gdp_d, Term::ln_dist,
                         Term::intra_eu, Term::sanctions, Term::energy_exporter_o}) {
        if (name == to_string(t)) return t;
    }
    throw validation_error("unknown model term '" + name + "'");
}

// Regression design selection; the response is ln(trade) for a chosen year.
struct ModelSpec {
    std::vector<Term> terms;
    std::string sanctions_destination = "RUS";

    void validate() const {
        if (terms.empty()) {
            throw validation_error("ModelSpec: term list must not be empty");
        }
        std::set<Term> seen;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            if (!seen.insert(terms[i]).second) {
                throw validation_error(std::string("ModelSpec: duplicate term ") +
                                       to_string(terms[i]));
            }
            if (terms[i] == Term::intercept && i != 0) {
                throw validation_error("ModelSpec: intercept must come first");
            }
        }
        if (sanctions_destination.size() != 3) {
            throw validation_error("ModelSpec: sanctions_destination must be a 3-letter code");
        }
    }

    bool has_intercept() const {
        return !terms.empty() && terms.front() == Term::intercept;
    }
};

struct Design {
    Matrix x;
    std::vector<double> y;               // ln(trade)
    std::vector<std::size_t> pair_rows;  // indices into panel.pairs, ascending
    std::vector<Term> terms;
    std::size_t excluded = 0;  // pairs without positive trade in the year
};

namespace detail {

inline double term_value(Term term, const PairObservation& pair, const CountryRecord& origin,
                         const CountryRecord& dest, int year,
                         const std::string& sanctions_destination) {
    switch (term) {
        case Term::intercept: return 1.0;
        case Term::ln_gdp_o: return std::log(origin.gdp_at(year));
        case Term::ln_gdp_d: return std::log(dest.gdp_at(year));
        case Term::ln_dist: return std::log(pair.dist_km);
        case Term::intra_eu: return origin.eu_member && dest.eu_member ? 1.0 : 0.0;
        case Term::sanctions:
            return origin.sanctioning && pair.iso3_d == sanctions_destination ? 1.0 : 0.0;
        case Term::energy_exporter_o: return origin.energy_exporter ? 1.0 : 0.0;
    }
    throw validation_error("unknown term");
}

inline Design design_for_rows(const GravityPanel& panel, int year, const ModelSpec& spec,
                              const std::vector<std::size_t>& rows, std::size_t excluded) {
    Design design;
    design.terms = spec.terms;
    design.pair_rows = rows;
    design.excluded = excluded;
    design.x = Matrix(rows.size(), spec.terms.size());
    design.y.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const PairObservation& pair = panel.pairs[rows[i]];
        const CountryRecord& origin = panel.country(pair.iso3_o);
        const CountryRecord& dest = panel.country(pair.iso3_d);
        for (std::size_t j = 0; j < spec.terms.size(); ++j) {
            design.x(i, j) = term_value(spec.terms[j], pair, origin, dest, year,
                                        spec.sanctions_destination);
        }
        design.y.push_back(std::log(*pair.trade_at(year)));
    }
    return design;
}

// Rows usable for a log-linear fit: trade reported and strictly positive.
inline std::vector<std::size_t> usable_rows(const GravityPanel& panel, int year,
                                            std::size_t& excluded) {
    std::vector<std::size_t> rows;
    excluded = 0;
    for (std::size_t i = 0; i < panel.pairs.size(); ++i) {
        const auto trade = panel.pairs[i].trade_at(year);
        if (trade.has_value() && *trade > 0.0) {
            rows.push_back(i);
        } else {
            ++excluded;
        }
    }
    return rows;
}

}  // namespace detail

// Builds the regression sample for one year, excluding pairs whose trade is
// missing or non-positive. Row order follows the panel's pair order.
inline Design build_design(const GravityPanel& panel, int year, const ModelSpec& spec) {
    spec.validate();
    if (!panel.has_year(year)) {
        throw data_error("build_design: year " + std::to_string(year) + " not in panel");
    }
    std::size_t excluded = 0;
    const std::vector<std::size_t> rows = detail::usable_rows(panel, year, excluded);
    if (rows.size() <= spec.terms.size()) {
        throw data_error("build_design: sample has " + std::to_string(rows.size()) +
                         " rows for " + std::to_string(spec.terms.size()) + " terms");
    }
    return detail::design_for_rows(panel, year, spec, rows, excluded);
}

struct FitResult {
    std::vector<Term> terms;
    std::vector<double> betas;
    std::vector<double> standard_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
};

// OLS with classical standard errors; p-values are two-sided on n - k degrees
// of freedom. R-squared is centered when the design has an intercept.
inline FitResult ols_fit(const Matrix& x, const std::vector<double>& y,
                         bool has_intercept = true) {
    const std::size_t n = x.rows();
    const std::size_t k = x.cols();
    if (n <= k) {
        throw numeric_error("ols_fit: need n > k, got n = " + std::to_string(n) +
                            ", k = " + std::to_string(k));
    }
    const LeastSquaresSolution sol = householder_least_squares(x, y);

    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (std::size_t j = 0; j < k; ++j) fitted += x(i, j) * sol.beta[j];
        const double r = y[i] - fitted;
        ssr += r * r;
    }
    double tss = 0.0;
    if (has_intercept) {
        double mean = 0.0;
        for (const double v : y) mean += v;
        mean /= static_cast<double>(n);
        for (const double v : y) tss += (v - mean) * (v - mean);
    } else {
        for (const double v : y) tss += v * v;
    }

    FitResult fit;
    fit.n = n;
    fit.k = k;
    fit.betas = sol.beta;
    fit.r2 = tss > 0.0 ? 1.0 - ssr / tss : (ssr == 0.0 ? 1.0 : 0.0);
    fit.r2 = std::min(1.0, std::max(0.0, fit.r2));
    const double dn = static_cast<double>(n);
    const double dk = static_cast<double>(k);
    fit.adj_r2 = 1.0 - (1.0 - fit.r2) * (dn - 1.0) / (dn - dk);

    const double df = dn - dk;
    const double sigma2 = ssr / df;
    fit.standard_errors.reserve(k);
    fit.t_stats.reserve(k);
    fit.p_values.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double se = std::sqrt(sigma2 * sol.xtx_inv_diag[j]);
        fit.standard_errors.push_back(se);
        double t = 0.0;
        if (se > 0.0) {
            t = sol.beta[j] / se;
        } else if (sol.beta[j] != 0.0) {
            t = sol.beta[j] > 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
        }
        fit.t_stats.push_back(t);
        fit.p_values.push_back(t == 0.0 && se == 0.0 ? 1.0 : student_t_two_sided_p(t, df));
    }
    return fit;
}

inline FitResult fit_design(const Design& design, bool has_intercept) {
    FitResult fit = ols_fit(design.x, design.y, has_intercept);
    fit.terms = design.terms;
    return fit;
}

struct NestedFit {
    ModelSpec spec;
    FitResult fit;
};

// Fits each spec in the chain on the common usable sample so R-squared moves
// with the terms, not the rows. Each spec must extend the previous one.
inline std::vector<NestedFit> nested_comparison(const GravityPanel& panel, int year,
                                                const std::vector<ModelSpec>& chain) {
    if (chain.empty()) {
        throw validation_error("nested_comparison: empty model chain");
    }
    for (const ModelSpec& spec : chain) spec.validate();
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const std::set<Term> current(chain[i].terms.begin(), chain[i].terms.end());
        for (const Term t : chain[i - 1].terms) {
            if (current.count(t) == 0) {
                throw validation_error(std::string("nested_comparison: model ") +
                                       std::to_string(i + 1) + " drops term " + to_string(t));
            }
        }
    }
    if (!panel.has_year(year)) {
        throw data_error("nested_comparison: year " + std::to_string(year) + " not in panel");
    }
    // Term sets never change row usability here, so the common sample is the
    // usable set itself; the largest spec still bounds the required rows.
    std::size_t excluded = 0;
    const std::vector<std::size_t> rows = detail::usable_rows(panel, year, excluded);
    const std::size_t max_terms = std::max_element(chain.begin(), chain.end(),
                                                   [](const ModelSpec& a, const ModelSpec& b) {
                                                       return a.terms.size() < b.terms.size();
                                                   })
                                      ->terms.size();
    if (rows.size() <= max_terms) {
        throw data_error("nested_comparison: common sample too small");
    }
    std::vector<NestedFit> results;
    results.reserve(chain.size());
    for (const ModelSpec& spec : chain) {
        const Design design = detail::design_for_rows(panel, year, spec, rows, excluded);
        results.push_back({spec, fit_design(design, spec.has_intercept())});
    }
    return results;
}

// exp(beta) - 1: the multiplicative effect of a unit dummy change.
inline double effect_size(double beta) {
    if (!std::isfinite(beta)) {
        throw validation_error("effect_size: beta must be finite");
    }
    return std::expm1(beta);
}

struct DeltaRecord {
    std::string iso3_o;
    std::string iso3_d;
    double trade_t0 = 0.0;
    double trade_t1 = 0.0;
    double delta = 0.0;  // trade_t1 - trade_t0
};

struct TradeDeltas {
    std::vector<DeltaRecord> gains;   // by delta descending
    std::vector<DeltaRecord> losses;  // by delta ascending
    std::size_t compared = 0;
    std::size_t excluded = 0;  // pairs missing either year
};

// Two-vintage comparison: ranks directed pairs by trade change between t0 and
// t1. Pairs missing either year are excluded and counted.
inline TradeDeltas trade_deltas(const GravityPanel& panel, int year_t0, int year_t1,
                                std::size_t top_n) {
    if (top_n == 0) {
        throw validation_error("trade_deltas: top_n must be > 0");
    }
    std::vector<DeltaRecord> records;
    TradeDeltas result;
    for (const PairObservation& pair : panel.pairs) {
        const auto t0 = pair.trade_at(year_t0);
        const auto t1 = pair.trade_at(year_t1);
        if (!t0.has_value() || !t1.has_value()) {
            ++result.excluded;
            continue;
        }
        records.push_back({pair.iso3_o, pair.iso3_d, *t0, *t1, *t1 - *t0});
    }
    if (records.empty()) {
        throw data_error("trade_deltas: no pairs observed in both years");
    }
    result.compared = records.size();
    const auto lexicographic = [](const DeltaRecord& a, const DeltaRecord& b) {
        if (a.iso3_o != b.iso3_o) return a.iso3_o < b.iso3_o;
        return a.iso3_d < b.iso3_d;
    };
    const std::size_t take = std::min(top_n, records.size());
    std::sort(records.begin(), records.end(), [&](const DeltaRecord& a, const DeltaRecord& b) {
        if (a.delta != b.delta) return a.delta > b.delta;
        return lexicographic(a, b);
    });
    result.gains.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(records.begin(), records.end(), [&](const DeltaRecord& a, const DeltaRecord& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return lexicographic(a, b);
    });
    result.losses.assign(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(take));
    return result;
}

}  // namespace tradeshock
