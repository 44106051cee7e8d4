// End-to-end risk monitoring pipeline: ingest two monthly price series,
// fit the marginal and copula models, compute the per-date equivalence
// level for each configured risk level, and emit a plot-ready CSV report
// with alert flags.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pelcov/dynamic_copula.hpp"
#include "pelcov/marginals.hpp"
#include "pelcov/pelcov.hpp"

namespace pelcov {

struct MonitorConfig {
    std::string x_csv_path;
    std::string y_csv_path;
    std::vector<double> v_levels{0.95, 0.99};
    std::optional<std::pair<double, double>> fix_innovation_df; // (m1, m2)
    std::string output_path;
    std::uint64_t seed = 0; // reserved for stochastic diagnostics
    bool drop_missing = false;

    void validate() const {
        if (v_levels.empty()) throw std::domain_error("MonitorConfig: at least one v level required");
        for (double v : v_levels)
            if (!(v > 0.0 && v < 1.0)) throw std::domain_error("MonitorConfig: v levels must be in (0,1)");
    }
};

struct LoadedPrices {
    PriceSeries series;
    int dropped_missing = 0;
};

namespace detail {

inline bool iso_date_ok(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

} // namespace detail

/// Load a FRED-style CSV: header row, DATE column plus one value column;
/// "." marks a missing value and is dropped or rejected per the flag.
inline LoadedPrices load_fred_csv(const std::string& path, bool drop_missing = false) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_fred_csv: cannot open " + path);
    LoadedPrices out;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_fred_csv: empty file " + path);
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    {
        const auto comma = line.find(',');
        std::string head = line.substr(0, comma);
        for (char& c : head) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (head != "DATE")
            throw std::runtime_error("load_fred_csv: first column must be DATE, got '" + head + "'");
    }
    std::size_t rownum = 1;
    while (std::getline(in, line)) {
        ++rownum;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) + " has no value column");
        const std::string date = line.substr(0, comma);
        const std::string val = line.substr(comma + 1);
        if (!detail::iso_date_ok(date))
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) +
                                     " has malformed date '" + date + "'");
        if (!out.series.dates.empty() && !(out.series.dates.back() < date))
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) +
                                     " breaks strictly increasing dates (" + date + ")");
        if (val == ".") {
            if (drop_missing) {
                ++out.dropped_missing;
                continue;
            }
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) +
                                     " has missing value '.'; pass the drop-missing flag to skip");
        }
        char* end = nullptr;
        const double price = std::strtod(val.c_str(), &end);
        if (end == val.c_str() || *end != '\0')
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) +
                                     " has unparseable value '" + val + "'");
        if (!(price > 0.0))
            throw std::runtime_error("load_fred_csv: row " + std::to_string(rownum) +
                                     " has nonpositive price " + val);
        out.series.dates.push_back(date);
        out.series.values.push_back(price);
    }
    return out;
}

struct VLevelCell {
    double u;           // the per-date equivalence level
    double x_threshold; // conditional quantile of X at u, in return units
    double var_y;       // conditional VaR of Y at v, in return units
    bool alert;         // x exceeded the threshold
};

struct MonitorRow {
    std::string date;
    double x;
    double y;
    double rho;
    double L0;
    std::vector<VLevelCell> levels; // one per configured v, same order
};

struct VLevelSummary {
    double v;
    double u_min;
    double u_max;
    int alerts;
    int dates_single_root;
    int dates_double_root;
};

struct MonitorSummary {
    std::size_t n_obs = 0;
    double pearson_r = 0.0;
    ArGarchParams x_params{};
    MaGarchSkewParams y_params{};
    StaticCopulaFit static_copula{};
    EvolutionParams evolution{};
    double dynamic_loglik = 0.0;
    double rho_min = 0.0;
    double rho_max = 0.0;
    double min_L0 = 0.0;
    std::vector<VLevelSummary> levels;
    int dropped_missing_x = 0;
    int dropped_missing_y = 0;
};

struct MonitorReport {
    std::vector<double> v_levels;
    std::vector<MonitorRow> rows;
    MonitorSummary summary;
};

namespace detail {

template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

} // namespace detail

/// Full pipeline. Aborts (with the offending dates listed) if any date
/// admits two equivalence levels for a configured v: multiplicity means
/// the uniqueness regime v < L0_t does not hold and is surfaced rather
/// than silently resolved.
inline MonitorReport run(const MonitorConfig& cfg) {
    cfg.validate();
    MonitorReport rep;
    rep.v_levels = cfg.v_levels;

    const LoadedPrices px = detail::stage("ingest-x", [&] { return load_fred_csv(cfg.x_csv_path, cfg.drop_missing); });
    const LoadedPrices py = detail::stage("ingest-y", [&] { return load_fred_csv(cfg.y_csv_path, cfg.drop_missing); });
    rep.summary.dropped_missing_x = px.dropped_missing;
    rep.summary.dropped_missing_y = py.dropped_missing;

    // inner join on date
    PriceSeries jx, jy;
    {
        std::map<std::string, double> ymap;
        for (std::size_t i = 0; i < py.series.dates.size(); ++i)
            ymap.emplace(py.series.dates[i], py.series.values[i]);
        for (std::size_t i = 0; i < px.series.dates.size(); ++i) {
            const auto it = ymap.find(px.series.dates[i]);
            if (it == ymap.end()) continue;
            jx.dates.push_back(px.series.dates[i]);
            jx.values.push_back(px.series.values[i]);
            jy.dates.push_back(it->first);
            jy.values.push_back(it->second);
        }
    }
    const ReturnSeries rx = detail::stage("returns-x", [&] { return neg_log_returns(jx); });
    const ReturnSeries ry = detail::stage("returns-y", [&] { return neg_log_returns(jy); });
    rep.summary.n_obs = rx.values.size();
    rep.summary.pearson_r = pearson_correlation(rx.values, ry.values);

    FitOptions fx_opts, fy_opts;
    if (cfg.fix_innovation_df) {
        fx_opts.fix_df = cfg.fix_innovation_df->first;
        fy_opts.fix_df = cfg.fix_innovation_df->second;
    }
    const ArGarchFit fx = detail::stage("fit-x", [&] { return fit_ar_garch(rx, fx_opts); });
    const MaGarchSkewFit fy = detail::stage("fit-y", [&] { return fit_ma_garch_skew(ry, fy_opts); });
    rep.summary.x_params = fx.params;
    rep.summary.y_params = fy.params;

    const std::vector<double> uhat =
        pit(fx.state, [&](double z) { return std_t_cdf(z, fx.params.m); });
    const std::vector<double> vhat =
        pit(fy.state, [&](double z) { return skew_t_cdf(z, fy.params.skew, true); });

    const StaticCopulaFit sc = detail::stage("static-copula", [&] { return static_fit(uhat, vhat); });
    rep.summary.static_copula = sc;

    const DynamicFit dyn = detail::stage("dynamic-copula", [&] {
        return fit_dynamic(uhat, vhat, sc.params.n, sc.params.rho);
    });
    rep.summary.evolution = dyn.params;
    rep.summary.dynamic_loglik = dyn.loglik;

    const RhoPath path = rho_path(dyn.params, uhat, vhat);
    const std::size_t T = path.rho.size();
    rep.summary.rho_min = *std::min_element(path.rho.begin(), path.rho.end());
    rep.summary.rho_max = *std::max_element(path.rho.begin(), path.rho.end());
    rep.summary.min_L0 = *std::min_element(path.L0.begin(), path.L0.end());

    rep.rows.resize(T);
    rep.summary.levels.clear();
    for (const double v : cfg.v_levels)
        rep.summary.levels.push_back({v, 1.0, 0.0, 0, 0, 0});

    std::vector<std::string> multiplicity;
    for (std::size_t t = 0; t < T; ++t) {
        MonitorRow& row = rep.rows[t];
        row.date = rx.dates[t];
        row.x = rx.values[t];
        row.y = ry.values[t];
        row.rho = path.rho[t];
        row.L0 = path.L0[t];
        for (std::size_t iv = 0; iv < cfg.v_levels.size(); ++iv) {
            const double v = cfg.v_levels[iv];
            const PelcovSolution sol = solve({v, {path.rho[t], sc.params.n}});
            VLevelSummary& vs = rep.summary.levels[iv];
            if (sol.roots.size() == 2) {
                ++vs.dates_double_root;
                multiplicity.push_back(row.date + " (v = " + std::to_string(v) + ")");
                continue;
            }
            ++vs.dates_single_root;
            VLevelCell cell;
            cell.u = sol.roots.front();
            cell.x_threshold = fx.state.cond_mean[t] +
                               fx.state.cond_sigma[t] * std_t_quantile(cell.u, fx.params.m);
            cell.var_y = fy.state.cond_mean[t] +
                         fy.state.cond_sigma[t] * skew_t_quantile(v, fy.params.skew, true);
            cell.alert = row.x > cell.x_threshold;
            vs.u_min = std::min(vs.u_min, cell.u);
            vs.u_max = std::max(vs.u_max, cell.u);
            if (cell.alert) ++vs.alerts;
            row.levels.push_back(cell);
        }
    }
    if (!multiplicity.empty()) {
        std::string msg = "pelcov: " + std::to_string(multiplicity.size()) +
                          " date(s) admit two equivalence levels (v >= L0_t); first: " +
                          multiplicity.front();
        throw std::runtime_error(msg);
    }
    return rep;
}

namespace detail {

inline std::string fmt_num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

} // namespace detail

/// One row per date; numbers carry 12 significant digits so the file can
/// reproduce the report exactly. Byte output depends only on the report.
inline void emit_csv(const MonitorReport& rep, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path + " for writing");
    out << "date,x,y,rho,L0";
    for (const double v : rep.v_levels) {
        const std::string tag = detail::fmt_num(v);
        out << ",u_" << tag << ",x_threshold_" << tag << ",var_y_" << tag << ",alert_" << tag;
    }
    out << "\n";
    for (const MonitorRow& row : rep.rows) {
        out << row.date << ',' << detail::fmt_num(row.x) << ',' << detail::fmt_num(row.y) << ','
            << detail::fmt_num(row.rho) << ',' << detail::fmt_num(row.L0);
        for (const VLevelCell& c : row.levels)
            out << ',' << detail::fmt_num(c.u) << ',' << detail::fmt_num(c.x_threshold) << ','
                << detail::fmt_num(c.var_y) << ',' << (c.alert ? '1' : '0');
        out << "\n";
    }
    if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

} // namespace pelcov
