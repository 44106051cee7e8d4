// Command-line front end: `monitor run` executes the full pipeline on two
// FRED-style CSVs, `monitor pelcov` solves a single equivalence-level
// query, `monitor stats` prints descriptive statistics for one series, and
// `monitor oracle ...` exposes the Monte-Carlo / grid-scan checks.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pelcov/monitor.hpp"
#include "pelcov/oracle.hpp"

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

void print_kv(const std::string& key, const std::string& value) {
    std::cout << key << "=" << value << "\n";
}

void print_summary(const pelcov::MonitorReport& rep) {
    const auto& s = rep.summary;
    print_kv("n_obs", std::to_string(s.n_obs));
    print_kv("pearson_r", num(s.pearson_r));
    print_kv("dropped_missing_x", std::to_string(s.dropped_missing_x));
    print_kv("dropped_missing_y", std::to_string(s.dropped_missing_y));
    print_kv("phi1", num(s.x_params.phi1));
    print_kv("omega_x", num(s.x_params.omega));
    print_kv("alpha_x", num(s.x_params.alpha));
    print_kv("beta_x", num(s.x_params.beta));
    print_kv("m1", num(s.x_params.m));
    print_kv("theta1", num(s.y_params.theta1));
    print_kv("omega_y", num(s.y_params.omega));
    print_kv("alpha_y", num(s.y_params.alpha));
    print_kv("beta_y", num(s.y_params.beta));
    print_kv("m2", num(s.y_params.skew.m));
    print_kv("xi", num(s.y_params.skew.xi));
    print_kv("rho_static", num(s.static_copula.params.rho));
    print_kv("n_static", num(s.static_copula.params.n));
    print_kv("static_loglik", num(s.static_copula.loglik));
    print_kv("nu0", num(s.evolution.nu0));
    print_kv("nu1", num(s.evolution.nu1));
    print_kv("nu2", num(s.evolution.nu2));
    print_kv("dynamic_loglik", num(s.dynamic_loglik));
    print_kv("rho_min", num(s.rho_min));
    print_kv("rho_max", num(s.rho_max));
    print_kv("min_L0", num(s.min_L0));
    for (const auto& lv : s.levels) {
        const std::string tag = num(lv.v);
        print_kv("u_min_" + tag, num(lv.u_min));
        print_kv("u_max_" + tag, num(lv.u_max));
        print_kv("alerts_" + tag, std::to_string(lv.alerts));
        print_kv("dates_single_root_" + tag, std::to_string(lv.dates_single_root));
        print_kv("dates_double_root_" + tag, std::to_string(lv.dates_double_root));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"PELCoV risk monitor for bivariate Student-t copulas"};
    app.require_subcommand(1);

    // --- run ---------------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "fit the full model and emit the monitoring report");
    std::string x_path, y_path, out_path;
    std::vector<double> v_levels;
    std::vector<double> fix_df;
    bool drop_missing = false;
    std::uint64_t seed = 0;
    run_cmd->add_option("--x", x_path, "CSV with the auxiliary (conditioning) price series")->required();
    run_cmd->add_option("--y", y_path, "CSV with the monitored price series")->required();
    run_cmd->add_option("--v", v_levels, "risk level(s), repeatable (default 0.95 0.99)");
    run_cmd->add_option("--out", out_path, "output CSV path for the per-date report");
    run_cmd->add_option("--fix-df", fix_df, "fix innovation degrees of freedom, e.g. 10,10")
        ->delimiter(',')
        ->expected(0, 2);
    run_cmd->add_flag("--drop-missing", drop_missing, "drop rows with the FRED '.' missing marker");
    run_cmd->add_option("--seed", seed, "seed for stochastic diagnostics");
    run_cmd->set_config("--config", "", "flat key=value config file; command line overrides");

    // --- pelcov ------------------------------------------------------------
    auto* pel_cmd = app.add_subcommand("pelcov", "solve the equivalence levels for one (rho, n, v)");
    double q_rho = 0.5, q_n = 10.0, q_v = 0.99;
    pel_cmd->add_option("--rho", q_rho, "copula dependence, in (0,1)")->required();
    pel_cmd->add_option("--n", q_n, "copula degrees of freedom, > 1")->required();
    pel_cmd->add_option("--v", q_v, "risk level, in (0,1)")->required();

    // --- stats -------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "descriptive statistics of a price series' returns");
    std::string stats_path;
    bool stats_drop = false;
    stats_cmd->add_option("--csv", stats_path, "FRED-style CSV path")->required();
    stats_cmd->add_flag("--drop-missing", stats_drop, "drop '.' rows");

    // --- oracle ------------------------------------------------------------
    auto* oracle_cmd = app.add_subcommand("oracle", "Monte-Carlo and grid-scan verification tools");
    oracle_cmd->require_subcommand(1);
    double o_rho = 0.5, o_n = 4.0, o_u = 0.5, o_v = 0.5, o_window = 0.005;
    std::size_t o_size = 1000000, o_grid = 1000000;
    std::uint64_t o_seed = 1;
    std::string o_out;

    auto* osample = oracle_cmd->add_subcommand("sample", "draw t-copula pairs");
    osample->add_option("--rho", o_rho)->required();
    osample->add_option("--n", o_n)->required();
    osample->add_option("--size", o_size, "number of pairs");
    osample->add_option("--seed", o_seed);
    osample->add_option("--out", o_out, "write u,v pairs to this CSV instead of stdout");

    auto* oh = oracle_cmd->add_subcommand("h", "windowed empirical conditional CDF");
    oh->add_option("--rho", o_rho)->required();
    oh->add_option("--n", o_n)->required();
    oh->add_option("--u", o_u)->required();
    oh->add_option("--v", o_v)->required();
    oh->add_option("--size", o_size);
    oh->add_option("--seed", o_seed);
    oh->add_option("--window", o_window);

    auto* oroots = oracle_cmd->add_subcommand("roots", "grid sign-change scan of h(u) = v");
    oroots->add_option("--rho", o_rho)->required();
    oroots->add_option("--n", o_n)->required();
    oroots->add_option("--v", o_v)->required();
    oroots->add_option("--grid", o_grid, "grid size (>= 10^4)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            pelcov::MonitorConfig cfg;
            cfg.x_csv_path = x_path;
            cfg.y_csv_path = y_path;
            if (!v_levels.empty()) cfg.v_levels = v_levels;
            if (!fix_df.empty()) {
                if (fix_df.size() != 2)
                    throw std::runtime_error("--fix-df expects two comma-separated values, e.g. 10,10");
                cfg.fix_innovation_df = {fix_df[0], fix_df[1]};
            }
            cfg.output_path = out_path;
            cfg.seed = seed;
            cfg.drop_missing = drop_missing;
            const pelcov::MonitorReport rep = pelcov::run(cfg);
            print_summary(rep);
            if (!out_path.empty()) {
                pelcov::emit_csv(rep, out_path);
                print_kv("report_csv", out_path);
            }
        } else if (*pel_cmd) {
            const pelcov::PelcovQuery q{q_v, {q_rho, q_n}};
            const pelcov::PelcovSolution sol = pelcov::solve(q);
            std::string roots;
            for (std::size_t i = 0; i < sol.roots.size(); ++i)
                roots += (i ? "," : "") + num(sol.roots[i]);
            print_kv("roots", roots);
            print_kv("v_star", num(sol.v_star));
            print_kv("u_star", sol.u_star ? num(*sol.u_star) : "none");
            print_kv("L0", num(sol.L0));
            print_kv("second_root_predicate", sol.second_root_predicate ? "true" : "false");
            print_kv("covar_below_var_region", "(" + num(sol.covar_below_var_region.first) + "," +
                                                   num(sol.covar_below_var_region.second) + ")");
        } else if (*stats_cmd) {
            const pelcov::LoadedPrices lp = pelcov::load_fred_csv(stats_path, stats_drop);
            const pelcov::ReturnSeries r = pelcov::neg_log_returns(lp.series);
            const pelcov::DescriptiveStats s = pelcov::descriptive_stats(r.values);
            print_kv("n_obs", std::to_string(r.values.size()));
            print_kv("mean", num(s.mean));
            print_kv("std_dev", num(s.std_dev));
            print_kv("min", num(s.min));
            print_kv("max", num(s.max));
            print_kv("skewness", num(s.skewness));
            print_kv("excess_kurtosis", num(s.excess_kurtosis));
            print_kv("dropped_missing", std::to_string(lp.dropped_missing));
        } else if (*osample) {
            const pelcov::SampleBatch batch = pelcov::sample_t_copula({o_rho, o_n}, o_size, o_seed);
            if (o_out.empty()) {
                std::printf("u,v\n");
                for (const auto& [u, v] : batch.pairs) std::printf("%.12g,%.12g\n", u, v);
            } else {
                std::ofstream f(o_out, std::ios::binary);
                if (!f) throw std::runtime_error("cannot open " + o_out);
                f << "u,v\n";
                for (const auto& [u, v] : batch.pairs)
                    f << num(u) << ',' << num(v) << "\n";
                print_kv("sample_csv", o_out);
            }
        } else if (*oh) {
            const pelcov::SampleBatch batch = pelcov::sample_t_copula({o_rho, o_n}, o_size, o_seed);
            const pelcov::HEstimate est = pelcov::empirical_h(batch, o_u, o_v, o_window);
            print_kv("empirical_h", num(est.value));
            print_kv("std_error", num(est.std_error));
            print_kv("window_count", std::to_string(est.count));
            print_kv("closed_form_h", num(pelcov::hfunc(o_u, o_v, {o_rho, o_n})));
        } else if (*oroots) {
            const auto roots = pelcov::grid_roots(o_v, {o_rho, o_n}, o_grid);
            std::string out;
            for (std::size_t i = 0; i < roots.size(); ++i) out += (i ? "," : "") + num(roots[i]);
            print_kv("root_count", std::to_string(roots.size()));
            print_kv("roots", out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
