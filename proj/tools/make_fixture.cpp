// Regenerates the bundled monthly FX fixture (data/EXUSEU.csv,
// data/EXUSUK.csv). The two price series are a synthetic reconstruction:
// they are simulated from the AR/MA-GARCH + time-varying t-copula model
// this project fits, then affinely calibrated so the derived negative log
// returns match the published descriptive statistics of the real FRED
// EXUSEU/EXUSUK monthly series over 1999-01..2024-04 (the real data is not
// redistributed in this repository). The default seed is the one the
// bundled fixture was generated with; the whole construction is
// deterministic given the seed.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pelcov/marginals.hpp"
#include "pelcov/simulate.hpp"

namespace {

// Calibration targets for the derived return series.
constexpr double kMeanX = 0.000257;
constexpr double kStdX = 0.022035;
constexpr double kMeanY = 0.000911;
constexpr double kStdY = 0.020911;
constexpr std::size_t kObs = 303; // returns; prices are kObs + 1

std::vector<std::string> monthly_dates() {
    std::vector<std::string> dates;
    int year = 1999, month = 1;
    for (std::size_t i = 0; i < kObs + 1; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-01", year, month);
        dates.emplace_back(buf);
        if (++month > 12) {
            month = 1;
            ++year;
        }
    }
    return dates;
}

void rescale(std::vector<double>& r, double target_mean, double target_std) {
    const double m = pelcov::mean_of(r);
    const double s = std::sqrt(pelcov::variance_of(r));
    for (double& v : r) v = (v - m) * (target_std / s) + target_mean;
}

void write_csv(const std::string& path, const std::string& name,
               const std::vector<std::string>& dates, const std::vector<double>& prices) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "DATE," << name << "\n";
    char buf[32];
    for (std::size_t i = 0; i < prices.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.4f", prices[i]);
        out << dates[i] << ',' << buf << "\n";
    }
}

std::vector<double> prices_from_returns(const std::vector<double>& r, double p0) {
    std::vector<double> p{p0};
    for (double rt : r) p.push_back(p.back() * std::exp(-rt)); // r_t = log(p_{t-1}/p_t)
    return p;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regenerate the bundled synthetic FX fixture"};
    std::uint64_t seed = 338;
    std::string x_out = "data/EXUSEU.csv";
    std::string y_out = "data/EXUSUK.csv";
    app.add_option("--seed", seed, "simulation seed (default: the bundled fixture's seed)");
    app.add_option("--x-out", x_out, "output path for the auxiliary series");
    app.add_option("--y-out", y_out, "output path for the monitored series");
    CLI11_PARSE(app, argc, argv);

    try {
        pelcov::ArGarchParams px;
        px.phi1 = 0.0292;
        px.alpha = 0.0675;
        px.beta = 0.9035;
        px.m = 10.0;
        px.omega = kStdX * kStdX * (1.0 - px.phi1 * px.phi1) * (1.0 - px.alpha - px.beta);

        pelcov::MaGarchSkewParams py;
        py.theta1 = 0.2299;
        py.alpha = 0.08609;
        py.beta = 0.7819;
        py.skew = {10.0, 1.298};
        py.omega = kStdY * kStdY / (1.0 + py.theta1 * py.theta1) * (1.0 - py.alpha - py.beta);

        pelcov::EvolutionParams ev;
        ev.n = 9.7595;
        ev.rho_init = 0.71;
        ev.nu1 = 0.85;
        ev.nu2 = 0.12;
        // steady state at rho ~ 0.71: E[t^-1(u) t^-1(v)] = rho n/(n-2)
        const double qbar = ev.rho_init * ev.n / (ev.n - 2.0);
        ev.nu0 = 2.0 * std::atanh(ev.rho_init) - ev.nu1 * ev.rho_init - ev.nu2 * qbar;

        pelcov::Rng rng(seed);
        pelcov::JointSample sim = pelcov::simulate_joint(px, py, ev, kObs, rng);
        rescale(sim.x, kMeanX, kStdX);
        rescale(sim.y, kMeanY, kStdY);

        const auto dates = monthly_dates();
        const auto prices_x = prices_from_returns(sim.x, 1.1591);
        const auto prices_y = prices_from_returns(sim.y, 1.6581);
        write_csv(x_out, "EXUSEU", dates, prices_x);
        write_csv(y_out, "EXUSUK", dates, prices_y);

        // achieved statistics of the derived returns, after price rounding
        const auto check = [&](const std::vector<double>& prices) {
            pelcov::PriceSeries ps;
            ps.dates = dates;
            for (double p : prices) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.4f", p);
                ps.values.push_back(std::strtod(buf, nullptr));
            }
            return pelcov::neg_log_returns(ps);
        };
        const pelcov::ReturnSeries rx = check(prices_x);
        const pelcov::ReturnSeries ry = check(prices_y);
        const auto sx = pelcov::descriptive_stats(rx.values);
        const auto sy = pelcov::descriptive_stats(ry.values);
        std::printf("seed=%llu\n", static_cast<unsigned long long>(seed));
        std::printf("n_obs=%zu\n", rx.values.size());
        std::printf("mean_x=%.6g std_x=%.6g skew_x=%.4f kurt_x=%.4f\n", sx.mean, sx.std_dev,
                    sx.skewness, sx.excess_kurtosis);
        std::printf("mean_y=%.6g std_y=%.6g skew_y=%.4f kurt_y=%.4f\n", sy.mean, sy.std_dev,
                    sy.skewness, sy.excess_kurtosis);
        std::printf("pearson_r=%.6f\n", pelcov::pearson_correlation(rx.values, ry.values));
        double rho_min = 1.0, rho_max = -1.0;
        for (double r : sim.rho) {
            rho_min = std::min(rho_min, r);
            rho_max = std::max(rho_max, r);
        }
        std::printf("true_rho_range=[%.4f,%.4f]\n", rho_min, rho_max);
        std::printf("x_csv=%s\ny_csv=%s\n", x_out.c_str(), y_out.c_str());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
