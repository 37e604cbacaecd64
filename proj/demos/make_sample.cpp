// Writes the bundled sample data: daily prices driven by a GARCH(1,1) path
// and one week of minute prices, plus ready-to-run configs.
//
//   make_sample [dir]      (default: data)

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "rvf/econometric/garch.hpp"

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    const auto sim = rvf::econometric::garch_simulate({2e-6, 0.08, 0.90}, 400, 7);
    {
        std::ofstream out(dir / "sample_daily.csv");
        out << "timestamp,price\n";
        double p = 6000.0;
        out << "1999-12-31," << rvf::format_double(p) << '\n';
        for (std::size_t i = 0; i < sim.size(); ++i) {
            p *= std::exp(sim.values[i]);
            out << rvf::format_timestamp(sim.timestamps[i]) << ',' << rvf::format_double(p) << '\n';
        }
    }
    {
        // 24 x 7 hours of minute prices with an intraday volatility cycle
        rvf::CounterRng rng(11);
        std::normal_distribution<double> z;
        std::ofstream out(dir / "sample_minute.csv");
        out << "timestamp,price\n";
        double p = 6000.0;
        const auto start = rvf::parse_timestamp("2021-03-01 00:00");
        for (int m = 0; m <= 24 * 7 * 60; ++m) {
            const double hour = (m / 60) % 24;
            const double sd = 2e-4 * (1.0 + 0.5 * std::cos(hour / 24.0 * 2.0 * M_PI));
            if (m > 0) p *= std::exp(sd * z(rng));
            out << rvf::format_timestamp(start + std::chrono::minutes{m}, false) << ',' << rvf::format_double(p) << '\n';
        }
    }
    std::ofstream(dir / "sample_daily.json") << R"({
  "data": "sample_daily.csv",
  "frequency": "daily",
  "window_size": 250,
  "models": ["har", "garch", {"name": "gru", "epochs": 10, "refit_every": 50}],
  "horizons": [1, 5, 22],
  "seed": 2024
}
)";
    std::ofstream(dir / "sample_hourly.json") << R"({
  "data": "sample_minute.csv",
  "frequency": "hourly",
  "window_size": 100,
  "models": ["har"],
  "horizons": [1, 3],
  "seed": 1
}
)";
    std::cout << "wrote samples to " << dir.string() << '\n';
    return 0;
}
