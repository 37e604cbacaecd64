// rvf: summarize | backtest | plot, all driven by a JSON config.

#include <iostream>

#include "CLI11.hpp"
#include "rvf/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Realized-volatility forecasting toolkit"};
    app.set_version_flag("--version", rvf::cli::kVersion);
    app.require_subcommand(1);

    struct Args {
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
    };
    Args args;
    auto add = [&](const char* name, const char* help, bool needs_config) {
        auto* sub = app.add_subcommand(name, help);
        auto* c = sub->add_option("--config", args.config, "JSON run configuration")->check(CLI::ExistingFile);
        if (needs_config) c->required();
        sub->add_option("--out", args.out, "output directory (overrides config 'out')");
        sub->add_option("--seed", args.seed, "overrides the config seed");
        return sub;
    };
    auto* summarize = add("summarize", "descriptive statistics of returns and RV", true);
    auto* backtest = add("backtest", "rolling-window forecasts and loss tables", true);
    auto* plot = add("plot", "SVG charts from a backtest output directory", false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        rvf::cli::RunConfig cfg;
        if (!args.config.empty()) cfg = rvf::cli::load_config(args.config);
        if (args.seed) cfg.seed = *args.seed;
        std::filesystem::path out = args.out.empty() ? cfg.out : std::filesystem::path(args.out);
        if (out.empty()) throw std::invalid_argument("no output directory: pass --out or set 'out' in the config");
        if (summarize->parsed()) return rvf::cli::cmd_summarize(cfg, out, std::cout);
        if (backtest->parsed()) return rvf::cli::cmd_backtest(cfg, out, std::cout);
        if (plot->parsed()) return rvf::cli::cmd_plot(out, std::cout);
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (auto& ch : msg)
            if (ch == '\n') ch = ' ';
        std::cerr << "error: " << msg << '\n';
        return 1;
    }
    return 1;
}
