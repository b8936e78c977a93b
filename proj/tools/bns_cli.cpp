// Command-line workbench: Taylor pricing, remainder bounds, oracle
// comparison and figure-style parameter sweeps, all emitted as CSV.
#include "CLI11.hpp"

#include "bns/commands.hpp"
#include "bns/run_config.hpp"

#include <omp.h>

#include <fstream>
#include <iostream>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

struct Overrides {
    std::string config_path;
    std::string orders;
    std::string oracle;
    std::string out;
    std::string seed;
    int threads = -1;
    std::vector<std::string> sets; // section.key=value
};

bns::RunConfig build_config(const Overrides& ov) {
    bns::RunConfig cfg;
    if (!ov.config_path.empty()) cfg = bns::RunConfig::from_file(ov.config_path);
    for (const auto& kv : ov.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw bns::ConfigError("--set expects section.key=value, got " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    // flags win over the file
    if (!ov.orders.empty()) cfg.set("run.orders", ov.orders);
    if (!ov.oracle.empty()) cfg.set("run.oracle", ov.oracle);
    if (!ov.out.empty()) cfg.set("run.out", ov.out);
    if (!ov.seed.empty()) cfg.set("run.seed", ov.seed);
    if (ov.threads >= 0) cfg.set("run.threads", std::to_string(ov.threads));
    return cfg;
}

void emit(const bns::RunConfig& cfg, const std::string& csv) {
    if (cfg.out_path.empty()) {
        std::cout << csv;
        return;
    }
    std::ofstream out(cfg.out_path, std::ios::binary); // LF endings everywhere
    if (!out) throw bns::ConfigError("cannot open output file: " + cfg.out_path);
    out << csv;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"European put pricing in Barndorff-Nielsen--Shephard models: "
                 "Taylor approximation with computable error bounds, plus "
                 "characteristic-function and Monte Carlo reference pricers"};
    app.require_subcommand(1);

    Overrides ov;
    app.add_option("--config", ov.config_path, "run configuration file (key = value sections)");
    app.add_option("--order", ov.orders, "approximation orders, e.g. 2,3,4");
    app.add_option("--oracle", ov.oracle, "reference pricers to run: cf|mc|both|none");
    app.add_option("--seed", ov.seed, "Monte Carlo seed");
    app.add_option("--threads", ov.threads, "worker threads (0 = hardware default)");
    app.add_option("--out", ov.out, "output CSV path (default stdout)");
    app.add_option("--set", ov.sets, "override any config key, e.g. --set dynamics.lambda=2");

    std::string sweep_axis = "strike";
    auto* price = app.add_subcommand("price", "price the configured strike/expiry grid");
    auto* sweep = app.add_subcommand("sweep", "sweep one axis against the CF oracle");
    sweep->add_option("--axis", sweep_axis, "strike|expiry|lambda|b|order");
    auto* bound = app.add_subcommand("bound", "remainder bound report with realized errors");
    auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");
    // global flags remain valid after the subcommand name
    for (auto* sub : {price, sweep, bound, selftest}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? exit_config : exit_ok;
    }

    try {
        if (selftest->parsed()) {
            std::string report;
            const bool ok = bns::run_selftest(report);
            std::cout << report;
            std::cout << (ok ? "selftest: all checks passed\n" : "selftest: FAILURES\n");
            return ok ? exit_ok : exit_numeric;
        }
        const bns::RunConfig cfg = build_config(ov);
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        if (price->parsed()) emit(cfg, bns::cmd_price(cfg));
        else if (sweep->parsed()) emit(cfg, bns::cmd_sweep(cfg, sweep_axis));
        else if (bound->parsed()) emit(cfg, bns::cmd_bound(cfg));
        return exit_ok;
    } catch (const bns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return exit_numeric;
    }
}
