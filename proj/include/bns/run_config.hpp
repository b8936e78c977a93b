#pragma once

#include "bns/cf_pricer.hpp"
#include "bns/mc_pricer.hpp"
#include "bns/params.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bns {

/// Run description assembled from a sectioned key = value config file plus
/// command-line overrides (overrides win). Grids accept a single number,
/// a comma list, or lo:hi:step.
struct RunConfig {
    // [model]
    std::string kind = "ig";
    double a = 1.0;
    double b = 1.0;
    // [dynamics]
    double lambda = 1.0;
    double rho = 0.0;
    double r = 0.0;
    double sigma0_sq = 0.04;
    double s0 = 1.0;
    // [option]
    std::vector<double> strikes{1.0};
    std::vector<double> expiries{1.0};
    // [run]
    std::vector<int> orders{2};
    std::string oracle = "none"; // cf | mc | both | none
    std::string bound_method = "auto";
    std::uint64_t seed = 20240807ULL;
    int threads = 0;
    std::string out_path; // empty = stdout
    // [mc]
    long mc_paths = 1000000;
    int mc_grid_steps = 250;
    bool mc_antithetic = false;
    // [cf]
    double cf_damping = 0.75;
    double cf_u_max = 400.0;
    int cf_grid_points = 1 << 14;
    std::string cf_quadrature = "adaptive";
    // [sweep]
    std::string sweep_axis = "strike";
    std::vector<double> sweep_grid;

    static RunConfig from_file(const std::string& path);
    // "section.key" addressing, e.g. set("dynamics.lambda", "0.5").
    void set(const std::string& dotted_key, const std::string& value);

    ModelParams params() const;
    McSettings mc_settings() const;
    CfSettings cf_settings() const;
    void check() const; // throws ConfigError on any inconsistency
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

} // namespace bns
