#include "bns/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bns {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw ConfigError("malformed number: '" + text + "'");
    return v;
}

} // namespace

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    if (text.find(':') != std::string::npos) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw ConfigError("grid must be lo:hi:step, got " + text);
        const double lo = parse_double(trim(text.substr(0, c1)));
        const double hi = parse_double(trim(text.substr(c1 + 1, c2 - c1 - 1)));
        const double step = parse_double(trim(text.substr(c2 + 1)));
        if (step <= 0.0 || hi < lo) throw ConfigError("bad grid range: " + text);
        for (double v = lo; v <= hi + 0.5 * step; v += step) grid.push_back(v);
        return grid;
    }
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        piece = trim(piece);
        if (!piece.empty()) grid.push_back(parse_double(piece));
    }
    if (grid.empty()) throw ConfigError("empty grid: '" + text + "'");
    return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_grid(text)) {
        if (v != std::floor(v)) throw ConfigError("expected integers: " + text);
        out.push_back(static_cast<int>(v));
    }
    return out;
}

void RunConfig::set(const std::string& dotted_key, const std::string& value) {
    const auto dot = dotted_key.find('.');
    const std::string section = dot == std::string::npos ? "" : dotted_key.substr(0, dot);
    const std::string key = dot == std::string::npos ? dotted_key : dotted_key.substr(dot + 1);
    const std::string full = section + "." + key;

    if (full == "model.kind") kind = value;
    else if (full == "model.a") a = parse_double(value);
    else if (full == "model.b") b = parse_double(value);
    else if (full == "dynamics.lambda") lambda = parse_double(value);
    else if (full == "dynamics.rho") rho = parse_double(value);
    else if (full == "dynamics.r") r = parse_double(value);
    else if (full == "dynamics.sigma0_sq") sigma0_sq = parse_double(value);
    else if (full == "dynamics.s0") s0 = parse_double(value);
    else if (full == "option.strike") strikes = parse_grid(value);
    else if (full == "option.expiry") expiries = parse_grid(value);
    else if (full == "run.orders") orders = parse_int_list(value);
    else if (full == "run.oracle") oracle = value;
    else if (full == "run.bound_method") bound_method = value;
    else if (full == "run.seed") seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (full == "run.threads") threads = static_cast<int>(parse_double(value));
    else if (full == "run.out") out_path = value;
    else if (full == "mc.paths") mc_paths = static_cast<long>(parse_double(value));
    else if (full == "mc.grid_steps_per_year") mc_grid_steps = static_cast<int>(parse_double(value));
    else if (full == "mc.antithetic") mc_antithetic = (value == "true" || value == "1");
    else if (full == "cf.damping") cf_damping = parse_double(value);
    else if (full == "cf.u_max") cf_u_max = parse_double(value);
    else if (full == "cf.grid_points") cf_grid_points = static_cast<int>(parse_double(value));
    else if (full == "cf.quadrature") cf_quadrature = value;
    else if (full == "sweep.axis") sweep_axis = value;
    else if (full == "sweep.grid") sweep_grid = parse_grid(value);
    else throw ConfigError("unknown config key: " + full);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            cfg.set(section + "." + key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ModelParams RunConfig::params() const {
    ModelParams p;
    if (kind == "ig") p.cumulant.kind = OuKind::inverse_gaussian;
    else if (kind == "gamma") p.cumulant.kind = OuKind::gamma;
    else throw ConfigError("model.kind must be ig or gamma, got '" + kind + "'");
    p.cumulant.a = a;
    p.cumulant.b = b;
    p.lambda = lambda;
    p.rho = rho;
    p.r = r;
    p.sigma0_sq = sigma0_sq;
    p.s0 = s0;
    return p;
}

McSettings RunConfig::mc_settings() const {
    McSettings s;
    s.paths = mc_paths;
    s.grid_steps_per_year = mc_grid_steps;
    s.seed = seed;
    s.antithetic = mc_antithetic;
    s.threads = threads;
    return s;
}

CfSettings RunConfig::cf_settings() const {
    CfSettings s;
    s.damping = cf_damping;
    s.u_max = cf_u_max;
    s.grid_points = cf_grid_points;
    if (cf_quadrature == "adaptive") s.quadrature = CfSettings::Quadrature::adaptive;
    else if (cf_quadrature == "fixed_simpson") s.quadrature = CfSettings::Quadrature::fixed_simpson;
    else throw ConfigError("cf.quadrature must be adaptive or fixed_simpson");
    return s;
}

void RunConfig::check() const {
    const Validation v = validate(params());
    if (!v.ok()) throw ConfigError("invalid parameters: " + v.message());
    if (strikes.empty()) throw ConfigError("empty strike grid");
    if (expiries.empty()) throw ConfigError("empty expiry grid");
    for (double k : strikes)
        if (!(k > 0.0)) throw ConfigError("strikes must be positive");
    for (double t : expiries)
        if (!(t > 0.0)) throw ConfigError("expiries must be positive");
    if (orders.empty()) throw ConfigError("empty order list");
    for (int n : orders)
        if (n < 2) throw ConfigError("orders must be >= 2");
    if (oracle != "cf" && oracle != "mc" && oracle != "both" && oracle != "none")
        throw ConfigError("oracle must be cf|mc|both|none");
    if (bound_method != "auto" && bound_method != "cauchy_schwarz" && bound_method != "raw_theorem"
        && bound_method != "rho_zero")
        throw ConfigError("bound_method must be auto|cauchy_schwarz|raw_theorem|rho_zero");
    if (mc_paths < 1) throw ConfigError("mc.paths must be >= 1");
    if (!(cf_damping > 0.0)) throw ConfigError("cf.damping must be positive");
    if (cf_grid_points < 16 || (cf_grid_points & (cf_grid_points - 1)) != 0)
        throw ConfigError("cf.grid_points must be a power of two (>= 16)");
}

} // namespace bns
