#include "bns/commands.hpp"

#include "bns/bounds.hpp"
#include "bns/cf_pricer.hpp"
#include "bns/common.hpp"
#include "bns/mc_pricer.hpp"
#include "bns/moments.hpp"
#include "bns/taylor.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace bns {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

BoundMethod auto_method(const RunConfig& cfg) {
    if (cfg.bound_method == "cauchy_schwarz") return BoundMethod::cauchy_schwarz;
    if (cfg.bound_method == "raw_theorem") return BoundMethod::raw_theorem;
    if (cfg.bound_method == "rho_zero") return BoundMethod::rho_zero;
    if (cfg.rho == 0.0) return BoundMethod::rho_zero;
    return cfg.rho < 0.0 ? BoundMethod::cauchy_schwarz : BoundMethod::raw_theorem;
}

const char* cf_status(const CfPrice& c) {
    if (!c.quadrature_converged) return "no_convergence";
    if (c.used_numeric_fallback) return "numeric_fallback";
    if (c.branch_unwound) return "branch_unwound";
    return "ok";
}

// Orders whose moments exist for these parameters; drops the rest with a
// warning (rho > 0 caps the usable power at the largest l with
// l rho < kappa_hat).
std::vector<int> usable_orders(const RunConfig& cfg) {
    const Validation v = validate(cfg.params());
    std::vector<int> usable;
    for (int n : cfg.orders) {
        if (n <= v.max_power) usable.push_back(n);
        else
            std::fprintf(stderr,
                         "warning: order %d capped (moments need power %d but only %ld "
                         "admissible for rho > 0)\n",
                         n, n, v.max_power);
    }
    if (usable.empty()) throw ConfigError("no requested order is admissible for these parameters");
    return usable;
}

} // namespace

std::string cmd_price(const RunConfig& cfg) {
    cfg.check();
    const ModelParams p = cfg.params();
    const std::vector<int> orders = usable_orders(cfg);
    const bool use_cf = cfg.oracle == "cf" || cfg.oracle == "both";
    const bool use_mc = cfg.oracle == "mc" || cfg.oracle == "both";

    std::string header = "strike,expiry,order,price,base_bs,sum_corrections,bound_total";
    if (use_cf) header += ",cf_price";
    if (use_mc) header += ",mc_price,mc_se";

    struct Point {
        double strike, expiry;
    };
    std::vector<Point> points;
    for (double t : cfg.expiries)
        for (double k : cfg.strikes) points.push_back({k, t});

    std::vector<std::string> rows(points.size());
    const int nthreads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::size_t i = 0; i < points.size(); ++i) {
        const OptionSpec opt{points[i].strike, points[i].expiry};
        std::string block;
        CfPrice cf{};
        McPrice mc{};
        if (use_cf) cf = cf_put_price(p, opt, cfg.cf_settings());
        if (use_mc) mc = mc_put_price(p, opt, cfg.mc_settings());
        for (int order : orders) {
            const PriceResult res = taylor_price(p, opt, order);
            std::string bound_text;
            if (p.rho <= 0.0) {
                const BoundReport rep =
                    remainder_bound(order, p, opt, auto_method(cfg), cfg.threads);
                bound_text = g17(rep.total);
            }
            block += g17(opt.strike) + "," + g17(opt.expiry) + "," + std::to_string(order) + ","
                     + g17(res.value) + "," + g17(res.base_bs) + ","
                     + g17(res.value - res.base_bs) + "," + bound_text;
            if (use_cf) block += "," + g17(cf.price);
            if (use_mc) block += "," + g17(mc.price) + "," + g17(mc.std_error);
            block += "\n";
        }
        rows[i] = block;
    }
    std::string out = header + "\n";
    for (const auto& r : rows) out += r;
    return out;
}

std::string cmd_sweep(const RunConfig& cfg, const std::string& axis) {
    cfg.check();
    if (axis != "strike" && axis != "expiry" && axis != "lambda" && axis != "b"
        && axis != "order")
        throw ConfigError("sweep axis must be strike|expiry|lambda|b|order");

    std::vector<double> grid = cfg.sweep_grid;
    if (grid.empty()) {
        if (axis == "strike") grid = cfg.strikes;
        else if (axis == "expiry") grid = cfg.expiries;
        else if (axis == "order") {
            for (int n : cfg.orders) grid.push_back(n);
        } else {
            throw ConfigError("sweep over " + axis + " needs sweep.grid");
        }
    }
    if (grid.empty()) throw ConfigError("empty sweep grid");

    const std::vector<int> orders =
        axis == "order" ? std::vector<int>{0} : usable_orders(cfg);
    struct Cell {
        double value = 0.0, cf = 0.0, err = 0.0;
        std::string status;
    };
    std::vector<Cell> cells(grid.size() * orders.size());

    const int nthreads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::size_t g = 0; g < grid.size(); ++g) {
        RunConfig local = cfg;
        OptionSpec opt{cfg.strikes.front(), cfg.expiries.front()};
        int order_override = 0;
        if (axis == "strike") opt.strike = grid[g];
        else if (axis == "expiry") opt.expiry = grid[g];
        else if (axis == "lambda") local.lambda = grid[g];
        else if (axis == "b") local.b = grid[g];
        else order_override = static_cast<int>(grid[g]);
        const ModelParams p = local.params();
        const CfPrice cf = cf_put_price(p, opt, cfg.cf_settings());
        for (std::size_t oi = 0; oi < orders.size(); ++oi) {
            const int order = order_override ? order_override : orders[oi];
            Cell& cell = cells[g * orders.size() + oi];
            cell.value = taylor_price(p, opt, order).value;
            cell.cf = cf.price;
            cell.err = std::abs(cell.value - cf.price);
            cell.status = cf_status(cf);
        }
    }

    // least-squares slope of log10 err against log10 b, per order
    std::vector<double> slopes(orders.size(), 0.0);
    if (axis == "b") {
        for (std::size_t oi = 0; oi < orders.size(); ++oi) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            const double n = static_cast<double>(grid.size());
            for (std::size_t g = 0; g < grid.size(); ++g) {
                const double x = std::log10(grid[g]);
                const double y = std::log10(std::max(cells[g * orders.size() + oi].err, 1e-300));
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
            }
            slopes[oi] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
    }

    std::string out = "axis,axis_value,order,price,cf_price,abs_error,log10_error,cf_status";
    if (axis == "b") out += ",fit_slope";
    out += "\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (std::size_t oi = 0; oi < orders.size(); ++oi) {
            const Cell& cell = cells[g * orders.size() + oi];
            const int order = axis == "order" ? static_cast<int>(grid[g]) : orders[oi];
            out += axis + "," + g17(grid[g]) + "," + std::to_string(order) + "," + g17(cell.value)
                   + "," + g17(cell.cf) + "," + g17(cell.err) + ","
                   + g17(std::log10(std::max(cell.err, 1e-300))) + "," + cell.status;
            if (axis == "b") out += "," + g17(slopes[oi]);
            out += "\n";
        }
    return out;
}

std::string cmd_bound(const RunConfig& cfg) {
    cfg.check();
    const ModelParams p = cfg.params();
    const std::vector<int> orders = usable_orders(cfg);
    const BoundMethod method = auto_method(cfg);

    struct Point {
        double strike, expiry;
    };
    std::vector<Point> points;
    for (double t : cfg.expiries)
        for (double k : cfg.strikes) points.push_back({k, t});

    std::vector<std::string> blocks(points.size());
    const int nthreads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
    for (std::size_t i = 0; i < points.size(); ++i) {
        const OptionSpec opt{points[i].strike, points[i].expiry};
        const CfPrice cf = cf_put_price(p, opt, cfg.cf_settings());
        std::string block;
        for (int order : orders) {
            const BoundReport rep = remainder_bound(order, p, opt, method, cfg.threads);
            const double realized = std::abs(taylor_price(p, opt, order).value - cf.price);
            const std::string prefix =
                g17(opt.strike) + "," + g17(opt.expiry) + "," + std::to_string(order) + ",";
            const std::string suffix = "," + g17(realized) + ","
                                       + (rep.t_unreliable ? "bound_unreliable" : "ok");
            for (const auto& row : rep.csv_rows()) block += prefix + row + suffix + "\n";
        }
        blocks[i] = block;
    }
    std::string out = "strike,expiry,order,xi_x,xi_y,method,sup_bound,moment_factor,"
                      "contribution,bound_total,realized_error_cf,flag\n";
    for (const auto& b : blocks) out += b;
    return out;
}

bool run_selftest(std::string& report) {
    std::ostringstream os;
    bool ok = true;
    const auto check = [&](const char* name, bool pass) {
        os << (pass ? "PASS" : "FAIL") << "  " << name << "\n";
        ok = ok && pass;
    };

    ModelParams p;
    p.cumulant = {OuKind::inverse_gaussian, 1.0, 10.0};
    p.lambda = 1.0;
    p.rho = -0.3;
    p.r = 0.05;
    p.sigma0_sq = 0.5;
    p.s0 = 100.0;
    const OptionSpec opt{100.0, 1.0};

    check("kappa(0) = 0", p.cumulant.kappa(0.0) == 0.0);
    MomentTable table(p, opt.expiry);
    check("E[P_T] = 1 via recursion",
          std::abs(table.mixed_power_moment(1, 0) - 1.0) < 1e-14);
    check("second order matches generic order 2",
          std::abs(second_order_price(p, opt).value - taylor_price(p, opt, 2).value) < 1e-10);
    const auto cf0 = cf_log_price({0.0, 0.0}, p, 1.0);
    check("cf(0) = 1", std::abs(cf0 - std::complex<double>(1.0, 0.0)) < 1e-12);
    const auto mart = cf_log_price({0.0, -1.0}, p, 1.0);
    check("cf martingale identity", std::abs(mart.real() - p.s0 * std::exp(p.r)) < 1e-8 * p.s0);
    const CfPrice put = cf_put_price(p, opt);
    const CfPrice call = cf_call_price(p, opt);
    check("put-call parity",
          std::abs(call.price - put.price - (p.s0 - opt.strike * std::exp(-p.r))) < 1e-7);
    McSettings mcs;
    mcs.paths = 20000;
    const McPrice mc1 = mc_put_price(p, opt, mcs);
    const McPrice mc2 = mc_put_price(p, opt, mcs);
    check("mc determinism", mc1.price == mc2.price);
    check("mc vs cf within 4 se", std::abs(mc1.price - put.price) < 4.0 * mc1.std_error + 0.05);

    report = os.str();
    return ok;
}

} // namespace bns
