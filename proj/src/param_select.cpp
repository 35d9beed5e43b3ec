#include "fracwave/param_select.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "fracwave/errors.hpp"

namespace fracwave {

void ParamConfig::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw InvalidArgumentError("beta must lie in [0, 1]");
    if (d < 1) throw InvalidArgumentError("dimension d must be positive");
    if (n < 1) throw InvalidArgumentError("observation count n must be positive");
    if (!(tol_rho > 0.0)) throw InvalidArgumentError("tol_rho must be positive");
    if (max_iters < 1) throw InvalidArgumentError("max_iters must be positive");
    if (!(rho_min > 0.0)) throw InvalidArgumentError("rho_min must be positive");
}

ParamConfig default_param_config(double gamma, std::size_t n) {
    ParamConfig pc;
    pc.beta = gamma;
    pc.n = n;
    pc.tol_rho = gamma > 0.0 ? 1e-8 : 1e-6;
    return pc;
}

double rate_exponent(const ParamConfig& pc) {
    const double b = 1.0 + pc.beta;
    return 8.0 * b / (4.0 * b + pc.d);
}

double initial_rho(const ParamConfig& pc) {
    pc.validate();
    const double b = 1.0 + pc.beta;
    return std::pow(static_cast<double>(pc.n), -4.0 * b / (4.0 * b + pc.d));
}

double update_rho(double residual_n, double norm_X, const ParamConfig& pc) {
    pc.validate();
    if (!(norm_X > 0.0)) {
        throw ZeroNormError("reconstruction has zero norm; restart with a smaller initial rho");
    }
    const double base = residual_n / (std::sqrt(static_cast<double>(pc.n)) * norm_X);
    return std::max(pc.rho_min, std::pow(base, rate_exponent(pc)));
}

double oracle_rho(double sigma, double norm_X, const ParamConfig& pc) {
    pc.validate();
    if (!(sigma >= 0.0)) throw InvalidArgumentError("sigma must be non-negative");
    if (!(norm_X > 0.0)) throw ZeroNormError("oracle rule needs a positive norm of the truth");
    return std::pow(sigma / (std::sqrt(static_cast<double>(pc.n)) * norm_X), rate_exponent(pc));
}

ParamTrace iterate(const DesignSystem& ds, const Observations& obs, const ParamConfig& pc) {
    pc.validate();
    ParamTrace trace;
    int solves = 0;
    auto run = [&](double rho) {
        trace.final = solve(ds, obs, rho);
        ++solves;
        trace.iterations.push_back({solves, rho, trace.final.residual_n, trace.final.norm_X});
    };

    double rho = initial_rho(pc);
    run(rho);
    double next = update_rho(trace.final.residual_n, trace.final.norm_X, pc);
    while (true) {
        if (std::fabs(next - rho) <= pc.tol_rho) {
            trace.converged = true;
            if (solves < pc.max_iters) run(next);
            break;
        }
        if (solves >= pc.max_iters) break;
        rho = next;
        run(rho);
        next = update_rho(trace.final.residual_n, trace.final.norm_X, pc);
    }
    return trace;
}

void write_trace_csv(std::ostream& os, const ParamTrace& trace) {
    os << "k,rho,residual_n,norm_X\n" << std::setprecision(17);
    for (const auto& s : trace.iterations) {
        os << s.k << ',' << s.rho << ',' << s.residual_n << ',' << s.norm_X << '\n';
    }
}

}  // namespace fracwave
