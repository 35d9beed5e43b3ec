#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "fracwave/tikhonov.hpp"

namespace fracwave {

/// Constants of the regularisation-parameter rule.  `beta` is the smoothness
/// index of the penalty space (0 for L2, 1/2 for H1 regularisation).
struct ParamConfig {
    double beta = 0.0;
    int d = 2;
    std::size_t n = 0;
    double tol_rho = 1e-6;
    int max_iters = 50;
    double rho_min = 1e-14;

    void validate() const;
};

/// Default tolerances for a penalty exponent: 1e-6 for L2, 1e-8 for H1.
ParamConfig default_param_config(double gamma, std::size_t n);

/// 8 (1 + beta) / (4 (1 + beta) + d)
double rate_exponent(const ParamConfig& pc);

/// n^{-4(1+beta)/(4(1+beta)+d)}
double initial_rho(const ParamConfig& pc);

/// (n^{-1/2} residual / norm_X)^{rate_exponent}, clamped below at rho_min.
/// Throws ZeroNormError when norm_X == 0.
double update_rho(double residual_n, double norm_X, const ParamConfig& pc);

/// The same rule with the noise level in place of the residual and implied
/// constant 1: (sigma n^{-1/2} / norm_X)^{rate_exponent}.
double oracle_rho(double sigma, double norm_X, const ParamConfig& pc);

struct ParamStep {
    int k = 0;
    double rho = 0.0;
    double residual_n = 0.0;
    double norm_X = 0.0;
};

struct ParamTrace {
    std::vector<ParamStep> iterations;
    bool converged = false;
    SolveResult final;
};

/// Fixed-point iteration rho_{k+1} = update_rho(solve(rho_k)) from
/// initial_rho until |rho_{k+1} - rho_k| <= tol_rho.  The reported solution
/// is re-solved at the accepted rho, so the trace always ends with the
/// (rho, a) pair that is returned.  At most max_iters solves; when the budget
/// runs out the trace is returned with converged = false.
ParamTrace iterate(const DesignSystem& ds, const Observations& obs, const ParamConfig& pc);

/// CSV `k,rho,residual_n,norm_X`.
void write_trace_csv(std::ostream& os, const ParamTrace& trace);

}  // namespace fracwave
