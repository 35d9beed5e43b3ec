#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "fracwave/forward.hpp"
#include "fracwave/observe.hpp"
#include "fracwave/spectral.hpp"

namespace fracwave {

/// Scattered-point Tikhonov problem
///   min_a ||(S a)(x) - m||_n^2 + rho ||a||_gamma^2
/// restricted to the J_max x J_max sine modes.
struct DesignSystem {
    /// G(i, m) = propagator_m * phi_m(x_i), columns in flat mode order.
    Eigen::MatrixXd G;
    /// G^T G / n
    Eigen::MatrixXd normal;
    /// lambda_m^{2 gamma}
    Eigen::VectorXd reg_weights;
    Eigen::VectorXd propagators;
    double gamma = 0.0;
    ForwardConfig cfg;
    PointSet pointset;
    /// Modes whose propagator is below 1e-12 T (a real zero of E_{alpha,2}).
    /// They keep their penalty weight, so rho drives them to zero.
    std::vector<ModeIndex> floored;

    Eigen::Index n() const { return G.rows(); }
    Eigen::Index N() const { return G.cols(); }
};

DesignSystem assemble(const PointSet& ps, const ForwardConfig& cfg, double gamma);

struct SolveResult {
    SpectralField a_rec;
    double rho = 0.0;
    double residual_n = 0.0;  ///< ||S a_rec - m||_n
    double norm_X = 0.0;      ///< ||a_rec||_gamma
    /// Largest relative defect of the variational equation
    /// rho (a, v)_X + (S a, S v)_n = (m, S v)_n over the random probes v.
    double variational_defect = 0.0;
    std::vector<ModeIndex> floored;
};

/// Solves (G^T G / n + rho diag(w)) c = G^T m / n by Cholesky with one step of
/// iterative refinement, then checks the variational equation on five random
/// directions.  Throws IllPosedSystemError if the factorisation fails or the
/// identity is violated beyond 1e-8 relative.
SolveResult solve(const DesignSystem& ds, const Observations& obs, double rho);

/// Tikhonov functional ||G c - m||_n^2 + rho sum w c^2.
double tikhonov_objective(const DesignSystem& ds, const Observations& obs,
                          const Eigen::VectorXd& c, double rho);

struct ErrorNorms {
    double err_L2 = 0.0;
    double err_Hm1 = 0.0;
};

/// Relative L2 (gamma = 0) and H^{-1} (gamma = -1/2) errors against a
/// reference field with at least as many modes; a_rec is zero padded.
ErrorNorms errors(const SpectralField& a_rec, const SpectralField& a_true_ref);

/// Smallest k_max eigenvalues mu of diag(w) c = mu (G^T G / n) c, ascending,
/// as (k, mu_k) with k starting at 1.  Throws RankDeficiencyError when
/// G^T G / n is singular.
std::vector<std::pair<int, double>> eigen_growth_diagnostic(const DesignSystem& ds, int k_max);

/// Least-squares slope of log mu_k against log k.
double loglog_slope(const std::vector<std::pair<int, double>>& mu);

}  // namespace fracwave
