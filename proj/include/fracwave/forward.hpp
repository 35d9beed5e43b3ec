#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracwave/spectral.hpp"

namespace fracwave {

/// Fractional wave problem d_t^alpha u - kappa Laplacian u = 0 on the unit
/// square with u(0) = 0 and u_t(0) = a1, observed at time T.
struct ForwardConfig {
    double alpha = 1.5;
    double T = 1.0;
    int J_max = 32;
    double kappa = 1.0;  ///< diffusion coefficient; mode m decays with kappa lambda_m

    void validate() const;
};

/// T E_{alpha,2}(-kappa lambda_m T^alpha) for every mode in flat order.  Modes with
/// equal j^2 + k^2 share one evaluation.
Eigen::VectorXd propagator_weights(const ForwardConfig& cfg);

/// u(., T) = S a1, diagonal in the sine basis.
SpectralField apply_S(const SpectralField& a1, const ForwardConfig& cfg);

struct Inversion {
    SpectralField a1;
    std::vector<ModeIndex> floored;  ///< modes whose propagator fell below the floor
};

/// Modal division by the propagator.  Modes with |propagator| < floor are set
/// to zero and listed in `floored`.  A negative floor selects 1e-12 T.
Inversion invert_S_exact(const SpectralField& u_T, const ForwardConfig& cfg, double floor = -1.0);

/// c(t_m) at t_m = m tau for one spatial mode.
struct ModeTrajectory {
    double tau = 0.0;
    std::vector<double> values;
};

/// Time-steps d_t^alpha c + lambda c = 0, c(0) = 0, c'(0) = a1_coef with the
/// order-reduction L1 scheme: v = c' carries a Caputo derivative of order
/// alpha - 1, discretised by L1 with weights (j+1)^{2-alpha} - j^{2-alpha}
/// and scale 1/(Gamma(3-alpha) tau^{alpha-1}); c follows from v by the
/// trapezoidal rule and the equation is collocated at half steps.
/// Converges with order 3 - alpha.  Throws DivergenceError if |c| exceeds
/// 1e3 |a1_coef| T.
ModeTrajectory l1_mode_trajectory(double alpha, double lambda, double a1_coef, double T, double tau);

/// Final value c(T) of `l1_mode_trajectory`.
double l1_mode_solve(double alpha, double lambda, double a1_coef, double T, double tau);

/// S a1 synthesised on the g x g interior grid.
GridFunction forward_grid(const SpectralField& a1, const ForwardConfig& cfg, int g);

}  // namespace fracwave
