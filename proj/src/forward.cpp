#include "fracwave/forward.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "fracwave/errors.hpp"
#include "fracwave/mittag_leffler.hpp"

namespace fracwave {

void ForwardConfig::validate() const {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        std::ostringstream os;
        os << "alpha must lie in (1, 2), got " << alpha;
        throw InvalidArgumentError(os.str());
    }
    if (!(T > 0.0)) throw InvalidArgumentError("terminal time T must be positive");
    if (J_max < 1) throw InvalidArgumentError("J_max must be positive");
    if (!(kappa > 0.0)) throw InvalidArgumentError("kappa must be positive");
}

Eigen::VectorXd propagator_weights(const ForwardConfig& cfg) {
    cfg.validate();
    const int J = cfg.J_max;
    Eigen::VectorXd w(static_cast<Eigen::Index>(J) * J);
    std::unordered_map<int, double> by_radius;
    for (int k = 1; k <= J; ++k) {
        for (int j = 1; j <= J; ++j) {
            const int r2 = j * j + k * k;
            auto it = by_radius.find(r2);
            if (it == by_radius.end()) {
                it = by_radius.emplace(r2, propagator(cfg.alpha, cfg.kappa * eigenvalue({j, k}), cfg.T)).first;
            }
            w(SpectralField::flat_index(J, {j, k})) = it->second;
        }
    }
    return w;
}

SpectralField apply_S(const SpectralField& a1, const ForwardConfig& cfg) {
    if (a1.J() != cfg.J_max) throw InvalidArgumentError("field size does not match J_max");
    const Eigen::VectorXd w = propagator_weights(cfg);
    return SpectralField(a1.J(), w.cwiseProduct(a1.coeffs()));
}

Inversion invert_S_exact(const SpectralField& u_T, const ForwardConfig& cfg, double floor) {
    if (u_T.J() != cfg.J_max) throw InvalidArgumentError("field size does not match J_max");
    if (floor < 0.0) floor = 1e-12 * cfg.T;
    const Eigen::VectorXd w = propagator_weights(cfg);
    Inversion out{SpectralField(u_T.J()), {}};
    for (Eigen::Index m = 0; m < w.size(); ++m) {
        if (std::fabs(w(m)) < floor) {
            out.floored.push_back(SpectralField::mode_of(u_T.J(), static_cast<int>(m)));
            continue;
        }
        out.a1.coeffs()(m) = u_T.coeffs()(m) / w(m);
    }
    return out;
}

ModeTrajectory l1_mode_trajectory(double alpha, double lambda, double a1_coef, double T, double tau) {
    if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgumentError("alpha must lie in (1, 2)");
    if (!(tau > 0.0) || !(T > 0.0)) throw InvalidArgumentError("tau and T must be positive");
    if (!(lambda >= 0.0)) throw InvalidArgumentError("lambda must be non-negative");
    const long steps = std::lround(T / tau);
    if (steps < 1 || std::fabs(steps * tau - T) > 1e-9 * T) {
        throw InvalidArgumentError("tau must divide T");
    }

    // b_j = (j+1)^{2-alpha} - j^{2-alpha}
    std::vector<double> b(static_cast<std::size_t>(steps));
    for (long j = 0; j < steps; ++j) {
        b[static_cast<std::size_t>(j)] = std::pow(j + 1.0, 2.0 - alpha) - std::pow(static_cast<double>(j), 2.0 - alpha);
    }
    const double scale = std::pow(tau, 1.0 - alpha) / std::tgamma(3.0 - alpha);
    const double limit = 1e3 * std::fabs(a1_coef) * T;

    ModeTrajectory traj;
    traj.tau = tau;
    traj.values.assign(static_cast<std::size_t>(steps) + 1, 0.0);
    // v[k] approximates c' on (t_{k-1}, t_k); v[0] is the initial velocity
    std::vector<double> v(static_cast<std::size_t>(steps) + 1, 0.0);
    v[0] = a1_coef;

    for (long n = 1; n <= steps; ++n) {
        double history = 0.0;
        for (long k = 1; k < n; ++k) {
            history += b[static_cast<std::size_t>(n - k)] *
                       (v[static_cast<std::size_t>(k)] - v[static_cast<std::size_t>(k - 1)]);
        }
        const double c_prev = traj.values[static_cast<std::size_t>(n - 1)];
        const double lhs = scale * b[0] + 0.5 * lambda * tau;
        const double rhs = scale * (b[0] * v[static_cast<std::size_t>(n - 1)] - history) - lambda * c_prev;
        v[static_cast<std::size_t>(n)] = rhs / lhs;
        const double c = c_prev + tau * v[static_cast<std::size_t>(n)];
        if (!std::isfinite(c) || (limit > 0.0 && std::fabs(c) > limit)) {
            std::ostringstream os;
            os << "L1 time stepping diverged at step " << n << " (alpha=" << alpha
               << ", lambda=" << lambda << ", tau=" << tau << ")";
            throw DivergenceError(os.str());
        }
        traj.values[static_cast<std::size_t>(n)] = c;
    }
    return traj;
}

double l1_mode_solve(double alpha, double lambda, double a1_coef, double T, double tau) {
    return l1_mode_trajectory(alpha, lambda, a1_coef, T, tau).values.back();
}

GridFunction forward_grid(const SpectralField& a1, const ForwardConfig& cfg, int g) {
    return synthesize_grid(apply_S(a1, cfg), g);
}

}  // namespace fracwave
