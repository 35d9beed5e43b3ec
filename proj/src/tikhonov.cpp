#include "fracwave/tikhonov.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracwave/errors.hpp"

namespace fracwave {

DesignSystem assemble(const PointSet& ps, const ForwardConfig& cfg, double gamma) {
    cfg.validate();
    if (!(gamma >= 0.0)) throw InvalidArgumentError("regularisation exponent gamma must be >= 0");
    const int J = cfg.J_max;
    const auto n = static_cast<Eigen::Index>(ps.size());
    const Eigen::Index N = static_cast<Eigen::Index>(J) * J;
    if (n < N) {
        std::ostringstream os;
        os << "need at least as many observation points (" << n << ") as modes (" << N << ")";
        throw InvalidArgumentError(os.str());
    }

    DesignSystem ds;
    ds.gamma = gamma;
    ds.cfg = cfg;
    ds.pointset = ps;
    ds.propagators = propagator_weights(cfg);
    ds.reg_weights = gamma_weights(J, gamma);
    for (Eigen::Index m = 0; m < N; ++m) {
        if (std::fabs(ds.propagators(m)) < 1e-12 * cfg.T) {
            ds.floored.push_back(SpectralField::mode_of(J, static_cast<int>(m)));
        }
    }

    ds.G.resize(n, N);
    Eigen::VectorXd sx(J), sy(J);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Point p = ps.points[static_cast<std::size_t>(i)];
        for (int j = 1; j <= J; ++j) {
            sx(j - 1) = sinpi(j * p.x);
            sy(j - 1) = sinpi(j * p.y);
        }
        for (int k = 0; k < J; ++k) {
            for (int j = 0; j < J; ++j) {
                const Eigen::Index m = j + static_cast<Eigen::Index>(k) * J;
                ds.G(i, m) = 2.0 * ds.propagators(m) * sx(j) * sy(k);
            }
        }
    }

    ds.normal = Eigen::MatrixXd::Zero(N, N);
    ds.normal.selfadjointView<Eigen::Lower>().rankUpdate(ds.G.transpose(), 1.0 / static_cast<double>(n));
    ds.normal.triangularView<Eigen::StrictlyUpper>() = ds.normal.transpose();
    return ds;
}

double tikhonov_objective(const DesignSystem& ds, const Observations& obs,
                          const Eigen::VectorXd& c, double rho) {
    const Eigen::Map<const Eigen::VectorXd> m(obs.m.data(), static_cast<Eigen::Index>(obs.m.size()));
    const Eigen::VectorXd r = ds.G * c - m;
    return r.squaredNorm() / static_cast<double>(r.size()) +
           rho * (ds.reg_weights.array() * c.array().square()).sum();
}

SolveResult solve(const DesignSystem& ds, const Observations& obs, double rho) {
    if (!(rho > 0.0)) throw InvalidArgumentError("regularisation parameter rho must be positive");
    if (static_cast<Eigen::Index>(obs.m.size()) != ds.n()) {
        throw InvalidArgumentError("observation count does not match the design system");
    }
    const auto n = static_cast<double>(ds.n());
    const Eigen::Map<const Eigen::VectorXd> m(obs.m.data(), ds.n());
    const Eigen::VectorXd rhs = ds.G.transpose() * m / n;

    Eigen::MatrixXd A = ds.normal;
    A.diagonal() += rho * ds.reg_weights;
    const Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "Cholesky factorisation failed for rho=" << rho;
        throw IllPosedSystemError(os.str());
    }
    Eigen::VectorXd c = llt.solve(rhs);
    c += llt.solve(rhs - A * c);

    SolveResult res;
    res.rho = rho;
    res.a_rec = SpectralField(ds.cfg.J_max, c);
    const Eigen::VectorXd fit = ds.G * c;
    res.residual_n = std::sqrt((fit - m).squaredNorm() / n);
    res.norm_X = std::sqrt((ds.reg_weights.array() * c.array().square()).sum());
    res.floored = ds.floored;

    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;
    for (int probe = 0; probe < 5; ++probe) {
        Eigen::VectorXd v(c.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
        const Eigen::VectorXd Gv = ds.G * v;
        const double penalty = rho * (ds.reg_weights.array() * c.array() * v.array()).sum();
        const double misfit = fit.dot(Gv) / n;
        const double data = m.dot(Gv) / n;
        const double scale = std::fabs(penalty) + std::fabs(misfit) + std::fabs(data);
        if (scale > 0.0) {
            res.variational_defect =
                std::max(res.variational_defect, std::fabs(penalty + misfit - data) / scale);
        }
    }
    if (res.variational_defect > 1e-8) {
        std::ostringstream os;
        os << "variational equation violated (relative defect " << res.variational_defect
           << ") at rho=" << rho;
        throw IllPosedSystemError(os.str());
    }
    return res;
}

ErrorNorms errors(const SpectralField& a_rec, const SpectralField& a_true_ref) {
    if (a_true_ref.J() < a_rec.J()) {
        throw InvalidArgumentError("reference field must have at least as many modes as the reconstruction");
    }
    const SpectralField diff = a_rec.resized(a_true_ref.J()) - a_true_ref;
    ErrorNorms e;
    e.err_L2 = norm_gamma(diff, 0.0) / norm_gamma(a_true_ref, 0.0);
    e.err_Hm1 = norm_gamma(diff, -0.5) / norm_gamma(a_true_ref, -0.5);
    return e;
}

std::vector<std::pair<int, double>> eigen_growth_diagnostic(const DesignSystem& ds, int k_max) {
    if (k_max < 1 || k_max > ds.N()) throw InvalidArgumentError("k_max must lie in [1, N]");
    const Eigen::LLT<Eigen::MatrixXd> check(ds.normal);
    if (check.info() != Eigen::Success) {
        throw RankDeficiencyError("G^T G / n is singular: too few or duplicated observation points");
    }
    const Eigen::MatrixXd W = ds.reg_weights.asDiagonal();
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(W, ds.normal,
                                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw RankDeficiencyError("generalised eigenproblem did not converge");
    }
    const Eigen::VectorXd& mu = solver.eigenvalues();
    std::vector<std::pair<int, double>> out;
    for (int k = 0; k < k_max; ++k) out.emplace_back(k + 1, mu(k));
    return out;
}

double loglog_slope(const std::vector<std::pair<int, double>>& mu) {
    if (mu.size() < 2) throw InvalidArgumentError("slope fit needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [k, v] : mu) {
        const double x = std::log(static_cast<double>(k));
        const double y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(mu.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fracwave
