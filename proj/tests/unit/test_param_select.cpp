#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracwave/errors.hpp"
#include "fracwave/experiment.hpp"
#include "fracwave/param_select.hpp"

using namespace fracwave;
constexpr double pi = std::numbers::pi;

namespace {

ParamConfig pc_for(double beta, std::size_t n) {
    ParamConfig pc;
    pc.beta = beta;
    pc.n = n;
    return pc;
}

// ||grad a||_{L2} for a = c x^p (x - 1) sin(q pi y), separated in x and y
double separable_gradient_norm(double c, double p, int q) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double x) { return c * std::pow(x, p) * (x - 1); };
    auto df = [&](double x) { return c * ((p + 1) * std::pow(x, p) - p * std::pow(x, p - 1)); };
    const double f2 = ts.integrate([&](double x) { return f(x) * f(x); }, 0.0, 1.0);
    const double df2 = ts.integrate([&](double x) { return df(x) * df(x); }, 0.0, 1.0);
    // int sin^2 = int cos^2 = 1/2 over one period multiple
    return std::sqrt(0.5 * df2 + 0.5 * (q * pi) * (q * pi) * f2);
}

}  // namespace

TEST_CASE("initial rho") {
    CHECK(initial_rho(pc_for(0.0, 6241)) == doctest::Approx(std::pow(6241.0, -2.0 / 3)).epsilon(1e-14));
    CHECK(initial_rho(pc_for(0.0, 6241)) == doctest::Approx(2.95e-3).epsilon(0.01));
    CHECK(initial_rho(pc_for(0.5, 6241)) == doctest::Approx(1.43e-3).epsilon(0.01));
    CHECK(initial_rho(pc_for(0.5, 1)) == 1.0);
    CHECK_THROWS_AS(initial_rho(pc_for(1.5, 10)), InvalidArgumentError);
    CHECK_THROWS_AS(initial_rho(pc_for(0.0, 0)), InvalidArgumentError);
}

TEST_CASE("update rule") {
    CHECK(update_rho(0.4, 1.1156, pc_for(0.0, 6241)) == doctest::Approx(7.5e-4).epsilon(0.01));
    CHECK(update_rho(0.2, 4.567, pc_for(0.5, 6241)) == doctest::Approx(1.31e-5).epsilon(0.01));
    const ParamConfig pc = pc_for(0.0, 6241);
    CHECK(update_rho(0.0, 1.0, pc) == pc.rho_min);
    CHECK_THROWS_AS(update_rho(0.1, 0.0, pc), ZeroNormError);
}

TEST_CASE("exponent algebra") {
    for (double b : {0.0, 0.25, 0.5, 1.0}) {
        const ParamConfig pc = pc_for(b, 100);
        CHECK(rate_exponent(pc) == doctest::Approx(1.0 / (0.5 + (2.0 / 8) / (1 + b))).epsilon(1e-15));
    }
}

TEST_CASE("oracle rule") {
    SUBCASE("indicator example, L2") {
        // ||1_{[1/4,3/4]^2}||_{L2} = sqrt(area)
        const double r = oracle_rho(0.01, 0.5, pc_for(0.0, 6241));
        CHECK(r == doctest::Approx(1.6e-5).epsilon(0.02));
        CHECK(r == doctest::Approx(1.57e-5).epsilon(0.05));
    }
    SUBCASE("second example, H1") {
        const double grad = separable_gradient_norm(7.0, 0.75, 2);
        CHECK(norm_gamma(truth_field("ex2", 128), 0.5) == doctest::Approx(grad).epsilon(0.01));
        CHECK(oracle_rho(0.4, grad, pc_for(0.5, 6241)) == doctest::Approx(1.60e-5).epsilon(0.03));
    }
    SUBCASE("first example, H1") {
        const double grad = separable_gradient_norm(8.0, 1.01, 1);
        CHECK(grad == doctest::Approx(4.567).epsilon(1e-3));
        CHECK(oracle_rho(0.2, grad, pc_for(0.5, 6241)) == doctest::Approx(1.31e-5).epsilon(0.01));
    }
    CHECK(oracle_rho(0.0, 1.0, pc_for(0.0, 100)) == 0.0);
    CHECK(oracle_rho(1e-8, 1.0, pc_for(0.0, 100)) < oracle_rho(1e-4, 1.0, pc_for(0.0, 100)));
    CHECK_THROWS_AS(oracle_rho(0.1, 0.0, pc_for(0.0, 100)), ZeroNormError);
}

TEST_CASE("defaults follow the regularisation space") {
    CHECK(default_param_config(0.0, 10).tol_rho == 1e-6);
    CHECK(default_param_config(0.5, 10).tol_rho == 1e-8);
    CHECK(default_param_config(0.5, 10).beta == 0.5);
}

TEST_CASE("fixed-point iteration on a small problem") {
    const ForwardConfig cfg{1.5, 1.0, 6, kReferenceKappa};
    const PointSet ps = uniform_grid_points(20);
    const SpectralField truth = truth_field("ex1", 6);
    const DesignSystem ds = assemble(ps, cfg, 0.5);
    const ParamConfig pc = default_param_config(0.5, ps.size());

    SUBCASE("noisy data converges to a consistent fixed point") {
        const Observations obs = sample_observations(truth, cfg, ps, 0.05, 3);
        const ParamTrace tr = iterate(ds, obs, pc);
        REQUIRE(tr.converged);
        CHECK(static_cast<int>(tr.iterations.size()) <= pc.max_iters);
        CHECK(tr.iterations.front().rho == initial_rho(pc));
        CHECK(tr.iterations.back().rho == tr.final.rho);
        CHECK(std::fabs(update_rho(tr.final.residual_n, tr.final.norm_X, pc) - tr.final.rho) <= pc.tol_rho);
        for (std::size_t i = 0; i < tr.iterations.size(); ++i) CHECK(tr.iterations[i].k == static_cast<int>(i + 1));

        std::ostringstream os;
        write_trace_csv(os, tr);
        std::istringstream is(os.str());
        std::string line;
        std::getline(is, line);
        CHECK(line == "k,rho,residual_n,norm_X");
        int rows = 0;
        while (std::getline(is, line)) ++rows;
        CHECK(rows == static_cast<int>(tr.iterations.size()));
    }
    SUBCASE("noise-free data runs to the rho floor") {
        const Observations obs = sample_observations(truth, cfg, ps, 0.0, 0);
        ParamConfig fine = pc;
        fine.tol_rho = 1e-15;
        const ParamTrace tr = iterate(ds, obs, fine);
        CHECK(tr.converged);
        CHECK(tr.final.rho == fine.rho_min);
        CHECK(tr.final.residual_n <= 1e-6);
    }
    SUBCASE("budget exhaustion is reported") {
        const Observations obs = sample_observations(truth, cfg, ps, 0.05, 3);
        ParamConfig tight = pc;
        tight.max_iters = 1;
        tight.tol_rho = 1e-30;
        const ParamTrace tr = iterate(ds, obs, tight);
        CHECK_FALSE(tr.converged);
        CHECK(tr.iterations.size() == 1);
    }
}

TEST_CASE("second example: converged rho near the reported values") {
    struct Case {
        double alpha;
        double gamma;
        double reported;
    };
    for (const Case c : {Case{1.2, 0.0, 6.8804e-4}, Case{1.8, 0.5, 1.1138e-5}}) {
        ExperimentSpec spec = builtin_example("ex2");
        spec.alpha = c.alpha;
        spec.gamma = c.gamma;
        const SeedOutcome s = run_seed(prepare_experiment(spec), 1);
        INFO("alpha=" << c.alpha << " gamma=" << c.gamma << " rho=" << s.result.rho);
        REQUIRE(s.trace.has_value());
        CHECK(s.trace->converged);
        CHECK(s.result.rho >= c.reported / 3);
        CHECK(s.result.rho <= c.reported * 3);
        CHECK(s.result.residual_n >= 0.9 * spec.sigma);
        CHECK(s.result.residual_n <= 1.1 * spec.sigma);
    }
}
