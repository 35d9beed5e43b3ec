#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracwave/experiment.hpp"
#include "fracwave/spectral.hpp"
#include "oracle.hpp"

using namespace fracwave;
constexpr double pi = std::numbers::pi;

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue({1, 1}) == doctest::Approx(2 * pi * pi));
    CHECK(eigenvalue({1, 1}) == doctest::Approx(19.7392).epsilon(1e-5));
    CHECK(eigenvalue({3, 4}) == doctest::Approx(25 * pi * pi));

    // Weyl growth lambda_(k) ~ k in two dimensions
    const auto lam = sorted_eigenvalues(64);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int k = 50; k <= 1000; ++k, ++m) {
        const double x = std::log(k), y = std::log(lam[k - 1]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("basis functions") {
    CHECK(basis_eval({1, 1}, {0.5, 0.5}) == doctest::Approx(2.0));
    CHECK(basis_eval({2, 1}, {0.5, 0.25}) == 0.0);
    auto inner = [](ModeIndex a, ModeIndex b) {
        return oracle::integrate_2d([&](double x, double y) { return basis_eval(a, {x, y}) * basis_eval(b, {x, y}); },
                                    2);
    };
    CHECK(std::fabs(inner({1, 1}, {2, 1})) <= 1e-10);
    CHECK(inner({1, 1}, {1, 1}) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(inner({3, 5}, {3, 5}) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre rules") {
    const Quadrature q = gauss_legendre(10, 0.0, 2.0);
    double s = 0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], 19);
    CHECK(s == doctest::Approx(std::pow(2.0, 20) / 20).epsilon(1e-13));

    const double breaks[] = {0.25, 0.75};
    const Quadrature c = composite_rule(16, 8, breaks);
    double total = 0, jump = 0;
    for (std::size_t i = 0; i < c.nodes.size(); ++i) {
        total += c.weights[i];
        jump += c.nodes[i] > 0.25 && c.nodes[i] < 0.75 ? c.weights[i] : 0.0;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(jump == doctest::Approx(0.5).epsilon(1e-14));
    // integrable endpoint singularity
    double sing = 0;
    const Quadrature e = composite_rule(64, 20);
    for (std::size_t i = 0; i < e.nodes.size(); ++i) sing += e.weights[i] * std::pow(e.nodes[i], -0.5);
    CHECK(sing == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("projection") {
    SUBCASE("a single basis function") {
        const SpectralField f = project([](double x, double y) { return basis_eval({2, 3}, {x, y}); }, 8, 64);
        for (int k = 1; k <= 8; ++k) {
            for (int j = 1; j <= 8; ++j) {
                const double expect = (j == 2 && k == 3) ? 1.0 : 0.0;
                CHECK(f.coeff(j, k) == doctest::Approx(expect).epsilon(1e-10).scale(1.0));
            }
        }
    }
    SUBCASE("tensor structure of the first reference problem") {
        const SpectralField f = project([](double x, double y) { return 8 * std::pow(x, 1.01) * (x - 1) * std::sin(pi * y); },
                                        16);
        for (int k = 2; k <= 16; ++k) {
            for (int j = 1; j <= 16; ++j) CHECK(std::fabs(f.coeff(j, k)) <= 1e-10);
        }
        CHECK(std::fabs(f.coeff(1, 1)) > 0.5);
    }
    SUBCASE("indicator: closed form against quadrature") {
        const SpectralField exact = project_box_indicator(0.25, 0.75, 24);
        auto chi = [](double x) { return (x >= 0.25 && x <= 0.75) ? 1.0 : 0.0; };
        const double breaks[] = {0.25, 0.75};
        const SpectralField quad = project_separable(chi, chi, 24, breaks);
        CHECK((exact.coeffs() - quad.coeffs()).cwiseAbs().maxCoeff() <= 1e-6);
        // hand-evaluated closed form for (1, 3)
        const double b1 = std::sqrt(2.0) * (std::cos(pi / 4) - std::cos(3 * pi / 4)) / pi;
        const double b3 = std::sqrt(2.0) * (std::cos(3 * pi / 4) - std::cos(9 * pi / 4)) / (3 * pi);
        CHECK(exact.coeff(1, 3) == doctest::Approx(b1 * b3).epsilon(1e-14));
    }
    SUBCASE("separable projection matches tensor quadrature") {
        auto fx = [](double x) { return 7 * std::pow(x, 0.75) * (x - 1); };
        auto fy = [](double y) { return std::sin(2 * pi * y); };
        const SpectralField sep = project_separable(fx, fy, 12);
        for (int j = 1; j <= 12; ++j) {
            const double bj = oracle::integrate_1d([&](double x) { return fx(x) * std::sqrt(2.0) * std::sin(j * pi * x); }, 0, 1);
            CHECK(sep.coeff(j, 2) == doctest::Approx(bj / std::sqrt(2.0)).epsilon(1e-10));
        }
    }
    SUBCASE("grid samples of a sine sum") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> nd;
        SpectralField f(6);
        for (int m = 0; m < f.size(); ++m) f.coeffs()(m) = nd(rng);
        const SpectralField back = project(synthesize_grid(f, 15), 6);
        CHECK((back.coeffs() - f.coeffs()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("synthesis") {
    const SpectralField f = SpectralField::single_mode(4, {1, 1}, 0.7);
    const Point pts[] = {{0.5, 0.5}, {0.0, 0.37}, {0.21, 1.0}};
    const auto v = synthesize(f, pts);
    CHECK(v[0] == doctest::Approx(1.4));
    CHECK(v[1] == 0.0);
    CHECK(v[2] == 0.0);

    // synthesize after project reproduces a finite sine sum
    auto g = [](double x, double y) {
        return 0.3 * basis_eval({1, 2}, {x, y}) - 1.1 * basis_eval({4, 3}, {x, y}) + basis_eval({5, 5}, {x, y});
    };
    const SpectralField p = project(g, 8, 64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Point> probe(200);
    for (auto& q : probe) q = {u(rng), u(rng)};
    const auto s = synthesize(p, probe);
    for (std::size_t i = 0; i < probe.size(); ++i) CHECK(s[i] == doctest::Approx(g(probe[i].x, probe[i].y)).epsilon(1e-8).scale(1.0));

    const GridFunction grid = synthesize_grid(p, 9);
    for (int i = 0; i < 9; ++i) {
        for (int l = 0; l < 9; ++l) CHECK(grid.at(i, l) == doctest::Approx(g(grid.node(i), grid.node(l))).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("grid CSV round trip") {
    const GridFunction grid = synthesize_grid(SpectralField::single_mode(3, {2, 1}, 1.25), 7);
    std::stringstream ss;
    write_grid_csv(ss, grid);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    CHECK(header == "x,y,value");
    const GridFunction back = read_grid_csv(ss);
    CHECK(back.g == 7);
    CHECK(back.values == grid.values);
}

TEST_CASE("fractional norms") {
    const SpectralField one = SpectralField::single_mode(3, {1, 1});
    CHECK(norm_gamma(one, 0.5) == doctest::Approx(std::sqrt(2 * pi * pi)));
    CHECK(norm_gamma(one, -0.5) == doctest::Approx(1 / std::sqrt(2 * pi * pi)));

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    SpectralField r(7);
    for (int m = 0; m < r.size(); ++m) r.coeffs()(m) = nd(rng);
    CHECK(norm_gamma(r, 0.0) == doctest::Approx(r.coeffs().norm()));

    const Eigen::VectorXd w = gamma_weights(7, 0.5);
    for (int m = 0; m < r.size(); ++m) CHECK(w(m) == doctest::Approx(eigenvalue(SpectralField::mode_of(7, m))));
}

TEST_CASE("Parseval against quadrature") {
    auto f = [](double x, double y) { return x * (1 - x) * y * (1 - y) * std::exp(x - 0.5 * y); };
    const SpectralField p = project(f, 48);
    const double l2 = oracle::integrate_2d([&](double x, double y) { return f(x, y) * f(x, y); }, 2);
    CHECK(norm_gamma(p, 0.0) * norm_gamma(p, 0.0) == doctest::Approx(l2).epsilon(1e-6));
}

TEST_CASE("the gamma = 1/2 norm is the gradient norm") {
    auto f = [](double x, double y) { return x * (1 - x) * y * (1 - y) * std::exp(x - 0.5 * y); };
    auto fx = [](double x, double y) { return (1 - 2 * x + x * (1 - x)) * std::exp(x) * y * (1 - y) * std::exp(-0.5 * y); };
    auto fy = [](double x, double y) { return x * (1 - x) * std::exp(x) * (1 - 2 * y - 0.5 * y * (1 - y)) * std::exp(-0.5 * y); };
    const double grad = oracle::integrate_2d([&](double x, double y) { return fx(x, y) * fx(x, y) + fy(x, y) * fy(x, y); }, 2);
    const SpectralField p = project(f, 64);
    CHECK(norm_gamma(p, 0.5) == doctest::Approx(std::sqrt(grad)).epsilon(1e-4));

    SUBCASE("first reference problem") {
        auto gx = [](double x) { return 8 * std::pow(x, 1.01) * (x - 1); };
        auto dgx = [](double x) { return 8 * (2.01 * std::pow(x, 1.01) - 1.01 * std::pow(x, 0.01)); };
        // int sin^2(pi y) = int cos^2(pi y) = 1/2
        const double exact = std::sqrt(0.5 * oracle::integrate_1d([&](double x) { return dgx(x) * dgx(x); }, 0, 1) +
                                       0.5 * pi * pi * oracle::integrate_1d([&](double x) { return gx(x) * gx(x); }, 0, 1));
        CHECK(exact == doctest::Approx(4.567).epsilon(1e-3));
        CHECK(norm_gamma(truth_field("ex1", 128), 0.5) == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("norms grow with the truncation level") {
    const SpectralField full = truth_field("ex2", 64);
    for (double g : {-0.5, 0.0, 0.5}) {
        double prev = 0;
        for (int J : {4, 8, 16, 32, 64}) {
            const double n = norm_gamma(full.resized(J), g);
            CHECK(n >= prev);
            prev = n;
        }
    }
}

TEST_CASE("field arithmetic") {
    SpectralField a = SpectralField::single_mode(3, {1, 2}, 2.0);
    const SpectralField b = SpectralField::single_mode(3, {3, 3}, -1.0);
    const SpectralField c = 2.0 * (a + b) - a;
    CHECK(c.coeff(1, 2) == 2.0);
    CHECK(c.coeff(3, 3) == -2.0);
    const SpectralField big = c.resized(5);
    CHECK(big.coeff(3, 3) == -2.0);
    CHECK(big.coeff(5, 5) == 0.0);
    CHECK(big.resized(2).coeff(1, 2) == 2.0);
    CHECK(SpectralField::flat_index(4, {3, 2}) == 2 + 4);
    const ModeIndex m = SpectralField::mode_of(4, 6);
    CHECK(m.j == 3);
    CHECK(m.k == 2);
}
