#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fracwave/errors.hpp"
#include "fracwave/experiment.hpp"
#include "fracwave/observe.hpp"
#include "oracle.hpp"

using namespace fracwave;
constexpr double pi = std::numbers::pi;

namespace {

// sup-inf fill distance by brute force over a probe grid of the closed square
double brute_fill_distance(const PointSet& ps, int probe) {
    double worst = 0;
    for (int a = 0; a <= probe; ++a) {
        for (int b = 0; b <= probe; ++b) {
            const double x = static_cast<double>(a) / probe, y = static_cast<double>(b) / probe;
            double best = INFINITY;
            for (const Point& p : ps.points) best = std::min(best, std::hypot(p.x - x, p.y - y));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("uniform grid") {
    CHECK(uniform_grid_points(79).size() == 6241);
    const PointSet four = uniform_grid_points(2);
    REQUIRE(four.size() == 4);
    for (const Point& p : four.points) {
        CHECK((p.x == doctest::Approx(1.0 / 3) || p.x == doctest::Approx(2.0 / 3)));
        CHECK((p.y == doctest::Approx(1.0 / 3) || p.y == doctest::Approx(2.0 / 3)));
    }
    CHECK_THROWS_AS(uniform_grid_points(1), InvalidArgumentError);
}

TEST_CASE("quasi-uniformity") {
    SUBCASE("two points") {
        const PointSet ps{{{0.25, 0.5}, {0.75, 0.5}}};
        CHECK(quasi_uniformity(ps, 40).d_min == doctest::Approx(0.5));
    }
    SUBCASE("g = 10 grid") {
        CHECK(quasi_uniformity(uniform_grid_points(10), 44).d_min == doctest::Approx(1.0 / 11));
    }
    SUBCASE("g = 79 grid") {
        const PointSet ps = uniform_grid_points(79);
        const QuasiUniformity q = quasi_uniformity(ps, 4 * 80);
        CHECK(q.d_min == doctest::Approx(1.0 / 80));
        // interior cells: half-diagonal; the boundary strip is wider
        CHECK(q.d_max >= std::sqrt(2.0) / 160 - 1e-12);
        CHECK(q.d_max == doctest::Approx(brute_fill_distance(ps, 4 * 80)).epsilon(1e-12));
        CHECK(q.B <= 1.0 * std::sqrt(2.0) + 1e-12);
    }
    SUBCASE("random points against a finer brute-force probe") {
        const PointSet ps = random_points(100, 77);
        const QuasiUniformity q = quasi_uniformity(ps, 40);
        double dmin = INFINITY;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                dmin = std::min(dmin, std::hypot(ps.points[i].x - ps.points[j].x, ps.points[i].y - ps.points[j].y));
            }
        }
        CHECK(q.d_min == dmin);
        const double fine = brute_fill_distance(ps, 160);
        // probe spacing 1/40 bounds the gap between the two sup estimates
        CHECK(std::fabs(q.d_max - fine) <= std::sqrt(2.0) / 40);
        CHECK(q.B == doctest::Approx(q.d_max / q.d_min));
    }
}

TEST_CASE("noise-free and noisy sampling") {
    const SpectralField a = truth_field("ex1", 32);
    const ForwardConfig cfg{1.2, 1.0, 32, kReferenceKappa};
    const PointSet ps = uniform_grid_points(79);
    const Observations clean = sample_observations(a, cfg, ps, 0.0, 1);
    const auto exact = synthesize(apply_S(a, cfg), ps.points);
    std::vector<double> diff(exact.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = clean.m[i] - exact[i];
    CHECK(discrete_norm(diff) == 0.0);

    const Observations o1 = sample_observations(a, cfg, ps, 0.2, 7);
    const Observations o2 = sample_observations(a, cfg, ps, 0.2, 7);
    CHECK(o1.m == o2.m);
    const Observations o3 = sample_observations(a, cfg, ps, 0.2, 8);
    CHECK(o1.m != o3.m);

    double var = 0;
    std::size_t count = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto e = gaussian_noise(ps.size(), 0.2, seed);
        for (double v : e) var += v * v, ++count;
        double lag = 0, sq = 0, mean = 0;
        for (double v : e) mean += v;
        mean /= static_cast<double>(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            sq += (e[i] - mean) * (e[i] - mean);
            if (i + 1 < e.size()) lag += (e[i] - mean) * (e[i + 1] - mean);
        }
        CHECK(std::fabs(lag / sq) <= 0.05);
    }
    const double sd = std::sqrt(var / static_cast<double>(count));
    CHECK(sd >= 0.19);
    CHECK(sd <= 0.21);
}

TEST_CASE("discrete seminorm") {
    CHECK(discrete_norm(std::vector<double>(17, 1.0)) == doctest::Approx(1.0));
    CHECK(discrete_norm(std::vector<double>(5, 0.0)) == 0.0);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    for (int t = 0; t < 20; ++t) {
        std::vector<double> u(50), v(50), w(50), s(50);
        for (int i = 0; i < 50; ++i) u[i] = nd(rng), v[i] = nd(rng);
        const double c = nd(rng);
        for (int i = 0; i < 50; ++i) w[i] = u[i] + v[i], s[i] = c * u[i];
        CHECK(discrete_norm(w) <= discrete_norm(u) + discrete_norm(v) + 1e-15);
        CHECK(discrete_norm(s) == doctest::Approx(std::fabs(c) * discrete_norm(u)));
    }
    SUBCASE("grid RMS approximates the L2 norm of resolved fields") {
        auto f = [](double x, double y) { return std::sin(pi * x) * std::sin(2 * pi * y) * std::exp(x * y); };
        const PointSet ps = uniform_grid_points(79);
        std::vector<double> vals;
        for (const Point& p : ps.points) vals.push_back(f(p.x, p.y));
        const double l2 = std::sqrt(oracle::integrate_2d([&](double x, double y) { return f(x, y) * f(x, y); }, 2));
        CHECK(std::fabs(discrete_norm(vals) - l2) / l2 <= 0.02);
    }
}

TEST_CASE("observation files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fracwave_observe_test";
    fs::create_directories(dir);
    const ForwardConfig cfg{1.4, 0.9, 8, 0.5};
    const Observations obs = sample_observations(truth_field("ex2", 8), cfg, random_points(30, 4), 0.1, 99);
    const std::string stem = (dir / "obs").string();
    save_observations(stem, obs, cfg);

    std::ifstream head(stem + ".csv");
    std::string line;
    std::getline(head, line);
    CHECK(line == "x,y,m");

    ObservationMeta meta;
    const Observations back = load_observations(stem + ".csv", &meta);
    CHECK(back.m == obs.m);
    REQUIRE(back.size() == obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        CHECK(back.pointset.points[i].x == obs.pointset.points[i].x);
        CHECK(back.pointset.points[i].y == obs.pointset.points[i].y);
    }
    CHECK(back.sigma == 0.1);
    CHECK(back.seed == 99);
    CHECK(meta.alpha == 1.4);
    CHECK(meta.T == 0.9);
    CHECK(meta.kappa == 0.5);
    CHECK(meta.n == 30);
    CHECK(meta.generator == std::string(kNoiseGenerator));

    std::ifstream mj(meta_path_for(stem + ".csv"));
    const auto j = nlohmann::json::parse(mj);
    for (const char* key : {"alpha", "T", "sigma", "seed", "n", "generator"}) CHECK(j.contains(key));
    fs::remove_all(dir);
}
