#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracwave/forward.hpp"
#include "fracwave/spectral.hpp"

namespace fracwave {

/// Observation points inside the unit square.
struct PointSet {
    std::vector<Point> points;

    std::size_t size() const noexcept { return points.size(); }
};

/// Interior grid {(i/(g+1), l/(g+1)) : 1 <= i, l <= g}; g = 79 gives 6241 points.
PointSet uniform_grid_points(int g);

/// n points drawn uniformly in (0,1)^2 from a seeded generator.
PointSet random_points(std::size_t n, std::uint64_t seed);

struct QuasiUniformity {
    double d_max = 0.0;  ///< fill distance sup_x min_i |x - x_i|, probed on a grid
    double d_min = 0.0;  ///< separation distance min_{i != j} |x_i - x_j|
    double B = 0.0;      ///< d_max / d_min
};

/// d_min exactly over all pairs; d_max maximised over a probe x probe grid of
/// the closed square (boundary and corners included).
QuasiUniformity quasi_uniformity(const PointSet& ps, int probe);

/// Noisy terminal data m_i = (S a*)(x_i) + e_i.
struct Observations {
    PointSet pointset;
    std::vector<double> m;
    double sigma = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return m.size(); }
};

/// Name of the noise generator recorded in metadata.
inline constexpr const char* kNoiseGenerator = "mt19937_64+normal_distribution";

/// e_i i.i.d. Gaussian(0, sigma^2) from std::mt19937_64 seeded with `seed`.
std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed);

Observations sample_observations(const SpectralField& a_star, const ForwardConfig& cfg,
                                 const PointSet& ps, double sigma, std::uint64_t seed);

/// (sum v_i^2 / n)^{1/2}
double discrete_norm(std::span<const double> values);

struct ObservationMeta {
    double alpha = 0.0;
    double T = 0.0;
    double kappa = 1.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    std::string generator = kNoiseGenerator;
};

/// CSV `x,y,m` with 17 significant digits.
void write_observations_csv(std::ostream& os, const Observations& obs);
Observations read_observations_csv(std::istream& is);

/// Writes `<stem>.csv` and `<stem>.meta.json`.
void save_observations(const std::string& stem, const Observations& obs, const ForwardConfig& cfg);
Observations load_observations(const std::string& csv_path, ObservationMeta* meta = nullptr);

/// `foo/bar.csv` -> `foo/bar.meta.json`
std::string meta_path_for(const std::string& csv_path);

}  // namespace fracwave
