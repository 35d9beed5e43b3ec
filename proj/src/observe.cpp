#include "fracwave/observe.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

// Uniform bucket grid over [0,1]^2 for nearest-neighbour queries.
class BucketGrid {
public:
    explicit BucketGrid(const std::vector<Point>& pts) : pts_(pts) {
        cells_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
        buckets_.resize(static_cast<std::size_t>(cells_) * cells_);
        for (std::size_t i = 0; i < pts.size(); ++i) buckets_[cell_of(pts[i])].push_back(i);
    }

    // Distance from q to the nearest point, skipping index `skip`.
    double nearest(Point q, std::size_t skip = std::numeric_limits<std::size_t>::max()) const {
        const int cx = clamp_cell(q.x);
        const int cy = clamp_cell(q.y);
        double best = std::numeric_limits<double>::infinity();
        const double w = 1.0 / cells_;
        for (int ring = 0; ring <= cells_; ++ring) {
            // every point outside the ring is at least (ring - 1) cells away
            if (ring > 1 && (ring - 1) * w > best) break;
            for (int ix = cx - ring; ix <= cx + ring; ++ix) {
                for (int iy = cy - ring; iy <= cy + ring; ++iy) {
                    if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
                    if (ix < 0 || iy < 0 || ix >= cells_ || iy >= cells_) continue;
                    for (std::size_t i : buckets_[static_cast<std::size_t>(ix) * cells_ + iy]) {
                        if (i == skip) continue;
                        best = std::min(best, std::hypot(pts_[i].x - q.x, pts_[i].y - q.y));
                    }
                }
            }
        }
        return best;
    }

private:
    int clamp_cell(double v) const {
        return std::clamp(static_cast<int>(v * cells_), 0, cells_ - 1);
    }
    std::size_t cell_of(Point p) const {
        return static_cast<std::size_t>(clamp_cell(p.x)) * cells_ + clamp_cell(p.y);
    }

    const std::vector<Point>& pts_;
    int cells_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
};

}  // namespace

PointSet uniform_grid_points(int g) {
    if (g < 2) throw InvalidArgumentError("observation grid needs g >= 2");
    PointSet ps;
    ps.points.reserve(static_cast<std::size_t>(g) * g);
    for (int i = 1; i <= g; ++i)
        for (int l = 1; l <= g; ++l)
            ps.points.push_back({static_cast<double>(i) / (g + 1), static_cast<double>(l) / (g + 1)});
    return ps;
}

PointSet random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    PointSet ps;
    ps.points.reserve(n);
    while (ps.points.size() < n) {
        const double x = u(rng);
        const double y = u(rng);
        if (x > 0.0 && y > 0.0) ps.points.push_back({x, y});
    }
    return ps;
}

QuasiUniformity quasi_uniformity(const PointSet& ps, int probe) {
    if (ps.size() < 2) throw InvalidArgumentError("quasi-uniformity needs at least two points");
    if (probe < 2) throw InvalidArgumentError("probe grid needs at least two nodes per side");
    const BucketGrid grid(ps.points);
    QuasiUniformity q;
    q.d_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ps.size(); ++i) q.d_min = std::min(q.d_min, grid.nearest(ps.points[i], i));
    for (int a = 0; a < probe; ++a) {
        for (int b = 0; b < probe; ++b) {
            const Point x{static_cast<double>(a) / (probe - 1), static_cast<double>(b) / (probe - 1)};
            q.d_max = std::max(q.d_max, grid.nearest(x));
        }
    }
    q.B = q.d_max / q.d_min;
    return q;
}

std::vector<double> gaussian_noise(std::size_t n, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw InvalidArgumentError("noise level sigma must be non-negative");
    std::vector<double> e(n, 0.0);
    if (sigma == 0.0) return e;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma);
    for (double& v : e) v = normal(rng);
    return e;
}

Observations sample_observations(const SpectralField& a_star, const ForwardConfig& cfg,
                                 const PointSet& ps, double sigma, std::uint64_t seed) {
    ForwardConfig truth_cfg = cfg;
    truth_cfg.J_max = a_star.J();
    const SpectralField u_T = apply_S(a_star, truth_cfg);
    Observations obs;
    obs.pointset = ps;
    obs.sigma = sigma;
    obs.seed = seed;
    obs.m = synthesize(u_T, ps.points);
    const std::vector<double> e = gaussian_noise(obs.m.size(), sigma, seed);
    for (std::size_t i = 0; i < obs.m.size(); ++i) obs.m[i] += e[i];
    return obs;
}

double discrete_norm(std::span<const double> values) {
    if (values.empty()) throw InvalidArgumentError("discrete norm of an empty vector");
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s / static_cast<double>(values.size()));
}

void write_observations_csv(std::ostream& os, const Observations& obs) {
    os << "x,y,m\n" << std::setprecision(17);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Point p = obs.pointset.points[i];
        os << p.x << ',' << p.y << ',' << obs.m[i] << '\n';
    }
}

Observations read_observations_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,y,m", 0) != 0) {
        throw IoError("observation CSV must start with header x,y,m");
    }
    Observations obs;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double v[3];
        for (double& x : v) {
            if (!std::getline(row, cell, ',')) throw IoError("malformed observation row: " + line);
            x = std::stod(cell);
        }
        obs.pointset.points.push_back({v[0], v[1]});
        obs.m.push_back(v[2]);
    }
    return obs;
}

std::string meta_path_for(const std::string& csv_path) {
    const std::string ext = ".csv";
    if (csv_path.size() >= ext.size() && csv_path.compare(csv_path.size() - ext.size(), ext.size(), ext) == 0) {
        return csv_path.substr(0, csv_path.size() - ext.size()) + ".meta.json";
    }
    return csv_path + ".meta.json";
}

void save_observations(const std::string& stem, const Observations& obs, const ForwardConfig& cfg) {
    const std::string csv = stem + ".csv";
    {
        std::ofstream os(csv);
        if (!os) throw IoError("cannot open " + csv + " for writing");
        write_observations_csv(os, obs);
    }
    nlohmann::ordered_json meta;
    meta["alpha"] = cfg.alpha;
    meta["T"] = cfg.T;
    meta["kappa"] = cfg.kappa;
    meta["sigma"] = obs.sigma;
    meta["seed"] = obs.seed;
    meta["n"] = obs.size();
    meta["generator"] = kNoiseGenerator;
    std::ofstream os(meta_path_for(csv));
    if (!os) throw IoError("cannot write observation metadata for " + csv);
    os << meta.dump(2) << '\n';
}

Observations load_observations(const std::string& csv_path, ObservationMeta* meta) {
    std::ifstream is(csv_path);
    if (!is) throw IoError("cannot open " + csv_path);
    Observations obs = read_observations_csv(is);
    std::ifstream ms(meta_path_for(csv_path));
    if (ms) {
        const auto j = nlohmann::json::parse(ms);
        obs.sigma = j.value("sigma", 0.0);
        obs.seed = j.value("seed", std::uint64_t{0});
        if (meta) {
            meta->alpha = j.value("alpha", 0.0);
            meta->T = j.value("T", 0.0);
            meta->kappa = j.value("kappa", 1.0);
            meta->sigma = obs.sigma;
            meta->seed = obs.seed;
            meta->n = j.value("n", obs.size());
            meta->generator = j.value("generator", std::string(kNoiseGenerator));
        }
    } else if (meta) {
        meta->n = obs.size();
    }
    return obs;
}

}  // namespace fracwave
