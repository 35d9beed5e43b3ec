#include "fracwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_modes(int J) {
    if (J < 1) throw InvalidArgumentError("mode count per dimension must be positive");
}

// S(a, j-1) = sin(j pi x_a)
Eigen::MatrixXd sine_table(std::span<const double> xs, int J) {
    Eigen::MatrixXd s(static_cast<Eigen::Index>(xs.size()), J);
    for (std::size_t a = 0; a < xs.size(); ++a) {
        for (int j = 1; j <= J; ++j) {
            s(static_cast<Eigen::Index>(a), j - 1) = sinpi(j * xs[a]);
        }
    }
    return s;
}

std::vector<double> interior_nodes(int g) {
    std::vector<double> xs(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i + 1) / (g + 1);
    return xs;
}

}  // namespace

double eigenvalue(ModeIndex m) {
    if (m.j < 1 || m.k < 1) throw InvalidArgumentError("mode indices start at 1");
    return kPi * kPi * (static_cast<double>(m.j) * m.j + static_cast<double>(m.k) * m.k);
}

double basis_eval(ModeIndex m, Point p) {
    return 2.0 * sinpi(m.j * p.x) * sinpi(m.k * p.y);
}

std::vector<double> sorted_eigenvalues(int J) {
    require_positive_modes(J);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(J) * J);
    for (int k = 1; k <= J; ++k)
        for (int j = 1; j <= J; ++j) out.push_back(eigenvalue({j, k}));
    std::sort(out.begin(), out.end());
    return out;
}

SpectralField::SpectralField(int J) : J_(J), c_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(J) * J)) {
    require_positive_modes(J);
}

SpectralField::SpectralField(int J, Eigen::VectorXd coeffs) : J_(J), c_(std::move(coeffs)) {
    require_positive_modes(J);
    if (c_.size() != static_cast<Eigen::Index>(J) * J) {
        throw InvalidArgumentError("coefficient vector size must be J*J");
    }
}

SpectralField SpectralField::single_mode(int J, ModeIndex m, double c) {
    SpectralField f(J);
    if (m.j < 1 || m.k < 1 || m.j > J || m.k > J) throw InvalidArgumentError("mode outside field");
    f.coeff(m.j, m.k) = c;
    return f;
}

SpectralField SpectralField::resized(int J_new) const {
    SpectralField out(J_new);
    const int m = std::min(J_, J_new);
    for (int k = 1; k <= m; ++k)
        for (int j = 1; j <= m; ++j) out.coeff(j, k) = coeff(j, k);
    return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    if (o.J_ != J_) throw InvalidArgumentError("field sizes differ");
    c_ += o.c_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    if (o.J_ != J_) throw InvalidArgumentError("field sizes differ");
    c_ -= o.c_;
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    c_ *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

void write_grid_csv(std::ostream& os, const GridFunction& grid) {
    os << "x,y,value\n" << std::setprecision(17);
    for (int i = 0; i < grid.g; ++i)
        for (int l = 0; l < grid.g; ++l)
            os << grid.node(i) << ',' << grid.node(l) << ',' << grid.at(i, l) << '\n';
}

void write_grid_csv(const std::string& path, const GridFunction& grid) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_grid_csv(os, grid);
}

GridFunction read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("x,y,value", 0) != 0) {
        throw IoError("grid CSV must start with header x,y,value");
    }
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double v[3];
        for (double& x : v) {
            if (!std::getline(row, cell, ',')) throw IoError("malformed grid CSV row: " + line);
            x = std::stod(cell);
        }
        values.push_back(v[2]);
    }
    GridFunction grid;
    grid.g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(values.size()))));
    if (static_cast<std::size_t>(grid.g) * grid.g != values.size() || grid.g == 0) {
        throw IoError("grid CSV row count is not a perfect square");
    }
    grid.values = std::move(values);
    return grid;
}

Quadrature gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgumentError("quadrature order must be positive");
    Quadrature q;
    q.nodes.resize(static_cast<std::size_t>(n));
    q.weights.resize(static_cast<std::size_t>(n));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    // P_n(x) and P_n'(x) by the three-term recurrence
    auto legendre = [n](double x) {
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) p0 = 1.0;
        return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
    };
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(x);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        const double dp = legendre(x).second;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        q.nodes[lo] = mid - half * x;
        q.nodes[hi] = mid + half * x;
        q.weights[lo] = half * w;
        q.weights[hi] = half * w;
    }
    return q;
}

Quadrature composite_rule(int panels, int order, std::span<const double> breaks) {
    if (panels < 1) throw InvalidArgumentError("panel count must be positive");
    std::vector<double> pts;
    for (int i = 0; i <= panels; ++i) pts.push_back(static_cast<double>(i) / panels);
    for (double b : breaks) {
        if (b > 0.0 && b < 1.0) pts.push_back(b);
    }
    // geometric grading into both endpoints
    const double h = 1.0 / panels;
    constexpr double kRatio = 0.15;
    constexpr int kLevels = 16;
    double s = h;
    for (int m = 0; m < kLevels; ++m) {
        s *= kRatio;
        pts.push_back(s);
        pts.push_back(1.0 - s);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    const Quadrature ref = gauss_legendre(order, 0.0, 1.0);
    Quadrature q;
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        const double a = pts[p];
        const double len = pts[p + 1] - a;
        for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
            q.nodes.push_back(a + len * ref.nodes[i]);
            q.weights.push_back(len * ref.weights[i]);
        }
    }
    return q;
}

SpectralField project(const Field2D& f, int J, int quad_order) {
    require_positive_modes(J);
    const Quadrature q = gauss_legendre(quad_order);
    const auto n = static_cast<Eigen::Index>(q.nodes.size());
    Eigen::MatrixXd values(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            values(a, b) = f(q.nodes[static_cast<std::size_t>(a)], q.nodes[static_cast<std::size_t>(b)]);
    Eigen::MatrixXd sw = sine_table(q.nodes, J);
    for (Eigen::Index a = 0; a < n; ++a) sw.row(a) *= q.weights[static_cast<std::size_t>(a)];
    const Eigen::MatrixXd c = 2.0 * sw.transpose() * values * sw;
    return SpectralField(J, Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
}

SpectralField project(const GridFunction& grid, int J) {
    require_positive_modes(J);
    const int g = grid.g;
    if (g < 1 || grid.values.size() != static_cast<std::size_t>(g) * g) {
        throw InvalidArgumentError("grid function has inconsistent size");
    }
    Eigen::MatrixXd values(g, g);
    for (int i = 0; i < g; ++i)
        for (int l = 0; l < g; ++l) values(i, l) = grid.at(i, l);
    const Eigen::MatrixXd s = sine_table(interior_nodes(g), J);
    const double h = 1.0 / (g + 1);
    const Eigen::MatrixXd c = 2.0 * h * h * s.transpose() * values * s;
    return SpectralField(J, Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
}

namespace {

Eigen::VectorXd sine_coefficients_1d(const Field1D& f, int J, const Quadrature& q) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(J);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double fw = f(q.nodes[i]) * q.weights[i];
        if (fw == 0.0) continue;
        for (int j = 1; j <= J; ++j) b(j - 1) += fw * sinpi(j * q.nodes[i]);
    }
    return std::numbers::sqrt2 * b;
}

}  // namespace

SpectralField project_separable(const Field1D& fx, const Field1D& fy, int J,
                                std::span<const double> breaks) {
    require_positive_modes(J);
    const Quadrature q = composite_rule(std::max(64, 2 * J), 20, breaks);
    const Eigen::VectorXd bx = sine_coefficients_1d(fx, J, q);
    const Eigen::VectorXd by = sine_coefficients_1d(fy, J, q);
    const Eigen::MatrixXd c = bx * by.transpose();
    return SpectralField(J, Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
}

SpectralField project_box_indicator(double lo, double hi, int J) {
    require_positive_modes(J);
    if (!(0.0 <= lo && lo < hi && hi <= 1.0)) throw InvalidArgumentError("box must satisfy 0 <= lo < hi <= 1");
    Eigen::VectorXd b(J);
    for (int j = 1; j <= J; ++j) {
        b(j - 1) = std::numbers::sqrt2 * (std::cos(j * kPi * lo) - std::cos(j * kPi * hi)) / (j * kPi);
    }
    const Eigen::MatrixXd c = b * b.transpose();
    return SpectralField(J, Eigen::Map<const Eigen::VectorXd>(c.data(), c.size()));
}

std::vector<double> synthesize(const SpectralField& field, std::span<const Point> points) {
    const int J = field.J();
    const auto c = field.matrix();
    std::vector<double> out(points.size());
    Eigen::VectorXd sx(J), sy(J);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point p = points[i];
        for (int j = 1; j <= J; ++j) {
            sx(j - 1) = sinpi(j * p.x);
            sy(j - 1) = sinpi(j * p.y);
        }
        out[i] = 2.0 * sx.dot(c * sy);
    }
    return out;
}

GridFunction synthesize_grid(const SpectralField& field, int g) {
    if (g < 1) throw InvalidArgumentError("grid size must be positive");
    const Eigen::MatrixXd s = sine_table(interior_nodes(g), field.J());
    const Eigen::MatrixXd v = 2.0 * s * field.matrix() * s.transpose();
    GridFunction grid;
    grid.g = g;
    grid.values.resize(static_cast<std::size_t>(g) * g);
    for (int i = 0; i < g; ++i)
        for (int l = 0; l < g; ++l) grid.values[static_cast<std::size_t>(i) * g + l] = v(i, l);
    return grid;
}

Eigen::VectorXd gamma_weights(int J, double gamma) {
    require_positive_modes(J);
    Eigen::VectorXd w(static_cast<Eigen::Index>(J) * J);
    for (int k = 1; k <= J; ++k)
        for (int j = 1; j <= J; ++j)
            w(SpectralField::flat_index(J, {j, k})) = std::pow(eigenvalue({j, k}), 2.0 * gamma);
    return w;
}

double norm_gamma(const SpectralField& field, double gamma) {
    const Eigen::VectorXd w = gamma_weights(field.J(), gamma);
    return std::sqrt((w.array() * field.coeffs().array().square()).sum());
}

}  // namespace fracwave
