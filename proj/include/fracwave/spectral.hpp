#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fracwave/numeric.hpp"

namespace fracwave {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Tensor index (j, k) of the Dirichlet eigenpair
/// phi_jk(x, y) = 2 sin(j pi x) sin(k pi y), lambda_jk = pi^2 (j^2 + k^2).
struct ModeIndex {
    int j = 1;
    int k = 1;
};

double eigenvalue(ModeIndex m);
double basis_eval(ModeIndex m, Point p);

/// All eigenvalues with 1 <= j, k <= J, ascending.
std::vector<double> sorted_eigenvalues(int J);

/// A function on the unit square stored as its coefficients (f, phi_jk) for
/// 1 <= j, k <= J.  Flat storage puts j fastest: index (j-1) + (k-1) J.
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int J);
    SpectralField(int J, Eigen::VectorXd coeffs);

    static SpectralField single_mode(int J, ModeIndex m, double c = 1.0);

    int J() const noexcept { return J_; }
    int size() const noexcept { return J_ * J_; }

    static int flat_index(int J, ModeIndex m) { return (m.j - 1) + (m.k - 1) * J; }
    static ModeIndex mode_of(int J, int flat) { return {flat % J + 1, flat / J + 1}; }

    double coeff(int j, int k) const { return c_[flat_index(J_, {j, k})]; }
    double& coeff(int j, int k) { return c_[flat_index(J_, {j, k})]; }

    const Eigen::VectorXd& coeffs() const noexcept { return c_; }
    Eigen::VectorXd& coeffs() noexcept { return c_; }

    /// Coefficient matrix C(j-1, k-1).
    Eigen::Map<const Eigen::MatrixXd> matrix() const { return {c_.data(), J_, J_}; }

    /// Zero-padded (J' > J) or truncated (J' < J) copy.
    SpectralField resized(int J_new) const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);

private:
    int J_ = 0;
    Eigen::VectorXd c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Values on the g x g interior grid ((i+1)/(g+1), (l+1)/(g+1)); entry
/// (i, l) is stored at i * g + l (x index slowest).
struct GridFunction {
    int g = 0;
    std::vector<double> values;

    double node(int i) const { return static_cast<double>(i + 1) / (g + 1); }
    double at(int i, int l) const { return values[static_cast<std::size_t>(i) * g + l]; }
    double max_abs() const;
};

/// CSV with header `x,y,value`, row-major over the grid.
void write_grid_csv(std::ostream& os, const GridFunction& grid);
void write_grid_csv(const std::string& path, const GridFunction& grid);
GridFunction read_grid_csv(std::istream& is);

/// Gauss-Legendre nodes and weights mapped to [a, b].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_legendre(int n, double a = 0.0, double b = 1.0);

/// Composite Gauss-Legendre rule on [0, 1]: uniform panels with the end
/// panels refined geometrically (for algebraic endpoint singularities), and
/// every breakpoint in `breaks` honoured exactly (for jumps).
Quadrature composite_rule(int panels, int order, std::span<const double> breaks = {});

using Field2D = std::function<double(double, double)>;
using Field1D = std::function<double(double)>;

/// Coefficients by tensor Gauss-Legendre quadrature with `quad_order` nodes
/// per dimension.  The rule resolves modes up to roughly quad_order / 2.
SpectralField project(const Field2D& f, int J, int quad_order = 128);

/// Coefficients from interior grid samples via the discrete sine transform
/// (exact for sine sums with modes <= g).
SpectralField project(const GridFunction& grid, int J);

/// (fx(x) fy(y), phi_jk) = b_j(fx) b_k(fy) with one-dimensional coefficients
/// b_j(f) = int_0^1 f(x) sqrt(2) sin(j pi x) dx taken on a composite rule.
SpectralField project_separable(const Field1D& fx, const Field1D& fy, int J,
                                std::span<const double> breaks = {});

/// Exact coefficients of the indicator of [lo, hi]^2:
/// c_jk = 2 (cos(j pi lo) - cos(j pi hi)) (cos(k pi lo) - cos(k pi hi)) / (j k pi^2).
SpectralField project_box_indicator(double lo, double hi, int J);

/// sum c_jk phi_jk at each point; exactly 0 on the boundary.
std::vector<double> synthesize(const SpectralField& field, std::span<const Point> points);

/// Synthesis on the g x g interior grid.
GridFunction synthesize_grid(const SpectralField& field, int g);

/// (sum lambda_jk^{2 gamma} c_jk^2)^{1/2}, the D((-Laplacian)^gamma) norm.
double norm_gamma(const SpectralField& field, double gamma);

/// Diagonal weights lambda_m^{2 gamma} in flat order.
Eigen::VectorXd gamma_weights(int J, double gamma);

}  // namespace fracwave
