#pragma once

// Independent reference implementations used only by the tests.

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

using big = boost::multiprecision::number<boost::multiprecision::cpp_dec_float<140>>;

// Defining series of E_{a,b}(z) in 140 decimal digits.  Adequate while the
// largest term, about exp(|z|^{1/a}), stays below 1e100.
inline double mittag_leffler(double a, double b, double z) {
    if (std::pow(std::fabs(z), 1.0 / a) > 220.0) throw std::domain_error("oracle out of range");
    const big zz(z);
    big sum = 0, power = 1;
    big peak = 0;
    for (int k = 0; k < 20000; ++k) {
        const big arg = big(a) * k + big(b);
        big term = 0;
        // 1/Gamma vanishes at the non-positive integers
        if (!(arg <= 0 && arg == boost::multiprecision::floor(arg))) {
            term = power / boost::math::tgamma(arg);
        }
        sum += term;
        const big mag = boost::multiprecision::abs(term);
        if (mag > peak) peak = mag;
        if (k > 5 && mag < peak && mag < big("1e-40") * (1 + boost::multiprecision::abs(sum))) break;
        power *= zz;
    }
    return static_cast<double>(sum);
}

// Tensor Gauss-Legendre (30 points per cell) on a panels x panels partition
// of the unit square, from Boost.Math.
inline double integrate_2d(const std::function<double(double, double)>& f, int panels) {
    using rule = boost::math::quadrature::gauss<double, 30>;
    const double h = 1.0 / panels;
    double s = 0;
    for (int pi = 0; pi < panels; ++pi) {
        for (int pj = 0; pj < panels; ++pj) {
            s += rule::integrate(
                [&](double x) {
                    return rule::integrate([&](double y) { return f(x, y); }, pj * h, (pj + 1) * h);
                },
                pi * h, (pi + 1) * h);
        }
    }
    return s;
}

// One-dimensional adaptive Gauss-Kronrod integral on [a, b].
inline double integrate_1d(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace oracle
