#include "fracwave/mittag_leffler.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "fracwave/errors.hpp"
#include "fracwave/numeric.hpp"

namespace fracwave {

namespace {

using quad = __float128;

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
    quad sum = 0;
    quad comp = 0;

    void add(quad v) {
        const quad t = sum + v;
        if (fabsq(sum) >= fabsq(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    quad value() const { return sum + comp; }
};

// 1/Gamma in binary128; exact zero at the poles.
quad rgamma_q(quad x) {
    if (x <= 0 && x == floorq(x)) return 0;
    if (x > 0) return expq(-lgammaq(x));
    return 1 / tgammaq(x);
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        std::ostringstream os;
        os << "Mittag-Leffler order must be positive, got " << alpha;
        throw InvalidArgumentError(os.str());
    }
}

// Asymptotic sum truncated at its smallest term (capped).
double asymptotic_optimal(MLParams p, double z) {
    constexpr int kMaxTerms = 80;
    const double lz = std::log(std::fabs(z));
    double sum = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kMaxTerms; ++k) {
        const double rg = rgamma(p.beta - p.alpha * k);
        if (rg == 0.0) continue;
        const double mag = std::exp(-k * lz) * std::fabs(rg);
        if (!std::isfinite(mag) || mag > prev) break;
        // z^{-k} carries (-1)^k for negative z
        const double sign = ((k % 2 == 0) ? 1.0 : -1.0) * (rg < 0 ? -1.0 : 1.0);
        const double term = -sign * mag;
        sum += term;
        prev = mag;
        if (mag <= 1e-18 * std::fabs(sum)) break;
    }
    return sum;
}

double large_negative(MLParams p, double z, const MLOptions& opts) {
    const double algebraic =
        opts.asymp_terms > 0 ? ml_asymptotic(p, z, opts.asymp_terms) : asymptotic_optimal(p, z);
    return algebraic + ml_pole_part(p, z);
}

}  // namespace

double rgamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) return 0.0;
    if (x > 0.0) {
        if (x < 170.0) return 1.0 / std::tgamma(x);
        return std::exp(-std::lgamma(x));
    }
    // reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi
    const double s = sinpi(x) / std::numbers::pi;
    const double y = 1.0 - x;
    if (y < 170.0) return std::tgamma(y) * s;
    return std::copysign(std::exp(std::lgamma(y) + std::log(std::fabs(s))), s);
}

double switch_radius(double alpha, const MLOptions& opts) {
    require_alpha(alpha);
    return std::pow(opts.switch_scale, alpha);
}

double ml_series(MLParams p, double z, double tol, int max_terms) {
    require_alpha(p.alpha);
    if (!(tol > 0.0)) throw InvalidArgumentError("series tolerance must be positive");
    if (z == 0.0) return static_cast<double>(rgamma_q(static_cast<quad>(p.beta)));

    const quad alpha = p.alpha;
    const quad beta = p.beta;
    const quad log_abs_z = logq(fabsq(static_cast<quad>(z)));
    // term magnitudes peak near alpha k + beta ~ |z|^{1/alpha}
    const double peak = std::pow(std::fabs(z), 1.0 / p.alpha);
    const bool negative = z < 0.0;

    CompensatedSum acc;
    for (int k = 0; k <= max_terms; ++k) {
        const quad x = alpha * k + beta;
        quad term;
        if (x > 0) {
            term = expq(k * log_abs_z - lgammaq(x));
        } else {
            term = expq(k * log_abs_z) * rgamma_q(x);
        }
        if (negative && (k % 2 == 1)) term = -term;
        acc.add(term);
        if (k > 0 && static_cast<double>(x) > peak &&
            fabsq(term) < static_cast<quad>(tol) * fmaxq(1, fabsq(acc.value()))) {
            return static_cast<double>(acc.value());
        }
    }
    std::ostringstream os;
    os << "Mittag-Leffler series did not converge within " << max_terms
       << " terms (alpha=" << p.alpha << ", beta=" << p.beta << ", z=" << z << ")";
    throw NonConvergenceError(os.str());
}

double ml_asymptotic(MLParams p, double z, int terms) {
    require_alpha(p.alpha);
    if (terms < 1) throw InvalidArgumentError("asymptotic expansion needs at least one term");
    if (!(z < 0.0)) throw InvalidArgumentError("asymptotic expansion is evaluated for z < 0");
    double sum = 0.0;
    for (int k = terms; k >= 1; --k) {
        const double rg = rgamma(p.beta - p.alpha * k);
        if (rg == 0.0) continue;
        sum -= std::pow(z, -k) * rg;
    }
    return sum;
}

double ml_pole_part(MLParams p, double z) {
    require_alpha(p.alpha);
    if (!(z < 0.0) || p.alpha < 1.0) return 0.0;
    const double weight = (p.alpha == 1.0) ? 1.0 : 2.0;
    const std::complex<double> zeta =
        std::polar(std::pow(-z, 1.0 / p.alpha), std::numbers::pi / p.alpha);
    const std::complex<double> residue = std::pow(zeta, 1.0 - p.beta) * std::exp(zeta);
    return weight * residue.real() / p.alpha;
}

double ml(MLParams p, double z, const MLOptions& opts) {
    require_alpha(p.alpha);
    if (!std::isfinite(z)) throw InvalidArgumentError("Mittag-Leffler argument must be finite");
    if (z >= 0.0) return ml_series(p, z, opts.series_tol);

    const double scaled = std::pow(-z, 1.0 / p.alpha);
    const double lo = opts.switch_scale / opts.band_factor;
    const double hi = opts.switch_scale * opts.band_factor;
    if (scaled < lo) return ml_series(p, z, opts.series_tol);
    if (scaled > hi) return large_negative(p, z, opts);

    const double series = ml_series(p, z, opts.series_tol);
    const double asympt = large_negative(p, z, opts);
    // near a real zero only the algebraic tail ~1/|z| sets the attainable accuracy
    const double scale = std::max(std::fabs(series), 1.0 / (1.0 + std::fabs(z)));
    if (std::fabs(series - asympt) > opts.cross_tol * scale) {
        std::ostringstream os;
        os.precision(17);
        os << "series (" << series << ") and asymptotic (" << asympt
           << ") regimes disagree at alpha=" << p.alpha << ", beta=" << p.beta << ", z=" << z;
        throw RegimeDisagreementError(os.str());
    }
    return series;
}

double ml_recurrence_check(MLParams p, double z) {
    const double lhs = ml(p, z);
    const double rhs = rgamma(p.beta) + z * ml({p.alpha, p.alpha + p.beta}, z);
    return std::fabs(lhs - rhs);
}

RootSet find_real_roots(double alpha, double search_bound, const RootOptions& opts) {
    if (!(alpha > 1.0 && alpha < 2.0)) {
        throw InvalidArgumentError("root search requires alpha in (1, 2)");
    }
    if (!(search_bound > opts.scan_start)) {
        throw InvalidArgumentError("search bound must exceed the scan start");
    }
    const MLParams p{alpha, 2.0};

    // Leading two algebraic terms at the bound.
    const double z_bound = -search_bound;
    const double first = -rgamma(2.0 - alpha) / z_bound;
    const double second = -rgamma(2.0 - 2.0 * alpha) / (z_bound * z_bound);
    const double ratio = (first + second) / first;
    if (!(std::fabs(ratio - 1.0) <= 0.1)) {
        std::ostringstream os;
        os << "search bound " << search_bound << " not certified for alpha=" << alpha
           << ": two-term/one-term asymptotic ratio " << ratio;
        throw UncertifiedBoundError(os.str());
    }

    RootSet out;
    out.alpha = alpha;
    out.search_bound = search_bound;
    {
        const std::complex<double> zeta =
            std::polar(std::pow(search_bound, 1.0 / alpha), std::numbers::pi / alpha);
        const double amplitude =
            2.0 / alpha * std::abs(std::pow(zeta, -1.0)) * std::exp(zeta.real());
        out.tail_certified = amplitude <= 0.1 * std::fabs(first);
    }

    const int n = std::max(opts.scan_nodes, 2);
    std::vector<double> nodes;
    nodes.reserve(2 * static_cast<std::size_t>(n));
    const double log_lo = std::log(opts.scan_start);
    const double log_hi = std::log(search_bound);
    for (int i = 0; i < n; ++i) {
        nodes.push_back(std::exp(log_lo + (log_hi - log_lo) * i / (n - 1)));
        nodes.push_back(search_bound * (i + 1) / n);
    }
    nodes.back() = search_bound;
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes.back() = search_bound;

    auto f = [&](double t) { return ml(p, -t); };

    double t_prev = nodes.front();
    double f_prev = f(t_prev);
    if (f_prev == 0.0) out.roots.push_back(t_prev);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double t = nodes[i];
        const double ft = f(t);
        if (ft == 0.0) {
            out.roots.push_back(t);
        } else if (f_prev != 0.0 && (ft > 0.0) != (f_prev > 0.0)) {
            double lo = t_prev;
            double hi = t;
            double f_lo = f_prev;
            for (int it = 0; it < 200 && hi - lo > opts.root_tol; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0.0) == (f_lo > 0.0)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            out.roots.push_back(0.5 * (lo + hi));
        }
        t_prev = t;
        f_prev = ft;
    }
    return out;
}

double propagator(double alpha, double lambda, double T) {
    if (!(T > 0.0)) throw InvalidArgumentError("terminal time must be positive");
    if (!(lambda >= 0.0)) throw InvalidArgumentError("eigenvalue must be non-negative");
    return T * ml({alpha, 2.0}, -lambda * std::pow(T, alpha));
}

PropagatorConditioning propagator_conditioning(double alpha, double lambda, double T,
                                               double window_low, double window_high) {
    PropagatorConditioning c;
    c.value = propagator(alpha, lambda, T);
    c.scaled = std::fabs(c.value) * (1.0 + lambda * std::pow(T, alpha));
    c.below_window = c.scaled < window_low;
    c.above_window = c.scaled > window_high;
    return c;
}

}  // namespace fracwave
