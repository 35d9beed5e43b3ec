#pragma once

#include <vector>

namespace fracwave {

/// Parameters (alpha, beta) of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
};

/// Tuning of the series / asymptotic dispatcher used by `ml`.
///
/// The regime boundary is expressed through s = |z|^{1/alpha}: the largest
/// series term grows like exp(s) and the error of the truncated asymptotic
/// expansion decays like exp(-s), so a fixed s gives the same accuracy for
/// every alpha.
struct MLOptions {
    double switch_scale = 38.0;  ///< series below |z| = switch_scale^alpha
    double band_factor = 1.15;   ///< overlap band [s/f, s*f] in the scaled variable
    double cross_tol = 1e-6;     ///< relative agreement required inside the band
    double series_tol = 1e-20;
    int asymp_terms = 0;         ///< 0 selects optimal truncation
};

/// 1/Gamma(x) for real x, exactly 0 at the non-positive integers.
double rgamma(double x);

/// Radius |z| at which `ml` leaves the series regime for a given alpha.
double switch_radius(double alpha, const MLOptions& opts = {});

/// Defining power series, summed in binary128 with compensated summation.
/// Stops once the next term is below tol * max(1, |partial sum|) past the
/// peak of the term magnitudes.  Throws NonConvergenceError when the term
/// budget is exhausted (|z| too large for the series regime).
double ml_series(MLParams p, double z, double tol = 1e-20, int max_terms = 5000);

/// Algebraic asymptotic expansion for negative z:
/// -sum_{k=1}^{terms} z^{-k} / Gamma(beta - alpha k).  Terms at poles of
/// Gamma vanish.
double ml_asymptotic(MLParams p, double z, int terms);

/// Residue contribution of the poles zeta^alpha = z that lie on the principal
/// sheet, (1/alpha) sum_m zeta_m^{1-beta} exp(zeta_m).  On the negative real
/// axis this is the conjugate pair zeta = |z|^{1/alpha} e^{+-i pi/alpha} for
/// 1 < alpha <= 2 (half weight at alpha == 1), and nothing for alpha < 1.
/// Exponentially small in |z|^{1/alpha}, so it lives inside the remainder of
/// `ml_asymptotic`; it is what produces the real zeros for alpha > 4/3.
double ml_pole_part(MLParams p, double z);

/// Regime dispatcher.  Positive z always use the series (no cancellation).
/// Inside the overlap band both regimes are computed and the series value is
/// returned; throws RegimeDisagreementError if they differ by more than
/// cross_tol relative to max(|E|, 1/(1+|z|)).
double ml(MLParams p, double z, const MLOptions& opts = {});

/// |E_{a,b}(z) - 1/Gamma(b) - z E_{a,a+b}(z)|; zero up to rounding.
double ml_recurrence_check(MLParams p, double z);

/// Positive real zeros of t -> E_{alpha,2}(-t) up to `search_bound`.
struct RootSet {
    double alpha = 0.0;
    std::vector<double> roots;
    double search_bound = 0.0;
    /// True when, at search_bound, the oscillating pole part is below a tenth
    /// of the leading algebraic term, so no zero can lie beyond the bound.
    bool tail_certified = false;
};

struct RootOptions {
    double root_tol = 1e-12;
    int scan_nodes = 10000;
    double scan_start = 1e-3;
};

/// Sign scan on a geometric grid over [scan_start, bound] merged with a
/// uniform grid over (0, bound], refined by bisection.  Throws
/// UncertifiedBoundError unless the two-term/one-term asymptotic ratio at the
/// bound lies within 10% of one.
RootSet find_real_roots(double alpha, double search_bound, const RootOptions& opts = {});

/// Forward propagator T * E_{alpha,2}(-lambda T^alpha) of one spatial mode.
double propagator(double alpha, double lambda, double T);

struct PropagatorConditioning {
    double value = 0.0;   ///< T E_{alpha,2}(-lambda T^alpha)
    double scaled = 0.0;  ///< |value| (1 + lambda T^alpha)
    bool below_window = false;
    bool above_window = false;
};

/// Compares the scaled propagator against the two-sided window
/// [window_low, window_high] in which it stays away from the real zeros.
PropagatorConditioning propagator_conditioning(double alpha, double lambda, double T,
                                               double window_low = 1e-3,
                                               double window_high = 1e3);

}  // namespace fracwave
