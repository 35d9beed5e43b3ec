#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwave/forward.hpp"
#include "fracwave/observe.hpp"
#include "fracwave/param_select.hpp"
#include "fracwave/spectral.hpp"
#include "fracwave/tikhonov.hpp"

namespace fracwave {

/// Diffusion coefficient under which the forward model reproduces the
/// reference sup norms of S a1 (0.95 / 1.30 for ex1, 0.43 / 0.61 for ex2).
inline constexpr double kReferenceKappa = 1.0 / (std::numbers::pi * std::numbers::pi);

enum class RhoMode { Fixed, Auto, Oracle };

std::string to_string(RhoMode mode);
RhoMode rho_mode_from_string(const std::string& s);

/// One reconstruction experiment.  The builtin ids bind the three reference
/// problems:
///   ex1: a1 = 8 x^1.01 (x-1) sin(pi y),  T = 1,   sigma = 0.2
///   ex2: a1 = 7 x^0.75 (x-1) sin(2 pi y), T = 1,  sigma = 0.4
///   ex3: a1 = indicator of [0.25, 0.75]^2, T = 0.1, sigma = 0.01
struct ExperimentSpec {
    std::string example = "ex1";
    double alpha = 1.2;
    double T = 1.0;
    double sigma = 0.2;
    std::vector<std::uint64_t> seeds{1};
    int g = 79;
    double gamma = 0.5;
    int J_max = 32;
    int J_ref = 128;
    RhoMode rho_mode = RhoMode::Auto;
    double rho = 3e-5;      ///< used when rho_mode == Fixed
    double tol_rho = 0.0;   ///< <= 0 selects the default for gamma
    int max_iters = 50;
    double kappa = kReferenceKappa;

    void validate() const;
    ForwardConfig forward_config() const { return {alpha, T, J_max, kappa}; }
};

/// Defaults of a builtin example (T, sigma, gamma, and tol_rho for ex3).
ExperimentSpec builtin_example(const std::string& id);

/// Applies `key=value` settings (keys mirror the ExperimentSpec fields and the
/// CLI flags: example, alpha, T, sigma, seed, seeds, g, Jmax, Jref, reg, rho,
/// tol-rho, max-iters).  Unknown keys throw InvalidArgumentError.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Flat `key=value` text; `#` starts a comment.
std::map<std::string, std::string> parse_config(const std::string& text);

/// True initial velocity of a builtin example, J_ref x J_ref modes.
SpectralField truth_field(const std::string& id, int J_ref);

struct SeedOutcome {
    std::uint64_t seed = 0;
    Observations obs;
    SolveResult result;
    ErrorNorms err;
    std::optional<ParamTrace> trace;
    int iterations = 1;
};

struct Aggregate {
    double mean = 0.0;
    double stddev = 0.0;  ///< sample standard deviation (0 for a single seed)
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::size_t n = 0;
    std::vector<SeedOutcome> seeds;
    Aggregate err_L2;
    Aggregate err_Hm1;
    Aggregate rho_final;
};

/// Context reused across seeds and sweeps: the truth, its forward image at
/// the observation points and the assembled design system.
struct ExperimentSetup {
    ExperimentSpec spec;
    SpectralField truth;
    PointSet points;
    DesignSystem design;
    std::vector<double> exact;  ///< noise-free (S a*)(x_i) from the J_ref truth
};

ExperimentSetup prepare_experiment(const ExperimentSpec& spec);

SeedOutcome run_seed(const ExperimentSetup& setup, std::uint64_t seed);
SeedOutcome run_seed(const ExperimentSetup& setup, std::uint64_t seed, RhoMode mode, double rho);

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Summary record for one seed.
nlohmann::ordered_json summary_json(const ExperimentSpec& spec, std::size_t n, const SeedOutcome& s);
nlohmann::ordered_json aggregate_json(const ExperimentResult& r);

/// Writes per-seed summary JSON, observation CSV (+ metadata), reconstruction
/// grid CSV (160 x 160), the parameter trace when iterating, and one
/// aggregate JSON.  Returns the list of files written.
std::vector<std::string> write_bundle(const ExperimentResult& r, const std::string& out_dir);

struct SweepPoint {
    int k = 0;
    double rho = 0.0;
    double err_L2 = 0.0;  ///< mean over the spec's seeds
    double err_Hm1 = 0.0;
};

/// Fixed-rho solves at rho = 10^{-k} for k in [k_lo, k_hi].
std::vector<SweepPoint> rho_sweep(const ExperimentSpec& spec, int k_lo, int k_hi);

}  // namespace fracwave
