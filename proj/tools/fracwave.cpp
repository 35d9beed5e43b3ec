// Command-line front end: experiment runner plus thin wrappers over the
// individual pipeline stages.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fracwave/errors.hpp"
#include "fracwave/experiment.hpp"
#include "fracwave/mittag_leffler.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace fracwave;

namespace {

// Spec-shaped flags shared by the experiment subcommands.  Values are kept as
// strings and applied through apply_setting so that CLI, config file and
// builtin defaults go through one parser.
struct SpecFlags {
    std::string config;
    std::string example;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    std::map<std::string, std::string> values;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        options.emplace_back(key, app->add_option(flag, values[key], help));
    }

    ExperimentSpec build() const {
        std::map<std::string, std::string> file;
        if (!config.empty()) {
            std::ifstream is(config);
            if (!is) throw IoError("cannot read config file " + config);
            std::stringstream ss;
            ss << is.rdbuf();
            file = parse_config(ss.str());
        }
        std::string id = "ex1";
        if (auto it = file.find("example"); it != file.end()) id = it->second;
        if (!example.empty()) id = example;

        ExperimentSpec spec = builtin_example(id);
        for (const auto& [k, v] : file) {
            if (k != "example") apply_setting(spec, k, v);
        }
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) apply_setting(spec, key, values.at(key));
        }
        spec.validate();
        return spec;
    }
};

void add_problem_flags(CLI::App* app, SpecFlags& f) {
    app->add_option("--example,example", f.example, "builtin example: ex1, ex2 or ex3");
    app->add_option("--config", f.config, "key=value configuration file");
    f.add(app, "--alpha", "alpha", "fractional order in (1, 2)");
    f.add(app, "--T", "T", "terminal time");
    f.add(app, "--kappa", "kappa", "diffusion coefficient");
    f.add(app, "--Jmax", "Jmax", "modes per direction in the reconstruction");
}

void add_experiment_flags(CLI::App* app, SpecFlags& f) {
    add_problem_flags(app, f);
    f.add(app, "--sigma", "sigma", "noise standard deviation");
    f.add(app, "--seed", "seed", "single noise seed");
    f.add(app, "--seeds", "seeds", "seed count N (seeds 1..N), range a-b or list a,b,c");
    f.add(app, "--g", "g", "observation grid size (n = g^2)");
    f.add(app, "--Jref", "Jref", "modes per direction of the reference truth");
    f.add(app, "--reg", "reg", "penalty: l2 or h1");
    f.add(app, "--rho", "rho", "auto, oracle or a fixed positive value");
    f.add(app, "--tol-rho", "tol-rho", "stopping tolerance of the parameter iteration");
    f.add(app, "--max-iters", "max-iters", "solve budget of the parameter iteration");
}

std::string output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("FRACWAVE_OUT"); env && *env) return env;
    return "fracwave_out";
}

void print(const ordered_json& j) { std::cout << j.dump(2) << std::endl; }

ordered_json error_json(const std::string& kind, const std::string& message) {
    ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    return j;
}

ordered_json diagnose_report(double alpha, double T, int J, int g, double gamma, double kappa) {
    ordered_json out;
    out["alpha"] = alpha;
    out["T"] = T;
    out["kappa"] = kappa;

    ordered_json roots;
    if (alpha > 4.0 / 3.0) {
        const double bound = std::max(1e3, 4.0 * kappa * eigenvalue({J, J}) * std::pow(T, alpha));
        const RootSet rs = find_real_roots(alpha, bound);
        roots["search_bound"] = rs.search_bound;
        roots["tail_certified"] = rs.tail_certified;
        roots["t"] = rs.roots;
    } else {
        roots["t"] = ordered_json::array();
        roots["note"] = "E_{alpha,2}(-t) has no positive zeros for alpha <= 4/3";
    }
    out["roots"] = roots;

    const ForwardConfig cfg{alpha, T, J, kappa};
    const DesignSystem ds = assemble(uniform_grid_points(g), cfg, gamma);
    int below = 0, above = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= J; ++k) {
        for (int j = 1; j <= J; ++j) {
            const auto c = propagator_conditioning(alpha, kappa * eigenvalue({j, k}), T);
            below += c.below_window;
            above += c.above_window;
            worst = std::min(worst, c.scaled);
        }
    }
    out["propagator"] = {{"modes", J * J},
                         {"below_window", below},
                         {"above_window", above},
                         {"min_scaled", worst},
                         {"floored", ds.floored.size()}};

    const int k_max = std::min<int>(static_cast<int>(ds.N()), 32);
    const auto mu = eigen_growth_diagnostic(ds, k_max);
    ordered_json eig;
    eig["g"] = g;
    eig["J_max"] = J;
    eig["gamma"] = gamma;
    eig["mu"] = ordered_json::array();
    for (const auto& [k, v] : mu) eig["mu"].push_back(v);
    eig["loglog_slope"] = loglog_slope(mu);
    eig["expected_rate"] = 4.0 * (1.0 + gamma) / 2.0;
    out["eigen_growth"] = eig;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Backward problem for the time-fractional wave equation on the unit square"};
    app.require_subcommand(1);
    std::string out_flag;

    // run
    SpecFlags run_f;
    auto* run = app.add_subcommand("run", "full experiment: observations, reconstruction, errors");
    add_experiment_flags(run, run_f);
    run->add_option("--out-dir", out_flag, "output directory (default $FRACWAVE_OUT or ./fracwave_out)");

    // sweep
    SpecFlags sweep_f;
    int k_min = 2, k_max = 8;
    auto* sweep = app.add_subcommand("sweep", "errors of fixed-rho solves at rho = 10^-k");
    add_experiment_flags(sweep, sweep_f);
    sweep->add_option("--k-min", k_min, "smallest k")->capture_default_str();
    sweep->add_option("--k-max", k_max, "largest k")->capture_default_str();
    sweep->add_option("--out-dir", out_flag, "output directory");

    // forward
    SpecFlags fwd_f;
    int fwd_grid = 200;
    std::string fwd_out;
    auto* forward = app.add_subcommand("forward", "S a1 of a builtin example on a g x g grid");
    add_problem_flags(forward, fwd_f);
    forward->add_option("--grid", fwd_grid, "grid size of the output")->capture_default_str();
    forward->add_option("-o,--output", fwd_out, "grid CSV path");

    // observe
    SpecFlags obs_f;
    std::string obs_out;
    auto* observe = app.add_subcommand("observe", "noisy terminal observations on the uniform grid");
    add_experiment_flags(observe, obs_f);
    observe->add_option("-o,--output", obs_out, "observation CSV path")->required();

    // reconstruct / autoparam
    SpecFlags rec_f, auto_f;
    std::string rec_obs, rec_out, auto_obs, auto_out;
    auto* reconstruct = app.add_subcommand("reconstruct", "Tikhonov reconstruction from an observation CSV");
    add_experiment_flags(reconstruct, rec_f);
    reconstruct->add_option("--obs", rec_obs, "observation CSV (metadata read from <stem>.meta.json)")->required();
    reconstruct->add_option("-o,--output", rec_out, "reconstruction grid CSV (160 x 160)");
    auto* autoparam = app.add_subcommand("autoparam", "fixed-point parameter iteration on an observation CSV");
    add_experiment_flags(autoparam, auto_f);
    autoparam->add_option("--obs", auto_obs, "observation CSV")->required();
    autoparam->add_option("-o,--output", auto_out, "trace CSV path");

    // ml-eval
    double ml_alpha = 1.5, ml_beta = 2.0, ml_z = 0.0;
    auto* mleval = app.add_subcommand("ml-eval", "evaluate E_{alpha,beta}(z)");
    mleval->add_option("--alpha", ml_alpha)->required();
    mleval->add_option("--beta", ml_beta)->capture_default_str();
    mleval->add_option("--z", ml_z)->required();

    // diagnose
    double dg_alpha = 1.5, dg_T = 1.0, dg_gamma = 0.5, dg_kappa = kReferenceKappa;
    int dg_J = 8, dg_g = 12;
    auto* diagnose = app.add_subcommand("diagnose", "propagator roots, conditioning and eigenvalue growth");
    diagnose->add_option("--alpha", dg_alpha)->required();
    diagnose->add_option("--T", dg_T)->capture_default_str();
    diagnose->add_option("--Jmax", dg_J)->capture_default_str();
    diagnose->add_option("--g", dg_g)->capture_default_str();
    diagnose->add_option("--gamma", dg_gamma)->capture_default_str();
    diagnose->add_option("--kappa", dg_kappa)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        print(error_json("usage", e.what()));
        return 2;
    }

    try {
        if (*run) {
            const ExperimentSpec spec = run_f.build();
            const ExperimentResult r = run_experiment(spec);
            const auto files = write_bundle(r, output_dir(out_flag));
            ordered_json j = aggregate_json(r);
            j["files"] = files;
            print(j);
        } else if (*sweep) {
            const ExperimentSpec spec = sweep_f.build();
            const auto points = rho_sweep(spec, k_min, k_max);
            const fs::path dir = output_dir(out_flag);
            fs::create_directories(dir);
            const fs::path path = dir / (spec.example + "_sweep.csv");
            std::ofstream os(path);
            if (!os) throw IoError("cannot write " + path.string());
            std::ostringstream csv;
            csv << "k,rho,err_L2,err_Hm1\n" << std::setprecision(10);
            for (const auto& p : points) csv << p.k << ',' << p.rho << ',' << p.err_L2 << ',' << p.err_Hm1 << '\n';
            os << csv.str();
            std::cout << csv.str();
        } else if (*forward) {
            ExperimentSpec spec = fwd_f.build();
            ForwardConfig cfg = spec.forward_config();
            cfg.J_max = spec.J_ref;
            const GridFunction grid = forward_grid(truth_field(spec.example, spec.J_ref), cfg, fwd_grid);
            if (!fwd_out.empty()) write_grid_csv(fwd_out, grid);
            print({{"example", spec.example}, {"alpha", spec.alpha}, {"T", spec.T}, {"grid", fwd_grid},
                   {"sup_norm", grid.max_abs()}});
        } else if (*observe) {
            const ExperimentSpec spec = obs_f.build();
            const Observations obs = sample_observations(truth_field(spec.example, spec.J_ref), spec.forward_config(),
                                                         uniform_grid_points(spec.g), spec.sigma, spec.seeds.front());
            std::string stem = obs_out;
            if (fs::path(stem).extension() == ".csv") stem = stem.substr(0, stem.size() - 4);
            save_observations(stem, obs, spec.forward_config());
            print({{"observations", stem + ".csv"}, {"meta", stem + ".meta.json"}, {"n", obs.size()}});
        } else if (*reconstruct || *autoparam) {
            SpecFlags& f = *reconstruct ? rec_f : auto_f;
            const std::string& obs_path = *reconstruct ? rec_obs : auto_obs;
            ObservationMeta meta;
            const Observations obs = load_observations(obs_path, &meta);
            // metadata supplies the forward model unless the CLI overrides it
            ExperimentSpec spec = f.build();
            if (meta.alpha > 0.0 && f.values["alpha"].empty()) spec.alpha = meta.alpha;
            if (meta.T > 0.0 && f.values["T"].empty()) spec.T = meta.T;
            if (meta.T > 0.0 && f.values["kappa"].empty()) spec.kappa = meta.kappa;
            spec.sigma = obs.sigma;
            spec.seeds = {obs.seed};
            const DesignSystem ds = assemble(obs.pointset, spec.forward_config(), spec.gamma);

            ParamConfig pc = default_param_config(spec.gamma, obs.size());
            if (spec.tol_rho > 0.0) pc.tol_rho = spec.tol_rho;
            pc.max_iters = spec.max_iters;

            SeedOutcome s;
            s.seed = obs.seed;
            if (*autoparam || spec.rho_mode == RhoMode::Auto) {
                ParamTrace trace = iterate(ds, obs, pc);
                s.result = trace.final;
                s.iterations = static_cast<int>(trace.iterations.size());
                s.trace = std::move(trace);
            } else if (spec.rho_mode == RhoMode::Oracle) {
                const SpectralField truth = truth_field(spec.example, spec.J_ref);
                s.result = solve(ds, obs, std::max(pc.rho_min, oracle_rho(spec.sigma, norm_gamma(truth, spec.gamma), pc)));
            } else {
                s.result = solve(ds, obs, spec.rho);
            }
            s.err = errors(s.result.a_rec, truth_field(spec.example, spec.J_ref));

            if (*autoparam) {
                if (!auto_out.empty()) {
                    std::ofstream os(auto_out);
                    if (!os) throw IoError("cannot write " + auto_out);
                    write_trace_csv(os, *s.trace);
                } else {
                    write_trace_csv(std::cout, *s.trace);
                }
            }
            if (*reconstruct && !rec_out.empty()) write_grid_csv(rec_out, synthesize_grid(s.result.a_rec, 160));
            print(summary_json(spec, obs.size(), s));
        } else if (*mleval) {
            const double v = ml({ml_alpha, ml_beta}, ml_z);
            ordered_json j;
            j["alpha"] = ml_alpha;
            j["beta"] = ml_beta;
            j["z"] = ml_z;
            j["value"] = v;
            print(j);
        } else if (*diagnose) {
            print(diagnose_report(dg_alpha, dg_T, dg_J, dg_g, dg_gamma, dg_kappa));
        }
    } catch (const Error& e) {
        print(error_json(e.kind(), e.what()));
        return 1;
    } catch (const std::exception& e) {
        print(error_json("internal", e.what()));
        return 1;
    }
    return 0;
}
