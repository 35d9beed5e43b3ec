#include "fracwave/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "fracwave/errors.hpp"

namespace fracwave {

namespace {

constexpr int kPlotGrid = 160;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidArgumentError("invalid number for " + key + ": " + v);
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw InvalidArgumentError("invalid integer for " + key + ": " + v);
    }
}

// "7" -> {7}; "1-10" -> {1..10}; "3,5,9" -> {3,5,9}
std::vector<std::uint64_t> parse_seeds(const std::string& v) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (part.empty()) continue;
        const auto dash = part.find('-');
        try {
            if (dash != std::string::npos && dash > 0) {
                const auto lo = std::stoull(part.substr(0, dash));
                const auto hi = std::stoull(part.substr(dash + 1));
                if (hi < lo) throw std::invalid_argument(part);
                for (auto s = lo; s <= hi; ++s) out.push_back(s);
            } else {
                out.push_back(std::stoull(part));
            }
        } catch (const std::exception&) {
            throw InvalidArgumentError("invalid seed list: " + v);
        }
    }
    if (out.empty()) throw InvalidArgumentError("empty seed list");
    return out;
}

Aggregate aggregate(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) return a;
    a.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double s = 0.0;
        for (double x : xs) s += (x - a.mean) * (x - a.mean);
        a.stddev = std::sqrt(s / static_cast<double>(xs.size() - 1));
    }
    return a;
}

}  // namespace

std::string to_string(RhoMode mode) {
    switch (mode) {
        case RhoMode::Fixed: return "fixed";
        case RhoMode::Auto: return "auto";
        case RhoMode::Oracle: return "oracle";
    }
    return "unknown";
}

RhoMode rho_mode_from_string(const std::string& s) {
    if (s == "fixed") return RhoMode::Fixed;
    if (s == "auto") return RhoMode::Auto;
    if (s == "oracle") return RhoMode::Oracle;
    throw InvalidArgumentError("unknown rho mode: " + s);
}

void ExperimentSpec::validate() const {
    if (example != "ex1" && example != "ex2" && example != "ex3") {
        throw InvalidArgumentError("unknown example id: " + example);
    }
    forward_config().validate();
    if (!(sigma >= 0.0)) throw InvalidArgumentError("sigma must be non-negative");
    if (seeds.empty()) throw InvalidArgumentError("at least one seed is required");
    if (g < 2) throw InvalidArgumentError("observation grid needs g >= 2");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw InvalidArgumentError("gamma must lie in [0, 1]");
    if (J_ref < J_max) throw InvalidArgumentError("J_ref must be at least J_max");
    if (static_cast<long>(g) * g < static_cast<long>(J_max) * J_max) {
        throw InvalidArgumentError("more modes than observation points");
    }
    if (rho_mode == RhoMode::Fixed && !(rho > 0.0)) throw InvalidArgumentError("fixed rho must be positive");
    if (max_iters < 1) throw InvalidArgumentError("max_iters must be positive");
}

ExperimentSpec builtin_example(const std::string& id) {
    ExperimentSpec s;
    s.example = id;
    if (id == "ex1") {
        s.T = 1.0;
        s.sigma = 0.2;
        s.gamma = 0.5;
    } else if (id == "ex2") {
        s.T = 1.0;
        s.sigma = 0.4;
        s.gamma = 0.5;
    } else if (id == "ex3") {
        s.T = 0.1;
        s.sigma = 0.01;
        s.gamma = 0.0;
        s.tol_rho = 1e-7;
    } else {
        throw InvalidArgumentError("unknown example id: " + id);
    }
    return s;
}

void apply_setting(ExperimentSpec& spec, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    if (key == "example") {
        const ExperimentSpec base = builtin_example(value);
        spec.example = base.example;
        spec.T = base.T;
        spec.sigma = base.sigma;
        spec.gamma = base.gamma;
        spec.tol_rho = base.tol_rho;
    } else if (key == "alpha") {
        spec.alpha = parse_double(key, value);
    } else if (key == "T") {
        spec.T = parse_double(key, value);
    } else if (key == "sigma") {
        spec.sigma = parse_double(key, value);
    } else if (key == "seed") {
        spec.seeds = {parse_seeds(value).front()};
    } else if (key == "seeds") {
        // a bare count means seeds 1..count
        if (value.find_first_of("-,") == std::string::npos) {
            const int count = parse_int(key, value);
            if (count < 1) throw InvalidArgumentError("seed count must be positive");
            spec.seeds.resize(static_cast<std::size_t>(count));
            std::iota(spec.seeds.begin(), spec.seeds.end(), std::uint64_t{1});
        } else {
            spec.seeds = parse_seeds(value);
        }
    } else if (key == "g") {
        spec.g = parse_int(key, value);
    } else if (key == "Jmax" || key == "J_max") {
        spec.J_max = parse_int(key, value);
    } else if (key == "Jref" || key == "J_ref") {
        spec.J_ref = parse_int(key, value);
    } else if (key == "kappa") {
        spec.kappa = parse_double(key, value);
    } else if (key == "gamma") {
        spec.gamma = parse_double(key, value);
    } else if (key == "reg") {
        if (value == "l2") {
            spec.gamma = 0.0;
        } else if (value == "h1") {
            spec.gamma = 0.5;
        } else {
            throw InvalidArgumentError("reg must be l2 or h1, got " + value);
        }
    } else if (key == "rho") {
        if (value == "auto" || value == "oracle") {
            spec.rho_mode = rho_mode_from_string(value);
        } else {
            spec.rho_mode = RhoMode::Fixed;
            spec.rho = parse_double(key, value);
        }
    } else if (key == "tol-rho" || key == "tol_rho") {
        spec.tol_rho = parse_double(key, value);
    } else if (key == "max-iters" || key == "max_iters") {
        spec.max_iters = parse_int(key, value);
    } else {
        throw InvalidArgumentError("unknown setting: " + key);
    }
}

std::map<std::string, std::string> parse_config(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidArgumentError("config line " + std::to_string(lineno) + " lacks '='");
        }
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

SpectralField truth_field(const std::string& id, int J_ref) {
    constexpr double pi = std::numbers::pi;
    if (id == "ex1") {
        return project_separable([](double x) { return 8.0 * std::pow(x, 1.01) * (x - 1.0); },
                                 [](double y) { return std::sin(pi * y); }, J_ref);
    }
    if (id == "ex2") {
        return project_separable([](double x) { return 7.0 * std::pow(x, 0.75) * (x - 1.0); },
                                 [](double y) { return std::sin(2.0 * pi * y); }, J_ref);
    }
    if (id == "ex3") return project_box_indicator(0.25, 0.75, J_ref);
    throw InvalidArgumentError("unknown example id: " + id);
}

ExperimentSetup prepare_experiment(const ExperimentSpec& spec) {
    spec.validate();
    ExperimentSetup setup;
    setup.spec = spec;
    setup.truth = truth_field(spec.example, spec.J_ref);
    setup.points = uniform_grid_points(spec.g);
    setup.design = assemble(setup.points, spec.forward_config(), spec.gamma);
    ForwardConfig truth_cfg = spec.forward_config();
    truth_cfg.J_max = spec.J_ref;
    setup.exact = synthesize(apply_S(setup.truth, truth_cfg), setup.points.points);
    return setup;
}

SeedOutcome run_seed(const ExperimentSetup& setup, std::uint64_t seed) {
    return run_seed(setup, seed, setup.spec.rho_mode, setup.spec.rho);
}

SeedOutcome run_seed(const ExperimentSetup& setup, std::uint64_t seed, RhoMode mode, double rho) {
    const ExperimentSpec& spec = setup.spec;
    SeedOutcome out;
    out.seed = seed;
    out.obs.pointset = setup.points;
    out.obs.sigma = spec.sigma;
    out.obs.seed = seed;
    out.obs.m = setup.exact;
    const std::vector<double> e = gaussian_noise(out.obs.m.size(), spec.sigma, seed);
    for (std::size_t i = 0; i < e.size(); ++i) out.obs.m[i] += e[i];

    ParamConfig pc = default_param_config(spec.gamma, setup.points.size());
    if (spec.tol_rho > 0.0) pc.tol_rho = spec.tol_rho;
    pc.max_iters = spec.max_iters;

    switch (mode) {
        case RhoMode::Fixed:
            out.result = solve(setup.design, out.obs, rho);
            break;
        case RhoMode::Oracle: {
            const SpectralField truth = setup.truth;
            const double r = std::max(pc.rho_min, oracle_rho(spec.sigma, norm_gamma(truth, spec.gamma), pc));
            out.result = solve(setup.design, out.obs, r);
            break;
        }
        case RhoMode::Auto: {
            ParamTrace trace = iterate(setup.design, out.obs, pc);
            out.result = trace.final;
            out.iterations = static_cast<int>(trace.iterations.size());
            out.trace = std::move(trace);
            break;
        }
    }
    out.err = errors(out.result.a_rec, setup.truth);
    return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const ExperimentSetup setup = prepare_experiment(spec);
    ExperimentResult r;
    r.spec = spec;
    r.n = setup.points.size();
    std::vector<double> l2, hm1, rho;
    for (std::uint64_t seed : spec.seeds) {
        r.seeds.push_back(run_seed(setup, seed));
        l2.push_back(r.seeds.back().err.err_L2);
        hm1.push_back(r.seeds.back().err.err_Hm1);
        rho.push_back(r.seeds.back().result.rho);
    }
    r.err_L2 = aggregate(l2);
    r.err_Hm1 = aggregate(hm1);
    r.rho_final = aggregate(rho);
    return r;
}

nlohmann::ordered_json summary_json(const ExperimentSpec& spec, std::size_t n, const SeedOutcome& s) {
    nlohmann::ordered_json j;
    j["example"] = spec.example;
    j["alpha"] = spec.alpha;
    j["T"] = spec.T;
    j["sigma"] = spec.sigma;
    j["gamma"] = spec.gamma;
    j["n"] = n;
    j["J_max"] = spec.J_max;
    j["rho_mode"] = to_string(spec.rho_mode);
    j["rho_final"] = s.result.rho;
    j["residual_n"] = s.result.residual_n;
    j["norm_X"] = s.result.norm_X;
    j["err_L2"] = s.err.err_L2;
    j["err_Hm1"] = s.err.err_Hm1;
    j["iterations"] = s.iterations;
    j["converged"] = s.trace ? s.trace->converged : true;
    j["floored_modes"] = s.result.floored.size();
    j["seed"] = s.seed;
    return j;
}

nlohmann::ordered_json aggregate_json(const ExperimentResult& r) {
    auto agg = [](const Aggregate& a) {
        nlohmann::ordered_json j;
        j["mean"] = a.mean;
        j["stddev"] = a.stddev;
        return j;
    };
    nlohmann::ordered_json j;
    j["example"] = r.spec.example;
    j["alpha"] = r.spec.alpha;
    j["T"] = r.spec.T;
    j["sigma"] = r.spec.sigma;
    j["gamma"] = r.spec.gamma;
    j["n"] = r.n;
    j["J_max"] = r.spec.J_max;
    j["rho_mode"] = to_string(r.spec.rho_mode);
    j["seeds"] = r.spec.seeds;
    j["err_L2"] = agg(r.err_L2);
    j["err_Hm1"] = agg(r.err_Hm1);
    j["rho_final"] = agg(r.rho_final);
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& s : r.seeds) j["runs"].push_back(summary_json(r.spec, r.n, s));
    return j;
}

std::vector<std::string> write_bundle(const ExperimentResult& r, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> files;
    const std::string base = r.spec.example + "_a" + [&] {
        std::ostringstream os;
        os << r.spec.alpha;
        return os.str();
    }();
    auto write_text = [&](const fs::path& p, const std::string& text) {
        std::ofstream os(p);
        if (!os) throw IoError("cannot write " + p.string());
        os << text;
        files.push_back(p.string());
    };

    const ForwardConfig cfg = r.spec.forward_config();
    for (const auto& s : r.seeds) {
        const std::string stem = base + "_seed" + std::to_string(s.seed);
        write_text(fs::path(out_dir) / (stem + "_summary.json"), summary_json(r.spec, r.n, s).dump(2) + "\n");
        const std::string obs_stem = (fs::path(out_dir) / (stem + "_obs")).string();
        save_observations(obs_stem, s.obs, cfg);
        files.push_back(obs_stem + ".csv");
        files.push_back(obs_stem + ".meta.json");
        {
            std::ostringstream os;
            write_grid_csv(os, synthesize_grid(s.result.a_rec, kPlotGrid));
            write_text(fs::path(out_dir) / (stem + "_reconstruction.csv"), os.str());
        }
        if (s.trace) {
            std::ostringstream os;
            write_trace_csv(os, *s.trace);
            write_text(fs::path(out_dir) / (stem + "_trace.csv"), os.str());
        }
    }
    write_text(fs::path(out_dir) / (base + "_aggregate.json"), aggregate_json(r).dump(2) + "\n");
    return files;
}

std::vector<SweepPoint> rho_sweep(const ExperimentSpec& spec, int k_lo, int k_hi) {
    if (k_hi < k_lo) throw InvalidArgumentError("empty sweep range");
    const ExperimentSetup setup = prepare_experiment(spec);
    std::vector<SweepPoint> out;
    for (int k = k_lo; k <= k_hi; ++k) {
        SweepPoint p;
        p.k = k;
        p.rho = std::pow(10.0, -k);
        for (std::uint64_t seed : spec.seeds) {
            const SeedOutcome s = run_seed(setup, seed, RhoMode::Fixed, p.rho);
            p.err_L2 += s.err.err_L2;
            p.err_Hm1 += s.err.err_Hm1;
        }
        p.err_L2 /= static_cast<double>(spec.seeds.size());
        p.err_Hm1 /= static_cast<double>(spec.seeds.size());
        out.push_back(p);
    }
    return out;
}

}  // namespace fracwave
