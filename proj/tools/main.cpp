// Experiment runner: parameter sweeps and figure-data emission for the
// sawtooth-map toolkit. Every data command writes a CSV plus a .json sidecar
// that fully reconstructs the run on the same build.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sawtooth/analysis.hpp"
#include "sawtooth/bounds.hpp"
#include "sawtooth/classical.hpp"
#include "sawtooth/evolve.hpp"
#include "sawtooth/hardware.hpp"
#include "sawtooth/io.hpp"
#include "sawtooth/params.hpp"
#include "sawtooth/version.hpp"

namespace {

using namespace sawtooth;

struct MapOptions {
    int n = 6;
    int L = 1;
    double K = 0.0;
    double k = 0.0;
    CLI::Option* opt_K = nullptr;
    CLI::Option* opt_k = nullptr;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--n", n, "qubit count")->required()->check(CLI::Range(1, kMaxQubits));
        cmd->add_option("--L", L, "torus winding number")->check(CLI::Range(1, 1 << 20));
        opt_K = cmd->add_option("--K", K, "classical kick strength");
        opt_k = cmd->add_option("--k", k, "quantum kick strength");
        opt_K->excludes(opt_k);
        opt_k->excludes(opt_K);
    }

    MapParams params() const {
        if (opt_K->count() > 0) return params_from_classical_kick(n, L, K);
        if (opt_k->count() > 0) return params_from_quantum_kick(n, L, k);
        throw CLI::ValidationError("exactly one of --K or --k is required");
    }
};

std::vector<double> parse_grid(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError(std::string(what) + ": not a number: " + item);
        }
    }
    if (values.empty()) throw CLI::ValidationError(std::string(what) + ": empty grid");
    return values;
}

std::vector<double> dedupe_sorted(std::vector<double> values, const char* what) {
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    for (double v : values) {
        if (!out.empty() && v == out.back()) {
            std::cerr << "warning: duplicate " << what << " value " << format_number(v)
                      << " dropped\n";
            continue;
        }
        out.push_back(v);
    }
    return out;
}

nlohmann::json map_config(const MapParams& p) {
    return {{"n", p.qubits},          {"N", p.basis_size},
            {"L", p.winding},         {"hbar", p.hbar},
            {"K", p.kick_classical},  {"k", p.kick_quantum},
            {"cat_map", p.cat_map},   {"even_winding", p.even_winding}};
}

LocMethod method_from_string(const std::string& m) {
    if (m == "exact") return LocMethod::exact;
    if (m == "series3") return LocMethod::series3;
    throw CLI::ValidationError("--method must be 'exact' or 'series3'");
}

// ---------------------------------------------------------------------------
// fidelity: one trace, columns t, f_mean, f_stderr, f_unfolded.
// ---------------------------------------------------------------------------

struct FidelityConfig {
    MapOptions map;
    double sigma = 0.0;
    int steps = 12;
    std::size_t realizations = 100;
    int p0 = 0;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::string out;
};

void run_fidelity(const FidelityConfig& cfg) {
    const MapParams params = cfg.map.params();
    const FidelityTrace trace = echo_fidelity_trace(params, cfg.sigma, cfg.steps,
                                                    cfg.realizations, cfg.seed, cfg.p0, cfg.threads);
    const std::vector<double> unfolded = unfold(trace);
    CsvWriter csv(cfg.out, {"t", "f_mean", "f_stderr", "f_unfolded"});
    for (int t = 0; t <= trace.steps(); ++t)
        csv.row({static_cast<double>(t), trace.f_mean[t], trace.f_std_error[t], unfolded[t]});
    csv.close();
    nlohmann::json j = {{"command", "fidelity"},
                        {"sigma", cfg.sigma},
                        {"steps", cfg.steps},
                        {"realizations", cfg.realizations},
                        {"p0", cfg.p0},
                        {"seed", cfg.seed},
                        {"threads", cfg.threads},
                        {"out", cfg.out}};
    j["map"] = map_config(params);
    write_sidecar(cfg.out, j);
    if (params.cat_map)
        std::cerr << "warning: K/L is an integer; kick phases are not pseudorandom (cat map)\n";
}

// ---------------------------------------------------------------------------
// sigma-sweep: decay rates vs noise, Fermi-golden-rule projection included.
// ---------------------------------------------------------------------------

struct SweepConfig {
    MapOptions map;
    std::string sigma_grid;
    int steps = 12;
    std::size_t realizations = 100;
    int p0 = 0;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    bool use_unfolded = false;
    std::string out;
};

std::size_t count_fit_window(const std::vector<double>& f, std::size_t basis_size) {
    const double cut = 2.0 / static_cast<double>(basis_size);
    std::size_t c = 0;
    for (std::size_t t = 2; t < f.size(); ++t)
        if (f[t] > cut) ++c;
    return c;
}

void run_sweep(const SweepConfig& cfg) {
    const MapParams params = cfg.map.params();
    const std::vector<double> grid = dedupe_sorted(parse_grid(cfg.sigma_grid, "--sigma-grid"), "sigma");
    if (grid.size() < 2) throw CLI::ValidationError("--sigma-grid needs at least two distinct points");
    const double lambda = lyapunov_exponent(params.kick_classical);

    struct Row {
        double sigma, gamma0, gamma_t2, gamma_fit;
        std::size_t fit_points;
    };
    std::vector<Row> rows;
    for (double sigma : grid) {
        const FidelityTrace trace = echo_fidelity_trace(params, sigma, cfg.steps, cfg.realizations,
                                                        cfg.seed, cfg.p0, cfg.threads);
        Row row{sigma, std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), 0};
        try {
            row.gamma0 = initial_decay_rate(trace);
        } catch (const std::runtime_error&) {
        }
        const std::vector<double> g = stepwise_rates(trace);
        if (g.size() > 2) row.gamma_t2 = g[2];
        try {
            const RateFit fit = fit_intermediate_rate(trace, cfg.use_unfolded);
            row.gamma_fit = fit.gamma;
            row.fit_points = fit.points;
        } catch (const UnderconstrainedFit&) {
            row.fit_points = count_fit_window(trace.f_mean, params.basis_size);
        }
        rows.push_back(row);
    }

    // Golden-rule projection C sigma^2 with C taken from the smallest sigma.
    double c_golden = std::numeric_limits<double>::quiet_NaN();
    for (const Row& r : rows)
        if (r.sigma > 0.0 && std::isfinite(r.gamma0)) {
            c_golden = r.gamma0 / (r.sigma * r.sigma);
            break;
        }

    CsvWriter csv(cfg.out, {"sigma", "gamma0", "gamma_at_t2", "gamma_fit", "fit_points",
                            "lambda_K", "gamma0_golden_rule"});
    for (const Row& r : rows)
        csv.row({r.sigma, r.gamma0, r.gamma_t2, r.gamma_fit, static_cast<double>(r.fit_points),
                 lambda, c_golden * r.sigma * r.sigma});
    csv.close();

    nlohmann::json j = {{"command", "sigma-sweep"}, {"sigma_grid", grid},
                        {"steps", cfg.steps},       {"realizations", cfg.realizations},
                        {"p0", cfg.p0},             {"seed", cfg.seed},
                        {"threads", cfg.threads},   {"unfold", cfg.use_unfolded},
                        {"out", cfg.out}};
    j["map"] = map_config(params);
    write_sidecar(cfg.out, j);
}

// ---------------------------------------------------------------------------
// regime and min-qubits: closed-form bound tables.
// ---------------------------------------------------------------------------

std::vector<std::string> regime_row(const RegimeBounds& r) {
    return {std::to_string(r.qubits),
            format_number(r.kick_loc),
            format_number(r.lambda_loc_exact),
            format_number(r.lambda_loc_series3),
            format_number(r.lambda_star),
            format_number(r.gamma0_max_at_loc),
            format_number(r.area),
            r.nonempty ? "1" : "0"};
}

const std::vector<std::string> kRegimeHeader = {
    "n", "K_loc", "lambda_loc_exact", "lambda_loc_series3", "lambda_star",
    "gamma0_max_at_corner", "region_area", "nonempty"};

struct RegimeConfig {
    int n_min = 3;
    int n_max = 14;
    int L = 1;
    std::string method = "exact";
    BoundConstants constants;
    std::string out;
};

void run_regime(const RegimeConfig& cfg) {
    if (cfg.n_min > cfg.n_max) throw CLI::ValidationError("empty qubit range: --n-min > --n-max");
    const LocMethod method = method_from_string(cfg.method);
    CsvWriter csv(cfg.out, kRegimeHeader);
    for (int n = cfg.n_min; n <= cfg.n_max; ++n)
        csv.row(regime_row(lyapunov_region(n, cfg.L, method, cfg.constants)));
    csv.close();
    write_sidecar(cfg.out, {{"command", "regime"},
                            {"n_min", cfg.n_min},
                            {"n_max", cfg.n_max},
                            {"L", cfg.L},
                            {"method", cfg.method},
                            {"a_late", cfg.constants.a_late},
                            {"t_lyap", cfg.constants.t_lyap},
                            {"t_early", cfg.constants.t_early},
                            {"out", cfg.out}});
}

struct MinQubitsConfig {
    int L = 1;
    int max_n = 20;
    std::string method = "exact";
    BoundConstants constants;
    std::string out;  // optional per-n table
};

void run_min_qubits(const MinQubitsConfig& cfg) {
    const MinQubitsReport report =
        min_qubits(cfg.L, method_from_string(cfg.method), cfg.max_n, cfg.constants);
    if (report.n_min < 0)
        std::cout << "n_min > " << cfg.max_n << " (no nonempty region found)\n";
    else
        std::cout << "n_min = " << report.n_min << "\n";
    if (!cfg.out.empty()) {
        CsvWriter csv(cfg.out, kRegimeHeader);
        for (const RegimeBounds& r : report.table) csv.row(regime_row(r));
        csv.close();
        write_sidecar(cfg.out, {{"command", "min-qubits"},
                                {"L", cfg.L},
                                {"max_n", cfg.max_n},
                                {"method", cfg.method},
                                {"n_min", report.n_min},
                                {"out", cfg.out}});
    }
}

// ---------------------------------------------------------------------------
// hardware: error-reduction factors per profile and qubit count.
// ---------------------------------------------------------------------------

struct HardwareConfig {
    std::vector<std::string> profile_paths;
    int n_min = 6;
    int n_max = 12;
    std::string method = "series3";
    std::string out;
};

void run_hardware(const HardwareConfig& cfg) {
    if (cfg.n_min > cfg.n_max) throw CLI::ValidationError("empty qubit range: --n-min > --n-max");
    if (cfg.n_min < 6) throw CLI::ValidationError("reduction factors are defined for n >= 6");
    const LocMethod method = method_from_string(cfg.method);
    std::vector<HardwareProfile> profiles;
    for (const std::string& path : cfg.profile_paths) profiles.push_back(load_profile(path));

    CsvWriter csv(cfg.out, {"profile", "n", "a_best", "a_worst", "b_best", "b_worst", "c_best",
                            "c_worst", "r_best", "r_worst"});
    for (const HardwareProfile& p : profiles) {
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            const ReductionReport r = reduction_factor(n, p, method);
            csv.row({p.name, std::to_string(n), format_number(r.a_best), format_number(r.a_worst),
                     format_number(r.b_best), format_number(r.b_worst), format_number(r.c_best),
                     format_number(r.c_worst), format_number(r.r_best), format_number(r.r_worst)});
        }
        const Gamma0Range now = current_gamma0_estimate(std::max(6, p.n_ref), p);
        std::cout << p.name << ": current Gamma0 estimate at n=" << std::max(6, p.n_ref) << " in ["
                  << format_number(now.best) << ", " << format_number(now.worst) << "]\n";
    }
    csv.close();
    write_sidecar(cfg.out, {{"command", "hardware"},
                            {"profiles", cfg.profile_paths},
                            {"n_min", cfg.n_min},
                            {"n_max", cfg.n_max},
                            {"method", cfg.method},
                            {"out", cfg.out}});
}

// ---------------------------------------------------------------------------
// classical: noisy diffusion over a (K, eps) grid.
// ---------------------------------------------------------------------------

struct ClassicalConfig {
    std::string kick_grid;
    std::string eps_grid = "0";
    std::size_t ensemble = 100000;
    int steps = 100;
    std::uint64_t seed = 12345;
    unsigned threads = 0;
    std::string out;
};

std::string series_file_name(const std::string& out, double kick, double eps) {
    std::filesystem::path p(out);
    const std::string stem = p.stem().string();
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s_K%g_eps%g.csv", stem.c_str(), kick, eps);
    return (p.parent_path() / buf).string();
}

void run_classical(const ClassicalConfig& cfg) {
    const std::vector<double> kicks = parse_grid(cfg.kick_grid, "--K-grid");
    const std::vector<double> epss = parse_grid(cfg.eps_grid, "--eps-grid");
    CsvWriter summary(cfg.out, {"K", "epsilon", "D_measured", "D_stderr", "series_file"});
    for (double kick : kicks) {
        for (double eps : epss) {
            const DiffusionSeries d =
                measure_diffusion(kick, eps, cfg.ensemble, cfg.steps, cfg.seed, cfg.threads);
            const std::string series_path = series_file_name(cfg.out, kick, eps);
            CsvWriter series(series_path, {"t", "msd_mean", "msd_stderr"});
            for (std::size_t t = 0; t < d.msd_mean.size(); ++t)
                series.row({static_cast<double>(t), d.msd_mean[t], d.msd_std_error[t]});
            series.close();
            summary.row({format_number(kick), format_number(eps), format_number(d.coefficient),
                         format_number(d.coefficient_std_error),
                         std::filesystem::path(series_path).filename().string()});
        }
    }
    summary.close();
    write_sidecar(cfg.out, {{"command", "classical"},
                            {"K_grid", kicks},
                            {"eps_grid", epss},
                            {"ensemble", cfg.ensemble},
                            {"steps", cfg.steps},
                            {"seed", cfg.seed},
                            {"threads", cfg.threads},
                            {"out", cfg.out}});
}

// ---------------------------------------------------------------------------
// selftest: fast closed-form sanity checks for installation problems.
// ---------------------------------------------------------------------------

int run_selftest() {
    int failures = 0;
    auto check = [&](const char* name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

    {
        const ClassicalState s = csm_step({0.0, 0.0}, 1.0, 1, 0.0, Manifold::torus);
        check("fixed point at the origin", s.action == 0.0 && s.angle == 0.0);
        const ClassicalState t = csm_step({0.0, 1.0}, 1.0, 1, 0.0, Manifold::torus);
        check("one unwrapped step", near(t.action, 1.0, 1e-15) && near(t.angle, 2.0, 1e-15));
    }
    check("lyapunov characteristic equation",
          near(std::exp(lyapunov_exponent(1.0)) + std::exp(-lyapunov_exponent(1.0)), 3.0, 1e-12));
    check("diffusion branches", near(diffusion_coefficient(2.0), 4.0 * M_PI * M_PI / 3.0, 1e-12) &&
                                    near(diffusion_coefficient(0.25), 0.103125, 1e-9));
    {
        const MapParams p = params_from_quantum_kick(3, 1, 2.0);
        check("hbar = 2 pi L / N", near(p.hbar, M_PI / 4.0, 1e-15) && near(p.kick_classical, M_PI / 2.0, 1e-15));
        const MapParams cat = params_from_classical_kick(4, 1, 2.0);
        check("cat-map flag", cat.cat_map);
    }
    {
        const MapParams p = params_from_classical_kick(3, 1, 1.5);
        QuantumState uniform;
        uniform.basis = Basis::position;
        uniform.amplitudes.assign(8, {1.0 / std::sqrt(8.0), 0.0});
        const std::vector<double> dist = momentum_distribution(uniform);
        check("uniform state transforms to |p=0>", near(dist[4], 1.0, 1e-12));
        QuantumState s = momentum_eigenstate(p, 0);
        s = to_position(std::move(s));
        s = qsm_step(std::move(s), p, 0.3);
        check("step preserves the norm", near(s.norm_squared(), 1.0, 1e-12));
    }
    {
        const MapParams p = params_from_classical_kick(2, 1, 0.9);
        const FidelityTrace t = echo_fidelity_trace(p, 0.0, 3, 2, 7);
        check("noiseless echo stays at 1",
              near(t.f_mean[1], 1.0, 1e-12) && near(t.f_mean[3], 1.0, 1e-12));
    }
    check("initial decay rate", near(initial_decay_rate(std::vector<double>{1.0, 0.25}), std::log(4.0), 1e-12));
    check("unfold", near(unfold(std::vector<double>{0.4}, 4)[0], 0.2, 1e-12));
    check("localization threshold n=6", near(localization_threshold(64, 1).kick_classical, 0.59, 0.01));
    check("minimal qubit count", min_qubits(1, LocMethod::exact).n_min == 6 &&
                                     min_qubits(1, LocMethod::series3).n_min == 6);
    check("bound (3) at three qubits",
          near(gamma0_max(8, lyapunov_exponent(M_PI / 2.0)), -0.49, 0.02));
    check("error from decay rate", near(epsilon_from_gamma0(1.4, 29).epsilon, 0.047, 0.001));
    check("inferred effective error", near(infer_effective_error(0.55, 0.35, 10, 0.025), 0.068, 0.001));

    if (failures == 0)
        std::cout << "selftest: all checks passed\n";
    else
        std::cout << "selftest: " << failures << " check(s) FAILED\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sawtooth-map simulation and analysis toolkit"};
    app.set_config("--config", "", "key=value config file; command-line flags override it");
    app.set_version_flag("--version", build_identifier());
    bool selftest = false;
    app.add_flag("--selftest", selftest, "run fast sanity checks and exit");

    FidelityConfig fidelity;
    CLI::App* cmd_fid = app.add_subcommand("fidelity", "noisy two-way fidelity trace");
    fidelity.map.add_to(cmd_fid);
    cmd_fid->add_option("--sigma", fidelity.sigma, "kick-noise standard deviation")->required();
    cmd_fid->add_option("--steps", fidelity.steps, "trace length")->check(CLI::PositiveNumber);
    cmd_fid->add_option("--realizations", fidelity.realizations, "noise realizations")
        ->check(CLI::PositiveNumber);
    cmd_fid->add_option("--p0", fidelity.p0, "initial momentum eigenstate");
    cmd_fid->add_option("--seed", fidelity.seed, "master seed");
    cmd_fid->add_option("--threads", fidelity.threads, "worker threads (0 = hardware)");
    cmd_fid->add_option("--out", fidelity.out, "output CSV path")->required();

    SweepConfig sweep;
    CLI::App* cmd_sweep = app.add_subcommand("sigma-sweep", "decay rates over a noise grid");
    sweep.map.add_to(cmd_sweep);
    cmd_sweep->add_option("--sigma-grid", sweep.sigma_grid, "comma-separated sigma values")->required();
    cmd_sweep->add_option("--steps", sweep.steps, "trace length")->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--realizations", sweep.realizations, "noise realizations")
        ->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--p0", sweep.p0, "initial momentum eigenstate");
    cmd_sweep->add_option("--seed", sweep.seed, "master seed");
    cmd_sweep->add_option("--threads", sweep.threads, "worker threads (0 = hardware)");
    cmd_sweep->add_flag("--unfold", sweep.use_unfolded, "fit the unfolded trace");
    cmd_sweep->add_option("--out", sweep.out, "output CSV path")->required();

    RegimeConfig regime;
    CLI::App* cmd_regime = app.add_subcommand("regime", "Lyapunov-observability bound table");
    cmd_regime->add_option("--n-min", regime.n_min, "first qubit count");
    cmd_regime->add_option("--n-max", regime.n_max, "last qubit count");
    cmd_regime->add_option("--L", regime.L, "torus winding number")->check(CLI::PositiveNumber);
    cmd_regime->add_option("--method", regime.method, "lambda_loc method: exact|series3");
    cmd_regime->add_option("--a-late", regime.constants.a_late, "late-time onset constant");
    cmd_regime->add_option("--t-lyap", regime.constants.t_lyap, "required Lyapunov steps");
    cmd_regime->add_option("--t-early", regime.constants.t_early, "early-time duration");
    cmd_regime->add_option("--out", regime.out, "output CSV path")->required();

    MinQubitsConfig minq;
    CLI::App* cmd_minq = app.add_subcommand("min-qubits", "smallest system with a nonempty region");
    cmd_minq->add_option("--L", minq.L, "torus winding number")->check(CLI::PositiveNumber);
    cmd_minq->add_option("--max-n", minq.max_n, "largest qubit count to scan")->check(CLI::Range(2, 20));
    cmd_minq->add_option("--method", minq.method, "lambda_loc method: exact|series3");
    cmd_minq->add_option("--a-late", minq.constants.a_late, "late-time onset constant");
    cmd_minq->add_option("--t-lyap", minq.constants.t_lyap, "required Lyapunov steps");
    cmd_minq->add_option("--t-early", minq.constants.t_early, "early-time duration");
    cmd_minq->add_option("--out", minq.out, "optional per-n table CSV path");

    HardwareConfig hardware;
    CLI::App* cmd_hw = app.add_subcommand("hardware", "gate-error reduction factors");
    cmd_hw->add_option("--profile", hardware.profile_paths, "hardware profile file(s)")
        ->required()
        ->expected(-1);
    cmd_hw->add_option("--n-min", hardware.n_min, "first qubit count");
    cmd_hw->add_option("--n-max", hardware.n_max, "last qubit count");
    cmd_hw->add_option("--method", hardware.method, "lambda_loc method: exact|series3");
    cmd_hw->add_option("--out", hardware.out, "output CSV path")->required();

    ClassicalConfig classical;
    CLI::App* cmd_cls = app.add_subcommand("classical", "noisy classical diffusion grid");
    cmd_cls->add_option("--K-grid", classical.kick_grid, "comma-separated kick values")->required();
    cmd_cls->add_option("--eps-grid", classical.eps_grid, "comma-separated noise std-devs");
    cmd_cls->add_option("--ensemble", classical.ensemble, "trajectories per grid point")
        ->check(CLI::PositiveNumber);
    cmd_cls->add_option("--steps", classical.steps, "evolution steps")->check(CLI::PositiveNumber);
    cmd_cls->add_option("--seed", classical.seed, "master seed");
    cmd_cls->add_option("--threads", classical.threads, "worker threads (0 = hardware)");
    cmd_cls->add_option("--out", classical.out, "summary CSV path")->required();

    app.require_subcommand(0, 1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest) return run_selftest();
        if (cmd_fid->parsed()) {
            run_fidelity(fidelity);
        } else if (cmd_sweep->parsed()) {
            run_sweep(sweep);
        } else if (cmd_regime->parsed()) {
            run_regime(regime);
        } else if (cmd_minq->parsed()) {
            run_min_qubits(minq);
        } else if (cmd_hw->parsed()) {
            run_hardware(hardware);
        } else if (cmd_cls->parsed()) {
            run_classical(classical);
        } else {
            std::cerr << app.help();
            return 1;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
