#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "meneuron/characterization.hpp"
#include "meneuron/config.hpp"
#include "meneuron/csv_io.hpp"
#include "meneuron/errors.hpp"
#include "meneuron/manifest.hpp"
#include "meneuron/neuron.hpp"

namespace meneuron::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
    std::vector<std::string> configs;
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.configs,
                    "INI config or a previous run's manifest.json; repeatable, later files override earlier ones");
    sub->add_option("--set", c.sets, "override one key, e.g. --set sim.dt=5e-14; repeatable");
    sub->add_option("--seed", c.seed, "master seed (overrides sim.seed)");
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Config resolve_config(const Common& c) {
    Config cfg = default_config();
    for (const auto& file : c.configs) {
        const fs::path path(file);
        try {
            if (path.extension() == ".json") {
                cfg = parse_config(read_manifest(path).config_ini, cfg);
            } else {
                cfg = parse_config(read_text(path), cfg);
            }
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            if (what.find(file) != std::string::npos) throw;
            throw ConfigError(file + ": " + what);
        }
    }
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        const auto dot = s.find('.');
        if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
            throw ConfigError("--set expects section.key=value, got '" + s + "'");
        }
        cfg = parse_config("[" + s.substr(0, dot) + "]\n" + s.substr(dot + 1, eq - dot - 1) + " = " + s.substr(eq + 1) +
                               "\n",
                           cfg);
    }
    if (c.seed) cfg.sim.seed = *c.seed;
    validate(cfg);
    return cfg;
}

fs::path prepare_out(const std::string& out) {
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) throw ConfigError("cannot create output directory '" + out + "'");
    return fs::path(out);
}

double parse_number(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse '" + s + "' as a number in " + what);
    }
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& what) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ConfigError(what + " expects two comma-separated values, got '" + s + "'");
    return {parse_number(s.substr(0, comma), what), parse_number(s.substr(comma + 1), what)};
}

// "min:max:n" or "a,b,c"
std::vector<double> parse_axis(const std::string& s) {
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(s);
        for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
        if (parts.size() != 3) throw ConfigError("grid axis '" + s + "' must be min:max:count");
        const double n = parse_number(parts[2], "grid count");
        if (!(n >= 1) || n != std::floor(n)) throw ConfigError("grid axis count must be a positive integer");
        const double lo = parse_number(parts[0], "grid min");
        const double hi = parse_number(parts[1], "grid max");
        if (n > 1 && !(hi > lo)) throw ConfigError("grid axis '" + s + "' is not increasing");
        return linspace(lo, hi, static_cast<std::size_t>(n));
    }
    std::vector<double> v;
    std::stringstream in(s);
    for (std::string p; std::getline(in, p, ',');) v.push_back(parse_number(p, "grid list"));
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) throw ConfigError("grid axis '" + s + "' is not strictly increasing");
    }
    if (v.empty()) throw ConfigError("empty grid axis");
    return v;
}

std::pair<std::vector<double>, std::vector<double>> parse_grid(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) throw ConfigError("--grid expects AXIS1/AXIS2, got '" + s + "'");
    return {parse_axis(s.substr(0, slash)), parse_axis(s.substr(slash + 1))};
}

// Arguments without --config/--out so that a manifest rerun can substitute its own.
std::vector<std::string> replay_arguments(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i < args.size(); ++i) {
        const auto& a = args[i];
        if (a == "--config" || a == "--out") {
            ++i;
            continue;
        }
        if (a.rfind("--config=", 0) == 0 || a.rfind("--out=", 0) == 0) continue;
        out.push_back(a);
    }
    return out;
}

struct Run {
    RunManifest manifest;
    fs::path dir;

    Run(const std::vector<std::string>& args, const Config& cfg, const fs::path& out_dir) : dir(out_dir) {
        manifest.tool_version = std::string(tool_version());
        manifest.command = args.front();
        manifest.arguments = replay_arguments(args);
        manifest.config_ini = to_ini(cfg);
        manifest.master_seed = cfg.sim.seed;
        manifest.started_utc = utc_timestamp();
    }

    fs::path file(const std::string& name) const { return dir / name; }
    void output(const fs::path& f) { add_output(manifest, f, dir); }

    void finish() {
        manifest.finished_utc = utc_timestamp();
        write_manifest(dir / "manifest.json", manifest);
        std::cout << "manifest: " << (dir / "manifest.json").string() << '\n';
    }
};

std::string fmt(double v) { return std::isnan(v) ? "nan" : format_double(v); }

LifetimeEstimate estimate_or_nan(std::span<const DwellRecord> dwells, StateLabel s) {
    const auto d = durations_of(dwells, s);
    if (d.empty()) {
        std::cerr << "warning: no completed " << to_string(s) << " dwells; increase sim.t_max\n";
        LifetimeEstimate e;
        e.state = s;
        e.mean = e.std_error = e.ks_statistic = e.ks_pvalue = std::nan("");
        return e;
    }
    return estimate_lifetime(d, s);
}

int cmd_simulate(const std::vector<std::string>& args, const Common& common, const std::string& bias_text) {
    const Config cfg = resolve_config(common);
    const auto [vme, vi] = parse_pair(bias_text, "--bias");
    const BiasPoint bias{vme, vi};
    if (!cfg.sweep.window.contains(bias)) {
        throw ConfigError("bias (" + fmt(vme) + ", " + fmt(vi) + ") V lies outside the operating window");
    }
    const fs::path out = prepare_out(common.out);
    Run run(args, cfg, out);

    TelegraphDetector detector(cfg.analysis.theta_on, cfg.sim.dt);
    const Trajectory traj = run_trajectory(cfg.sim, bias, cfg.device, &detector);
    const auto& dwells = detector.dwells();
    const LifetimeEstimate est[] = {estimate_or_nan(dwells, StateLabel::P), estimate_or_nan(dwells, StateLabel::AP)};

    const auto traj_file = run.file(trajectory_file_name(cfg.sim.seed, bias));
    write_trajectory_csv(traj_file, traj);
    run.output(traj_file);
    write_dwells_csv(run.file("dwells.csv"), dwells);
    run.output(run.file("dwells.csv"));
    write_lifetime_summary_csv(run.file("lifetimes.csv"), bias, est);
    run.output(run.file("lifetimes.csv"));

    for (const auto& e : est) {
        std::cout << "tau_" << to_string(e.state) << " = " << fmt(e.mean) << " s +- " << fmt(e.std_error) << " (n = "
                  << e.count << ", KS D = " << fmt(e.ks_statistic) << ")\n";
    }
    if (est[0].count > 0 && est[1].count > 0) std::cout << "tau_P/tau_AP = " << fmt(est[0].mean / est[1].mean) << '\n';
    run.finish();
    return 0;
}

struct SweepArgs {
    std::string grid;
    std::string transformed;
    bool probe = false;
    double probe_step = 0.1;
    double probe_max = 1.5;
};

// MENEURON_THREADS, then OMP_NUM_THREADS through the OpenMP runtime. Thread
// count never changes results, so it is not part of the config.
int thread_override() {
    const char* env = std::getenv("MENEURON_THREADS");
    if (env == nullptr || *env == '\0') return 0;
    const double n = parse_number(env, "MENEURON_THREADS");
    if (!(n >= 1) || n != std::floor(n)) throw ConfigError("MENEURON_THREADS must be a positive integer");
    return static_cast<int>(n);
}

int cmd_sweep(const std::vector<std::string>& args, const Common& common, const SweepArgs& s) {
    const Config cfg = resolve_config(common);
    SweepOptions opt = sweep_options(cfg);
    opt.threads = thread_override();
    const fs::path out = prepare_out(common.out);
    Run run(args, cfg, out);

    if (s.probe) {
        const OperatingWindow w = probe_operating_window(cfg.device, opt, cfg.sweep.tau_window_min,
                                                         cfg.sweep.tau_window_max, s.probe_step, s.probe_max);
        std::ofstream f(run.file("window.ini"));
        if (!f) throw ConfigError("cannot write '" + run.file("window.ini").string() + "'");
        f << "# operating window keeping both lifetimes in [" << fmt(cfg.sweep.tau_window_min) << ", "
          << fmt(cfg.sweep.tau_window_max) << "] s\n[sweep]\nwindow_v_me_min = " << fmt(w.v_me_min)
          << "\nwindow_v_me_max = " << fmt(w.v_me_max) << "\nwindow_v_i_min = " << fmt(w.v_i_min)
          << "\nwindow_v_i_max = " << fmt(w.v_i_max) << '\n';
        f.close();
        run.output(run.file("window.ini"));
        std::cout << "window: V_ME in [" << fmt(w.v_me_min) << ", " << fmt(w.v_me_max) << "], V_I in ["
                  << fmt(w.v_i_min) << ", " << fmt(w.v_i_max) << "]\n";
        run.finish();
        return 0;
    }

    std::vector<double> a1 = linspace(cfg.sweep.v_me_min, cfg.sweep.v_me_max, cfg.sweep.v_me_count);
    std::vector<double> a2 = linspace(cfg.sweep.v_i_min, cfg.sweep.v_i_max, cfg.sweep.v_i_count);
    if (!s.grid.empty()) std::tie(a1, a2) = parse_grid(s.grid);

    const std::size_t cells = a1.size() * a2.size();
    opt.progress = [cells, ntraj = opt.trajectories_per_cell](std::size_t done, std::size_t) {
        if (done % ntraj == 0) std::cerr << "sweep: " << done / ntraj << "/" << cells << " cells\n";
    };
    LifetimeGrid grid;
    if (!s.transformed.empty()) {
        const BasisAngles angles = read_angles_report(s.transformed);
        grid = transformed_sweep(a1, a2, angles, cfg.device, opt);
    } else {
        grid = sweep_grid(a1, a2, cfg.device, opt);
    }
    write_grid_csv(run.file("grid.csv"), grid);
    run.output(run.file("grid.csv"));

    std::size_t flagged = 0;
    for (const auto& c : grid.cells) flagged += c.flags != 0;
    std::cout << grid.cells.size() << " cells (" << to_string(grid.axis_kind) << "), " << flagged << " flagged\n";
    run.finish();
    return 0;
}

int cmd_kfactors(const std::vector<std::string>& args, const Common& common, const std::string& grid_csv,
                 const std::string& at) {
    const Config cfg = resolve_config(common);
    const LifetimeGrid grid = read_grid_csv(grid_csv);
    const fs::path out = prepare_out(common.out);
    Run run(args, cfg, out);

    std::vector<BiasPoint> nodes;
    if (!at.empty()) {
        const auto [a, b] = parse_pair(at, "--at");
        nodes.push_back({a, b});
    } else {
        for (std::size_t i = 1; i + 1 < grid.axis1.size(); ++i) {
            for (std::size_t j = 1; j + 1 < grid.axis2.size(); ++j) nodes.push_back({grid.axis1[i], grid.axis2[j]});
        }
    }
    if (nodes.empty()) throw ConfigError("grid has no interior nodes");

    std::ofstream f(run.file("kfactors.csv"), std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + run.file("kfactors.csv").string() + "'");
    f << "v_a,v_b,k_ap_a,k_ap_a_sigma,k_ap_b,k_ap_b_sigma,k_p_a,k_p_a_sigma,k_p_b,k_p_b_sigma,"
         "ratio_ap_a_over_ap_b,ratio_p_b_over_p_a,ratio_ap_a_over_p_a,ratio_p_b_over_ap_b,independent\n";
    std::size_t independent = 0, skipped = 0;
    for (const auto& n : nodes) {
        KFactors k;
        try {
            k = k_factors(grid, n);
        } catch (const std::invalid_argument& e) {
            if (!at.empty()) throw ConfigError(e.what());
            ++skipped;
            continue;
        }
        const auto r = independence_ratios(k);
        const bool ok = r.independent(cfg.analysis.independence_threshold);
        independent += ok;
        f << fmt(n.v_me) << ',' << fmt(n.v_i) << ',' << fmt(k.k_ap_me) << ',' << fmt(k.sigma_ap_me) << ','
          << fmt(k.k_ap_i) << ',' << fmt(k.sigma_ap_i) << ',' << fmt(k.k_p_me) << ',' << fmt(k.sigma_p_me) << ','
          << fmt(k.k_p_i) << ',' << fmt(k.sigma_p_i);
        for (double v : r.value) f << ',' << (std::isinf(v) ? std::string("inf") : fmt(v));
        f << ',' << (ok ? "yes" : "no") << '\n';
    }
    f.close();
    run.output(run.file("kfactors.csv"));
    std::cout << nodes.size() - skipped << " nodes, " << independent << " meet the independence threshold "
              << fmt(cfg.analysis.independence_threshold);
    if (skipped > 0) std::cout << " (" << skipped << " skipped next to invalid cells)";
    std::cout << '\n';
    run.finish();
    return 0;
}

int cmd_calibrate(const std::vector<std::string>& args, const Common& common, const std::string& grid_csv) {
    const Config cfg = resolve_config(common);
    const LifetimeGrid grid = read_grid_csv(grid_csv);
    const ContourCalibration cal = fit_contour_angles(grid, cfg.analysis.fit_r2_min);
    const fs::path out = prepare_out(common.out);
    Run run(args, cfg, out);
    write_angles_report(run.file("angles.txt"), cal);
    run.output(run.file("angles.txt"));
    const double deg = 180.0 / std::numbers::pi;
    std::cout << "alpha_basis = " << fmt(cal.angles.alpha_basis() * deg) << " deg (R^2 " << fmt(cal.fit_ap.r2)
              << "), beta_basis = " << fmt(cal.angles.beta_basis() * deg) << " deg (R^2 " << fmt(cal.fit_p.r2)
              << ")\n";
    const auto x = cross_sensitivity(cal.fit_ap, cal.fit_p);
    std::cout << "cross-sensitivity before transform: AP " << fmt(x.ap) << ", P " << fmt(x.p) << '\n';
    run.finish();
    return 0;
}

struct NeuronArgs {
    std::string grid;
    std::string drive;
    double duration = 0.0;
    bool waveform = false;
};

int cmd_neuron(const std::vector<std::string>& args, const Common& common, const NeuronArgs& n) {
    const Config cfg = resolve_config(common);
    const NeuronLUT lut = build_lut(read_grid_csv(n.grid));
    const auto drive = read_drive_csv(n.drive);
    const fs::path out = prepare_out(common.out);
    Run run(args, cfg, out);

    const SpikeTrain train =
        generate_spike_train(lut, drive, n.duration, cfg.sim.seed, cfg.neuron.dt_markov, n.waveform);
    write_spike_train_csv(run.file("spikes.csv"), train);
    run.output(run.file("spikes.csv"));
    if (n.waveform) {
        write_waveform_csv(run.file("waveform.csv"), train);
        run.output(run.file("waveform.csv"));
    }
    std::cout << train.spike_times.size() << " spikes in " << fmt(train.duration) << " s, AP duty fraction "
              << fmt(train.duty_fraction()) << '\n';
    run.finish();
    return 0;
}

int cmd_selftest(const Common& common);

int dispatch(const std::vector<std::string>& args) {
    CLI::App app{"Stochastic LLG simulator and behavioral model of a magnetoelectric MTJ neuron", "meneuron"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(tool_version()));

    Common common;
    std::string bias = "0,0";
    SweepArgs sweep;
    std::string grid_csv, at;
    NeuronArgs neuron;
    std::string manifest_path;

    auto* sim = app.add_subcommand("simulate", "one trajectory: trajectory, dwell and lifetime CSVs");
    add_common(sim, common);
    sim->add_option("--bias", bias, "V_ME,V_I in volts")->capture_default_str();

    auto* sw = app.add_subcommand("sweep", "lifetime grid over (V_ME, V_I), or (V1, V2) with --transformed");
    add_common(sw, common);
    sw->add_option("--grid", sweep.grid, "AXIS1/AXIS2, each min:max:count or a comma list");
    sw->add_option("--transformed", sweep.transformed, "angles report from 'calibrate'; sweeps V1, V2");
    sw->add_flag("--probe-window", sweep.probe, "find the operating window instead of sweeping");
    sw->add_option("--probe-step", sweep.probe_step, "probe increment, V")->capture_default_str();
    sw->add_option("--probe-max", sweep.probe_max, "largest probed half-width, V")->capture_default_str();

    auto* kf = app.add_subcommand("kfactors", "k-factors and independence ratios from a grid CSV");
    add_common(kf, common);
    kf->add_option("grid", grid_csv, "grid CSV from 'sweep'")->required();
    kf->add_option("--at", at, "single node a,b (default: every interior node)");

    auto* cal = app.add_subcommand("calibrate", "fit contour angles of a grid CSV");
    add_common(cal, common);
    cal->add_option("grid", grid_csv, "grid CSV from 'sweep'")->required();

    auto* nr = app.add_subcommand("neuron", "spike train from a V1_V2 grid CSV and a drive schedule");
    add_common(nr, common);
    nr->add_option("grid", neuron.grid, "V1_V2 grid CSV from 'sweep --transformed'")->required();
    nr->add_option("--drive", neuron.drive, "CSV t_start_s,v1,v2")->required();
    nr->add_option("--duration", neuron.duration, "simulated time, s")->required();
    nr->add_flag("--waveform", neuron.waveform, "also write the state waveform");

    auto* st = app.add_subcommand("selftest", "run the built-in invariant checks");
    add_common(st, common);

    auto* rr = app.add_subcommand("rerun", "repeat a run from its manifest.json");
    rr->add_option("manifest", manifest_path, "manifest.json of the run to repeat")->required();
    rr->add_option("--out", common.out, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (sim->parsed()) return cmd_simulate(args, common, bias);
    if (sw->parsed()) return cmd_sweep(args, common, sweep);
    if (kf->parsed()) return cmd_kfactors(args, common, grid_csv, at);
    if (cal->parsed()) return cmd_calibrate(args, common, grid_csv);
    if (nr->parsed()) return cmd_neuron(args, common, neuron);
    if (st->parsed()) return cmd_selftest(common);
    if (rr->parsed()) {
        const RunManifest m = read_manifest(manifest_path);
        std::vector<std::string> replay{m.command};
        replay.insert(replay.end(), m.arguments.begin(), m.arguments.end());
        replay.insert(replay.end(), {"--config", manifest_path, "--out", common.out});
        return dispatch(replay);
    }
    return 2;
}

// --- selftest ---------------------------------------------------------------

bool report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
    return ok;
}

int cmd_selftest(const Common& common) {
    const Config cfg = resolve_config(common);
    const DeviceParams& p = cfg.device;
    bool all = true;

    const double err = precession_frequency_check(p, 1e-13);
    all &= report("precession_frequency", err < 0.01, "relative error " + fmt(err) + " < 0.01");

    {
        SimConfig sc = cfg.sim;
        sc.t_max = 1e-8;
        sc.record_stride = 1;
        const Trajectory a = run_trajectory(sc, {0.1, 0.1}, p);
        const Trajectory b = run_trajectory(sc, {0.1, 0.1}, p);
        double worst = 0.0;
        for (const auto& s : a.samples) worst = std::max(worst, std::abs(norm(s.m) - 1.0));
        bool same = a.samples.size() == b.samples.size();
        for (std::size_t i = 0; same && i < a.samples.size(); ++i) same = a.samples[i].m == b.samples[i].m;
        all &= report("norm_preservation", worst < 1e-9, "max ||m|-1| = " + fmt(worst));
        all &= report("trajectory_determinism", same, "same seed gives identical samples");
    }
    {
        DeviceParams cold = p;
        cold.temperature = 0.0;
        SimConfig sc = cfg.sim;
        sc.t_max = 2e-9;
        sc.initial_m = normalized(Vector3{0.6, 0.1, 0.8});
        double prev = magnetic_energy(sc.initial_m, 0.2, cold);
        bool mono = true;
        integrate(sc, {0.2, 0.0}, cold, [&](long long, const Vector3& m) {
            const double e = magnetic_energy(m, 0.2, cold);
            mono = mono && e <= prev + 1e-10 * std::abs(prev);
            prev = e;
            return true;
        });
        all &= report("energy_monotonicity", mono, "T = 0, V_I = 0 energy nonincreasing");
    }
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double a = u(rng) * std::numbers::pi;
            double b = u(rng) * std::numbers::pi;
            if (std::abs(std::sin(b - a)) < 0.05) b += 1.0;
            const BasisAngles ang(a, b);
            const BiasPoint x{u(rng), u(rng)};
            const auto t = basis_transform(x, ang);
            const auto y = inverse_basis_transform(t.v1, t.v2, ang);
            worst = std::max({worst, std::abs(y.v_me - x.v_me), std::abs(y.v_i - x.v_i)});
        }
        all &= report("basis_round_trip", worst < 1e-12, "max error " + fmt(worst));
    }
    {
        const Config back = parse_config(to_ini(cfg), Config{});
        all &= report("config_round_trip", to_ini(back) == to_ini(cfg), "to_ini/parse_config is lossless");
    }
    {
        SweepOptions opt = sweep_options(cfg);
        opt.min_dwells = 20;
        const std::vector<double> a1{-0.1, 0.1}, a2{0.0};
        const LifetimeGrid s = sweep_grid_serial(a1, a2, p, opt);
        const LifetimeGrid q = sweep_grid(a1, a2, p, opt);
        bool same = true;
        for (std::size_t c = 0; c < s.cells.size(); ++c) {
            same = same && s.cells[c].tau_p.mean == q.cells[c].tau_p.mean &&
                   s.cells[c].tau_ap.mean == q.cells[c].tau_ap.mean;
        }
        all &= report("sweep_determinism", same, "parallel sweep equals serial reference");
    }
    std::cout << (all ? "selftest passed" : "selftest FAILED") << '\n';
    return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return dispatch(args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << '\n';
        return 4;
    } catch (const DomainError& e) {
        std::cerr << "domain error at t = " << format_double(e.time()) << " s: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace meneuron::cli
