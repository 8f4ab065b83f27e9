#include "iondeco/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iondeco/averaging.hpp"
#include "iondeco/dynamics.hpp"
#include "iondeco/error.hpp"
#include "iondeco/harness.hpp"
#include "iondeco/rates.hpp"
#include "iondeco/spectral.hpp"

namespace iondeco::cli {

namespace {

class UsageError : public Error {
public:
    using Error::Error;
};

struct Options {
    double gamma_ratio = 1000.0;
    double omega_c = 10.0;
    double delta = 100.0;
    std::string control = "none";
    double omega_minus = 150.0;
    double omega = 1.0;
    double xi = 4.8;
    double omega4 = 0.0;
    double zeno_freq = 5e6;
    double t_c = 0.0;
    double horizon = 4.0;
    double spacing = 0.01;
    double threshold = 0.9;
    std::size_t threads = 0;
    std::string out;
    std::string svg;
    double min = 0.1;
    double max = 200.0;
    std::size_t points = 200;
    bool linear = false;
    double shift = 0.0;
    std::string config;
};

std::string fmt(double v, int digits = 12) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void add_config(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Flat JSON file with flag values (flags override)");
}

void add_model(CLI::App* sub, Options& o) {
    sub->add_option("--gamma-ratio", o.gamma_ratio, "gamma_e/gamma_d of the uncontrolled ion")
        ->capture_default_str();
    sub->add_option("--omega-c", o.omega_c, "Cutoff frequency in units of omega3'")
        ->capture_default_str();
}

CLI::Option* add_bang(CLI::App* sub, Options& o) {
    sub->add_option("--omega-minus", o.omega_minus,
                    "|omega_-|/omega3' with xi = 24 Omega/5 (bang control)")
        ->capture_default_str();
    auto* omega = sub->add_option("--omega", o.omega, "Explicit Rabi amplitude Omega of |3>-|4>");
    sub->add_option("--xi", o.xi, "Explicit detuning xi (with --omega; default 24 Omega/5)");
    sub->add_option("--omega4", o.omega4, "Energy of the auxiliary level |4>")->capture_default_str();
    return omega;
}

CLI::Option* add_zeno(CLI::App* sub, Options& o) {
    sub->add_option("--zeno-freq", o.zeno_freq, "Measurement frequency 2pi/(T_c omega3')")
        ->capture_default_str();
    return sub->add_option("--tc", o.t_c, "Measurement period T_c (overrides --zeno-freq)");
}

void add_control(CLI::App* sub, Options& o) {
    sub->add_option("--control", o.control, "Control regime")
        ->check(CLI::IsMember({"none", "bang", "zeno"}))
        ->capture_default_str();
}

void add_outputs(CLI::App* sub, Options& o) {
    sub->add_option("--out", o.out, "CSV output path");
    sub->add_option("--svg", o.svg, "SVG plot output path");
}

void add_sweep(CLI::App* sub, Options& o, double lo, double hi) {
    o.min = lo;
    o.max = hi;
    sub->add_option("--min", o.min, "Smallest control frequency")->capture_default_str();
    sub->add_option("--max", o.max, "Largest control frequency")->capture_default_str();
    sub->add_option("--points", o.points, "Number of grid points")->capture_default_str();
    sub->add_flag("--linear", o.linear, "Linear instead of logarithmic grid");
    sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
}

harness::ScenarioConfig make_config(const Options& o) {
    harness::ScenarioConfig cfg;
    cfg.calibration.gamma_ratio = o.gamma_ratio;
    cfg.calibration.omega_c_over_omega3 = o.omega_c;
    cfg.delta_rabi = o.delta;
    cfg.horizon = o.horizon;
    cfg.sample_spacing = o.spacing;
    cfg.threshold = o.threshold;
    cfg.threads = o.threads;
    cfg.csv_path = o.out;
    cfg.svg_path = o.svg;
    return cfg;
}

rates::ControlScheme make_control(const Options& o, const CLI::Option* omega_opt,
                                  const CLI::Option* xi_opt, const CLI::Option* tc_opt) {
    if (o.control == "bang") {
        if (omega_opt && omega_opt->count() > 0) {
            const double xi = (xi_opt && xi_opt->count() > 0) ? o.xi : 24.0 * o.omega / 5.0;
            return rates::Bang{o.omega, xi, o.omega4};
        }
        return rates::Bang::from_omega_minus(o.omega_minus, o.omega4);
    }
    if (o.control == "zeno") {
        if (tc_opt && tc_opt->count() > 0) return rates::Zeno{o.t_c};
        return rates::Zeno::from_frequency(o.zeno_freq);
    }
    return rates::NoControl{};
}

void print_header(std::ostream& out, const harness::ScenarioConfig& cfg) {
    const auto p = cfg.form();
    out << "# v0 = " << fmt(p.v0) << ", beta = " << fmt(p.beta) << ", omega_c = " << fmt(p.omega_c)
        << ", omega3' = " << fmt(p.omega3p) << '\n';
    out << "# rates in units of the uncontrolled gamma_d, frequencies in omega3'\n";
}

int run_rates(const Options& o, const rates::ControlScheme& control, std::ostream& out) {
    auto cfg = make_config(o);
    cfg.control = control;
    print_header(out, cfg);
    const auto r = harness::scenario_rates(cfg);
    const auto p = cfg.form();
    const double unit = rates::rates_uncontrolled(p).gamma_d;
    out << "regime = " << rates::regime_name(r.regime) << '\n';
    if (const auto* b = std::get_if<rates::Bang>(&control)) {
        out << "omega_rabi = " << fmt(b->omega_rabi) << "\nxi = " << fmt(b->xi) << '\n';
        out << "omega_plus = " << fmt(r.dressed.omega_plus)
            << "\nomega_minus = " << fmt(r.dressed.omega_minus) << '\n';
        out << "weight_plus = " << fmt(r.dressed.weight_plus)
            << "\nweight_minus = " << fmt(r.dressed.weight_minus) << '\n';
        out << "gamma_d_plus = " << fmt(r.gamma_d_plus) << "\ngamma_d_minus = "
            << fmt(r.gamma_d_minus) << '\n';
        out << "gamma_e_plus = " << fmt(r.gamma_e_plus) << "\ngamma_e_minus = "
            << fmt(r.gamma_e_minus) << '\n';
        out << "gamma_d = " << fmt(r.gamma_d) << '\n';
        out << "gamma_d_approx = " << fmt(rates::bang_high_freq_approx(p, *b) / unit) << '\n';
    } else if (const auto* z = std::get_if<rates::Zeno>(&control)) {
        out << "t_c = " << fmt(z->t_c) << "\ncontrol_frequency = "
            << fmt(2.0 * std::numbers::pi / z->t_c) << '\n';
        out << "gamma_d = " << fmt(r.gamma_d) << "\ngamma_e = " << fmt(r.gamma_e) << '\n';
        out << "gamma_d_approx = " << fmt(rates::zeno_high_freq_approx(p, *z) / unit) << '\n';
    } else {
        out << "gamma_d = " << fmt(r.gamma_d) << "\ngamma_e = " << fmt(r.gamma_e) << '\n';
    }
    return kOk;
}

int run_evolve(const Options& o, const rates::ControlScheme& control, std::ostream& out) {
    auto cfg = make_config(o);
    cfg.control = control;
    print_header(out, cfg);
    const auto traj = harness::run_purity_scenario(cfg);
    const auto t = dynamics::decoherence_time(traj, cfg.threshold);
    out << "regime = " << rates::regime_name(traj.regime) << '\n';
    out << "samples = " << traj.size() << '\n';
    out << "final_tau = " << fmt(traj.times.back()) << '\n';
    out << "final_eta = " << fmt(traj.purity.back()) << '\n';
    out << "decoherence_time(eta < " << fmt(cfg.threshold) << ") = " << (t ? fmt(*t) : "none")
        << '\n';
    return kOk;
}

int run_sweep(const Options& o, bool bang, std::ostream& out) {
    auto cfg = make_config(o);
    print_header(out, cfg);
    const auto grid = harness::make_grid(o.min, o.max, o.points, o.linear);
    const auto curve = bang ? harness::sweep_bang(cfg, grid) : harness::sweep_zeno(cfg, grid);
    if (!o.out.empty()) {
        auto meta = harness::describe(cfg);
        meta.emplace_back("sweep", bang ? "bang" : "zeno");
        meta.emplace_back("grid", o.linear ? "linear" : "log");
        harness::emit_csv(curve, o.out, meta);
    }
    if (!o.svg.empty()) harness::emit_svg(curve, o.svg);
    out << "axis = " << curve.axis_label << '\n';
    out << "points = " << curve.grid.size() << '\n';
    out << "peak_location = " << fmt(curve.peak.x) << "\npeak_rate = " << fmt(curve.peak.value)
        << '\n';
    out << "crossover = " << (curve.crossover ? fmt(*curve.crossover) : "none") << '\n';
    if (o.out.empty() && o.svg.empty()) {
        out << "x,rate\n";
        for (std::size_t i = 0; i < curve.grid.size(); ++i)
            out << fmt(curve.grid[i], 15) << ',' << fmt(curve.values[i], 15) << '\n';
    }
    return kOk;
}

int run_equivalence(const Options& o, std::ostream& out) {
    using namespace averaging;
    const SmallMatrix rabi = rabi_hamiltonian(4, o.shift, o.delta);
    const SmallMatrix zeno_h = zeno_projected_hamiltonian(o.omega, o.xi, rabi);

    const SmallMatrix pinched = zeno_projected_hamiltonian(o.omega, o.xi, SmallMatrix::Zero(4, 4));
    const double dyad_residual = max_entry(pinched - dressed_dyad_sum(o.omega, o.xi));
    const double qubit_residual =
        max_entry(zeno_h.topLeftCorner(2, 2) - rabi.topLeftCorner(2, 2));

    const SmallMatrix p3 = dyad(3, 2, 2);
    const ProjectionSet measure3({p3, SmallMatrix::Identity(3, 3) - p3});
    const double coupling_residual =
        decoupling_residual(dyad(3, 0, 2) + dyad(3, 2, 0), measure3);

    const ProjectionSet dressed = measurement_eigenprojections(o.omega, o.xi);
    const auto [plus, minus] = rates::dressed_frequencies(o.omega, o.xi);
    SmallMatrix h_meas = SmallMatrix::Zero(2, 2);
    h_meas(1, 1) = -o.xi;
    h_meas(0, 1) = h_meas(1, 0) = o.omega;
    const double spectral_residual = max_entry(h_meas - plus * dressed[0] - minus * dressed[1]);

    out << "omega = " << fmt(o.omega) << "\nxi = " << fmt(o.xi) << '\n';
    out << "omega_plus = " << fmt(plus) << "\nomega_minus = " << fmt(minus) << '\n';
    out << "eigen_decomposition_residual = " << fmt(spectral_residual, 3) << '\n';
    out << "pinch_vs_dressed_dyad_residual = " << fmt(dyad_residual, 3) << '\n';
    out << "qubit_block_residual = " << fmt(qubit_residual, 3) << '\n';
    out << "zeno_coupling_residual = " << fmt(coupling_residual, 3) << '\n';
    const bool ok = std::max({dyad_residual, qubit_residual, coupling_residual, spectral_residual}) <=
                    kMatrixTol;
    out << "equivalence = " << (ok ? "holds" : "FAILS") << '\n';
    return ok ? kOk : kNumericFailure;
}

int run_shifts(const Options& o, std::ostream& out) {
    auto cfg = make_config(o);
    print_header(out, cfg);
    const auto p = cfg.form();
    const double unit = rates::rates_uncontrolled(p).gamma_d;
    out << "delta = " << fmt(spectral::lamb_shift_delta(p) / unit) << '\n';
    out << "delta_prime = " << fmt(spectral::lamb_shift_delta_prime(p) / unit) << '\n';
    return kOk;
}

std::string find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

// Turns the JSON file into flag tokens placed right after the subcommand so
// that later command-line tokens override them.
std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
    const std::string path = find_config(args);
    if (path.empty()) return args;
    std::size_t pos = 0;
    CLI::App* sub = nullptr;
    for (std::size_t i = 1; i < args.size() && !sub; ++i) {
        if ((sub = app.get_subcommand_no_throw(args[i]))) pos = i;
    }
    if (!sub) return args;

    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw UsageError("config file '" + path + "' must hold a flat JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : j.items()) {
        if (key == "config") continue;
        const std::string flag = "--" + key;
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        if (!opt) {
            bool known = false;
            for (const auto* other : app.get_subcommands({}))
                known = known || other->get_option_no_throw(flag) != nullptr;
            if (!known) throw UsageError("unknown key '" + key + "' in config file '" + path + "'");
            continue;
        }
        if (value.is_boolean()) {
            if (opt->get_expected_min() == 0) {
                if (value.get<bool>()) injected.push_back(flag);
            } else {
                injected.push_back(flag);
                injected.push_back(value.get<bool>() ? "true" : "false");
            }
        } else if (value.is_string()) {
            injected.push_back(flag);
            injected.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            injected.push_back(flag);
            injected.push_back(value.dump());
        } else {
            throw UsageError("config key '" + key + "' must be a number, string or boolean");
        }
    }
    std::vector<std::string> merged(args.begin(), args.begin() + static_cast<long>(pos) + 1);
    merged.insert(merged.end(), injected.begin(), injected.end());
    merged.insert(merged.end(), args.begin() + static_cast<long>(pos) + 1, args.end());
    return merged;
}

}  // namespace

int cli_main(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Thermal decoherence of a trapped-ion qubit under dynamical decoupling and "
                 "Zeno control",
                 "iondeco"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(harness::kVersion));

    Options o;
    CLI::Option* omega_opt = nullptr;
    CLI::Option* xi_opt = nullptr;
    CLI::Option* tc_opt = nullptr;

    auto* rates_cmd = app.add_subcommand("rates", "Print the rate set for a control scheme");
    add_config(rates_cmd, o);
    add_model(rates_cmd, o);
    add_control(rates_cmd, o);
    auto* rates_omega = add_bang(rates_cmd, o);
    auto* rates_tc = add_zeno(rates_cmd, o);

    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate the purity of |1><1|");
    add_config(evolve_cmd, o);
    add_model(evolve_cmd, o);
    add_control(evolve_cmd, o);
    auto* evolve_omega = add_bang(evolve_cmd, o);
    auto* evolve_tc = add_zeno(evolve_cmd, o);
    evolve_cmd->add_option("--delta", o.delta, "Rabi amplitude Delta in units of gamma_d")
        ->capture_default_str();
    evolve_cmd->add_option("--horizon", o.horizon, "Final time in units of 1/gamma_d")
        ->capture_default_str();
    evolve_cmd->add_option("--spacing", o.spacing, "Sample spacing in units of 1/gamma_d")
        ->capture_default_str();
    evolve_cmd->add_option("--threshold", o.threshold, "Purity level for the decoherence time")
        ->capture_default_str();
    add_outputs(evolve_cmd, o);

    Options bang_o, zeno_o;
    auto* sweep_bang_cmd = app.add_subcommand("sweep-bang", "gamma_d^B vs |omega_-|/omega3'");
    add_config(sweep_bang_cmd, bang_o);
    add_model(sweep_bang_cmd, bang_o);
    add_sweep(sweep_bang_cmd, bang_o, 0.1, 200.0);
    add_outputs(sweep_bang_cmd, bang_o);

    auto* sweep_zeno_cmd = app.add_subcommand("sweep-zeno", "gamma_d^Z vs 2pi/(T_c omega3')");
    add_config(sweep_zeno_cmd, zeno_o);
    add_model(sweep_zeno_cmd, zeno_o);
    add_sweep(sweep_zeno_cmd, zeno_o, 0.1, 1e7);
    add_outputs(sweep_zeno_cmd, zeno_o);

    auto* equiv_cmd =
        app.add_subcommand("equivalence", "Residuals of the decoupling/Zeno averaging identities");
    add_config(equiv_cmd, o);
    equiv_cmd->add_option("--omega", o.omega, "Rabi amplitude Omega of |3>-|4>")
        ->capture_default_str();
    equiv_cmd->add_option("--xi", o.xi, "Detuning xi")->capture_default_str();
    equiv_cmd->add_option("--delta", o.delta, "Qubit Rabi amplitude Delta")->capture_default_str();
    equiv_cmd->add_option("--shift", o.shift, "Qubit level shift delta")->capture_default_str();

    auto* shifts_cmd = app.add_subcommand("shifts", "Principal-value shifts delta and delta'");
    add_config(shifts_cmd, o);
    add_model(shifts_cmd, o);

    try {
        const auto args = expand_config(args_in, app);
        std::vector<const char*> argv;
        argv.reserve(args.size());
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << harness::kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failing = &app;
        for (const auto* sub : app.get_subcommands()) failing = sub;
        err << failing->help();
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (rates_cmd->parsed()) {
            omega_opt = rates_omega;
            xi_opt = rates_cmd->get_option("--xi");
            tc_opt = rates_tc;
            return run_rates(o, make_control(o, omega_opt, xi_opt, tc_opt), out);
        }
        if (evolve_cmd->parsed()) {
            omega_opt = evolve_omega;
            xi_opt = evolve_cmd->get_option("--xi");
            tc_opt = evolve_tc;
            return run_evolve(o, make_control(o, omega_opt, xi_opt, tc_opt), out);
        }
        if (sweep_bang_cmd->parsed()) return run_sweep(bang_o, true, out);
        if (sweep_zeno_cmd->parsed()) return run_sweep(zeno_o, false, out);
        if (equiv_cmd->parsed()) return run_equivalence(o, out);
        if (shifts_cmd->parsed()) return run_shifts(o, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
    return kUsage;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    if (args.empty()) args.emplace_back("iondeco");
    return cli_main(args, out, err);
}

}  // namespace iondeco::cli
