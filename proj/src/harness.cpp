#include "iondeco/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "iondeco/error.hpp"

namespace iondeco::harness {

spectral::FormFactorParams ScenarioConfig::form() const {
    return spectral::calibrate(calibration.gamma_d_target, calibration.gamma_ratio,
                               calibration.omega_c_over_omega3);
}

namespace {

rates::RateSet rescaled(rates::RateSet r, double unit) {
    for (double* x : {&r.gamma_d, &r.gamma_e, &r.gamma_d_plus, &r.gamma_d_minus, &r.gamma_e_plus,
                      &r.gamma_e_minus})
        *x /= unit;
    return r;
}

}  // namespace

rates::RateSet scenario_rates(const ScenarioConfig& cfg) {
    const auto p = cfg.form();
    rates::validate(cfg.control);
    const double unit = rates::rates_uncontrolled(p).gamma_d;
    return rescaled(rates::compute_rates(p, cfg.control, cfg.quadrature), unit);
}

namespace {

dynamics::Trajectory integrate_scenario(const ScenarioConfig& cfg, const rates::RateSet& r) {
    if (!(cfg.horizon >= 0.0)) throw InputError("horizon must be non-negative");
    if (!(cfg.sample_spacing > 0.0)) throw InputError("sample spacing must be positive");
    auto ode = dynamics::default_ode_spec(r, cfg.delta_rabi);
    const double spacing = std::min(cfg.sample_spacing, std::max(cfg.horizon, ode.step));
    const auto per_sample = static_cast<std::size_t>(std::ceil(spacing / ode.step));
    ode.step = spacing / static_cast<double>(per_sample);
    return dynamics::evolve(dynamics::SystemState::ground(r.regime), r, cfg.delta_rabi, cfg.horizon,
                            ode, per_sample);
}

}  // namespace

dynamics::Trajectory run_purity_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.delta_rabi >= 0.0)) throw InputError("Rabi amplitude must be non-negative");
    const auto r = scenario_rates(cfg);
    auto traj = integrate_scenario(cfg, r);
    if (!cfg.csv_path.empty()) emit_csv(traj, cfg.csv_path, describe(cfg));
    if (!cfg.svg_path.empty()) {
        if (r.regime == rates::Regime::None) {
            emit_svg(traj, cfg.svg_path);
        } else {
            ScenarioConfig plain = cfg;
            plain.control = rates::NoControl{};
            const auto baseline = integrate_scenario(plain, scenario_rates(plain));
            emit_svg(traj, cfg.svg_path, &baseline);
        }
    }
    return traj;
}

std::vector<double> make_grid(double lo, double hi, std::size_t n, bool linear) {
    if (n == 0) throw InputError("grid needs at least one point");
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw InputError("grid bounds must be finite with min <= max");
    if (n == 1) return {lo};
    if (!(lo < hi)) throw InputError("grid with several points needs min < max");
    if (!linear && !(lo > 0.0)) throw InputError("logarithmic grid needs a positive minimum");
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        g[i] = linear ? lo + t * (hi - lo) : lo * std::pow(hi / lo, t);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& f) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += threads) f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw InputError("sweep grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || !std::isfinite(grid[i]))
            throw InputError("sweep grid values must be positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw InputError("sweep grid must be strictly increasing");
    }
}

}  // namespace

SweepCurve sweep_bang(const ScenarioConfig& cfg, const std::vector<double>& grid) {
    check_grid(grid);
    const auto p = cfg.form();
    const double unit = rates::rates_uncontrolled(p).gamma_d;
    SweepCurve curve;
    curve.axis_label = "|omega_-|/omega3'";
    curve.grid = grid;
    curve.values.assign(grid.size(), 0.0);
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        curve.values[i] = rates::rates_bang(p, rates::Bang::from_omega_minus(grid[i])).gamma_d / unit;
    });
    annotate(curve);
    return curve;
}

SweepCurve sweep_zeno(const ScenarioConfig& cfg, const std::vector<double>& grid) {
    check_grid(grid);
    const auto p = cfg.form();
    const double unit = rates::rates_uncontrolled(p).gamma_d;
    SweepCurve curve;
    curve.axis_label = "2pi/(T_c omega3')";
    curve.grid = grid;
    curve.values.assign(grid.size(), 0.0);
    parallel_for(grid.size(), cfg.threads, [&](std::size_t i) {
        const auto z = rates::Zeno::from_frequency(grid[i] * p.omega3p);
        curve.values[i] = rates::rates_zeno(p, z, cfg.quadrature).gamma_d / unit;
    });
    annotate(curve);
    return curve;
}

std::optional<double> find_crossover(const SweepCurve& curve, double reference) {
    const auto& x = curve.grid;
    const auto& y = curve.values;
    if (x.size() != y.size()) throw InputError("curve grid and values differ in length");
    for (std::size_t i = x.size(); i-- > 1;) {
        if (y[i - 1] > reference && y[i] <= reference) {
            const double frac = (y[i - 1] - reference) / (y[i - 1] - y[i]);
            return x[i - 1] + frac * (x[i] - x[i - 1]);
        }
    }
    return std::nullopt;
}

void annotate(SweepCurve& curve) {
    if (curve.values.empty()) return;
    const auto it = std::max_element(curve.values.begin(), curve.values.end());
    const auto i = static_cast<std::size_t>(it - curve.values.begin());
    curve.peak = CurvePoint{curve.grid[i], *it};
    curve.crossover = find_crossover(curve, 1.0);
}

Metadata describe(const ScenarioConfig& cfg) {
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(15);
        s << v;
        return s.str();
    };
    const auto p = cfg.form();
    Metadata m{
        {"generator", std::string("iondeco ") + kVersion},
        {"units", "rates in gamma_d (uncontrolled), frequencies in omega3', time in 1/gamma_d"},
        {"gamma_ratio", num(cfg.calibration.gamma_ratio)},
        {"omega_c", num(p.omega_c)},
        {"v0", num(p.v0)},
        {"beta", num(p.beta)},
        {"delta_rabi", num(cfg.delta_rabi)},
        {"control", std::string(rates::regime_name(rates::regime_of(cfg.control)))},
    };
    if (const auto* b = std::get_if<rates::Bang>(&cfg.control)) {
        m.emplace_back("omega_rabi", num(b->omega_rabi));
        m.emplace_back("xi", num(b->xi));
        m.emplace_back("omega4", num(b->omega4));
    } else if (const auto* z = std::get_if<rates::Zeno>(&cfg.control)) {
        m.emplace_back("t_c", num(z->t_c));
    }
    m.emplace_back("horizon", num(cfg.horizon));
    m.emplace_back("threshold", num(cfg.threshold));
    return m;
}

}  // namespace iondeco::harness
