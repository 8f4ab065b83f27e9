#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iondeco/dynamics.hpp"
#include "iondeco/numerics.hpp"
#include "iondeco/rates.hpp"
#include "iondeco/spectral.hpp"

namespace iondeco::harness {

inline constexpr const char* kVersion = "1.0.0";

struct Calibration {
    double gamma_d_target = 1.0;
    double gamma_ratio = 1000.0;
    double omega_c_over_omega3 = 10.0;
};

/// Defaults are Delta = 100 gamma_d, gamma_e = 1000 gamma_d, omega_c = 10 omega3'
/// and sigma(0) = |1><1|.
struct ScenarioConfig {
    Calibration calibration{};
    double delta_rabi = 100.0;  ///< in units of gamma_d
    rates::ControlScheme control = rates::NoControl{};
    double horizon = 4.0;          ///< in units of 1/gamma_d
    double sample_spacing = 0.01;  ///< in units of 1/gamma_d
    double threshold = 0.9;        ///< purity level defining the decoherence time
    std::size_t threads = 0;       ///< sweep workers; 0 picks hardware concurrency
    numerics::QuadratureSpec quadrature{};
    std::string csv_path;
    std::string svg_path;

    spectral::FormFactorParams form() const;
};

/// Rates of the configured control, rescaled to units of the uncontrolled gamma_d.
rates::RateSet scenario_rates(const ScenarioConfig& cfg);

/// Calibrates, computes the regime rates, integrates from |1><1| and writes
/// CSV/SVG when the config names output paths.
dynamics::Trajectory run_purity_scenario(const ScenarioConfig& cfg);

struct CurvePoint {
    double x = 0.0;
    double value = 0.0;
};

struct SweepCurve {
    std::string axis_label;
    std::vector<double> grid;
    std::vector<double> values;  ///< in units of the uncontrolled gamma_d
    CurvePoint peak{};
    std::optional<double> crossover;  ///< largest grid location where the curve falls to gamma_d
};

/// n points from lo to hi, logarithmic unless `linear`.
std::vector<double> make_grid(double lo, double hi, std::size_t n, bool linear = false);

/// gamma_d^B against |omega_-|/omega3' with xi = 24 Omega / 5.
SweepCurve sweep_bang(const ScenarioConfig& cfg, const std::vector<double>& grid);

/// gamma_d^Z against the control frequency 2 pi/(T_c omega3').
SweepCurve sweep_zeno(const ScenarioConfig& cfg, const std::vector<double>& grid);

/// Largest location where the curve passes from above `reference` to at or
/// below it, linearly interpolated between grid points.
std::optional<double> find_crossover(const SweepCurve& curve, double reference);

/// Fills peak and crossover (against gamma_d = 1) from grid and values.
void annotate(SweepCurve& curve);

/// Runs f(i) for i in [0, n) across `threads` workers (0 = hardware concurrency).
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& f);

// ---- output -------------------------------------------------------------

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Parameters of a scenario as "# key: value" metadata.
Metadata describe(const ScenarioConfig& cfg);

/// Trajectory CSV: "#" metadata lines, then tau,s11,s22,s12_re,s12_im,<excited...>,eta
/// with 15 significant digits.
void emit_csv(const dynamics::Trajectory& traj, const std::string& path, const Metadata& meta = {});
/// Sweep CSV: "#" metadata lines, then x,rate.
void emit_csv(const SweepCurve& curve, const std::string& path, const Metadata& meta = {});

/// Reads a trajectory CSV written by emit_csv; "#" lines are skipped.
dynamics::Trajectory parse_trajectory_csv(const std::string& path);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::optional<double> reference_y;  ///< horizontal guide line
};

/// SVG line plot with one polyline per series.
void emit_svg(const std::vector<PlotSeries>& series, const PlotOptions& options,
              const std::string& path);
/// Purity against time; an optional baseline is drawn dashed.
void emit_svg(const dynamics::Trajectory& traj, const std::string& path,
              const dynamics::Trajectory* baseline = nullptr);
/// Log-log rate curve with the gamma_d = 1 guide.
void emit_svg(const SweepCurve& curve, const std::string& path);

}  // namespace iondeco::harness
