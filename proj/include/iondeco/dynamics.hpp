#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "iondeco/numerics.hpp"
#include "iondeco/rates.hpp"

namespace iondeco::dynamics {

using rates::Regime;

/// Tracked block of the reduced density matrix. The excited sector is s33 for
/// the uncontrolled and Zeno regimes and (s_pp, s_mm) for dynamical decoupling.
struct SystemState {
    Regime regime = Regime::None;
    double s11 = 1.0;
    double s22 = 0.0;
    double s12_re = 0.0;
    double s12_im = 0.0;
    double s33 = 0.0;
    double s_pp = 0.0;
    double s_mm = 0.0;

    /// sigma(0) = |1><1|.
    static SystemState ground(Regime regime);

    double total_population() const;
    /// s33, or s_pp + s_mm.
    double excited_population() const;

    /// Layout (s11, s12_re, s12_im, s22, excited...).
    Eigen::VectorXd to_vector() const;
    static SystemState from_vector(Regime regime, const Eigen::VectorXd& v);

    /// Throws InputError when a population is below -1e-9, the trace is off by
    /// more than 1e-9, or |s12|^2 > s11 s22 + 1e-9.
    void validate() const;
};

std::size_t state_size(Regime regime);

/// Names of the excited columns: {"s33"} or {"s_pp", "s_mm"}.
std::vector<std::string> excited_labels(Regime regime);

/// eta = s11^2 + s22^2 + 2|s12|^2.
double purity(const SystemState& s);

struct Trajectory {
    Regime regime = Regime::None;
    std::vector<double> times;
    std::vector<SystemState> states;
    std::vector<double> purity;

    bool empty() const noexcept { return times.empty(); }
    std::size_t size() const noexcept { return times.size(); }
};

/**
 * Real generator of the reduced master equation for the regime of `r`.
 *
 *   d s11/dt = -2 Delta s12_im - g_d s11 + sum_s g_e^s s_ss
 *   d s12/dt = -i Delta (s22 - s11) - g_d/2 s12
 *   d s22/dt = 2 Delta s12_im
 *   d s_ss/dt = g_d^s s11 - g_e^s s_ss
 */
Eigen::MatrixXd generator(const rates::RateSet& r, double delta_rabi);

/// Step 0.01 / max(Delta, fastest rate, 1).
numerics::OdeSpec default_ode_spec(const rates::RateSet& r, double delta_rabi);

/// Integrates from `initial` to tau_end and records states and purity every
/// `sample_every` steps. Throws InputError when the initial regime differs
/// from the rates' regime and AccuracyError when the final state breaks the
/// SystemState invariants.
Trajectory evolve(const SystemState& initial, const rates::RateSet& r, double delta_rabi,
                  double tau_end, const numerics::OdeSpec& ode, std::size_t sample_every = 1);

/// First time the purity drops below threshold, linearly interpolated.
std::optional<double> decoherence_time(const Trajectory& traj, double threshold);

}  // namespace iondeco::dynamics
