#include "iondeco/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iondeco/error.hpp"

namespace iondeco::dynamics {

namespace {
constexpr double kStateTol = 1e-9;
}

SystemState SystemState::ground(Regime regime) {
    SystemState s;
    s.regime = regime;
    return s;
}

double SystemState::excited_population() const {
    return regime == Regime::Bang ? s_pp + s_mm : s33;
}

double SystemState::total_population() const { return s11 + s22 + excited_population(); }

std::size_t state_size(Regime regime) { return regime == Regime::Bang ? 6 : 5; }

std::vector<std::string> excited_labels(Regime regime) {
    if (regime == Regime::Bang) return {"s_pp", "s_mm"};
    return {"s33"};
}

Eigen::VectorXd SystemState::to_vector() const {
    Eigen::VectorXd v(state_size(regime));
    v(0) = s11;
    v(1) = s12_re;
    v(2) = s12_im;
    v(3) = s22;
    if (regime == Regime::Bang) {
        v(4) = s_pp;
        v(5) = s_mm;
    } else {
        v(4) = s33;
    }
    return v;
}

SystemState SystemState::from_vector(Regime regime, const Eigen::VectorXd& v) {
    if (static_cast<std::size_t>(v.size()) != state_size(regime))
        throw InputError("state vector size does not match the regime");
    SystemState s;
    s.regime = regime;
    s.s11 = v(0);
    s.s12_re = v(1);
    s.s12_im = v(2);
    s.s22 = v(3);
    if (regime == Regime::Bang) {
        s.s_pp = v(4);
        s.s_mm = v(5);
    } else {
        s.s33 = v(4);
    }
    return s;
}

void SystemState::validate() const {
    std::vector<double> pops{s11, s22};
    if (regime == Regime::Bang) {
        pops.push_back(s_pp);
        pops.push_back(s_mm);
    } else {
        pops.push_back(s33);
    }
    for (double p : pops)
        if (!(p >= -kStateTol)) throw InputError("state has a negative population");
    if (!(std::abs(total_population() - 1.0) <= kStateTol))
        throw InputError("state populations do not sum to 1");
    if (!(s12_re * s12_re + s12_im * s12_im <= s11 * s22 + kStateTol))
        throw InputError("state coherence exceeds sqrt(s11 s22)");
}

double purity(const SystemState& s) {
    return s.s11 * s.s11 + s.s22 * s.s22 + 2.0 * (s.s12_re * s.s12_re + s.s12_im * s.s12_im);
}

Eigen::MatrixXd generator(const rates::RateSet& r, double delta_rabi) {
    const std::size_t n = state_size(r.regime);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    enum { S11 = 0, RE = 1, IM = 2, S22 = 3 };
    const double gd = r.gamma_d;

    g(S11, IM) = -2.0 * delta_rabi;
    g(S11, S11) = -gd;
    g(S22, IM) = 2.0 * delta_rabi;
    g(RE, RE) = -0.5 * gd;
    g(IM, IM) = -0.5 * gd;
    g(IM, S11) = delta_rabi;
    g(IM, S22) = -delta_rabi;

    if (r.regime == Regime::Bang) {
        const double gd_s[2] = {r.gamma_d_plus, r.gamma_d_minus};
        const double ge_s[2] = {r.gamma_e_plus, r.gamma_e_minus};
        for (int s = 0; s < 2; ++s) {
            g(4 + s, S11) = gd_s[s];
            g(4 + s, 4 + s) = -ge_s[s];
            g(S11, 4 + s) = ge_s[s];
        }
    } else {
        g(4, S11) = gd;
        g(4, 4) = -r.gamma_e;
        g(S11, 4) = r.gamma_e;
    }
    return g;
}

numerics::OdeSpec default_ode_spec(const rates::RateSet& r, double delta_rabi) {
    numerics::OdeSpec spec;
    spec.step = 0.01 / std::max({delta_rabi, r.max_rate(), 1.0});
    return spec;
}

Trajectory evolve(const SystemState& initial, const rates::RateSet& r, double delta_rabi,
                  double tau_end, const numerics::OdeSpec& ode, std::size_t sample_every) {
    if (initial.regime != r.regime) {
        std::ostringstream msg;
        msg << "initial state regime '" << rates::regime_name(initial.regime)
            << "' does not match rates regime '" << rates::regime_name(r.regime) << "'";
        throw InputError(msg.str());
    }
    initial.validate();
    if (!(tau_end >= 0.0)) throw InputError("evolve: tau_end must be non-negative");

    const auto path =
        numerics::rk4_evolve(generator(r, delta_rabi), initial.to_vector(), tau_end, ode, sample_every);

    Trajectory traj;
    traj.regime = r.regime;
    traj.times = path.times;
    traj.states.reserve(path.states.size());
    traj.purity.reserve(path.states.size());
    for (const auto& v : path.states) {
        traj.states.push_back(SystemState::from_vector(r.regime, v));
        traj.purity.push_back(purity(traj.states.back()));
    }
    try {
        traj.states.back().validate();
    } catch (const InputError& e) {
        throw AccuracyError(std::string("final state breaks invariants: ") + e.what());
    }
    return traj;
}

std::optional<double> decoherence_time(const Trajectory& traj, double threshold) {
    if (traj.empty()) throw InputError("decoherence_time: empty trajectory");
    if (traj.purity.front() < threshold) return traj.times.front();
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double prev = traj.purity[i - 1], cur = traj.purity[i];
        if (cur < threshold) {
            const double frac = (prev - threshold) / (prev - cur);
            return traj.times[i - 1] + frac * (traj.times[i] - traj.times[i - 1]);
        }
    }
    return std::nullopt;
}

}  // namespace iondeco::dynamics
