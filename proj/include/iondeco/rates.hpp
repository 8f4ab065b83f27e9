#pragma once

#include <string_view>
#include <variant>

#include "iondeco/numerics.hpp"
#include "iondeco/spectral.hpp"

namespace iondeco::rates {

struct NoControl {};

/// Coherent driving of |3> to an auxiliary level |4> with amplitude omega_rabi
/// and detuning xi.
struct Bang {
    double omega_rabi = 1.0;
    double xi = 0.0;
    double omega4 = 0.0;

    /// The sweep parameterisation: xi = 24 Omega / 5, so omega_- = -5 Omega
    /// and omega_+ = Omega / 5.
    static Bang from_omega_minus(double abs_omega_minus, double omega4 = 0.0);
};

/// Repeated nonselective measurement of |3> with period t_c.
struct Zeno {
    double t_c = 1.0;

    /// Measurement with control frequency 2 pi / t_c, in units of omega3'.
    static Zeno from_frequency(double control_frequency);
};

using ControlScheme = std::variant<NoControl, Bang, Zeno>;

enum class Regime { None, Bang, Zeno };

std::string_view regime_name(Regime r);
Regime regime_of(const ControlScheme& scheme);

/// Throws InputError when Bang has omega_rabi <= 0 or Zeno has t_c <= 0.
void validate(const ControlScheme& scheme);

/// Dressed eigenfrequencies of -xi|4><4| + Omega(|3><4| + h.c.) and the squared
/// overlaps |<3|+-,>|^2.
struct DressedPair {
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double weight_plus = 1.0;
    double weight_minus = 0.0;
};

struct Frequencies {
    double plus;
    double minus;
};

/// omega_+- = (-xi +- sqrt(xi^2 + 4 Omega^2)) / 2.
Frequencies dressed_frequencies(double omega_rabi, double xi);

struct Weights {
    double plus;
    double minus;
};

/// w_+- = |omega_-+| / (omega_+ - omega_-). Throws InputError for Omega = xi = 0.
Weights dressed_weights(double omega_rabi, double xi);

DressedPair dressed_pair(double omega_rabi, double xi);

/**
 * Rates of one control regime.
 *
 * gamma_d is the decoherence rate of |1> in every regime. For Bang it is
 * gamma_d^B = gamma_d^+ + gamma_d^-, and gamma_e holds gamma_e^+ + gamma_e^-,
 * which reduces to the uncontrolled gamma_e as Omega -> 0. Channel fields are
 * zero outside Bang.
 */
struct RateSet {
    Regime regime = Regime::None;
    double gamma_d = 0.0;
    double gamma_e = 0.0;
    double gamma_d_plus = 0.0;
    double gamma_d_minus = 0.0;
    double gamma_e_plus = 0.0;
    double gamma_e_minus = 0.0;
    DressedPair dressed{};

    double max_rate() const;
};

/// gamma_d = 2 pi kappa_d(omega3'), gamma_e = 2 pi kappa_e(omega3').
RateSet rates_uncontrolled(const spectral::FormFactorParams& p);

/// gamma_{d/e}^+- = 2 pi w_+- kappa_{d/e}(omega3' + omega_+-).
RateSet rates_bang(const spectral::FormFactorParams& p, const Bang& scheme);

/**
 * gamma_{d/e}^Z = T_c * integral of kappa_{d/e}(w) sinc^2((w - omega3') T_c / 2).
 *
 * The real axis is cut to [-40 s_-, 40 s_+] around the form factor's support,
 * where s_-+ are its decay scales on either side. Inside, panels run between
 * consecutive zeros of the sinc at omega3' + 2 pi k / T_c, the kink of the form
 * factor at w = 0 is a panel boundary, and each panel is integrated adaptively.
 */
RateSet rates_zeno(const spectral::FormFactorParams& p, const Zeno& scheme,
                   const numerics::QuadratureSpec& spec = {});

/// Dispatch on the scheme.
RateSet compute_rates(const spectral::FormFactorParams& p, const ControlScheme& scheme,
                      const numerics::QuadratureSpec& spec = {});

/// T_c * integral of kappa(w) sinc^2((w - pole) T_c / 2) for an arbitrary form
/// factor with the given support window and kink location.
double sinc_filtered_integral(const numerics::RealFunction& kappa, double pole, double t_c,
                              double window_lo, double window_hi, double kink,
                              const numerics::QuadratureSpec& spec = {});

/// High-frequency form of gamma_d^B:
/// omega_+ gamma_e omega_c / (omega3' (omega_+ - omega_-)) (|omega_-|/omega_c) e^{-|omega_-|/omega_c}.
double bang_high_freq_approx(const spectral::FormFactorParams& p, const Bang& scheme);

/// High-frequency form of gamma_d^Z: gamma_e (omega_c/omega3')^2 / (2 pi / (omega3' T_c)).
double zeno_high_freq_approx(const spectral::FormFactorParams& p, const Zeno& scheme);

}  // namespace iondeco::rates
