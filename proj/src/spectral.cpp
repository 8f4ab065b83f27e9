#include "iondeco/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "iondeco/error.hpp"

namespace iondeco::spectral {

void FormFactorParams::validate() const {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(v0)) throw InputError("form factor: v0 must be positive");
    if (!positive(omega_c)) throw InputError("form factor: omega_c must be positive");
    if (!positive(beta)) throw InputError("form factor: beta must be positive");
    if (!positive(omega3p)) throw InputError("form factor: omega3p must be positive");
}

namespace {

// w / (e^{beta w} - 1), continuous through w = 0.
double bose_weight(double omega, double beta) {
    const double x = beta * omega;
    if (std::abs(x) < 1e-4) return (1.0 - x / 2.0 + x * x / 12.0) / beta;
    return omega / std::expm1(x);
}

double prefactor(const FormFactorParams& p) { return p.v0 * p.v0 / (2.0 * std::numbers::pi); }

}  // namespace

double kappa_d(double omega, const FormFactorParams& p) {
    return prefactor(p) * bose_weight(omega, p.beta) * std::exp(-std::abs(omega) / p.omega_c);
}

double kappa_e(double omega, const FormFactorParams& p) {
    // e^{beta w} w / (e^{beta w} - 1) = (-w) / (e^{-beta w} - 1)
    return prefactor(p) * bose_weight(-omega, p.beta) * std::exp(-std::abs(omega) / p.omega_c);
}

double pv_shift(const numerics::RealFunction& kappa, double pole, double half_width,
                double lower_tail_scale, double upper_tail_scale,
                const numerics::QuadratureSpec& spec) {
    double value = numerics::principal_value(kappa, pole, half_width, spec);
    if (upper_tail_scale > 0.0) {
        auto upper = [&](double w) { return kappa(w) / (w - pole); };
        value += numerics::integrate_semi_infinite(upper, pole + half_width, upper_tail_scale, spec);
    }
    if (lower_tail_scale > 0.0) {
        // w = pole - half_width - u
        auto lower = [&](double u) { return -kappa(pole - half_width - u) / (half_width + u); };
        value += numerics::integrate_semi_infinite(lower, 0.0, lower_tail_scale, spec);
    }
    return value;
}

double pv_half_width(const FormFactorParams& p) {
    return numerics::kTailScales * std::max(p.omega_c, 1.0 / p.beta);
}

namespace {

// Decay scale on the thermally suppressed side of the form factor.
double suppressed_scale(const FormFactorParams& p) { return 1.0 / (p.beta + 1.0 / p.omega_c); }

}  // namespace

double lamb_shift_delta(const FormFactorParams& p, const numerics::QuadratureSpec& spec) {
    p.validate();
    auto k = [&p](double w) { return kappa_d(w, p); };
    return pv_shift(k, p.omega3p, pv_half_width(p), p.omega_c, suppressed_scale(p), spec);
}

double lamb_shift_delta_prime(const FormFactorParams& p, const numerics::QuadratureSpec& spec) {
    p.validate();
    auto k = [&p](double w) { return kappa_e(w, p); };
    return -pv_shift(k, p.omega3p, pv_half_width(p), suppressed_scale(p), p.omega_c, spec);
}

FormFactorParams calibrate(double gamma_d_target, double gamma_ratio,
                           double omega_c_over_omega3) {
    if (!(gamma_d_target > 0.0) || !std::isfinite(gamma_d_target))
        throw InputError("calibrate: gamma_d target must be positive");
    if (!(omega_c_over_omega3 > 0.0) || !std::isfinite(omega_c_over_omega3))
        throw InputError("calibrate: omega_c/omega3' must be positive");
    if (!(gamma_ratio > 1.0) || !std::isfinite(gamma_ratio))
        throw InputError("calibrate: gamma_e/gamma_d must exceed 1 (negative temperature)");
    FormFactorParams p;
    p.omega3p = 1.0;
    p.omega_c = omega_c_over_omega3 * p.omega3p;
    p.beta = std::log(gamma_ratio) / p.omega3p;
    const double v0_sq =
        gamma_d_target * std::expm1(p.beta * p.omega3p) * std::exp(p.omega3p / p.omega_c) / p.omega3p;
    p.v0 = std::sqrt(v0_sq);
    return p;
}

ModelParams make_model(const FormFactorParams& form, double delta_rabi,
                       const numerics::QuadratureSpec& spec) {
    form.validate();
    if (!(delta_rabi >= 0.0) || !std::isfinite(delta_rabi))
        throw InputError("Rabi amplitude must be non-negative");
    return ModelParams{form, delta_rabi, lamb_shift_delta(form, spec)};
}

}  // namespace iondeco::spectral
