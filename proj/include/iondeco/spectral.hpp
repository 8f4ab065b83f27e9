#pragma once

#include "iondeco/numerics.hpp"

namespace iondeco::spectral {

/// Reservoir and coupling parameters of the thermal form factors.
/// Frequencies are in units of omega3p, which is 1 in reduced units.
struct FormFactorParams {
    double v0 = 1.0;       ///< dimensionless coupling strength
    double omega_c = 10.0; ///< cutoff frequency
    double beta = 1.0;     ///< inverse temperature
    double omega3p = 1.0;  ///< shifted |1>-|3> transition frequency

    void validate() const;
};

struct ModelParams {
    FormFactorParams form;
    double delta_rabi = 100.0;  ///< Rabi amplitude of the qubit drive
    double delta_shift = 0.0;   ///< principal-value shift of |1>, see lamb_shift_delta
};

/// Downward-direction form factor (v0^2/2pi) w e^{-|w|/wc} / (e^{beta w} - 1),
/// defined on the whole real axis. At w = 0 it equals v0^2/(2 pi beta).
double kappa_d(double omega, const FormFactorParams& p);

/// Emission-direction form factor, kappa_d(w) e^{beta w} = kappa_d(-w).
double kappa_e(double omega, const FormFactorParams& p);

/// Principal value of kappa(w)/(w - pole) over the real axis.
///
/// The window [pole - half_width, pole + half_width] is handled by symmetric
/// pairing. When tail scales are positive, the regular remainders beyond the
/// window are added as semi-infinite integrals with those decay scales.
double pv_shift(const numerics::RealFunction& kappa, double pole, double half_width,
                double lower_tail_scale, double upper_tail_scale,
                const numerics::QuadratureSpec& spec = {});

/// Half-width of the principal-value window, 40 max(omega_c, 1/beta).
double pv_half_width(const FormFactorParams& p);

/// delta = p.v. integral of kappa_d(w)/(w - omega3p).
double lamb_shift_delta(const FormFactorParams& p, const numerics::QuadratureSpec& spec = {});

/// delta' = -p.v. integral of kappa_e(w)/(w - omega3p). Only dephases untracked
/// elements of the density matrix.
double lamb_shift_delta_prime(const FormFactorParams& p,
                              const numerics::QuadratureSpec& spec = {});

/**
 * Form-factor parameters in reduced units (omega3p = 1) such that
 * 2 pi kappa_d(omega3p) = gamma_d_target and kappa_e/kappa_d = gamma_ratio at omega3p.
 *
 * beta = ln(gamma_ratio)/omega3p and
 * v0^2 = gamma_d_target (e^{beta omega3p} - 1) e^{omega3p/omega_c} / omega3p.
 * gamma_ratio <= 1 would need a negative temperature and is rejected.
 */
FormFactorParams calibrate(double gamma_d_target, double gamma_ratio, double omega_c_over_omega3);

ModelParams make_model(const FormFactorParams& form, double delta_rabi,
                       const numerics::QuadratureSpec& spec = {});

}  // namespace iondeco::spectral
