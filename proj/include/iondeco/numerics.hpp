#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace iondeco::numerics {

using RealFunction = std::function<double(double)>;

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    std::size_t max_subdivisions = 200000;

    /// Throws InputError if the tolerances or the budget are unusable.
    void validate() const;
};

struct OdeSpec {
    double step = 1e-3;
    bool error_check = false;
    double error_tol = 1e-6;

    void validate() const;
};

/// Number of decay scales kept before a semi-infinite integral is truncated.
inline constexpr double kTailScales = 40.0;

/**
 * Adaptive Simpson quadrature of f over [a, b].
 *
 * Panels are refined globally, largest error first. Each panel carries the
 * Richardson-extrapolated value S2 + (S2 - S1)/15 and the error |S2 - S1|/15.
 * Refinement stops once the summed error is below max(abs_tol, rel_tol*|Q|).
 * Throws QuadratureError carrying the best estimate when the budget runs out.
 */
double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec = {});

/// Same as integrate, but also reports the final summed error estimate.
double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec,
                 double& error_estimate);

/// Integral of f over [a, inf), truncated at a + kTailScales * decay_scale.
double integrate_semi_infinite(const RealFunction& f, double a, double decay_scale,
                               const QuadratureSpec& spec = {});

/**
 * Cauchy principal value of f(w)/(w - pole) over [pole - half_width, pole + half_width].
 *
 * Evaluated as the regular integral of (f(pole + x) - f(pole - x))/x over
 * [0, half_width]; near x = 0 the integrand is replaced by its limit 2 f'(pole)
 * from a central difference.
 */
double principal_value(const RealFunction& f, double pole, double half_width,
                       const QuadratureSpec& spec = {});

struct OdePath {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
};

/**
 * Classic fourth-order Runge-Kutta for dy/dt = rhs * y.
 *
 * The number of steps is ceil(t_end / spec.step) with the step shrunk so the
 * last one lands on t_end. States are recorded at t = 0, every sample_every
 * steps, and at t_end. With spec.error_check set, a second run at half the
 * step must agree with the first at t_end to spec.error_tol (max-abs).
 */
OdePath rk4_evolve(const Eigen::MatrixXd& rhs, const Eigen::VectorXd& y0, double t_end,
                   const OdeSpec& spec, std::size_t sample_every = 1);

}  // namespace iondeco::numerics
