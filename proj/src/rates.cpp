#include "iondeco/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "iondeco/error.hpp"

namespace iondeco::rates {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Bang Bang::from_omega_minus(double abs_omega_minus, double omega4) {
    const double omega = abs_omega_minus / 5.0;
    return Bang{omega, 24.0 * omega / 5.0, omega4};
}

Zeno Zeno::from_frequency(double control_frequency) {
    if (!(control_frequency > 0.0)) throw InputError("Zeno control frequency must be positive");
    return Zeno{kTwoPi / control_frequency};
}

std::string_view regime_name(Regime r) {
    switch (r) {
        case Regime::None: return "none";
        case Regime::Bang: return "bang";
        case Regime::Zeno: return "zeno";
    }
    return "unknown";
}

Regime regime_of(const ControlScheme& scheme) {
    if (std::holds_alternative<Bang>(scheme)) return Regime::Bang;
    if (std::holds_alternative<Zeno>(scheme)) return Regime::Zeno;
    return Regime::None;
}

void validate(const ControlScheme& scheme) {
    if (const auto* b = std::get_if<Bang>(&scheme)) {
        if (!(b->omega_rabi > 0.0) || !std::isfinite(b->omega_rabi))
            throw InputError("bang control: Omega must be positive");
        if (!std::isfinite(b->xi)) throw InputError("bang control: xi must be finite");
        if (!(b->omega4 >= 0.0)) throw InputError("bang control: omega4 must be non-negative");
    } else if (const auto* z = std::get_if<Zeno>(&scheme)) {
        if (!(z->t_c > 0.0) || !std::isfinite(z->t_c))
            throw InputError("Zeno control: T_c must be positive");
    }
}

Frequencies dressed_frequencies(double omega_rabi, double xi) {
    if (!(omega_rabi >= 0.0)) throw InputError("dressed_frequencies: Omega must be non-negative");
    const double root = std::hypot(xi, 2.0 * omega_rabi);
    // Take the root free of cancellation and recover the other from omega_+ omega_- = -Omega^2.
    if (xi >= 0.0) {
        const double minus = -0.5 * (xi + root);
        const double plus = minus == 0.0 ? 0.0 : -(omega_rabi * omega_rabi) / minus;
        return {plus, minus};
    }
    const double plus = 0.5 * (root - xi);
    const double minus = -(omega_rabi * omega_rabi) / plus;
    return {plus, minus};
}

Weights dressed_weights(double omega_rabi, double xi) {
    const auto [plus, minus] = dressed_frequencies(omega_rabi, xi);
    const double gap = plus - minus;
    if (!(gap > 0.0)) throw InputError("dressed_weights: Omega = xi = 0 gives no splitting");
    return {std::abs(minus) / gap, std::abs(plus) / gap};
}

DressedPair dressed_pair(double omega_rabi, double xi) {
    const auto f = dressed_frequencies(omega_rabi, xi);
    const auto w = dressed_weights(omega_rabi, xi);
    return DressedPair{f.plus, f.minus, w.plus, w.minus};
}

double RateSet::max_rate() const {
    return std::max({gamma_d, gamma_e, gamma_d_plus, gamma_d_minus, gamma_e_plus, gamma_e_minus});
}

RateSet rates_uncontrolled(const spectral::FormFactorParams& p) {
    p.validate();
    RateSet r;
    r.regime = Regime::None;
    r.gamma_d = kTwoPi * spectral::kappa_d(p.omega3p, p);
    r.gamma_e = kTwoPi * spectral::kappa_e(p.omega3p, p);
    return r;
}

RateSet rates_bang(const spectral::FormFactorParams& p, const Bang& scheme) {
    p.validate();
    validate(scheme);
    const DressedPair d = dressed_pair(scheme.omega_rabi, scheme.xi);
    RateSet r;
    r.regime = Regime::Bang;
    r.dressed = d;
    r.gamma_d_plus = kTwoPi * d.weight_plus * spectral::kappa_d(p.omega3p + d.omega_plus, p);
    r.gamma_d_minus = kTwoPi * d.weight_minus * spectral::kappa_d(p.omega3p + d.omega_minus, p);
    r.gamma_e_plus = kTwoPi * d.weight_plus * spectral::kappa_e(p.omega3p + d.omega_plus, p);
    r.gamma_e_minus = kTwoPi * d.weight_minus * spectral::kappa_e(p.omega3p + d.omega_minus, p);
    r.gamma_d = r.gamma_d_plus + r.gamma_d_minus;
    r.gamma_e = r.gamma_e_plus + r.gamma_e_minus;
    return r;
}

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

}  // namespace

double sinc_filtered_integral(const numerics::RealFunction& kappa, double pole, double t_c,
                              double window_lo, double window_hi, double kink,
                              const numerics::QuadratureSpec& spec) {
    spec.validate();
    if (!(t_c > 0.0) || !std::isfinite(t_c)) throw InputError("sinc filter: T_c must be positive");
    if (!(window_lo < window_hi)) throw InputError("sinc filter: empty window");

    const double period = kTwoPi / t_c;
    std::vector<double> edges{window_lo};
    const double k_lo = std::ceil((window_lo - pole) / period);
    const double k_hi = std::floor((window_hi - pole) / period);
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        const double w = pole + k * period;
        if (w > window_lo && w < window_hi) edges.push_back(w);
    }
    edges.push_back(window_hi);
    if (kink > window_lo && kink < window_hi) edges.push_back(kink);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto integrand = [&](double w) {
        const double s = sinc(0.5 * (w - pole) * t_c);
        return t_c * kappa(w) * s * s;
    };

    // A five-point Simpson pass sizes the error budget; each panel then gets an
    // equal share of rel_tol * |total| as its absolute tolerance.
    const auto panels = static_cast<double>(edges.size() - 1);
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1], h = b - a;
        rough += h / 12.0 *
                 (integrand(a) + 4.0 * integrand(a + 0.25 * h) + 2.0 * integrand(a + 0.5 * h) +
                  4.0 * integrand(a + 0.75 * h) + integrand(b));
    }
    numerics::QuadratureSpec panel_spec = spec;
    panel_spec.abs_tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(rough)) / panels;
    if (panel_spec.abs_tol == 0.0 && panel_spec.rel_tol == 0.0) panel_spec.abs_tol = spec.abs_tol;

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += numerics::integrate(integrand, edges[i], edges[i + 1], panel_spec);
    return total;
}

namespace {

struct Support {
    double lo;
    double hi;
};

// Form factor support: decay scale omega_c on the open side, 1/(beta + 1/omega_c)
// on the thermally suppressed side.
Support support_of(const spectral::FormFactorParams& p, bool emission) {
    const double open = p.omega_c;
    const double suppressed = 1.0 / (p.beta + 1.0 / p.omega_c);
    const double lo_scale = emission ? suppressed : open;
    const double hi_scale = emission ? open : suppressed;
    return {std::min(0.0, p.omega3p) - numerics::kTailScales * lo_scale,
            std::max(0.0, p.omega3p) + numerics::kTailScales * hi_scale};
}

}  // namespace

RateSet rates_zeno(const spectral::FormFactorParams& p, const Zeno& scheme,
                   const numerics::QuadratureSpec& spec) {
    p.validate();
    validate(scheme);
    RateSet r;
    r.regime = Regime::Zeno;
    const auto sd = support_of(p, false);
    const auto se = support_of(p, true);
    r.gamma_d = sinc_filtered_integral([&p](double w) { return spectral::kappa_d(w, p); },
                                       p.omega3p, scheme.t_c, sd.lo, sd.hi, 0.0, spec);
    r.gamma_e = sinc_filtered_integral([&p](double w) { return spectral::kappa_e(w, p); },
                                       p.omega3p, scheme.t_c, se.lo, se.hi, 0.0, spec);
    return r;
}

RateSet compute_rates(const spectral::FormFactorParams& p, const ControlScheme& scheme,
                      const numerics::QuadratureSpec& spec) {
    return std::visit(
        [&](const auto& s) -> RateSet {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Bang>) return rates_bang(p, s);
            else if constexpr (std::is_same_v<T, Zeno>) return rates_zeno(p, s, spec);
            else return rates_uncontrolled(p);
        },
        scheme);
}

double bang_high_freq_approx(const spectral::FormFactorParams& p, const Bang& scheme) {
    p.validate();
    validate(scheme);
    const auto [plus, minus] = dressed_frequencies(scheme.omega_rabi, scheme.xi);
    const double gamma_e = rates_uncontrolled(p).gamma_e;
    const double x = std::abs(minus) / p.omega_c;
    return plus * gamma_e * p.omega_c / (p.omega3p * (plus - minus)) * x * std::exp(-x);
}

double zeno_high_freq_approx(const spectral::FormFactorParams& p, const Zeno& scheme) {
    p.validate();
    validate(scheme);
    const double gamma_e = rates_uncontrolled(p).gamma_e;
    const double ratio = p.omega_c / p.omega3p;
    return gamma_e * ratio * ratio / (kTwoPi / (p.omega3p * scheme.t_c));
}

}  // namespace iondeco::rates
