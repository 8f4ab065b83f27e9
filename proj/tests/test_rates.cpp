#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "iondeco/error.hpp"
#include "iondeco/numerics.hpp"
#include "iondeco/rates.hpp"
#include "iondeco/spectral.hpp"

using namespace iondeco;
using rates::Bang;
using rates::Zeno;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

spectral::FormFactorParams defaults() { return spectral::calibrate(1.0, 1000.0, 10.0); }

// Midpoint rule for T_c * integral of kappa sinc^2 on a uniform grid.
template <class F>
double sinc_oracle(F kappa, double pole, double t_c, double lo, double hi, long n) {
    const double h = (hi - lo) / static_cast<double>(n);
    double s = 0.0;
    for (long i = 0; i < n; ++i) {
        const double w = lo + (static_cast<double>(i) + 0.5) * h;
        const double x = 0.5 * (w - pole) * t_c;
        const double sc = x == 0.0 ? 1.0 : std::sin(x) / x;
        s += kappa(w) * sc * sc;
    }
    return t_c * s * h;
}

double total_kappa_d(const spectral::FormFactorParams& p) {
    auto kd = [&p](double w) { return spectral::kappa_d(w, p); };
    return numerics::integrate(kd, -40.0 * p.omega_c, 0.0) +
           numerics::integrate(kd, 0.0, 40.0 / (p.beta + 1.0 / p.omega_c));
}

}  // namespace

TEST(Dressed, SweepParameterisation) {
    const double omega = 3.0;
    const auto f = rates::dressed_frequencies(omega, 24.0 * omega / 5.0);
    EXPECT_NEAR(f.plus, omega / 5.0, 1e-15);
    EXPECT_NEAR(f.minus, -5.0 * omega, 1e-14);
    const auto w = rates::dressed_weights(omega, 24.0 * omega / 5.0);
    EXPECT_NEAR(w.plus, 25.0 / 26.0, 1e-15);
    EXPECT_NEAR(w.minus, 1.0 / 26.0, 1e-15);
    const auto b = Bang::from_omega_minus(150.0);
    EXPECT_DOUBLE_EQ(b.omega_rabi, 30.0);
    EXPECT_DOUBLE_EQ(b.xi, 144.0);
}

TEST(Dressed, SymmetricSplitting) {
    const auto f = rates::dressed_frequencies(2.0, 0.0);
    EXPECT_DOUBLE_EQ(f.plus, 2.0);
    EXPECT_DOUBLE_EQ(f.minus, -2.0);
    const auto w = rates::dressed_weights(2.0, 0.0);
    EXPECT_DOUBLE_EQ(w.plus, 0.5);
    EXPECT_DOUBLE_EQ(w.minus, 0.5);
}

TEST(Dressed, UncoupledLimit) {
    const auto f = rates::dressed_frequencies(0.0, 3.0);
    EXPECT_EQ(f.plus, 0.0);
    EXPECT_EQ(f.minus, -3.0);
    const auto w = rates::dressed_weights(1e-9, 3.0);
    EXPECT_NEAR(w.plus, 1.0, 1e-15);
    EXPECT_NEAR(w.minus, 0.0, 1e-15);
}

TEST(Dressed, DegenerateRejected) {
    EXPECT_THROW(rates::dressed_weights(0.0, 0.0), InputError);
    EXPECT_THROW(rates::dressed_frequencies(-1.0, 0.0), InputError);
}

TEST(Dressed, RandomIdentities) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> le(-4.0, 4.0);
    std::uniform_real_distribution<double> sign(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double omega = std::pow(10.0, le(rng));
        const double xi = std::copysign(std::pow(10.0, le(rng)), sign(rng));
        const auto f = rates::dressed_frequencies(omega, xi);
        const auto w = rates::dressed_weights(omega, xi);
        ASSERT_GE(f.plus, 0.0);
        ASSERT_LE(f.minus, 0.0);
        EXPECT_NEAR(w.plus + w.minus, 1.0, 1e-12);
        EXPECT_NEAR(f.plus * f.minus / -(omega * omega), 1.0, 1e-12);
        // The sum cancels when |xi| << Omega, so it is relative to the root size.
        EXPECT_NEAR(f.plus + f.minus, -xi, 1e-12 * std::max(std::abs(xi), f.plus - f.minus));
        EXPECT_NEAR(w.plus, std::abs(f.minus) / (f.plus - f.minus), 1e-15);
    }
}

TEST(Schemes, Validation) {
    EXPECT_THROW(rates::validate(Bang{0.0, 1.0, 0.0}), InputError);
    EXPECT_THROW(rates::validate(Bang{1.0, 1.0, -1.0}), InputError);
    EXPECT_THROW(rates::validate(Zeno{0.0}), InputError);
    EXPECT_THROW(Zeno::from_frequency(-1.0), InputError);
    EXPECT_NEAR(Zeno::from_frequency(5e6).t_c, kTwoPi / 5e6, 1e-22);
    EXPECT_EQ(rates::regime_of(rates::NoControl{}), rates::Regime::None);
    EXPECT_EQ(rates::regime_of(Bang{}), rates::Regime::Bang);
    EXPECT_EQ(rates::regime_of(Zeno{}), rates::Regime::Zeno);
    EXPECT_EQ(rates::regime_name(rates::Regime::Zeno), "zeno");
}

TEST(Uncontrolled, CalibrationEcho) {
    const auto p = defaults();
    const auto r = rates::rates_uncontrolled(p);
    EXPECT_NEAR(r.gamma_d, 1.0, 1e-12);
    EXPECT_NEAR(r.gamma_e / r.gamma_d, 1000.0, 1e-9);
    EXPECT_NEAR(r.gamma_e, kTwoPi * spectral::kappa_d(1.0, p) * std::exp(p.beta), 1e-12 * r.gamma_e);
    EXPECT_EQ(r.regime, rates::Regime::None);
}

TEST(BangRates, VanishingDriveReproducesUncontrolled) {
    const auto p = defaults();
    const auto u = rates::rates_uncontrolled(p);
    const auto r = rates::rates_bang(p, Bang{1e-12, 1.0, 0.0});
    EXPECT_NEAR(r.gamma_d / u.gamma_d, 1.0, 1e-9);
    EXPECT_NEAR(r.gamma_e / u.gamma_e, 1.0, 1e-9);
}

TEST(BangRates, ChannelStructure) {
    const auto p = defaults();
    for (double wm : {0.3, 2.0, 11.0, 80.0, 150.0}) {
        const auto r = rates::rates_bang(p, Bang::from_omega_minus(wm));
        EXPECT_DOUBLE_EQ(r.gamma_d, r.gamma_d_plus + r.gamma_d_minus);
        EXPECT_DOUBLE_EQ(r.gamma_e, r.gamma_e_plus + r.gamma_e_minus);
        EXPECT_GE(r.gamma_d_plus, 0.0);
        EXPECT_GE(r.gamma_d_minus, 0.0);
        const double bp = std::exp(p.beta * (p.omega3p + r.dressed.omega_plus));
        const double bm = std::exp(p.beta * (p.omega3p + r.dressed.omega_minus));
        EXPECT_NEAR(r.gamma_e_plus, r.gamma_d_plus * bp, 1e-10 * r.gamma_e_plus);
        // At large |omega_-| both sides of the minus channel underflow to zero.
        const double em = r.gamma_d_minus * bm;
        EXPECT_NEAR(r.gamma_e_minus, em, 1e-10 * std::max(r.gamma_e_minus, em));
        // Direct evaluation of one channel.
        const double expected = kTwoPi * (25.0 / 26.0) * spectral::kappa_d(1.0 + wm / 25.0, p);
        EXPECT_NEAR(r.gamma_d_plus / expected, 1.0, 1e-12);
    }
}

TEST(BangRates, EnhancementAndSuppression) {
    const auto p = defaults();
    EXPECT_GT(rates::rates_bang(p, Bang::from_omega_minus(0.5)).gamma_d, 1.0);
    EXPECT_LT(rates::rates_bang(p, Bang::from_omega_minus(150.0)).gamma_d, 1.0);
    EXPECT_NEAR(rates::rates_bang(p, Bang::from_omega_minus(80.0)).gamma_d, 1.0, 0.3);
}

TEST(BangApprox, AnchorValues) {
    const auto p = defaults();
    EXPECT_NEAR(rates::bang_high_freq_approx(p, Bang::from_omega_minus(10.0)),
                1000.0 / 26.0 * 10.0 * std::exp(-1.0), 1e-9);
    EXPECT_NEAR(rates::bang_high_freq_approx(p, Bang::from_omega_minus(10.0)) / 141.6, 1.0, 1e-3);
    EXPECT_NEAR(rates::bang_high_freq_approx(p, Bang::from_omega_minus(80.0)), 1.03, 0.01);
    EXPECT_NEAR(rates::bang_high_freq_approx(p, Bang::from_omega_minus(1e-9)), 0.0, 1e-6);
}

TEST(BangApprox, ValidityBand) {
    const auto p = defaults();
    for (double wm = 50.0; wm <= 120.0; wm += 5.0) {
        const Bang b = Bang::from_omega_minus(wm);
        const double ratio = rates::bang_high_freq_approx(p, b) / rates::rates_bang(p, b).gamma_d;
        EXPECT_LE(std::abs(ratio - 1.0), 0.35) << "|omega_-| = " << wm;
    }
}

TEST(ZenoApprox, AnchorValues) {
    const auto p = defaults();
    EXPECT_NEAR(rates::zeno_high_freq_approx(p, Zeno::from_frequency(1e5)), 1.0, 1e-9);
    EXPECT_NEAR(rates::zeno_high_freq_approx(p, Zeno::from_frequency(5e6)), 0.02, 1e-11);
    const double a = rates::zeno_high_freq_approx(p, Zeno::from_frequency(3e5));
    const double b = rates::zeno_high_freq_approx(p, Zeno::from_frequency(6e5));
    EXPECT_NEAR(b / a, 0.5, 1e-12);
}

TEST(SincFilter, MatchesDenseGridOracle) {
    // Smooth synthetic bath with known support.
    auto k = [](double w) { return std::exp(-std::abs(w) / 3.0) * (1.0 + 0.2 * w * w); };
    for (double t_c : {0.5, 4.0, 40.0}) {
        const double q = rates::sinc_filtered_integral(k, 1.0, t_c, -150.0, 150.0, 0.0);
        const double oracle = sinc_oracle(k, 1.0, t_c, -150.0, 150.0, 3000000);
        EXPECT_NEAR(q / oracle, 1.0, 1e-7) << "T_c = " << t_c;
    }
}

TEST(SincFilter, RejectsBadInput) {
    auto k = [](double) { return 1.0; };
    EXPECT_THROW(rates::sinc_filtered_integral(k, 1.0, 0.0, -1.0, 1.0, 0.0), InputError);
    EXPECT_THROW(rates::sinc_filtered_integral(k, 1.0, 1.0, 1.0, 1.0, 0.0), InputError);
}

TEST(ZenoRates, DefaultsMatchDenseOracle) {
    const auto p = defaults();
    auto kd = [&p](double w) { return spectral::kappa_d(w, p); };
    for (double freq : {0.5, 37.0, 5e6}) {
        const Zeno z = Zeno::from_frequency(freq);
        const auto r = rates::rates_zeno(p, z);
        const double oracle = sinc_oracle(kd, 1.0, z.t_c, -400.0, 40.0 / (p.beta + 0.1) + 1.0, 4000000);
        EXPECT_NEAR(r.gamma_d / oracle, 1.0, 1e-6) << "frequency " << freq;
        EXPECT_GE(r.gamma_e, 0.0);
        EXPECT_EQ(r.regime, rates::Regime::Zeno);
    }
}

TEST(ZenoRates, HighFrequencyAnchor) {
    const auto p = defaults();
    const auto r = rates::rates_zeno(p, Zeno::from_frequency(5e6));
    EXPECT_NEAR(r.gamma_d, 0.02, 0.3 * 0.02);
    for (double freq : {1e5, 3e5, 1e6, 5e6}) {
        const Zeno z = Zeno::from_frequency(freq);
        const double ratio = rates::rates_zeno(p, z).gamma_d / rates::zeno_high_freq_approx(p, z);
        EXPECT_NEAR(ratio, 1.0, 0.3) << "frequency " << freq;
    }
}

TEST(ZenoRates, LinearShortPeriodLimit) {
    const auto p = defaults();
    const double total = total_kappa_d(p);
    const double a = rates::rates_zeno(p, Zeno{1e-4}).gamma_d / 1e-4;
    const double b = rates::rates_zeno(p, Zeno{1e-5}).gamma_d / 1e-5;
    EXPECT_NEAR(a / b, 1.0, 0.005);
    EXPECT_NEAR(a / total, 1.0, 0.02);
    EXPECT_NEAR(b / total, 1.0, 0.02);
}

TEST(ZenoRates, LongPeriodApproachesUncontrolled) {
    // The approach is monotone in T_c; the residual at finite T_c is the
    // O(1/T_c) leakage of the Fejer kernel onto the negative-frequency bath.
    const auto p = defaults();
    const double d2 = std::abs(rates::rates_zeno(p, Zeno{1e2}).gamma_d - 1.0);
    const double d3 = std::abs(rates::rates_zeno(p, Zeno{1e3}).gamma_d - 1.0);
    EXPECT_LT(d3, d2);
    EXPECT_LT(d3, 0.5);
}

TEST(ComputeRates, Dispatch) {
    const auto p = defaults();
    EXPECT_EQ(rates::compute_rates(p, rates::NoControl{}).regime, rates::Regime::None);
    EXPECT_EQ(rates::compute_rates(p, Bang::from_omega_minus(5.0)).regime, rates::Regime::Bang);
    EXPECT_EQ(rates::compute_rates(p, Zeno{1.0}).regime, rates::Regime::Zeno);
    const auto r = rates::compute_rates(p, Bang::from_omega_minus(5.0));
    EXPECT_DOUBLE_EQ(r.max_rate(), std::max({r.gamma_d, r.gamma_e, r.gamma_d_plus, r.gamma_d_minus,
                                             r.gamma_e_plus, r.gamma_e_minus}));
}
