#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "iondeco/averaging.hpp"
#include "iondeco/error.hpp"
#include "iondeco/rates.hpp"

using namespace iondeco;
using averaging::SmallMatrix;
using cd = std::complex<double>;

namespace {

SmallMatrix random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    SmallMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
    return 0.5 * (a + a.adjoint());
}

SmallMatrix measured_hamiltonian(double omega, double xi) {
    SmallMatrix h = SmallMatrix::Zero(4, 4);
    h(3, 3) = -xi;
    h(2, 3) = omega;
    h(3, 2) = omega;
    return h;
}

// Eigenprojections of the 2x2 measured block from a numerical eigensolver.
std::vector<SmallMatrix> eigensolver_projections(double omega, double xi) {
    Eigen::Matrix2d m;
    m << 0.0, omega, omega, -xi;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
    std::vector<SmallMatrix> out;
    for (int k = 0; k < 2; ++k) {
        const Eigen::Vector2d v = es.eigenvectors().col(k);
        SmallMatrix p = SmallMatrix::Zero(4, 4);
        p.block(2, 2, 2, 2) = (v * v.transpose()).cast<cd>();
        out.push_back(p);
    }
    SmallMatrix rest = SmallMatrix::Zero(4, 4);
    rest(0, 0) = rest(1, 1) = 1.0;
    out.push_back(rest);
    return out;
}

averaging::ProjectionSet pi3_split(int n) {
    const SmallMatrix p3 = averaging::dyad(n, 2, 2);
    return averaging::ProjectionSet({p3, SmallMatrix::Identity(n, n) - p3});
}

}  // namespace

TEST(Basics, DyadAndPredicates) {
    const SmallMatrix d = averaging::dyad(3, 0, 2);
    EXPECT_EQ(d(0, 2), cd(1.0));
    EXPECT_DOUBLE_EQ(averaging::max_entry(d), 1.0);
    EXPECT_FALSE(averaging::is_hermitian(d));
    EXPECT_TRUE(averaging::is_hermitian(d + d.adjoint()));
    EXPECT_TRUE(averaging::is_unitary(SmallMatrix::Identity(3, 3)));
    EXPECT_FALSE(averaging::is_unitary(2.0 * SmallMatrix::Identity(3, 3)));
    EXPECT_THROW(averaging::dyad(3, 3, 0), InputError);
}

TEST(ProjectionSet, RejectsInvalidSets) {
    const SmallMatrix p = averaging::dyad(2, 0, 0);
    EXPECT_THROW(averaging::ProjectionSet({p}), InputError);                         // incomplete
    EXPECT_THROW(averaging::ProjectionSet({p, p, averaging::dyad(2, 1, 1)}), InputError);  // overlap
    SmallMatrix q(2, 2);
    q << 1.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(averaging::ProjectionSet({q, SmallMatrix::Identity(2, 2) - q}), InputError);
    EXPECT_THROW(averaging::ProjectionSet({}), InputError);
    EXPECT_NO_THROW(averaging::ProjectionSet({p, averaging::dyad(2, 1, 1)}));
}

TEST(AverageCyclic, IdentityGroup) {
    std::mt19937_64 rng(1);
    const SmallMatrix h = random_hermitian(3, rng);
    EXPECT_LE(averaging::max_entry(averaging::average_cyclic(h, {SmallMatrix::Identity(3, 3)}) - h),
              1e-15);
}

TEST(AverageCyclic, PauliZRemovesOffDiagonals) {
    SmallMatrix z = SmallMatrix::Identity(2, 2);
    z(1, 1) = -1.0;
    SmallMatrix x = SmallMatrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    const std::vector<SmallMatrix> group{SmallMatrix::Identity(2, 2), z};
    EXPECT_LE(averaging::max_entry(averaging::average_cyclic(x, group)), 1e-15);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const SmallMatrix h = random_hermitian(2, rng);
        const SmallMatrix expected = h.diagonal().asDiagonal();
        const SmallMatrix avg = averaging::average_cyclic(h, group);
        EXPECT_LE(averaging::max_entry(avg - expected), 1e-14);
        EXPECT_TRUE(averaging::is_hermitian(avg));
        // Averaging over a group twice changes nothing.
        EXPECT_LE(averaging::max_entry(averaging::average_cyclic(avg, group) - avg), 1e-14);
    }
}

TEST(AverageCyclic, RejectsNonUnitary) {
    SmallMatrix h = SmallMatrix::Identity(2, 2);
    EXPECT_THROW(averaging::average_cyclic(h, {2.0 * h}), InputError);
    EXPECT_THROW(averaging::average_cyclic(h, {}), InputError);
}

TEST(AverageProjective, IdentitySetAndIdempotence) {
    std::mt19937_64 rng(5);
    const SmallMatrix h = random_hermitian(4, rng);
    const averaging::ProjectionSet one({SmallMatrix::Identity(4, 4)});
    EXPECT_LE(averaging::max_entry(averaging::average_projective(h, one) - h), 1e-15);
    const auto ps = pi3_split(4);
    const SmallMatrix once = averaging::average_projective(h, ps);
    EXPECT_LE(averaging::max_entry(averaging::average_projective(once, ps) - once), 1e-15);
}

TEST(AverageProjective, TracePreservingContraction) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const SmallMatrix h = random_hermitian(4, rng);
        const auto ps = averaging::measurement_eigenprojections(0.3 + trial, 0.1 * trial - 2.0);
        std::vector<SmallMatrix> full;
        for (const auto& p : ps.projections()) full.push_back(averaging::embed(p, 4, 2));
        SmallMatrix rest = SmallMatrix::Zero(4, 4);
        rest(0, 0) = rest(1, 1) = 1.0;
        full.push_back(rest);
        const averaging::ProjectionSet set(full);
        const SmallMatrix pinched = averaging::average_projective(h, set);
        EXPECT_NEAR(std::abs(pinched.trace() - h.trace()), 0.0, 1e-12);
        EXPECT_LE(averaging::max_entry(pinched), averaging::max_entry(h) * (1.0 + 1e-12) + 1e-12);
    }
}

TEST(AverageProjective, RabiBlockSurvivesPi3Split) {
    const SmallMatrix h = averaging::rabi_hamiltonian(3, 0.7, cd(2.0, -1.5));
    const SmallMatrix pinched = averaging::average_projective(h, pi3_split(3));
    EXPECT_LE(averaging::max_entry(pinched - h), 1e-15);
    EXPECT_EQ(pinched(0, 0), cd(-0.7));
    EXPECT_EQ(pinched(0, 1), cd(2.0, -1.5));
    EXPECT_EQ(pinched(1, 0), cd(2.0, 1.5));
}

TEST(Eigenprojections, SymmetricMixing) {
    const auto ps = averaging::measurement_eigenprojections(1.0, 0.0);
    ASSERT_EQ(ps.size(), 2u);
    EXPECT_NEAR(ps[0](0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(ps[0](0, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(ps[1](0, 1).real(), -0.5, 1e-15);
}

TEST(Eigenprojections, SweepWeights) {
    const double omega = 2.0;
    const auto ps = averaging::measurement_eigenprojections(omega, 24.0 * omega / 5.0);
    EXPECT_NEAR(ps[0](0, 0).real(), 25.0 / 26.0, 1e-15);
    EXPECT_NEAR(ps[1](0, 0).real(), 1.0 / 26.0, 1e-15);
    EXPECT_LE(averaging::max_entry(ps[0] + ps[1] - SmallMatrix::Identity(2, 2)), 1e-15);
}

TEST(Eigenprojections, DiagonaliseMeasuredBlockOnGrid) {
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const double omega = std::pow(10.0, -2.0 + 0.5 * i);
            const double xi = -50.0 + 11.0 * j;
            const auto ps = averaging::measurement_eigenprojections(omega, xi);
            const auto f = rates::dressed_frequencies(omega, xi);
            SmallMatrix m(2, 2);
            m << 0.0, omega, omega, -xi;
            const double scale = std::max({1.0, omega, std::abs(xi)});
            EXPECT_LE(averaging::max_entry(f.plus * ps[0] + f.minus * ps[1] - m), 1e-12 * scale);
        }
    }
}

TEST(Eigenprojections, UncoupledCase) {
    const auto ps = averaging::measurement_eigenprojections(0.0, 3.0);
    EXPECT_NEAR(ps[0](0, 0).real(), 1.0, 0.0);
    EXPECT_NEAR(ps[1](1, 1).real(), 1.0, 0.0);
    EXPECT_THROW(averaging::measurement_eigenprojections(0.0, 0.0), InputError);
}

TEST(ZenoProjected, PinchMatchesDressedDyadAndEigensolver) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lo(-2.0, 2.0), xs(-30.0, 30.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double omega = std::pow(10.0, lo(rng));
        const double xi = xs(rng);
        const SmallMatrix zero = SmallMatrix::Zero(4, 4);
        const SmallMatrix h = averaging::zeno_projected_hamiltonian(omega, xi, zero);
        const SmallMatrix closed = averaging::dressed_dyad_sum(omega, xi);
        EXPECT_LE(averaging::max_entry(h - closed), 1e-12 * std::max(1.0, std::abs(xi)));
        // Independent pinch with numerically computed projections.
        SmallMatrix brute = SmallMatrix::Zero(4, 4);
        const SmallMatrix hm = measured_hamiltonian(0.0, xi);
        for (const auto& p : eigensolver_projections(omega, xi)) brute += p * hm * p;
        EXPECT_LE(averaging::max_entry(h - brute), 1e-12 * std::max(1.0, std::abs(xi)));
    }
}

TEST(ZenoProjected, VanishingDetuning) {
    const SmallMatrix h =
        averaging::zeno_projected_hamiltonian(1.0, 0.0, SmallMatrix::Zero(4, 4));
    EXPECT_LE(averaging::max_entry(h), 1e-15);
}

TEST(ZenoProjected, QubitBlockIsRabiBlock) {
    const SmallMatrix rabi = averaging::rabi_hamiltonian(4, 0.3, cd(100.0, 0.0));
    for (double xi : {0.0, 4.8, -7.0}) {
        const SmallMatrix h = averaging::zeno_projected_hamiltonian(1.0, xi, rabi);
        EXPECT_LE(averaging::max_entry(h.block(0, 0, 2, 2) - rabi.block(0, 0, 2, 2)), 1e-12);
    }
    EXPECT_THROW(averaging::zeno_projected_hamiltonian(1.0, 1.0, SmallMatrix::Zero(3, 3)),
                 InputError);
}

TEST(DecouplingResidual, ZenoCouplingVanishes) {
    const SmallMatrix hint = averaging::dyad(3, 0, 2) + averaging::dyad(3, 2, 0);
    EXPECT_EQ(averaging::decoupling_residual(hint, pi3_split(3)), 0.0);
}

TEST(DecouplingResidual, QubitCouplingSurvives) {
    const SmallMatrix hint = averaging::dyad(3, 0, 1) + averaging::dyad(3, 1, 0);
    EXPECT_DOUBLE_EQ(averaging::decoupling_residual(hint, pi3_split(3)), 1.0);
}

TEST(DecouplingResidual, DiagonalSurvivesAnyCompleteSet) {
    SmallMatrix d = SmallMatrix::Zero(3, 3);
    d(0, 0) = 0.4;
    d(1, 1) = -2.5;
    d(2, 2) = 1.0;
    EXPECT_DOUBLE_EQ(averaging::decoupling_residual(d, pi3_split(3)), averaging::max_entry(d));
}

TEST(Embed, PlacesBlock) {
    SmallMatrix b(2, 2);
    b << 1.0, 2.0, 3.0, 4.0;
    const SmallMatrix e = averaging::embed(b, 4, 2);
    EXPECT_EQ(e(3, 2), cd(3.0));
    EXPECT_EQ(e(0, 0), cd(0.0));
    EXPECT_THROW(averaging::embed(b, 3, 2), InputError);
}
