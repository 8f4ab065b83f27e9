#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace iondeco::averaging {

/// Complex matrix over the level basis {|1>, |2>, |3>, |4>, ...}; index 0 is |1>.
using SmallMatrix = Eigen::MatrixXcd;

/// Default tolerance for the exact matrix identities in this module.
inline constexpr double kMatrixTol = 1e-12;

/// Largest absolute entry.
double max_entry(const SmallMatrix& m);

bool is_hermitian(const SmallMatrix& m, double tol = kMatrixTol);
bool is_unitary(const SmallMatrix& m, double tol = kMatrixTol);

/// |i><j| in dimension n (zero-based indices).
SmallMatrix dyad(int n, int i, int j);

/// Orthogonal Hermitian projections resolving the identity.
class ProjectionSet {
public:
    /// Throws InputError unless every P is Hermitian and idempotent, distinct
    /// members are orthogonal, and they sum to the identity.
    explicit ProjectionSet(std::vector<SmallMatrix> projections, double tol = kMatrixTol);

    const std::vector<SmallMatrix>& projections() const noexcept { return projections_; }
    int dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return projections_.size(); }
    const SmallMatrix& operator[](std::size_t i) const { return projections_[i]; }

private:
    std::vector<SmallMatrix> projections_;
    int dimension_ = 0;
};

/// (1/M) sum_j g_j^dagger h g_j. Throws InputError for a non-unitary member.
SmallMatrix average_cyclic(const SmallMatrix& h, const std::vector<SmallMatrix>& group);

/// sum_n P_n h P_n.
SmallMatrix average_projective(const SmallMatrix& h, const ProjectionSet& ps);

/// {P_+, P_-} on span{|3>, |4>} (a 2x2 set, index 0 is |3>) diagonalising
/// -xi|4><4| + Omega(|3><4| + h.c.) with eigenvalues omega_+-.
ProjectionSet measurement_eigenprojections(double omega_rabi, double xi);

/// Places a block at the given offset inside an n x n zero matrix.
SmallMatrix embed(const SmallMatrix& block, int n, int offset);

/// -xi sum_s omega_s^2 (Omega|3> + omega_s|4>)(Omega<3| + omega_s<4|) / (Omega^2 + omega_s^2)^2
/// in the four-level space.
SmallMatrix dressed_dyad_sum(double omega_rabi, double xi);

/// The qubit Hamiltonian -delta|1><1| + Delta|1><2| + conj(Delta)|2><1| in dimension n.
SmallMatrix rabi_hamiltonian(int n, double delta_shift, std::complex<double> delta_rabi);

/**
 * Pinch of -xi|4><4| + h_extra by {P_+, P_-, 1 - P_+ - P_-} in the four-level space.
 *
 * The pinch of the measured part is checked against dressed_dyad_sum; a
 * residual above kMatrixTol throws ConsistencyError. h_extra must be 4 x 4.
 */
SmallMatrix zeno_projected_hamiltonian(double omega_rabi, double xi, const SmallMatrix& h_extra);

/// Max entry of sum_n P_n h_int P_n; zero when the interaction has no
/// component inside any single measurement subspace.
double decoupling_residual(const SmallMatrix& h_int, const ProjectionSet& ps);

}  // namespace iondeco::averaging
