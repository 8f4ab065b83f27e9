#include "iondeco/averaging.hpp"

#include <cmath>
#include <sstream>

#include "iondeco/error.hpp"
#include "iondeco/rates.hpp"

namespace iondeco::averaging {

namespace {

void check_dimension(const SmallMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 2 || m.rows() > 8) {
        std::ostringstream msg;
        msg << what << ": expected a square matrix of dimension 2..8, got " << m.rows() << "x"
            << m.cols();
        throw InputError(msg.str());
    }
}

}  // namespace

double max_entry(const SmallMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const SmallMatrix& m, double tol) {
    return m.rows() == m.cols() && max_entry(m - m.adjoint()) <= tol;
}

bool is_unitary(const SmallMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const SmallMatrix id = SmallMatrix::Identity(m.rows(), m.cols());
    return max_entry(m.adjoint() * m - id) <= tol;
}

SmallMatrix dyad(int n, int i, int j) {
    if (n < 1 || i < 0 || j < 0 || i >= n || j >= n) throw InputError("dyad: index out of range");
    SmallMatrix m = SmallMatrix::Zero(n, n);
    m(i, j) = 1.0;
    return m;
}

ProjectionSet::ProjectionSet(std::vector<SmallMatrix> projections, double tol)
    : projections_(std::move(projections)) {
    if (projections_.empty()) throw InputError("projection set is empty");
    dimension_ = static_cast<int>(projections_.front().rows());
    SmallMatrix sum = SmallMatrix::Zero(dimension_, dimension_);
    for (std::size_t n = 0; n < projections_.size(); ++n) {
        const SmallMatrix& p = projections_[n];
        if (p.rows() != dimension_ || p.cols() != dimension_)
            throw InputError("projection set: members differ in dimension");
        if (!is_hermitian(p, tol)) throw InputError("projection set: member is not Hermitian");
        if (max_entry(p * p - p) > tol) throw InputError("projection set: member is not idempotent");
        for (std::size_t m = 0; m < n; ++m)
            if (max_entry(p * projections_[m]) > tol)
                throw InputError("projection set: members are not orthogonal");
        sum += p;
    }
    if (max_entry(sum - SmallMatrix::Identity(dimension_, dimension_)) > tol)
        throw InputError("projection set: members do not sum to the identity");
}

SmallMatrix average_cyclic(const SmallMatrix& h, const std::vector<SmallMatrix>& group) {
    check_dimension(h, "average_cyclic");
    if (group.empty()) throw InputError("average_cyclic: empty group");
    SmallMatrix acc = SmallMatrix::Zero(h.rows(), h.cols());
    for (const auto& g : group) {
        if (g.rows() != h.rows() || !is_unitary(g))
            throw InputError("average_cyclic: group member is not a unitary of matching size");
        acc += g.adjoint() * h * g;
    }
    return acc / static_cast<double>(group.size());
}

SmallMatrix average_projective(const SmallMatrix& h, const ProjectionSet& ps) {
    check_dimension(h, "average_projective");
    if (ps.dimension() != h.rows())
        throw InputError("average_projective: projection set dimension differs");
    SmallMatrix acc = SmallMatrix::Zero(h.rows(), h.cols());
    for (const auto& p : ps.projections()) acc += p * h * p;
    return acc;
}

ProjectionSet measurement_eigenprojections(double omega_rabi, double xi) {
    if (omega_rabi == 0.0 && xi == 0.0)
        throw InputError("measurement_eigenprojections: Omega = xi = 0 is degenerate");
    const auto [plus, minus] = rates::dressed_frequencies(omega_rabi, xi);
    auto projector = [omega_rabi](double w) {
        Eigen::Vector2cd v(omega_rabi, w);
        v.normalize();
        return SmallMatrix(v * v.adjoint());
    };
    if (omega_rabi == 0.0) {
        // Uncoupled: the zero eigenvalue belongs to |3>, -xi to |4>.
        const SmallMatrix p3 = dyad(2, 0, 0), p4 = dyad(2, 1, 1);
        return xi > 0.0 ? ProjectionSet({p3, p4}) : ProjectionSet({p4, p3});
    }
    return ProjectionSet({projector(plus), projector(minus)});
}

SmallMatrix embed(const SmallMatrix& block, int n, int offset) {
    if (offset < 0 || offset + block.rows() > n || block.rows() != block.cols())
        throw InputError("embed: block does not fit");
    SmallMatrix m = SmallMatrix::Zero(n, n);
    m.block(offset, offset, block.rows(), block.cols()) = block;
    return m;
}

SmallMatrix dressed_dyad_sum(double omega_rabi, double xi) {
    const auto [plus, minus] = rates::dressed_frequencies(omega_rabi, xi);
    SmallMatrix m = SmallMatrix::Zero(4, 4);
    for (double w : {plus, minus}) {
        const double norm = omega_rabi * omega_rabi + w * w;
        if (norm == 0.0) continue;  // the omega_s = 0 level carries no |4> weight
        Eigen::Vector4cd v(0.0, 0.0, omega_rabi, w);
        m += -xi * w * w * (v * v.adjoint()) / (norm * norm);
    }
    return m;
}

SmallMatrix rabi_hamiltonian(int n, double delta_shift, std::complex<double> delta_rabi) {
    if (n < 2) throw InputError("rabi_hamiltonian: dimension must be at least 2");
    SmallMatrix h = SmallMatrix::Zero(n, n);
    h(0, 0) = -delta_shift;
    h(0, 1) = delta_rabi;
    h(1, 0) = std::conj(delta_rabi);
    return h;
}

SmallMatrix zeno_projected_hamiltonian(double omega_rabi, double xi, const SmallMatrix& h_extra) {
    if (h_extra.rows() != 4 || h_extra.cols() != 4)
        throw InputError("zeno_projected_hamiltonian: h_extra must be 4x4");
    const ProjectionSet dressed = measurement_eigenprojections(omega_rabi, xi);
    const SmallMatrix p_plus = embed(dressed[0], 4, 2);
    const SmallMatrix p_minus = embed(dressed[1], 4, 2);
    const SmallMatrix rest = SmallMatrix::Identity(4, 4) - p_plus - p_minus;
    const ProjectionSet zeno({p_plus, p_minus, rest});

    const SmallMatrix measured = -xi * dyad(4, 3, 3);
    const SmallMatrix pinched_measured = average_projective(measured, zeno);
    const double residual = max_entry(pinched_measured - dressed_dyad_sum(omega_rabi, xi));
    if (residual > kMatrixTol * std::max(1.0, std::abs(xi))) {
        std::ostringstream msg;
        msg << "pinched measurement Hamiltonian differs from the dressed-dyad form by " << residual;
        throw ConsistencyError(msg.str());
    }
    return average_projective(measured + h_extra, zeno);
}

double decoupling_residual(const SmallMatrix& h_int, const ProjectionSet& ps) {
    return max_entry(average_projective(h_int, ps));
}

}  // namespace iondeco::averaging
