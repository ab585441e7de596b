#include "cqed/operators.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SparseMatrix sparse_identity(Index n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

// Places a single-slot operator on slot `slot` of the full tensor product,
// identity elsewhere. Slots 0..n_atoms-1 are atoms, slot n_atoms is the cavity.
SparseMatrix embed(const SpaceDescriptor& space, const SparseMatrix& local, int slot) {
    SparseMatrix result = sparse_identity(1);
    for (int k = 0; k <= space.n_atoms(); ++k) {
        const Index local_dim = k < space.n_atoms() ? 2 : space.fock_dim();
        const SparseMatrix factor = k == slot ? local : sparse_identity(local_dim);
        SparseMatrix next = Eigen::kroneckerProduct(result, factor).eval();
        result = std::move(next);
    }
    return result;
}

Operator make_operator(const SpaceDescriptor& space, const SparseMatrix& m) {
    return {space, m};
}

void check_atom_index(const SpaceDescriptor& space, int atom) {
    if (atom < 0 || atom >= space.n_atoms()) {
        throw InvalidArgument("atom index " + std::to_string(atom) + " out of range for " +
                              std::to_string(space.n_atoms()) + " atoms");
    }
}

// Poisson tail P(n > cutoff) for mean mu, summed from the top down.
double poisson_tail_above(double mu, int cutoff) {
    if (mu == 0.0) return 0.0;
    double log_p = -mu;
    double head = 0.0;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) log_p += std::log(mu) - std::log(static_cast<double>(n));
        head += std::exp(log_p);
    }
    return std::max(0.0, 1.0 - head);
}

}  // namespace

SpaceDescriptor::SpaceDescriptor(int n_atoms, int n_max) : n_atoms_(n_atoms), n_max_(n_max) {
    if (n_atoms < 0) throw InvalidArgument("n_atoms must be nonnegative");
    if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
    if (n_atoms > 20) throw InvalidArgument("n_atoms too large for an explicit Hilbert space");
}

Index SpaceDescriptor::index(Index excited_mask, int photons) const {
    if (excited_mask < 0 || excited_mask >= atom_dim() || photons < 0 || photons > n_max_) {
        throw InvalidArgument("basis label out of range");
    }
    return excited_mask * fock_dim() + photons;
}

Operator::Operator(SpaceDescriptor space, DenseMatrix m) : space_(space) {
    if (m.rows() != space_.dim() || m.cols() != space_.dim()) {
        throw InvalidArgument("operator shape does not match space dimension");
    }
    if (space_.dim() <= kDenseThreshold) {
        data_ = std::move(m);
    } else {
        data_ = SparseMatrix(m.sparseView());
    }
}

Operator::Operator(SpaceDescriptor space, SparseMatrix m) : space_(space) {
    if (m.rows() != space_.dim() || m.cols() != space_.dim()) {
        throw InvalidArgument("operator shape does not match space dimension");
    }
    if (space_.dim() <= kDenseThreshold) {
        data_ = DenseMatrix(m);
    } else {
        m.makeCompressed();
        data_ = std::move(m);
    }
}

Operator Operator::identity(const SpaceDescriptor& space) {
    return {space, sparse_identity(space.dim())};
}

Operator Operator::zero(const SpaceDescriptor& space) {
    return {space, SparseMatrix(space.dim(), space.dim())};
}

DenseMatrix Operator::dense() const {
    if (const auto* d = std::get_if<DenseMatrix>(&data_)) return *d;
    return DenseMatrix(std::get<SparseMatrix>(data_));
}

SparseMatrix Operator::sparse() const {
    if (const auto* s = std::get_if<SparseMatrix>(&data_)) return *s;
    return std::get<DenseMatrix>(data_).sparseView();
}

cplx Operator::coeff(Index row, Index col) const {
    if (const auto* d = std::get_if<DenseMatrix>(&data_)) return (*d)(row, col);
    return std::get<SparseMatrix>(data_).coeff(row, col);
}

Operator Operator::adjoint() const {
    if (const auto* d = std::get_if<DenseMatrix>(&data_)) return {space_, DenseMatrix(d->adjoint())};
    return {space_, SparseMatrix(std::get<SparseMatrix>(data_).adjoint())};
}

double Operator::max_abs_diff(const Operator& other) const {
    check_same_space(other);
    if (is_dense() && other.is_dense()) {
        const DenseMatrix diff = std::get<DenseMatrix>(data_) - std::get<DenseMatrix>(other.data_);
        return diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff();
    }
    const SparseMatrix diff = sparse() - other.sparse();
    double m = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
}

void Operator::check_same_space(const Operator& other) const {
    if (!(space_ == other.space_)) throw InvalidArgument("operators act on different spaces");
}

Operator Operator::operator+(const Operator& rhs) const {
    check_same_space(rhs);
    if (is_dense() && rhs.is_dense()) {
        return {space_, DenseMatrix(std::get<DenseMatrix>(data_) + std::get<DenseMatrix>(rhs.data_))};
    }
    return {space_, SparseMatrix(sparse() + rhs.sparse())};
}

Operator Operator::operator-(const Operator& rhs) const {
    check_same_space(rhs);
    if (is_dense() && rhs.is_dense()) {
        return {space_, DenseMatrix(std::get<DenseMatrix>(data_) - std::get<DenseMatrix>(rhs.data_))};
    }
    return {space_, SparseMatrix(sparse() - rhs.sparse())};
}

Operator Operator::operator*(const Operator& rhs) const {
    check_same_space(rhs);
    if (is_dense() && rhs.is_dense()) {
        return {space_, DenseMatrix(std::get<DenseMatrix>(data_) * std::get<DenseMatrix>(rhs.data_))};
    }
    return {space_, SparseMatrix(sparse() * rhs.sparse())};
}

Operator Operator::operator*(cplx scalar) const {
    if (const auto* d = std::get_if<DenseMatrix>(&data_)) return {space_, DenseMatrix(*d * scalar)};
    return {space_, SparseMatrix(std::get<SparseMatrix>(data_) * scalar)};
}

DensityMatrix::DensityMatrix(SpaceDescriptor space, DenseMatrix m) : space_(space), m_(std::move(m)) {
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
        throw InvalidArgument("density matrix shape does not match space dimension");
    }
    const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > kHermiticityTol) {
        throw InvalidArgument("density matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const cplx tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw InvalidArgument("density matrix trace differs from 1 by " + std::to_string(std::abs(tr - 1.0)));
    }
    if (min_eigenvalue() < -kPositivityTol) {
        throw InvalidArgument("density matrix has a negative eigenvalue " + std::to_string(min_eigenvalue()));
    }
}

DensityMatrix DensityMatrix::pure(const SpaceDescriptor& space, const Ket& ket) {
    if (ket.size() != space.dim()) throw InvalidArgument("ket dimension does not match space");
    const double norm = ket.norm();
    if (norm == 0.0) throw InvalidArgument("zero ket");
    const Ket psi = ket / norm;
    DenseMatrix rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {space, std::move(rho)};
}

DensityMatrix DensityMatrix::ground(const SpaceDescriptor& space) {
    return pure(space, basis_ket(space, 0));
}

double DensityMatrix::min_eigenvalue() const {
    const DenseMatrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double DensityMatrix::fidelity(const Ket& ket) const {
    if (ket.size() != space_.dim()) throw InvalidArgument("ket dimension does not match space");
    return std::real(ket.dot(m_ * ket)) / ket.squaredNorm();
}

Eigen::VectorXd DensityMatrix::fock_populations() const {
    Eigen::VectorXd pops = Eigen::VectorXd::Zero(space_.fock_dim());
    for (Index mask = 0; mask < space_.atom_dim(); ++mask) {
        for (int n = 0; n <= space_.n_max(); ++n) {
            const Index i = space_.index(mask, n);
            pops(n) += std::real(m_(i, i));
        }
    }
    return pops;
}

Operator annihilation(const SpaceDescriptor& space) {
    std::vector<Triplet> entries;
    for (int n = 1; n <= space.n_max(); ++n) entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    SparseMatrix a(space.fock_dim(), space.fock_dim());
    a.setFromTriplets(entries.begin(), entries.end());
    return make_operator(space, embed(space, a, space.n_atoms()));
}

Operator creation(const SpaceDescriptor& space) { return annihilation(space).adjoint(); }

Operator number(const SpaceDescriptor& space) {
    std::vector<Triplet> entries;
    for (int n = 1; n <= space.n_max(); ++n) entries.emplace_back(n, n, static_cast<double>(n));
    SparseMatrix num(space.fock_dim(), space.fock_dim());
    num.setFromTriplets(entries.begin(), entries.end());
    return make_operator(space, embed(space, num, space.n_atoms()));
}

Operator atomic_lowering(const SpaceDescriptor& space, int atom) {
    check_atom_index(space, atom);
    SparseMatrix sigma(2, 2);
    sigma.insert(0, 1) = 1.0;  // |g><e|
    return make_operator(space, embed(space, sigma, atom));
}

Operator atomic_raising(const SpaceDescriptor& space, int atom) {
    return atomic_lowering(space, atom).adjoint();
}

Operator excited_projector(const SpaceDescriptor& space, int atom) {
    check_atom_index(space, atom);
    SparseMatrix proj(2, 2);
    proj.insert(1, 1) = 1.0;
    return make_operator(space, embed(space, proj, atom));
}

Operator displacement(const SpaceDescriptor& space, cplx beta) {
    const double mean = std::norm(beta);
    if (mean > space.n_max() / 4.0) {
        throw TruncationError("displacement |beta|^2 = " + std::to_string(mean) +
                              " exceeds n_max/4 = " + std::to_string(space.n_max() / 4.0));
    }
    if (poisson_tail_above(mean, space.n_max() - 1) > 1e-8) {
        throw TruncationError("coherent-state tail above the Fock cutoff exceeds 1e-8 for |beta|^2 = " +
                              std::to_string(mean));
    }
    const Index fd = space.fock_dim();
    DenseMatrix generator = DenseMatrix::Zero(fd, fd);  // beta a^dag - beta^* a
    for (int n = 1; n <= space.n_max(); ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        generator(n, n - 1) = beta * s;
        generator(n - 1, n) = -std::conj(beta) * s;
    }
    // i * generator is Hermitian, so exp(generator) = Q exp(-i lambda) Q^dag.
    const DenseMatrix herm = kI * generator;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (herm + herm.adjoint()));
    const Eigen::VectorXcd phases = (-kI * es.eigenvalues().cast<cplx>()).array().exp();
    const DenseMatrix local = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    const SparseMatrix local_sparse = local.sparseView(1.0, 1e-300);
    return make_operator(space, embed(space, local_sparse, space.n_atoms()));
}

Ket basis_ket(const SpaceDescriptor& space, Index index) {
    if (index < 0 || index >= space.dim()) throw InvalidArgument("basis index out of range");
    Ket k = Ket::Zero(space.dim());
    k(index) = 1.0;
    return k;
}

Ket coherent_ket(const SpaceDescriptor& space, cplx beta) {
    return displacement(space, beta).sparse() * basis_ket(space, 0);
}

cplx expectation(const Operator& op, const DensityMatrix& rho) {
    if (!(op.space() == rho.space())) throw InvalidArgument("operator and state act on different spaces");
    if (op.is_dense()) return (op.dense() * rho.matrix()).trace();
    return (op.sparse() * rho.matrix()).trace();
}

double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
        throw InvalidArgument("trace_distance: shape mismatch");
    }
    const DenseMatrix diff = rho - sigma;
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DenseMatrix embed_fock(const DenseMatrix& m, const SpaceDescriptor& from, const SpaceDescriptor& to) {
    if (from.n_atoms() != to.n_atoms() || to.n_max() < from.n_max()) {
        throw InvalidArgument("embed_fock: target space must have the same atoms and a larger cutoff");
    }
    if (m.rows() != from.dim() || m.cols() != from.dim()) throw InvalidArgument("embed_fock: shape mismatch");
    DenseMatrix out = DenseMatrix::Zero(to.dim(), to.dim());
    for (Index ma = 0; ma < from.atom_dim(); ++ma) {
        for (int na = 0; na <= from.n_max(); ++na) {
            for (Index mb = 0; mb < from.atom_dim(); ++mb) {
                for (int nb = 0; nb <= from.n_max(); ++nb) {
                    out(to.index(ma, na), to.index(mb, nb)) = m(from.index(ma, na), from.index(mb, nb));
                }
            }
        }
    }
    return out;
}

}  // namespace cqed
