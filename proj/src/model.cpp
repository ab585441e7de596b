#include "cqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

SparseMatrix identity_matrix(Index n) {
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace

double SystemParams::pump_amplitude(int atom) const {
    if (atom < 0 || atom >= n_atoms()) throw InvalidArgument("atom index out of range");
    return pump_amplitudes.empty() ? omega : pump_amplitudes[static_cast<std::size_t>(atom)];
}

void SystemParams::validate() const {
    if (positions.empty()) throw InvalidArgument("at least one atom is required");
    if (!pump_amplitudes.empty() && pump_amplitudes.size() != positions.size()) {
        throw InvalidArgument("pump_amplitudes must have one entry per atom");
    }
    if (!(kappa >= 0.0)) throw InvalidArgument("kappa must be nonnegative");
    if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(positions.begin(), positions.end(), finite) || !finite(g0) || !finite(omega) ||
        !finite(theta) || !finite(delta) || !finite(delta_c) || !finite(kappa) || !finite(gamma) ||
        !std::all_of(pump_amplitudes.begin(), pump_amplitudes.end(), finite)) {
        throw InvalidArgument("parameters must be finite");
    }
}

double coupling_at(double x, const SystemParams& params) {
    // Exact zeros at the nodes x = (2m + 1) / 4.
    const double twice = 2.0 * x;
    if (std::abs(twice - std::round(twice)) == 0.5) return 0.0;
    return params.g0 * std::cos(kWaveNumber * x);
}

double pump_phase_at(double x, const SystemParams& params) {
    return kWaveNumber * x * std::cos(params.theta);
}

CouplingProfile coupling_profile(const SystemParams& params) {
    CouplingProfile profile;
    for (double x : params.positions) {
        profile.g.push_back(coupling_at(x, params));
        profile.phi.push_back(pump_phase_at(x, params));
    }
    return profile;
}

Superoperator::Superoperator(SpaceDescriptor space, SparseMatrix matrix)
    : space_(space), matrix_(std::move(matrix)) {
    const Index d = space_.dim() * space_.dim();
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw InvalidArgument("superoperator shape does not match the Liouville dimension");
    }
    matrix_.makeCompressed();
}

DenseMatrix Superoperator::apply(const DenseMatrix& rho) const {
    if (rho.rows() != space_.dim() || rho.cols() != space_.dim()) {
        throw InvalidArgument("state shape does not match superoperator space");
    }
    return unvectorize(matrix_ * vectorize(rho), space_.dim());
}

Superoperator Superoperator::operator+(const Superoperator& rhs) const {
    if (!(space_ == rhs.space_)) throw InvalidArgument("superoperators act on different spaces");
    return {space_, SparseMatrix(matrix_ + rhs.matrix_)};
}

Superoperator Superoperator::operator*(cplx scalar) const { return {space_, SparseMatrix(matrix_ * scalar)}; }

Eigen::VectorXcd vectorize(const DenseMatrix& m) {
    return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

DenseMatrix unvectorize(const Eigen::VectorXcd& v, Index dim) {
    if (v.size() != dim * dim) throw InvalidArgument("vector length is not dim^2");
    return Eigen::Map<const DenseMatrix>(v.data(), dim, dim);
}

Superoperator sandwich_superoperator(const Operator& left, const Operator& right) {
    if (!(left.space() == right.space())) throw InvalidArgument("operators act on different spaces");
    const SparseMatrix rt = right.sparse().transpose();
    return {left.space(), kron(rt, left.sparse())};
}

Superoperator non_hermitian_superoperator(const Operator& h) {
    const SparseMatrix id = identity_matrix(h.space().dim());
    const SparseMatrix hs = h.sparse();
    const SparseMatrix h_dag_t = SparseMatrix(hs.adjoint()).transpose();
    SparseMatrix m = kron(id, hs) * (-kI) + kron(h_dag_t, id) * kI;
    return {h.space(), std::move(m)};
}

Superoperator hamiltonian_superoperator(const Operator& h) { return non_hermitian_superoperator(h); }

Superoperator dissipator(const Operator& c, double rate) {
    const SparseMatrix id = identity_matrix(c.space().dim());
    const SparseMatrix cs = c.sparse();
    const SparseMatrix cdc = cs.adjoint() * cs;
    const SparseMatrix c_conj = cs.conjugate();
    SparseMatrix m = kron(c_conj, cs) - 0.5 * kron(id, cdc) - 0.5 * kron(SparseMatrix(cdc.transpose()), id);
    return {c.space(), SparseMatrix(m * cplx(rate))};
}

Operator build_hamiltonian(const SystemParams& params, const SpaceDescriptor& space) {
    params.validate();
    if (space.n_atoms() != params.n_atoms()) {
        throw InvalidArgument("space has " + std::to_string(space.n_atoms()) + " atoms, parameters have " +
                              std::to_string(params.n_atoms()));
    }
    const Operator a = annihilation(space);
    const Operator ad = a.adjoint();
    Operator h = number(space) * cplx(-params.delta_c);
    const CouplingProfile profile = coupling_profile(params);
    for (int n = 0; n < params.n_atoms(); ++n) {
        const Operator s = atomic_lowering(space, n);
        const Operator sd = s.adjoint();
        const double g = profile.g[static_cast<std::size_t>(n)];
        const cplx pump = params.pump_amplitude(n) * std::exp(kI * profile.phi[static_cast<std::size_t>(n)]);
        h = h + excited_projector(space, n) * cplx(-params.delta);
        h = h + (a * sd + ad * s) * cplx(g);
        h = h + sd * pump + s * std::conj(pump);
    }
    return h;
}

Superoperator build_liouvillian(const SystemParams& params, const SpaceDescriptor& space) {
    Superoperator l = hamiltonian_superoperator(build_hamiltonian(params, space));
    for (int n = 0; n < params.n_atoms(); ++n) {
        l = l + dissipator(atomic_lowering(space, n), params.gamma);
    }
    if (params.kappa > 0.0) l = l + dissipator(annihilation(space), params.kappa);
    return l;
}

cplx beta_profile(double x, const SystemParams& params) {
    const double g = coupling_at(x, params);
    if (std::abs(g) < 1e-12 * std::max(1.0, std::abs(params.g0))) {
        throw DomainError("beta(x) is undefined at a node of the cavity mode (x = " + std::to_string(x) + ")");
    }
    return params.omega * std::exp(kI * (std::numbers::pi + pump_phase_at(x, params))) / g;
}

int default_fock_cutoff(double beta_estimate) {
    const double b = std::abs(beta_estimate);
    return static_cast<int>(std::ceil(b * b + 6.0 * b + 10.0));
}

SpaceDescriptor default_space(const SystemParams& params) {
    double pump = std::abs(params.omega);
    for (double p : params.pump_amplitudes) pump = std::max(pump, std::abs(p));
    const double b = params.g0 != 0.0 ? pump / std::abs(params.g0) : 0.0;
    return {params.n_atoms(), default_fock_cutoff(b)};
}

}  // namespace cqed
