#pragma once

#include <variant>

#include "cqed/types.hpp"

namespace cqed {

/// Truncated Hilbert space of N two-level atoms followed by one cavity mode.
///
/// Tensor ordering is atom 0, ..., atom N-1, cavity. Each atom is ordered
/// (|g>, |e>) and the cavity runs over Fock states |0>..|n_max>, so the
/// basis index of |s_0 ... s_{N-1}, n> is (s_0 s_1 ... s_{N-1})_2 * (n_max+1) + n
/// with atom 0 as the most significant bit.
class SpaceDescriptor {
public:
    SpaceDescriptor(int n_atoms, int n_max);

    [[nodiscard]] int n_atoms() const noexcept { return n_atoms_; }
    [[nodiscard]] int n_max() const noexcept { return n_max_; }
    [[nodiscard]] Index fock_dim() const noexcept { return n_max_ + 1; }
    [[nodiscard]] Index atom_dim() const noexcept { return Index{1} << n_atoms_; }
    [[nodiscard]] Index dim() const noexcept { return atom_dim() * fock_dim(); }

    /// Basis index for the atomic configuration `excited_mask` (bit n-1-k set
    /// when atom k is excited, i.e. atom 0 is the most significant bit) and
    /// photon number `n`.
    [[nodiscard]] Index index(Index excited_mask, int photons) const;

    bool operator==(const SpaceDescriptor&) const = default;

private:
    int n_atoms_;
    int n_max_;
};

/// Matrices at or below this dimension are stored densely.
inline constexpr Index kDenseThreshold = 512;

/// Complex matrix acting on a SpaceDescriptor. Storage is dense for
/// dim <= kDenseThreshold and sparse above; arithmetic picks the result
/// representation with the same rule.
class Operator {
public:
    Operator(SpaceDescriptor space, DenseMatrix m);
    Operator(SpaceDescriptor space, SparseMatrix m);

    static Operator identity(const SpaceDescriptor& space);
    static Operator zero(const SpaceDescriptor& space);

    [[nodiscard]] const SpaceDescriptor& space() const noexcept { return space_; }
    [[nodiscard]] bool is_dense() const noexcept {
        return std::holds_alternative<DenseMatrix>(data_);
    }
    [[nodiscard]] DenseMatrix dense() const;
    [[nodiscard]] SparseMatrix sparse() const;
    [[nodiscard]] cplx coeff(Index row, Index col) const;

    [[nodiscard]] Operator adjoint() const;
    /// max_ij |A_ij - B_ij|
    [[nodiscard]] double max_abs_diff(const Operator& other) const;

    Operator operator+(const Operator& rhs) const;
    Operator operator-(const Operator& rhs) const;
    Operator operator*(const Operator& rhs) const;
    Operator operator*(cplx scalar) const;
    friend Operator operator*(cplx scalar, const Operator& op) { return op * scalar; }

private:
    SpaceDescriptor space_;
    std::variant<DenseMatrix, SparseMatrix> data_;

    void check_same_space(const Operator& other) const;
};

/// Hermitian, unit-trace, positive semidefinite matrix on a SpaceDescriptor.
class DensityMatrix {
public:
    static constexpr double kHermiticityTol = 1e-10;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivityTol = 1e-8;

    /// Validates the invariants and throws InvalidArgument on violation.
    DensityMatrix(SpaceDescriptor space, DenseMatrix m);

    static DensityMatrix pure(const SpaceDescriptor& space, const Ket& ket);
    /// |g...g, 0><g...g, 0|
    static DensityMatrix ground(const SpaceDescriptor& space);

    [[nodiscard]] const SpaceDescriptor& space() const noexcept { return space_; }
    [[nodiscard]] const DenseMatrix& matrix() const noexcept { return m_; }
    [[nodiscard]] double min_eigenvalue() const;
    /// <psi|rho|psi> for a normalized ket.
    [[nodiscard]] double fidelity(const Ket& ket) const;
    /// Photon-number distribution after tracing out the atoms.
    [[nodiscard]] Eigen::VectorXd fock_populations() const;

private:
    SpaceDescriptor space_;
    DenseMatrix m_;
};

[[nodiscard]] Operator annihilation(const SpaceDescriptor& space);
[[nodiscard]] Operator creation(const SpaceDescriptor& space);
[[nodiscard]] Operator number(const SpaceDescriptor& space);
/// sigma_n = |g><e| on atom n.
[[nodiscard]] Operator atomic_lowering(const SpaceDescriptor& space, int atom);
[[nodiscard]] Operator atomic_raising(const SpaceDescriptor& space, int atom);
/// |e><e| on atom n.
[[nodiscard]] Operator excited_projector(const SpaceDescriptor& space, int atom);

/// D(beta) = exp(beta a^dag - beta^* a), exactly unitary on the truncated space.
/// Rejects |beta|^2 > n_max/4 and any beta whose coherent-state tail above
/// n_max - 1 exceeds 1e-8, since the truncated operator no longer
/// displaces the vacuum into a coherent state there.
[[nodiscard]] Operator displacement(const SpaceDescriptor& space, cplx beta);

/// D(beta)|g...g, 0>
[[nodiscard]] Ket coherent_ket(const SpaceDescriptor& space, cplx beta);
[[nodiscard]] Ket basis_ket(const SpaceDescriptor& space, Index index);

/// Tr(A rho)
[[nodiscard]] cplx expectation(const Operator& op, const DensityMatrix& rho);

/// (1/2) sum |eig(rho - sigma)| for Hermitian inputs.
[[nodiscard]] double trace_distance(const DenseMatrix& rho, const DenseMatrix& sigma);

/// Embeds an operator on a smaller Fock cutoff into a larger one, padding
/// with zeros. Atom counts must agree.
[[nodiscard]] DenseMatrix embed_fock(const DenseMatrix& m, const SpaceDescriptor& from,
                                     const SpaceDescriptor& to);

}  // namespace cqed
