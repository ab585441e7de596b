#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "cqed/operators.hpp"

namespace cqed {

/// Physical parameters of N driven atoms in a single-mode cavity.
/// Rates and frequencies are in units of gamma; positions in wavelengths.
struct SystemParams {
    std::vector<double> positions{0.0};
    double g0 = 1.0;       ///< peak atom-cavity coupling
    double omega = 1.0;    ///< pump Rabi frequency
    double theta = std::numbers::pi / 2;  ///< pump propagation angle to the cavity axis
    double delta = 0.0;    ///< laser - atom detuning
    double delta_c = 0.0;  ///< laser - cavity detuning
    double kappa = 0.0;    ///< cavity decay rate
    double gamma = 1.0;    ///< spontaneous emission rate (the unit)
    /// Optional per-atom pump amplitudes; empty means `omega` for every atom.
    std::vector<double> pump_amplitudes;

    [[nodiscard]] int n_atoms() const noexcept { return static_cast<int>(positions.size()); }
    [[nodiscard]] double pump_amplitude(int atom) const;
    /// Throws InvalidArgument on an inconsistent parameter set.
    void validate() const;
};

struct CouplingProfile {
    std::vector<double> g;    ///< g(x_n) = g0 cos(k x_n)
    std::vector<double> phi;  ///< phi_n = k x_n cos(theta)
};

[[nodiscard]] CouplingProfile coupling_profile(const SystemParams& params);
[[nodiscard]] double coupling_at(double x, const SystemParams& params);
[[nodiscard]] double pump_phase_at(double x, const SystemParams& params);

/// Vectorized generator of the master equation, column-major:
/// vec(A X B) = (B^T kron A) vec(X).
class Superoperator {
public:
    Superoperator(SpaceDescriptor space, SparseMatrix matrix);

    [[nodiscard]] const SpaceDescriptor& space() const noexcept { return space_; }
    [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] Index liouville_dim() const noexcept { return matrix_.rows(); }

    [[nodiscard]] DenseMatrix apply(const DenseMatrix& rho) const;

    Superoperator operator+(const Superoperator& rhs) const;
    Superoperator operator*(cplx scalar) const;

private:
    SpaceDescriptor space_;
    SparseMatrix matrix_;
};

[[nodiscard]] Eigen::VectorXcd vectorize(const DenseMatrix& m);
[[nodiscard]] DenseMatrix unvectorize(const Eigen::VectorXcd& v, Index dim);

/// X -> -i [H, X]
[[nodiscard]] Superoperator hamiltonian_superoperator(const Operator& h);
/// X -> -i (H X - X H^dag) for a possibly non-Hermitian H.
[[nodiscard]] Superoperator non_hermitian_superoperator(const Operator& h);
/// X -> A X B
[[nodiscard]] Superoperator sandwich_superoperator(const Operator& left, const Operator& right);
/// X -> rate/2 (2 c X c^dag - c^dag c X - X c^dag c)
[[nodiscard]] Superoperator dissipator(const Operator& c, double rate);

/// Hamiltonian in the frame rotating at the laser frequency (hbar = 1):
/// -delta_c a^dag a - delta sum |e><e| + sum_n [g_n (a s_n^dag + a^dag s_n)
///   + Omega_n (e^{i phi_n} s_n^dag + e^{-i phi_n} s_n)].
[[nodiscard]] Operator build_hamiltonian(const SystemParams& params, const SpaceDescriptor& space);

/// Full Lindblad generator: coherent part plus atomic decay (gamma) and
/// cavity loss (kappa).
[[nodiscard]] Superoperator build_liouvillian(const SystemParams& params, const SpaceDescriptor& space);

/// beta(x) = Omega exp(i(pi + k x cos(theta))) / g(x): the cavity amplitude
/// that cancels the pump at x. Throws DomainError at a node of the mode.
[[nodiscard]] cplx beta_profile(double x, const SystemParams& params);

/// Initial Fock cutoff ceil(|b|^2 + 6|b| + 10) for an expected amplitude b.
[[nodiscard]] int default_fock_cutoff(double beta_estimate);
/// Space for `params` using the default cutoff with b = Omega / g0.
[[nodiscard]] SpaceDescriptor default_space(const SystemParams& params);

}  // namespace cqed
