#pragma once

#include <array>

#include "cqed/model.hpp"

namespace cqed {

/// Single-atom effective Hamiltonian in the frame displaced by
/// beta = -Omega e^{i phi} / g:  H_tilde = h0 + kappa * v, with
///   h0 = g (a s^dag + a^dag s) - (Delta + i gamma/2) |e><e|
///   v  = -(i/2)(a^dag a + |beta|^2) - (i/2)(beta a^dag + beta^* a).
struct DisplacedEffectiveHamiltonian {
    Operator h0;
    Operator v;
    cplx beta;
};

/// Requires one atom, delta_c = 0 and g(x) != 0.
[[nodiscard]] DisplacedEffectiveHamiltonian displaced_effective_hamiltonian(const SystemParams& params,
                                                                            const SpaceDescriptor& space);

/// Lab-frame non-Hermitian Hamiltonian of the jump unravelling:
/// g (a s^dag + a^dag s) + Omega (e^{i phi} s^dag + h.c.) - (Delta + i gamma/2)|e><e|
///   - delta_c a^dag a - i (kappa/2) a^dag a.
[[nodiscard]] Operator effective_hamiltonian(const SystemParams& params, const SpaceDescriptor& space);

struct DressedPair {
    cplx plus;
    cplx minus;
};

/// Eigenvalues of the n-excitation block {|e,n-1>, |g,n>} of h0:
/// -(1/2)(Delta + i gamma/2 -+ sqrt((Delta + i gamma/2)^2 + 4 g^2 n)),
/// principal square root, so Re(plus) >= Re(minus).
[[nodiscard]] DressedPair dressed_eigenvalues(int n, const SystemParams& params);

/// Right and left eigenvectors of a diagonalizable non-Hermitian matrix,
/// normalized so that left.col(i)^dag right.col(j) = delta_ij.
struct BiorthogonalSystem {
    Eigen::VectorXcd eigenvalues;
    DenseMatrix right;  ///< columns |v_i>
    DenseMatrix left;   ///< columns |v_bar_i>

    /// max |sum_i |v_i><v_bar_i| - I|
    [[nodiscard]] double completeness_residual() const;
    /// max |<v_bar_i|v_j> - delta_ij|
    [[nodiscard]] double biorthogonality_residual() const;
};

/// Throws SolverError when the matrix is numerically defective (a unit
/// right vector whose left partner has <v_bar|v> below 1e-12 after unit
/// normalization, or a rank-deficient eigenvector matrix).
[[nodiscard]] BiorthogonalSystem biorthogonal_eigensystem(const DenseMatrix& h);
[[nodiscard]] BiorthogonalSystem biorthogonal_eigensystem(const Operator& h);

/// Displaced-frame density matrix expanded to second order in kappa,
/// rho_tilde(t) = rho0 + kappa rho1 + kappa^2 rho2, starting from |g,0><g,0|
/// (the lossless dark state |g,beta> in the lab frame).
struct PerturbativeState {
    int order = 2;
    double t = 0.0;
    double kappa = 0.0;
    cplx beta{0.0, 0.0};
    SpaceDescriptor space{1, 3};              ///< working space of the terms
    std::array<DenseMatrix, 3> rho_terms;     ///< displaced-frame coefficients of kappa^k
    /// Norms of J S0(t)|g0><g0| and J S1(t)|g0><g0| (expected to vanish).
    std::array<double, 2> vanishing_jump_norms{0.0, 0.0};

    /// sum_{k<=order} kappa^k rho_terms[k] in the displaced frame.
    [[nodiscard]] DenseMatrix assembled_displaced() const;
    /// D(beta) rho_tilde D(beta)^dag on `target` (same atoms, n_max >= working cutoff).
    [[nodiscard]] DenseMatrix assembled(const SpaceDescriptor& target) const;
};

/// Evaluates the expansion in closed form: in the biorthogonal eigenbasis of
/// h0 the unperturbed propagator is diagonal, so every nested time integral
/// of the Dyson series is a finite sum of t^p e^{mu t} terms.
/// Requires one atom, delta_c = 0, g(x) != 0, order in {0, 1, 2}.
[[nodiscard]] PerturbativeState perturbative_state(const SystemParams& params, double t, int order = 2);

struct SmallKappaRates {
    double i_at = 0.0;
    double i_cav = 0.0;
    double c1 = 0.0;          ///< cooperativity 2 g^2 / (gamma kappa)
    bool regime_valid = false;  ///< Delta = 0 and g >= 5 gamma
};

/// I_at ~ kappa (Omega/g)^2 / (2 C1), I_cav ~ kappa (Omega/g)^2 (1 - 1/(2 C1)).
[[nodiscard]] SmallKappaRates small_kappa_rates(const SystemParams& params);

}  // namespace cqed
