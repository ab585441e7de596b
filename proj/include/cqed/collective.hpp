#pragma once

#include <vector>

#include "cqed/model.hpp"

namespace cqed {

/// Coefficients of the field-only master equation obtained by adiabatically
/// eliminating the atoms.
struct EffectiveFieldParams {
    std::vector<double> s_n;   ///< g(x_n)^2 / ((gamma/2)^2 + Delta^2)
    double s = 0.0;            ///< mean of s_n
    double n_atoms = 0.0;
    double gamma_prime = 0.0;  ///< N s gamma
    double delta_prime = 0.0;  ///< delta_c - N s Delta
    cplx xi{0.0, 0.0};         ///< N s (Delta - i gamma/2) sum g Omega e^{i phi} / sum g^2
    /// |gamma/2 + i Delta| >= 5 sqrt(N) max(g, Omega)
    bool below_saturation = false;
};

/// Throws DomainError when every atom sits at a node.
[[nodiscard]] EffectiveFieldParams effective_field_params(const SystemParams& params);

/// alpha = -i xi / ((gamma' + kappa)/2 - i delta')
[[nodiscard]] cplx adiabatic_alpha(const SystemParams& params);
/// Per-atom excited population |g_n alpha + Omega_n e^{i phi_n}|^2 / ((gamma/2)^2 + Delta^2).
[[nodiscard]] std::vector<double> adiabatic_excited_populations(const SystemParams& params);

enum class Parity { even, odd };

/// N atoms pinned at cos(k x) = +1 (even) or -1 (odd). N may be non-integer
/// for scaling studies.
struct PatternSpec {
    Parity parity = Parity::even;
    double n_atoms = 1.0;
};

/// In-phase amplitude -(Omega/g) N s (gamma/2 + i Delta) / (N s (gamma/2 + i Delta) + kappa/2 - i delta_c)
/// with g = +-g0 by parity. Uses g0, omega, delta, delta_c, kappa, gamma of `params`.
[[nodiscard]] cplx in_phase_alpha(const SystemParams& params, const PatternSpec& pattern);
/// [Omega^2/((gamma/2)^2+Delta^2)] (kappa^2/4 + delta_c^2) / ((gamma'+kappa)^2/4 + delta'^2)
[[nodiscard]] double excited_population(const SystemParams& params, const PatternSpec& pattern);
/// Atom positions of a pattern with an integer number of atoms.
[[nodiscard]] std::vector<double> pattern_positions(const PatternSpec& pattern);

struct CriticalAtomNumbers {
    double n0 = 0.0;        ///< kappa / (s gamma) = 1 / (2 C1)
    double n0_delta = 0.0;  ///< |Delta| kappa / g^2
    bool detuned_regime = false;  ///< |Delta| >= 10 max(gamma, kappa)
};

/// s from the pattern coupling g0. Throws DomainError when s = 0.
[[nodiscard]] CriticalAtomNumbers critical_atom_number(const SystemParams& params);

struct ForceTerms {
    double force = 0.0;  ///< units of hbar k gamma
    double u0 = 0.0;     ///< g0^2 Delta / (Delta^2 + gamma^2/4)
    double gamma0 = 0.0; ///< g0^2 (gamma/2) / (Delta^2 + gamma^2/4)
    cplx eta_eff{0.0, 0.0};  ///< Omega g0 / (-i Delta + gamma/2)
};

/// F = U0 |alpha|^2 sin(2 k x) + 2 Im(eta_eff^* alpha) sin(k x).
[[nodiscard]] ForceTerms semiclassical_force(double x, cplx alpha, const SystemParams& params);

/// Linearized force constant 2 k^2 (Omega/g0)^2 delta_c / N (hbar gamma per
/// wavelength squared); negative means restoring.
[[nodiscard]] double restoring_coefficient(const SystemParams& params, double n_atoms);

}  // namespace cqed
