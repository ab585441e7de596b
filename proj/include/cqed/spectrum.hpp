#pragma once

#include <array>
#include <vector>

#include "cqed/dynamics.hpp"

namespace cqed {

/// Weak probe driving the atom through the pump geometry.
struct ProbeParams {
    double delta_p = 0.0;         ///< probe - pump detuning
    double omega_p_tilde = 1e-3;  ///< effective probe Rabi frequency eta * Omega_P

    /// omega_p_tilde <= 0.1 min(g, Omega, gamma)
    [[nodiscard]] bool weak(const SystemParams& params) const;
};

struct ResonancePair {
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    /// sqrt(Delta^2 + g^2) > 5 gamma: the width expansion holds.
    bool regime_valid = false;
};

/// w = gamma Omega_P^2 d^2 / ([d (d + Delta) - g^2]^2 + d^2 gamma^2 / 4), d = delta_p.
/// Requires kappa = 0, delta_c = 0, one atom, g(x) != 0 (DomainError otherwise).
[[nodiscard]] double excitation_spectrum(double delta_p, const SystemParams& params, const ProbeParams& probe);
/// w / (gamma Omega_P^2)
[[nodiscard]] double normalized_spectrum(double delta_p, const SystemParams& params);

/// delta_pm = (-Delta +- r)/2 with r = sqrt(Delta^2 + 4 g^2) and widths
/// gamma_pm = (gamma/4)(1 -+ Delta/r), the imaginary parts of the poles of
/// the transition amplitude to first order in gamma.
[[nodiscard]] ResonancePair resonances(const SystemParams& params);

/// T / g_k = Omega_P d / (d (d + Delta + i gamma/2) - g^2).
[[nodiscard]] cplx transition_amplitude(double delta_p, const SystemParams& params, const ProbeParams& probe);
/// Roots of d (d + Delta + i gamma/2) - g^2, ordered by descending real part.
[[nodiscard]] std::array<cplx, 2> transition_poles(const SystemParams& params);

/// delta_atom(x') = |Omega e^{i phi(x')} + g(x') alpha|^2 / delta_2 for a probe
/// atom at x' in the field of amplitude alpha. Throws DomainError when delta_2 = 0.
[[nodiscard]] double probe_stark_shift(double x_probe, double delta_2, const SystemParams& params, cplx alpha);
/// Same, with alpha the exact steady-state amplitude of `params`.
[[nodiscard]] double probe_stark_shift(double x_probe, double delta_2, const SystemParams& params);
/// |delta_2| >= 10 max(g0, Omega)
[[nodiscard]] bool stark_dispersive(double delta_2, const SystemParams& params);

/// Linear response of the full master equation to a weak probe
/// Omega_P (s^dag e^{-i d t} + h.c.) on atom 0. excess(d) is the
/// time-averaged increase of I_at at second order, divided by gamma Omega_P^2.
class WeakProbeResponse {
public:
    explicit WeakProbeResponse(const SystemParams& params);

    [[nodiscard]] double excess(double delta_p) const;
    [[nodiscard]] const SteadyPoint& steady() const noexcept { return steady_; }

    /// Peaks of excess() on a coarse grid over [lo, hi], each refined on a
    /// fine grid of spacing `fine_step` around the coarse maximum.
    [[nodiscard]] std::vector<double> peaks(double lo, double hi, double coarse_step, double fine_step) const;

private:
    SystemParams params_;
    SteadyPoint steady_;
    SparseMatrix liouvillian_;
    SparseMatrix raise_;  ///< -i [s^dag, .]
    SparseMatrix lower_;  ///< -i [s, .]
};

}  // namespace cqed
