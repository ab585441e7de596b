#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqed/model.hpp"

namespace cqed {

struct ObservableSet {
    std::vector<double> pi_e_per_atom;   ///< <s_n^dag s_n>
    std::vector<double> i_at_per_atom;   ///< gamma <s_n^dag s_n>
    double i_at_total = 0.0;
    double i_cav = 0.0;                  ///< kappa <a^dag a>
    double mean_n = 0.0;                 ///< <a^dag a>
    cplx alpha{0.0, 0.0};                ///< <a>
    /// <a^dag a^dag a a> / <a^dag a>^2; empty when <a^dag a> < 1e-12.
    std::optional<double> g2_zero;
};

[[nodiscard]] ObservableSet observables(const DensityMatrix& rho, const SystemParams& params);

enum class SteadyStateMethod { dense_svd, sparse_lu };

struct SteadyStateSolution {
    DensityMatrix rho;
    double residual = 0.0;  ///< ||L vec(rho)||_2
    SteadyStateMethod method = SteadyStateMethod::dense_svd;
};

struct SteadyStateOptions {
    /// Liouville dimension at or below which the dense SVD path is used.
    Index dense_liouville_threshold = 512;
    /// Singular values below tol * ||L|| count toward the null space.
    double degeneracy_tol = 1e-10;
};

/// Unique unit-trace null vector of L. Throws DegenerateSteadyState when the
/// null space is not one-dimensional, SolverError when the residual exceeds
/// 1e-9 * dim.
[[nodiscard]] SteadyStateSolution solve_steady_state(const Superoperator& l, const SteadyStateOptions& options = {});
[[nodiscard]] DensityMatrix steady_state(const Superoperator& l);

struct EvolveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double initial_step = 1e-3;
    /// Steps below min_step_factor * max(1, |t|) abort the integration.
    double min_step_factor = 1e-13;
};

/// rho(t_final) from the master equation with generator L, integrated by an
/// adaptive embedded Runge-Kutta pair (Dormand-Prince 5(4)). Throws
/// StepSizeUnderflow when the controller cannot make progress.
[[nodiscard]] DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final,
                                   const EvolveOptions& options = {});

/// Samples rho at each of the ascending `times` (all >= 0).
[[nodiscard]] std::vector<DensityMatrix> evolve_trajectory(const DensityMatrix& rho0, const Superoperator& l,
                                                           const std::vector<double>& times,
                                                           const EvolveOptions& options = {});

/// Steady state of the full model with automatic Fock cutoff: starts from
/// default_space (or `n_max` when given) and grows the cutoff by 50% up to
/// three times while the top two Fock levels hold population >= 1e-8.
struct SteadyPoint {
    DensityMatrix rho;
    SpaceDescriptor space;
    ObservableSet obs;
    double residual = 0.0;
    int escalations = 0;
};

[[nodiscard]] SteadyPoint solve_steady_point(const SystemParams& params, std::optional<int> n_max = std::nullopt);

/// Population in the top two Fock levels.
[[nodiscard]] double fock_tail(const DensityMatrix& rho);

/// Free-space fluorescence rate of a driven two-level atom with the pump
/// term Omega (s^dag + s): gamma Omega^2 / (Delta^2 + gamma^2/4 + 2 Omega^2).
[[nodiscard]] double free_space_fluorescence(double omega, double delta, double gamma = 1.0);

}  // namespace cqed
