#include <doctest.h>

#include <cmath>

#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"
#include "cqed/perturbative.hpp"

using namespace cqed;

namespace {

SystemParams single(double g0, double omega, double kappa) {
    SystemParams p;
    p.g0 = g0;
    p.omega = omega;
    p.kappa = kappa;
    return p;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("dark steady state") {
    const SteadyPoint sp = solve_steady_point(single(10.0, 1.0, 0.0));
    CHECK(sp.rho.fidelity(coherent_ket(sp.space, -0.1)) > 0.999);
    CHECK(sp.obs.i_at_total < 1e-6);
    CHECK(sp.residual < 1e-9 * sp.space.dim());
}

TEST_CASE("no pump gives the global ground state") {
    SystemParams p = single(2.0, 0.0, 0.3);
    p.positions = {0.0, 0.2};
    const SteadyPoint sp = solve_steady_point(p);
    CHECK(trace_distance(sp.rho.matrix(), DensityMatrix::ground(sp.space).matrix()) < 1e-12);
}

TEST_CASE("dense and sparse steady-state paths agree") {
    const SystemParams p = single(1.0, 1.0, 0.5);
    const SpaceDescriptor small(1, 10);  // Liouville dim 484: dense
    const SpaceDescriptor big(1, 17);    // Liouville dim 1296: sparse
    const SteadyStateSolution a = solve_steady_state(build_liouvillian(p, small));
    const SteadyStateSolution b = solve_steady_state(build_liouvillian(p, big));
    CHECK(a.method == SteadyStateMethod::dense_svd);
    CHECK(b.method == SteadyStateMethod::sparse_lu);
    CHECK(std::real(expectation(excited_projector(small, 0), a.rho)) ==
          doctest::Approx(std::real(expectation(excited_projector(big, 0), b.rho))).epsilon(1e-6));
    SteadyStateOptions force_sparse;
    force_sparse.dense_liouville_threshold = 0;
    const SteadyStateSolution c = solve_steady_state(build_liouvillian(p, small), force_sparse);
    CHECK(trace_distance(a.rho.matrix(), c.rho.matrix()) < 1e-10);
}

TEST_CASE("degenerate steady state is reported") {
    // Decoupled lossless cavity: every Fock projector is stationary.
    SystemParams p = single(0.0, 0.0, 0.0);
    const SpaceDescriptor s(1, 3);
    try {
        (void)solve_steady_state(build_liouvillian(p, s));
        FAIL("expected DegenerateSteadyState");
    } catch (const DegenerateSteadyState& e) {
        CHECK(e.null_dimension() >= 4);
    }
    SteadyStateOptions force_sparse;
    force_sparse.dense_liouville_threshold = 0;
    CHECK_THROWS_AS((void)solve_steady_state(build_liouvillian(p, s), force_sparse), DegenerateSteadyState);
}

TEST_CASE("cavity emission ratio at strong coupling") {
    const SteadyPoint sp = solve_steady_point(single(10.0, 1.0, 0.1));
    const double c1 = 2.0 * 100.0 / 0.1;
    const double ratio = sp.obs.i_cav / sp.obs.i_at_total;
    CHECK(ratio > 0.5 * (2.0 * c1 - 1.0));
    CHECK(ratio < 2.0 * (2.0 * c1 - 1.0));
}

TEST_CASE("evolution under a zero generator is the identity map") {
    SystemParams p = single(0.0, 0.0, 0.0);
    p.gamma = 0.0;
    const SpaceDescriptor s(1, 8);
    const DensityMatrix rho0 = DensityMatrix::pure(s, coherent_ket(s, 0.3));
    const DensityMatrix rho = evolve(rho0, build_liouvillian(p, s), 5.0);
    CHECK((rho.matrix() - rho0.matrix()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("free cavity decay") {
    SystemParams p = single(0.0, 0.0, 0.7);
    const SpaceDescriptor s(1, 12);
    const DensityMatrix rho0 = DensityMatrix::pure(s, coherent_ket(s, cplx(0.6, 0.8)));
    const std::vector<double> times{0.5, 1.0, 3.0, 6.0};
    const auto traj = evolve_trajectory(rho0, build_liouvillian(p, s), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double n = std::real(expectation(number(s), traj[i]));
        CHECK(std::abs(n / std::exp(-0.7 * times[i]) - 1.0) < 1e-6);
        CHECK(std::abs(traj[i].matrix().trace().real() - 1.0) < 1e-9);
        CHECK(traj[i].min_eigenvalue() >= -1e-8);
    }
}

TEST_CASE("long-time evolution agrees with the steady state") {
    const std::vector<SystemParams> sets = {single(1.0, 1.0, 0.5), single(10.0, 1.0, 0.5), single(1.0, 1.0, 1.5)};
    for (const SystemParams& p : sets) {
        const SteadyPoint sp = solve_steady_point(p);
        const Superoperator l = build_liouvillian(p, sp.space);
        const auto traj = evolve_trajectory(DensityMatrix::ground(sp.space), l, {20.0, 60.0, 120.0});
        for (const DensityMatrix& r : traj) CHECK(r.min_eigenvalue() >= -1e-8);
        CHECK(trace_distance(traj.back().matrix(), sp.rho.matrix()) < 1e-6);
    }
}

TEST_CASE("evolution rejects bad input") {
    const SpaceDescriptor s(1, 3);
    const Superoperator l = build_liouvillian(single(1.0, 1.0, 1.0), s);
    CHECK_THROWS_AS((void)evolve(DensityMatrix::ground(SpaceDescriptor(1, 4)), l, 1.0), InvalidArgument);
    CHECK_THROWS_AS((void)evolve(DensityMatrix::ground(s), l, -1.0), InvalidArgument);
    CHECK_THROWS_AS((void)evolve_trajectory(DensityMatrix::ground(s), l, {2.0, 1.0}), InvalidArgument);
    EvolveOptions tight;
    tight.abs_tol = 1e-300;
    tight.rel_tol = 1e-300;
    tight.min_step_factor = 1e-3;
    CHECK_THROWS_AS((void)evolve(DensityMatrix::ground(s), l, 1.0, tight), StepSizeUnderflow);
}

TEST_CASE("observables of reference states") {
    SystemParams p;
    const SpaceDescriptor s(1, 10);
    const ObservableSet coh = observables(DensityMatrix::pure(s, coherent_ket(s, -0.1)), p);
    REQUIRE(coh.g2_zero.has_value());
    CHECK(std::abs(*coh.g2_zero - 1.0) < 1e-6);
    CHECK(std::abs(coh.alpha - cplx(-0.1)) < 1e-8);
    CHECK(coh.mean_n == doctest::Approx(0.01).epsilon(1e-8));

    const ObservableSet fock = observables(DensityMatrix::pure(s, basis_ket(s, s.index(0, 1))), p);
    REQUIRE(fock.g2_zero.has_value());
    CHECK(*fock.g2_zero == 0.0);

    const ObservableSet vac = observables(DensityMatrix::ground(s), p);
    CHECK(!vac.g2_zero.has_value());

    const ObservableSet exc = observables(DensityMatrix::pure(s, basis_ket(s, s.index(1, 2))), p);
    CHECK(exc.pi_e_per_atom[0] == doctest::Approx(1.0));
    CHECK(exc.i_at_total == doctest::Approx(p.gamma));
    CHECK_THROWS_AS((void)observables(DensityMatrix::ground(SpaceDescriptor(2, 3)), p), InvalidArgument);
}

TEST_CASE("small-kappa scaling of the emission rates") {
    std::vector<double> kappas;
    std::vector<double> i_at;
    std::vector<double> i_cav;
    for (int i = 0; i <= 8; ++i) {
        const double k = 0.01 * std::pow(30.0, i / 8.0);
        const SteadyPoint sp = solve_steady_point(single(10.0, 1.0, k));
        kappas.push_back(k);
        i_at.push_back(sp.obs.i_at_total);
        i_cav.push_back(sp.obs.i_cav);
    }
    CHECK(std::abs(slope(kappas, i_at) - 2.0) < 0.1);
    CHECK(std::abs(slope(kappas, i_cav) - 1.0) < 0.1);
}

TEST_CASE("Poissonian cavity output") {
    for (double k : {0.01, 0.05, 0.1, 0.3, 0.5}) {
        const SteadyPoint sp = solve_steady_point(single(10.0, 1.0, k));
        REQUIRE(sp.obs.g2_zero.has_value());
        CHECK(std::abs(*sp.obs.g2_zero - 1.0) < 0.05);
    }
}

TEST_CASE("two atoms one wavelength apart share the dark state") {
    SystemParams p = single(10.0, 1.0, 0.0);
    p.positions = {0.0, 1.0};
    const SteadyPoint sp = solve_steady_point(p);
    CHECK(sp.rho.fidelity(coherent_ket(sp.space, -0.1)) > 0.999);
}

TEST_CASE("two atoms half a wavelength apart below saturation") {
    // Delta = 100 keeps Omega^2 / (Delta^2 + 1/4) well below 0.05.
    SystemParams p = single(10.0, 1.0, 0.2);
    p.delta = 100.0;
    p.positions = {0.0, 0.5};
    const SteadyPoint sp = solve_steady_point(p);
    CHECK(sp.obs.mean_n < 1e-3 * 0.01);
    CHECK(std::abs(sp.obs.pi_e_per_atom[0] - sp.obs.pi_e_per_atom[1]) < 1e-6);
    CHECK(sp.obs.pi_e_per_atom[0] > 1e-6);
}

TEST_CASE("truncation escalation") {
    // A deliberately small starting cutoff must grow.
    const SteadyPoint sp = solve_steady_point(single(1.0, 1.0, 0.5), 6);
    CHECK(sp.escalations >= 1);
    CHECK(fock_tail(sp.rho) < 1e-8);
    // Weak coupling and no loss channel for the field: population piles up.
    CHECK_THROWS_AS((void)solve_steady_point(single(0.05, 1.0, 1e-4), 4), TruncationError);
}

TEST_CASE("free-space fluorescence") {
    CHECK(free_space_fluorescence(0.0, 0.0) == 0.0);
    CHECK(free_space_fluorescence(1.0, 0.0) == doctest::Approx(1.0 / 2.25));
    CHECK(free_space_fluorescence(1e3, 0.0) == doctest::Approx(0.5).epsilon(1e-6));
    // Agrees with the exact solution of a lone driven atom.
    SystemParams p = single(0.0, 0.8, 1.0);
    p.delta = 0.4;
    const SteadyPoint sp = solve_steady_point(p, 2);
    CHECK(sp.obs.i_at_total == doctest::Approx(free_space_fluorescence(0.8, 0.4)).epsilon(1e-10));
}
