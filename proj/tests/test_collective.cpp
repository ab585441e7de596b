#include <doctest.h>

#include <cmath>

#include "cqed/collective.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/errors.hpp"

using namespace cqed;

namespace {

SystemParams antinode_params(int n_atoms, double g0, double omega, double delta, double kappa) {
    SystemParams p;
    p.g0 = g0;
    p.omega = omega;
    p.delta = delta;
    p.kappa = kappa;
    p.positions.clear();
    for (int i = 0; i < n_atoms; ++i) p.positions.push_back(i);
    return p;
}

}  // namespace

TEST_CASE("effective field parameters") {
    const SystemParams p = antinode_params(3, 0.1, 0.2, 0.0, 0.5);
    const EffectiveFieldParams e = effective_field_params(p);
    REQUIRE(e.s_n.size() == 3);
    for (double s : e.s_n) CHECK(s == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(e.s == doctest::Approx(0.04));
    CHECK(e.gamma_prime == doctest::Approx(3 * 0.04));

    SystemParams q = p;
    q.delta_c = 0.37;
    CHECK(effective_field_params(q).delta_prime == 0.37);

    q.delta = -2.0;
    const EffectiveFieldParams eq = effective_field_params(q);
    const cplx expected = 3.0 * eq.s * cplx(-2.0, -0.5) * q.omega / q.g0;
    CHECK(std::abs(eq.xi - expected) < 1e-14);
    CHECK(eq.delta_prime == doctest::Approx(0.37 + 3.0 * eq.s * 2.0));

    SystemParams weak = antinode_params(4, 0.01, 0.01, -100.0, 0.1);
    CHECK(effective_field_params(weak).below_saturation);
    weak.g0 = 20.0;
    CHECK(!effective_field_params(weak).below_saturation);

    SystemParams nodes = p;
    nodes.positions = {0.25, 0.75};
    CHECK_THROWS_AS((void)effective_field_params(nodes), DomainError);
    CHECK_THROWS_AS((void)adiabatic_alpha(nodes), DomainError);
}

TEST_CASE("in-phase amplitude") {
    SystemParams p = antinode_params(1, 2.0, 0.5, 0.0, 0.0);
    for (double n : {1.0, 7.0, 1e4}) {
        for (double delta : {0.0, -30.0, 4.0}) {
            p.delta = delta;
            const cplx even = in_phase_alpha(p, {Parity::even, n});
            const cplx odd = in_phase_alpha(p, {Parity::odd, n});
            CHECK(std::abs(even + 0.25) < 1e-14);
            CHECK(std::abs(even + odd) < 1e-14);
            CHECK(excited_population(p, {Parity::even, n}) == 0.0);
        }
    }
    p.kappa = 0.3;
    p.delta_c = -0.2;
    p.delta = 0.0;
    const CriticalAtomNumbers c = critical_atom_number(p);
    const cplx far = in_phase_alpha(p, {Parity::even, 1e6 * c.n0});
    CHECK(std::abs(far + p.omega / p.g0) < 1e-3 * p.omega / p.g0);
    CHECK(std::abs(in_phase_alpha(p, {Parity::even, 3.0}) + in_phase_alpha(p, {Parity::odd, 3.0})) < 1e-14);

    SystemParams zero = p;
    zero.g0 = 0.0;
    CHECK_THROWS_AS((void)in_phase_alpha(zero, {Parity::even, 2.0}), DomainError);
}

TEST_CASE("adiabatic amplitude matches the in-phase pattern") {
    SystemParams p = antinode_params(3, 0.2, 0.1, -5.0, 0.4);
    p.delta_c = 0.3;
    const cplx a = adiabatic_alpha(p);
    CHECK(std::abs(a - in_phase_alpha(p, {Parity::even, 3.0})) < 1e-13);
    const auto pops = adiabatic_excited_populations(p);
    for (double pe : pops) CHECK(pe == doctest::Approx(excited_population(p, {Parity::even, 3.0})).epsilon(1e-10));

    p.kappa = 0.0;
    p.delta_c = 0.0;
    CHECK(std::abs(adiabatic_alpha(p) + p.omega / p.g0) < 1e-14);
    for (double pe : adiabatic_excited_populations(p)) CHECK(pe < 1e-28);
}

TEST_CASE("excited population scaling") {
    SystemParams p = antinode_params(1, 1e-3, 1e-3, 0.0, 1e-3);
    const double n0 = critical_atom_number(p).n0;
    const double lo = excited_population(p, {Parity::even, 10.0 * n0});
    const double hi = excited_population(p, {Parity::even, 1000.0 * n0});
    const double slope = std::log(hi / lo) / std::log(100.0);
    CHECK(std::abs(slope + 2.0) < 0.05);

    // detuned regime with kappa << |N s Delta|: peak near N s Delta (1 + gamma^2 / 4 Delta^2)
    SystemParams q = antinode_params(1, 10.0, 10.0, -1000.0, 0.1);
    const double n = 100.0;
    const double s = q.g0 * q.g0 / (0.25 + q.delta * q.delta);
    const double predicted = n * s * q.delta * (1.0 + 0.25 / (q.delta * q.delta));
    double best = 0.0;
    double best_dc = 0.0;
    for (int i = 0; i <= 40000; ++i) {
        q.delta_c = -30.0 + i * 1e-3;
        const double pe = excited_population(q, {Parity::even, n});
        if (pe > best) {
            best = pe;
            best_dc = q.delta_c;
        }
    }
    CHECK(std::abs(best_dc - predicted) <= 0.02 * std::abs(predicted));
}

TEST_CASE("critical atom numbers") {
    SystemParams p = antinode_params(1, 1e-3, 1e-3, 0.0, 1e-3);
    const CriticalAtomNumbers c = critical_atom_number(p);
    CHECK(c.n0 == doctest::Approx(250.0).epsilon(1e-12));
    const double c1 = 2.0 * p.g0 * p.g0 / (p.gamma * p.kappa);
    CHECK(c.n0 * 2.0 * c1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!c.detuned_regime);

    SystemParams q = antinode_params(1, 10.0, 10.0, -1000.0, 10.0);
    const CriticalAtomNumbers cq = critical_atom_number(q);
    CHECK(cq.n0_delta == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(cq.detuned_regime);

    q.g0 = 0.0;
    CHECK_THROWS_AS((void)critical_atom_number(q), DomainError);
}

TEST_CASE("semiclassical force") {
    SystemParams p = antinode_params(1, 1.0, 1.0, -1.0, 0.0);
    for (double x : {0.0, 0.5, 1.0, -0.5, 3.0}) {
        CHECK(semiclassical_force(x, cplx(-0.7, 0.3), p).force == 0.0);
    }
    p.delta = 0.0;
    const ForceTerms zero_u = semiclassical_force(0.125, cplx(-1.0, 0.0), p);
    CHECK(zero_u.u0 == 0.0);
    CHECK(zero_u.gamma0 == doctest::Approx(2.0));
    // only the interference term survives: 2 Im(conj(eta) alpha) sin(pi/4), eta = 2
    CHECK(zero_u.force == doctest::Approx(0.0));

    // x = lambda/4, Delta = -1, alpha = -1: eta = 1/(0.5 + i) = (0.5 - i)/1.25,
    // conj(eta) alpha = -(0.5 + i)/1.25, so F = 2 * (-0.8) = -1.6.
    p.delta = -1.0;
    const ForceTerms f = semiclassical_force(0.25, cplx(-1.0, 0.0), p);
    CHECK(f.u0 == doctest::Approx(-0.8));
    CHECK(f.eta_eff.real() == doctest::Approx(0.4));
    CHECK(f.eta_eff.imag() == doctest::Approx(-0.8));
    CHECK(f.force == doctest::Approx(-1.6));

    // off the quarter point the dispersive term contributes: x = 1/8
    const ForceTerms g = semiclassical_force(0.125, cplx(-1.0, 0.0), p);
    CHECK(g.force == doctest::Approx(-0.8 * 1.0 + 2.0 * (-0.8) * std::sqrt(0.5)));
}

TEST_CASE("restoring coefficient") {
    SystemParams p = antinode_params(1, 2.0, 1.0, 0.0, 0.1);
    CHECK(restoring_coefficient(p, 10.0) == 0.0);
    p.delta_c = -0.5;
    const double base = restoring_coefficient(p, 10.0);
    CHECK(base < 0.0);
    CHECK(base == doctest::Approx(2.0 * kWaveNumber * kWaveNumber * 0.25 * -0.5 / 10.0));
    p.delta = -300.0;
    CHECK(restoring_coefficient(p, 10.0) == base);
    p.omega = std::sqrt(2.0);
    CHECK(restoring_coefficient(p, 10.0) == doctest::Approx(2.0 * base));
    p.delta_c = 0.5;
    CHECK(restoring_coefficient(p, 10.0) > 0.0);
}

TEST_CASE("pattern positions") {
    CHECK(pattern_positions({Parity::even, 3.0}) == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(pattern_positions({Parity::odd, 2.0}) == std::vector<double>{0.5, 1.5});
    CHECK_THROWS_AS((void)pattern_positions({Parity::even, 2.5}), InvalidArgument);
}

TEST_CASE("adiabatic elimination against the full master equation") {
    const SystemParams p = antinode_params(1, 1.0, 1.0, 100.0, 0.2);
    const cplx exact = solve_steady_point(p).obs.alpha;
    const cplx approx = adiabatic_alpha(p);
    CHECK(std::abs(approx - exact) < 0.05 * std::abs(approx));

    const SystemParams two = antinode_params(2, 1.0, 1.0, -60.0, 0.5);
    const SteadyPoint sp = solve_steady_point(two);
    const cplx a2 = adiabatic_alpha(two);
    CHECK(std::abs(a2 - sp.obs.alpha) < 0.05 * std::abs(a2));
    const auto pops = adiabatic_excited_populations(two);
    for (std::size_t n = 0; n < pops.size(); ++n) {
        CHECK(std::abs(pops[n] - sp.obs.pi_e_per_atom[n]) < 0.05 * pops[n] + 1e-12);
    }
}

TEST_CASE("field intensity peaks where delta' vanishes") {
    SystemParams p = antinode_params(1, 1.0, 1.0, 100.0, 0.2);
    const double ns = effective_field_params(p).s * 1.0;
    const double target = ns * p.delta;
    double best = 0.0;
    double best_dc = 0.0;
    const double step = 1e-4;
    for (int i = -2000; i <= 2000; ++i) {
        p.delta_c = i * step;
        const double a2 = std::norm(adiabatic_alpha(p));
        if (a2 > best) {
            best = a2;
            best_dc = p.delta_c;
        }
    }
    CHECK(std::abs(best_dc - target) <= step);
}
