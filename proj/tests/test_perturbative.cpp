#include <doctest.h>

#include <cmath>
#include <random>

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

// Eigenvalues of the 2x2 block {|e,n-1>, |g,n>} of h0 in a cutoff-n space.
Eigen::VectorXcd block_eigenvalues(const DenseMatrix& h0, const SpaceDescriptor& s, int n) {
    const Index idx[2] = {s.index(1, n - 1), s.index(0, n)};
    Eigen::Matrix2cd b;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) b(i, j) = h0(idx[i], idx[j]);
    }
    return Eigen::ComplexEigenSolver<Eigen::Matrix2cd>(b).eigenvalues();
}

bool matches_pair(const Eigen::VectorXcd& ev, const DressedPair& pair, double tol) {
    const bool direct = std::abs(ev(0) - pair.plus) < tol && std::abs(ev(1) - pair.minus) < tol;
    const bool swapped = std::abs(ev(1) - pair.plus) < tol && std::abs(ev(0) - pair.minus) < tol;
    return direct || swapped;
}

}  // namespace

TEST_CASE("displaced effective Hamiltonian terms") {
    const SpaceDescriptor s(1, 6);
    const auto [h0, v, beta] = displaced_effective_hamiltonian(single(10.0, 0.0, 0.1), s);
    CHECK(std::abs(beta) == 0.0);
    CHECK(v.max_abs_diff(number(s) * cplx(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(h0.coeff(s.index(1, 0), s.index(0, 1)) - 10.0) < 1e-15);
    CHECK_THROWS_AS((void)displaced_effective_hamiltonian(SystemParams{{0.0, 1.0}}, SpaceDescriptor(2, 3)),
                    InvalidArgument);
    SystemParams detuned = single(10.0, 1.0, 0.1);
    detuned.delta_c = 0.5;
    CHECK_THROWS_AS((void)displaced_effective_hamiltonian(detuned, s), DomainError);
}

TEST_CASE("displaced frame reproduces the lab-frame effective Hamiltonian") {
    const SystemParams p = single(10.0, 1.0, 0.1);
    const SpaceDescriptor s(1, 20);
    const auto [h0, v, beta] = displaced_effective_hamiltonian(p, s);
    CHECK(std::abs(beta - cplx(-0.1)) < 1e-15);
    const DenseMatrix d = displacement(s, beta).dense();
    const DenseMatrix lab = d.adjoint() * effective_hamiltonian(p, s).dense() * d;
    const DenseMatrix displaced = (h0 + v * cplx(p.kappa)).dense();
    // The truncated D^dag a D differs from a + beta only near the top Fock
    // level, so compare the block of photon numbers <= 10.
    double worst = 0.0;
    for (int m1 = 0; m1 < 2; ++m1) {
        for (int n1 = 0; n1 <= 10; ++n1) {
            for (int m2 = 0; m2 < 2; ++m2) {
                for (int n2 = 0; n2 <= 10; ++n2) {
                    const Index i = s.index(m1, n1);
                    const Index j = s.index(m2, n2);
                    worst = std::max(worst, std::abs(lab(i, j) - displaced(i, j)));
                }
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("dressed eigenvalues") {
    SystemParams p = single(1.0, 1.0, 0.0);
    p.gamma = 0.0;
    DressedPair e = dressed_eigenvalues(1, p);
    CHECK(std::abs(e.plus - cplx(1.0)) < 1e-15);
    CHECK(std::abs(e.minus - cplx(-1.0)) < 1e-15);

    p.gamma = 1.0;
    e = dressed_eigenvalues(1, p);
    const double split = std::sqrt(4.0 - 0.25) / 2.0;
    CHECK(std::abs(e.plus - cplx(split, -0.25)) < 1e-12);
    CHECK(std::abs(e.minus - cplx(-split, -0.25)) < 1e-12);

    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        p.delta = u(rng);
        p.g0 = std::abs(u(rng)) + 0.1;
        const int n = 1 + trial % 5;
        e = dressed_eigenvalues(n, p);
        CHECK(e.plus.imag() <= 1e-15);
        CHECK(e.minus.imag() <= 1e-15);
        CHECK(std::abs(e.plus.imag() + e.minus.imag() + 0.5 * p.gamma) < 1e-12);
        CHECK(e.plus.real() >= e.minus.real());
    }
    CHECK_THROWS_AS((void)dressed_eigenvalues(0, p), InvalidArgument);
}

TEST_CASE("biorthogonal eigensystem of h0") {
    for (double delta : {0.0, -2.0, 3.5}) {
        SystemParams p = single(1.0, 1.0, 0.0);
        p.delta = delta;
        const SpaceDescriptor s(1, 5);
        const auto dh = displaced_effective_hamiltonian(p, s);
        const BiorthogonalSystem b = biorthogonal_eigensystem(dh.h0);
        CHECK(b.completeness_residual() < 1e-8);
        CHECK(b.biorthogonality_residual() < 1e-8);
        const DenseMatrix h = dh.h0.dense();
        for (int n = 1; n <= s.n_max(); ++n) {
            const DressedPair pair = dressed_eigenvalues(n, p);
            CHECK(matches_pair(block_eigenvalues(h, s, n), pair, 1e-8));
            // and both appear in the full spectrum
            for (cplx lam : {pair.plus, pair.minus}) {
                double best = 1e300;
                for (Index i = 0; i < b.eigenvalues.size(); ++i) best = std::min(best, std::abs(b.eigenvalues(i) - lam));
                CHECK(best < 1e-8);
            }
        }
        // right vectors are eigenvectors
        CHECK((h * b.right - b.right * b.eigenvalues.asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("biorthogonal eigensystem of a Hermitian matrix") {
    DenseMatrix h(3, 3);
    h << 1.0, cplx(0.2, 0.1), 0.0, cplx(0.2, -0.1), 2.0, 0.3, 0.0, 0.3, 4.0;
    const BiorthogonalSystem b = biorthogonal_eigensystem(h);
    CHECK(b.eigenvalues.imag().cwiseAbs().maxCoeff() < 1e-12);
    CHECK((b.left - b.right).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("defective matrices are rejected") {
    DenseMatrix jordan(2, 2);
    jordan << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS((void)biorthogonal_eigensystem(jordan), SolverError);
    DenseMatrix zero_rank(3, 3);
    zero_rank << 2.0, 1.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 2.0;
    CHECK_THROWS_AS((void)biorthogonal_eigensystem(zero_rank), SolverError);
}

TEST_CASE("perturbative state at t = 0 is the dark state") {
    const SystemParams p = single(10.0, 1.0, 0.01);
    const SpaceDescriptor target(1, 11);
    const DensityMatrix dark = DensityMatrix::pure(target, coherent_ket(target, -0.1));
    for (int order = 0; order <= 2; ++order) {
        const PerturbativeState ps = perturbative_state(p, 0.0, order);
        CHECK(trace_distance(ps.assembled(target), dark.matrix()) < 1e-12);
    }
}

TEST_CASE("perturbative expansion against exact evolution") {
    const SystemParams p = single(10.0, 1.0, 1e-3);
    const SpaceDescriptor target(1, 11);
    const PerturbativeState ps = perturbative_state(p, 10.0, 2);
    const DensityMatrix exact = evolve(DensityMatrix::pure(target, coherent_ket(target, ps.beta)),
                                       build_liouvillian(p, target), 10.0);
    const DenseMatrix approx = ps.assembled(target);
    CHECK(trace_distance(approx, exact.matrix()) < 1e-4);
    CHECK(std::abs(approx.trace().real() - 1.0) < 1e-6);
    CHECK(ps.vanishing_jump_norms[0] < 1e-10);
    CHECK(ps.vanishing_jump_norms[1] < 1e-10);
    CHECK(std::abs(ps.rho_terms[0].trace().real() - 1.0) < 1e-12);
    // the trace is carried by the zeroth order alone
    CHECK(std::abs(ps.rho_terms[1].trace()) < 1e-10);
}

TEST_CASE("perturbative error bound on weak-coupling sets") {
    for (double g0 : {1.0, 10.0}) {
        for (double kappa : {1e-3, 3e-3, 1e-2}) {
            const SystemParams p = single(g0, 1.0, kappa);
            const SpaceDescriptor target = default_space(p);
            const PerturbativeState ps = perturbative_state(p, 10.0, 2);
            const DensityMatrix exact = evolve(DensityMatrix::pure(target, coherent_ket(target, ps.beta)),
                                               build_liouvillian(p, target), 10.0);
            CHECK(trace_distance(ps.assembled(target), exact.matrix()) < 10.0 * kappa * kappa);
        }
    }
}

TEST_CASE("atomic population of the second-order state grows as kappa^2") {
    std::vector<double> lk;
    std::vector<double> lp;
    const SpaceDescriptor target(1, 11);
    for (double kappa : {1e-4, 1e-3, 1e-2}) {
        const PerturbativeState ps = perturbative_state(single(10.0, 1.0, kappa), 10.0, 2);
        const DenseMatrix rho = ps.assembled(target);
        const double pe = std::real((excited_projector(target, 0).dense() * rho).trace());
        lk.push_back(std::log(kappa));
        lp.push_back(std::log(pe));
    }
    const double slope = (lp.back() - lp.front()) / (lk.back() - lk.front());
    CHECK(std::abs(slope - 2.0) < 0.05);
}

TEST_CASE("perturbative preconditions") {
    SystemParams two = single(10.0, 1.0, 0.01);
    two.positions = {0.0, 1.0};
    CHECK_THROWS_AS((void)perturbative_state(two, 1.0), InvalidArgument);
    SystemParams node = single(10.0, 1.0, 0.01);
    node.positions = {0.25};
    CHECK_THROWS((void)perturbative_state(node, 1.0));
    CHECK_THROWS_AS((void)perturbative_state(single(10.0, 1.0, 0.01), 1.0, 3), InvalidArgument);
    CHECK_THROWS_AS((void)perturbative_state(single(10.0, 1.0, 0.01), -1.0), InvalidArgument);
}

TEST_CASE("small-kappa closed forms") {
    const SmallKappaRates r = small_kappa_rates(single(10.0, 1.0, 1.0));
    CHECK(r.c1 == doctest::Approx(200.0));
    CHECK(r.i_at == doctest::Approx(2.5e-5));
    CHECK(r.i_cav == doctest::Approx(9.975e-3));
    CHECK(r.i_at + r.i_cav == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(r.regime_valid);
    CHECK(!small_kappa_rates(single(1.0, 1.0, 1.0)).regime_valid);
    CHECK_THROWS_AS((void)small_kappa_rates(single(0.0, 1.0, 1.0)), DomainError);

    const SteadyPoint sp = solve_steady_point(single(10.0, 1.0, 1.0));
    CHECK(std::abs(sp.obs.i_at_total / r.i_at - 1.0) < 0.2);
}

TEST_CASE("cavity emission approaches the closed form at large cooperativity") {
    for (double kappa : {0.1, 0.5, 1.0, 2.0}) {
        const SystemParams p = single(10.0, 1.0, kappa);
        const SmallKappaRates r = small_kappa_rates(p);
        REQUIRE(r.c1 >= 50.0);
        const SteadyPoint sp = solve_steady_point(p);
        const double normalized = sp.obs.i_cav / (kappa * 0.01);
        CHECK(std::abs(normalized / (1.0 - 1.0 / (2.0 * r.c1)) - 1.0) < 0.05);
    }
}
