#include <doctest.h>

#include <cmath>
#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"
#include "cqed/operators.hpp"

using namespace cqed;

namespace {

DenseMatrix random_density(Index dim, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    DenseMatrix a(dim, dim);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = cplx(n(rng), n(rng));
    DenseMatrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("space dimensions follow the tensor layout") {
    const SpaceDescriptor s(2, 4);
    CHECK(s.dim() == 4 * 5);
    CHECK(s.index(0b10, 3) == 2 * 5 + 3);
    CHECK(SpaceDescriptor(0, 1).dim() == 2);
    CHECK_THROWS_AS(SpaceDescriptor(-1, 2), InvalidArgument);
    CHECK_THROWS_AS(SpaceDescriptor(1, -1), InvalidArgument);
    CHECK_THROWS_AS((void)s.index(4, 0), InvalidArgument);
}

TEST_CASE("annihilation ladder entries") {
    const DenseMatrix a1 = annihilation(SpaceDescriptor(0, 1)).dense();
    CHECK(a1.rows() == 2);
    CHECK(std::abs(a1(0, 1) - 1.0) < 1e-15);
    CHECK(a1.cwiseAbs().sum() == doctest::Approx(1.0));

    const DenseMatrix a2 = annihilation(SpaceDescriptor(0, 2)).dense();
    CHECK(std::abs(a2(1, 2) - std::sqrt(2.0)) < 1e-15);

    const DenseMatrix n = number(SpaceDescriptor(0, 3)).dense();
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(n(k, k) - double(k)) < 1e-15);
}

TEST_CASE("ladder operators acting on atoms and cavity") {
    const SpaceDescriptor s(1, 3);
    const DenseMatrix a = annihilation(s).dense();
    // identity on the atom: <e,0|a|e,1> = 1
    CHECK(std::abs(a(s.index(1, 0), s.index(1, 1)) - 1.0) < 1e-15);
    const DenseMatrix comm = a * a.adjoint() - a.adjoint() * a;
    for (int mask = 0; mask < 2; ++mask) {
        for (int k = 0; k < s.n_max(); ++k) {
            CHECK(std::abs(comm(s.index(mask, k), s.index(mask, k)) - 1.0) < 1e-12);
        }
        CHECK(std::abs(comm(s.index(mask, s.n_max()), s.index(mask, s.n_max())) + double(s.n_max())) < 1e-12);
    }
}

TEST_CASE("atomic operators") {
    const SpaceDescriptor one(1, 0);
    const DenseMatrix sds = (atomic_raising(one, 0) * atomic_lowering(one, 0)).dense();
    CHECK(std::abs(sds(0, 0)) < 1e-15);
    CHECK(std::abs(sds(1, 1) - 1.0) < 1e-15);

    const SpaceDescriptor two(2, 2);
    const Operator s1 = atomic_lowering(two, 0);
    const Operator s2 = atomic_lowering(two, 1);
    CHECK((s1 * s2 - s2 * s1).dense().cwiseAbs().maxCoeff() == 0.0);
    CHECK((s1 * s1).dense().cwiseAbs().maxCoeff() == 0.0);
    CHECK(excited_projector(two, 0).max_abs_diff(atomic_raising(two, 0) * s1) == 0.0);
    CHECK_THROWS_AS((void)atomic_lowering(two, 2), InvalidArgument);
    CHECK_THROWS_AS((void)atomic_lowering(two, -1), InvalidArgument);
}

TEST_CASE("adjoint is an involution and storage follows the threshold") {
    const SpaceDescriptor small(1, 5);
    const SpaceDescriptor large(4, 40);
    const Operator a = annihilation(small) + atomic_lowering(small, 0) * cplx(0.3, 0.7);
    CHECK(a.is_dense());
    CHECK(a.adjoint().adjoint().max_abs_diff(a) == 0.0);
    const Operator b = annihilation(large) * cplx(0.0, 2.0);
    CHECK(!b.is_dense());
    CHECK(b.adjoint().adjoint().max_abs_diff(b) == 0.0);
}

TEST_CASE("embedding commutes with composition") {
    const SpaceDescriptor s(2, 4);
    const Operator a = annihilation(s);
    const Operator ad = creation(s);
    // (a a^dag) built from the embedded factors equals the embedded product
    DenseMatrix local_a = DenseMatrix::Zero(5, 5);
    for (int k = 1; k < 5; ++k) local_a(k - 1, k) = std::sqrt(double(k));
    const DenseMatrix local = local_a * local_a.adjoint();
    const DenseMatrix expected = Eigen::kroneckerProduct(DenseMatrix::Identity(4, 4), local).eval();
    CHECK(((a * ad).dense() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("displacement") {
    const SpaceDescriptor s10(0, 10);
    CHECK(displacement(s10, 0.0).max_abs_diff(Operator::identity(s10)) < 1e-15);

    const DenseMatrix d = displacement(s10, -0.1).dense();
    const DenseMatrix a = annihilation(s10).dense();
    CHECK(std::abs((d.adjoint() * a * d)(0, 0) - cplx(-0.1)) < 1e-8);

    const SpaceDescriptor s20(0, 20);
    const cplx beta = 0.5 * std::exp(kI * 0.3);
    const DenseMatrix prod = (displacement(s20, beta) * displacement(s20, -beta)).dense();
    CHECK((prod - DenseMatrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-8);

    const DenseMatrix u = displacement(s20, beta).dense();
    CHECK((u.adjoint() * u - DenseMatrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS((void)displacement(SpaceDescriptor(0, 4), 1.2), TruncationError);
}

TEST_CASE("coherent states are Poissonian") {
    for (double b : {0.1, 0.5, 1.0, 1.5}) {
        const SpaceDescriptor s(1, static_cast<int>(std::ceil(b * b + 6 * b + 10)));
        const DensityMatrix rho = DensityMatrix::pure(s, coherent_ket(s, cplx(-b, 0.2 * b)));
        const Eigen::VectorXd pops = rho.fock_populations();
        const double mu = b * b * 1.04;
        double tv = 0.0;
        double p = std::exp(-mu);
        for (int n = 0; n <= s.n_max(); ++n) {
            if (n > 0) p *= mu / n;
            tv += std::abs(pops(n) - p);
        }
        CHECK(0.5 * tv < 1e-6);
        const double mean_n = std::real(expectation(number(s), rho));
        CHECK(std::abs(mean_n - mu) < 1e-6 * mu);
    }
}

TEST_CASE("expectation values") {
    const SpaceDescriptor s(1, 10);
    const DensityMatrix beta = DensityMatrix::pure(s, coherent_ket(s, -0.1));
    CHECK(std::abs(expectation(Operator::identity(s), beta) - 1.0) < 1e-12);
    CHECK(std::abs(expectation(number(s), beta) - 0.01) < 1e-8);
    CHECK(std::abs(expectation(excited_projector(s, 0), beta)) < 1e-15);

    std::mt19937 rng(7);
    const DensityMatrix r(s, random_density(s.dim(), rng));
    const cplx n = expectation(number(s), r);
    CHECK(std::abs(n.imag()) < 1e-10);
    CHECK_THROWS_AS((void)expectation(number(SpaceDescriptor(1, 9)), r), InvalidArgument);
}

TEST_CASE("density matrix validation") {
    const SpaceDescriptor s(0, 1);
    DenseMatrix m = DenseMatrix::Zero(2, 2);
    m(0, 0) = 0.5;
    m(1, 1) = 0.5;
    CHECK_NOTHROW(DensityMatrix(s, m));
    DenseMatrix not_hermitian = m;
    not_hermitian(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix(s, not_hermitian), InvalidArgument);
    DenseMatrix bad_trace = m * 1.1;
    CHECK_THROWS_AS(DensityMatrix(s, bad_trace), InvalidArgument);
    DenseMatrix negative = DenseMatrix::Zero(2, 2);
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(s, negative), InvalidArgument);
}

TEST_CASE("trace distance and Fock embedding") {
    const SpaceDescriptor small(1, 3);
    const SpaceDescriptor big(1, 6);
    const DenseMatrix g = DensityMatrix::ground(small).matrix();
    const DenseMatrix e = embed_fock(g, small, big);
    CHECK(e.rows() == big.dim());
    CHECK(std::abs(e(big.index(0, 0), big.index(0, 0)) - 1.0) < 1e-15);
    CHECK(trace_distance(e, DensityMatrix::ground(big).matrix()) < 1e-15);
    const DenseMatrix one = DensityMatrix::pure(big, basis_ket(big, big.index(0, 1))).matrix();
    CHECK(trace_distance(e, one) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)embed_fock(g, small, SpaceDescriptor(2, 6)), InvalidArgument);
}
