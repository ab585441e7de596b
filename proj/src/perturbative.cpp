#include "cqed/perturbative.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

constexpr int kWorkingCutoff = 3;  // order <= 2 never populates |n> with n > 2

void check_single_atom_resonant(const SystemParams& params) {
    params.validate();
    if (params.n_atoms() != 1) throw InvalidArgument("perturbative expansion is defined for one atom only");
    if (params.delta_c != 0.0) throw DomainError("perturbative expansion requires delta_c = 0");
    if (coupling_at(params.positions[0], params) == 0.0) throw DomainError("atom sits at a node (g(x) = 0)");
}

cplx dark_amplitude(const SystemParams& params) {
    const double x = params.positions[0];
    return -params.pump_amplitude(0) * std::exp(kI * pump_phase_at(x, params)) / coupling_at(x, params);
}

// Vector-valued exponential polynomial sum_terms coeff * t^power * e^{mu t}.
struct ExpTerm {
    cplx mu;
    int power;
    Eigen::VectorXcd coeff;
};

class ExpPoly {
public:
    explicit ExpPoly(Index size) : size_(size) {}

    [[nodiscard]] Index size() const { return size_; }
    [[nodiscard]] const std::vector<ExpTerm>& terms() const { return terms_; }

    void add(cplx mu, int power, Index component, cplx value) {
        find_or_insert(mu, power).coeff(component) += value;
    }

    void add_vector(cplx mu, int power, const Eigen::VectorXcd& c) { find_or_insert(mu, power).coeff += c; }

    void add_poly(const ExpPoly& other) {
        for (const ExpTerm& term : other.terms_) add_vector(term.mu, term.power, term.coeff);
    }

    [[nodiscard]] ExpPoly apply(const DenseMatrix& m) const {
        ExpPoly out(size_);
        for (const ExpTerm& term : terms_) out.add_vector(term.mu, term.power, m * term.coeff);
        return out;
    }

    [[nodiscard]] Eigen::VectorXcd evaluate(double t) const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size_);
        for (const ExpTerm& term : terms_) v += term.coeff * (std::pow(t, term.power) * std::exp(term.mu * t));
        return v;
    }

    [[nodiscard]] double max_coeff() const {
        double m = 0.0;
        for (const ExpTerm& term : terms_) m = std::max(m, term.coeff.cwiseAbs().maxCoeff());
        return m;
    }

    void prune(double threshold) {
        std::erase_if(terms_, [&](const ExpTerm& term) { return term.coeff.cwiseAbs().maxCoeff() <= threshold; });
    }

private:
    Index size_;
    std::vector<ExpTerm> terms_;

    static bool same_rate(cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

    ExpTerm& find_or_insert(cplx mu, int power) {
        for (ExpTerm& term : terms_) {
            if (term.power == power && same_rate(term.mu, mu)) return term;
        }
        terms_.push_back({mu, power, Eigen::VectorXcd::Zero(size_)});
        return terms_.back();
    }
};

// y(t) = int_0^t e^{W (t - tau)} f(tau) dtau for diagonal W = diag(rates).
ExpPoly integrate(const ExpPoly& f, const Eigen::VectorXcd& rates) {
    ExpPoly out(f.size());
    for (const ExpTerm& term : f.terms()) {
        const int p = term.power;
        for (Index k = 0; k < f.size(); ++k) {
            const cplx c = term.coeff(k);
            if (c == 0.0) continue;
            const cplx w = rates(k);
            const cplx d = term.mu - w;
            if (std::abs(d) <= 1e-9 * std::max(1.0, std::abs(w))) {
                out.add(w, p + 1, k, c / static_cast<double>(p + 1));
                continue;
            }
            // int_0^t e^{d tau} tau^p dtau
            //   = e^{d t} sum_j (-1)^j p!/(p-j)! t^{p-j} / d^{j+1} - (-1)^p p! / d^{p+1}
            double falling = 1.0;  // p!/(p-j)!
            cplx d_pow = d;        // d^{j+1}
            for (int j = 0; j <= p; ++j) {
                const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                out.add(term.mu, p - j, k, c * sign * falling / d_pow);
                falling *= static_cast<double>(p - j);
                d_pow *= d;
            }
            double p_fact = 1.0;
            for (int j = 2; j <= p; ++j) p_fact *= j;
            cplx d_p1 = 1.0;
            for (int j = 0; j <= p; ++j) d_p1 *= d;
            const double sign_p = (p % 2 == 0) ? 1.0 : -1.0;
            out.add(w, 0, k, -c * sign_p * p_fact / d_p1);
        }
    }
    return out;
}

DenseMatrix clean(DenseMatrix m) {
    const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    for (Index i = 0; i < m.size(); ++i) {
        if (std::abs(m.data()[i]) < 1e-13 * scale) m.data()[i] = 0.0;
    }
    return m;
}

// Solution of dy/dt = (W + J) y + g(t), y(0) = 0, where J strictly lowers
// the excitation grading and is therefore nilpotent: y = sum_m (I J)^m I g.
ExpPoly solve_driven(const ExpPoly& source, const Eigen::VectorXcd& rates, const DenseMatrix& jump, double scale) {
    ExpPoly acc = integrate(source, rates);
    acc.prune(1e-17 * scale);
    ExpPoly term = acc;
    for (int iter = 0; iter < 4 * (kWorkingCutoff + 2); ++iter) {
        ExpPoly next = integrate(term.apply(jump), rates);
        next.prune(1e-17 * scale);
        if (next.terms().empty()) break;
        acc.add_poly(next);
        term = std::move(next);
    }
    return acc;
}

DenseMatrix dense_kron(const DenseMatrix& a, const DenseMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

}  // namespace

DisplacedEffectiveHamiltonian displaced_effective_hamiltonian(const SystemParams& params,
                                                              const SpaceDescriptor& space) {
    check_single_atom_resonant(params);
    if (space.n_atoms() != 1) throw InvalidArgument("space must hold exactly one atom");
    const double g = coupling_at(params.positions[0], params);
    const cplx beta = dark_amplitude(params);
    const Operator a = annihilation(space);
    const Operator ad = a.adjoint();
    const Operator s = atomic_lowering(space, 0);
    const Operator sd = s.adjoint();
    const Operator id = Operator::identity(space);
    Operator h0 = (a * sd + ad * s) * cplx(g) + excited_projector(space, 0) * -(params.delta + 0.5 * kI * params.gamma);
    Operator v = (number(space) + id * cplx(std::norm(beta))) * (-0.5 * kI) +
                 (ad * beta + a * std::conj(beta)) * (-0.5 * kI);
    return {std::move(h0), std::move(v), beta};
}

Operator effective_hamiltonian(const SystemParams& params, const SpaceDescriptor& space) {
    Operator h = build_hamiltonian(params, space);
    for (int n = 0; n < params.n_atoms(); ++n) {
        h = h + excited_projector(space, n) * cplx(0.0, -0.5 * params.gamma);
    }
    return h + number(space) * cplx(0.0, -0.5 * params.kappa);
}

DressedPair dressed_eigenvalues(int n, const SystemParams& params) {
    if (n < 1) throw InvalidArgument("dressed_eigenvalues: excitation number must be >= 1");
    const double g = coupling_at(params.positions.at(0), params);
    const cplx c = params.delta + 0.5 * kI * params.gamma;
    const cplx root = std::sqrt(c * c + 4.0 * g * g * static_cast<double>(n));
    return {-0.5 * (c - root), -0.5 * (c + root)};
}

double BiorthogonalSystem::completeness_residual() const {
    const DenseMatrix sum = right * left.adjoint();
    return (sum - DenseMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
}

double BiorthogonalSystem::biorthogonality_residual() const {
    const DenseMatrix overlaps = left.adjoint() * right;
    return (overlaps - DenseMatrix::Identity(overlaps.rows(), overlaps.cols())).cwiseAbs().maxCoeff();
}

BiorthogonalSystem biorthogonal_eigensystem(const DenseMatrix& h) {
    if (h.rows() != h.cols()) throw InvalidArgument("biorthogonal_eigensystem: matrix must be square");
    Eigen::ComplexEigenSolver<DenseMatrix> es(h, true);
    if (es.info() != Eigen::Success) throw SolverError("eigen decomposition failed");
    DenseMatrix right = es.eigenvectors();
    for (Index i = 0; i < right.cols(); ++i) right.col(i).normalize();
    Eigen::FullPivLU<DenseMatrix> lu(right);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw SolverError("defective matrix: eigenvectors are linearly dependent");
    const DenseMatrix left = lu.inverse().adjoint();
    for (Index i = 0; i < left.cols(); ++i) {
        // <v_bar|v> for unit-normalized partners.
        const double overlap = 1.0 / left.col(i).norm();
        if (overlap < 1e-12) {
            throw SolverError("defective matrix: left-right normalization " + std::to_string(overlap) + " below 1e-12");
        }
    }
    return {es.eigenvalues(), std::move(right), left};
}

BiorthogonalSystem biorthogonal_eigensystem(const Operator& h) { return biorthogonal_eigensystem(h.dense()); }

DenseMatrix PerturbativeState::assembled_displaced() const {
    DenseMatrix rho = rho_terms[0];
    double power = 1.0;
    for (int k = 1; k <= order; ++k) {
        power *= kappa;
        rho += power * rho_terms[static_cast<std::size_t>(k)];
    }
    return rho;
}

DenseMatrix PerturbativeState::assembled(const SpaceDescriptor& target) const {
    const DenseMatrix displaced = embed_fock(assembled_displaced(), space, target);
    const DenseMatrix d = displacement(target, beta).dense();
    return d * displaced * d.adjoint();
}

PerturbativeState perturbative_state(const SystemParams& params, double t, int order) {
    check_single_atom_resonant(params);
    if (order < 0 || order > 2) throw InvalidArgument("perturbative order must be 0, 1 or 2");
    if (!(t >= 0.0)) throw InvalidArgument("perturbative_state: t must be nonnegative");

    const SpaceDescriptor space(1, kWorkingCutoff);
    const auto [h0, v, beta] = displaced_effective_hamiltonian(params, space);
    const BiorthogonalSystem basis = biorthogonal_eigensystem(h0);
    const Index m = space.dim();
    const Index d = m * m;

    // Coordinates C with X = R C R^dag, C = L^dag X L.
    const DenseMatrix to_coords = dense_kron(basis.left.transpose(), basis.left.adjoint());
    const DenseMatrix from_coords = dense_kron(basis.right.conjugate(), basis.right);
    const auto in_coords = [&](const Superoperator& s) {
        return clean(DenseMatrix(to_coords * DenseMatrix(s.matrix()) * from_coords));
    };

    Eigen::VectorXcd rates(d);
    for (Index j = 0; j < m; ++j) {
        for (Index i = 0; i < m; ++i) {
            rates(j * m + i) = -kI * (basis.eigenvalues(i) - std::conj(basis.eigenvalues(j)));
        }
    }

    const Operator s = atomic_lowering(space, 0);
    const Operator shifted_a = annihilation(space) + Operator::identity(space) * beta;
    const DenseMatrix jump = in_coords(sandwich_superoperator(s, s.adjoint()) * cplx(params.gamma));
    const DenseMatrix no_jump_v = in_coords(non_hermitian_superoperator(v));
    const DenseMatrix cavity_jump = in_coords(sandwich_superoperator(shifted_a, shifted_a.adjoint()));
    const DenseMatrix first_order = clean(DenseMatrix(no_jump_v + cavity_jump));

    const DenseMatrix rho_init = DensityMatrix::ground(space).matrix();
    const Eigen::VectorXcd c0 = to_coords * vectorize(rho_init);
    ExpPoly free(d);
    for (Index k = 0; k < d; ++k) {
        if (std::abs(c0(k)) > 1e-15) free.add(rates(k), 0, k, c0(k));
    }
    const double scale = std::max(1.0, free.max_coeff());

    // rho0 = e^{(W+J)t} c0
    ExpPoly rho0 = free;
    rho0.add_poly(solve_driven(free.apply(jump), rates, jump, scale));
    std::array<ExpPoly, 3> terms{rho0, ExpPoly(d), ExpPoly(d)};
    if (order >= 1) terms[1] = solve_driven(terms[0].apply(first_order), rates, jump, scale);
    if (order >= 2) terms[2] = solve_driven(terms[1].apply(first_order), rates, jump, scale);

    PerturbativeState state;
    state.order = order;
    state.t = t;
    state.kappa = params.kappa;
    state.beta = beta;
    state.space = space;
    for (int k = 0; k < 3; ++k) {
        const Eigen::VectorXcd coords = terms[static_cast<std::size_t>(k)].evaluate(t);
        const DenseMatrix c = unvectorize(coords, m);
        DenseMatrix rho = basis.right * c * basis.right.adjoint();
        state.rho_terms[static_cast<std::size_t>(k)] = 0.5 * (rho + rho.adjoint());
    }

    // The jump term acting on the zeroth- and first-order no-jump propagation
    // of |g,0><g,0| vanishes identically.
    const ExpPoly no_jump_first = integrate(free.apply(no_jump_v), rates);
    state.vanishing_jump_norms = {free.apply(jump).max_coeff(), no_jump_first.apply(jump).max_coeff()};
    return state;
}

SmallKappaRates small_kappa_rates(const SystemParams& params) {
    params.validate();
    const double g = coupling_at(params.positions.at(0), params);
    if (g == 0.0) throw DomainError("small_kappa_rates: coupling g vanishes");
    SmallKappaRates r;
    const double omega = params.pump_amplitude(0);
    const double photon_loss = params.kappa * omega * omega / (g * g);
    r.c1 = params.kappa > 0.0 ? 2.0 * g * g / (params.gamma * params.kappa) : std::numeric_limits<double>::infinity();
    const double inv = params.kappa > 0.0 ? 1.0 / (2.0 * r.c1) : 0.0;
    r.i_at = photon_loss * inv;
    r.i_cav = photon_loss * (1.0 - inv);
    r.regime_valid = params.delta == 0.0 && std::abs(g) >= 5.0 * params.gamma;
    return r;
}

}  // namespace cqed
