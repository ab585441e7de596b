#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <Eigen/SparseQR>
#include <boost/numeric/odeint.hpp>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

using Triplet = Eigen::Triplet<cplx>;

double residual_limit(Index dim) { return 1e-9 * static_cast<double>(dim); }

// Hermitize and normalize a raw null vector.
DensityMatrix to_density(const SpaceDescriptor& space, const Eigen::VectorXcd& v) {
    DenseMatrix rho = unvectorize(v, space.dim());
    const cplx tr = rho.trace();
    if (std::abs(tr) < 1e-300) throw SolverError("steady-state null vector has zero trace");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    return {space, std::move(rho)};
}

SteadyStateSolution solve_dense(const Superoperator& l, const SteadyStateOptions& options) {
    const DenseMatrix m(l.matrix());
    Eigen::BDCSVD<DenseMatrix> svd(m, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();  // descending
    const double scale = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = options.degeneracy_tol * std::max(scale, 1e-300);
    int null_dim = 0;
    for (Index k = 0; k < sv.size(); ++k) {
        if (sv(k) < tol) ++null_dim;
    }
    if (null_dim > 1) {
        throw DegenerateSteadyState(null_dim, "more than one singular value below " + std::to_string(tol));
    }
    const Eigen::VectorXcd v = svd.matrixV().col(sv.size() - 1);
    DensityMatrix rho = to_density(l.space(), v);
    const double residual = (l.matrix() * vectorize(rho.matrix())).norm();
    return {std::move(rho), residual, SteadyStateMethod::dense_svd};
}

int sparse_nullity(const SparseMatrix& m) {
    Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>> qr;
    qr.setPivotThreshold(1e-10 * std::max(1.0, m.cwiseAbs().sum() / static_cast<double>(m.rows())));
    qr.compute(m);
    if (qr.info() != Eigen::Success) return -1;
    return static_cast<int>(m.cols() - qr.rank());
}

// Replace the <0|rho|0> equation (linearly dependent on the other
// populations by trace preservation) with the trace condition.
SteadyStateSolution solve_sparse(const Superoperator& l) {
    const SparseMatrix& m = l.matrix();
    const Index dim = l.space().dim();
    const Index d = m.rows();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(m.nonZeros() + dim));
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (Index i = 0; i < dim; ++i) entries.emplace_back(0, i * dim + i, 1.0);
    SparseMatrix bordered(d, d);
    bordered.setFromTriplets(entries.begin(), entries.end());
    bordered.makeCompressed();

    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(bordered);
    lu.factorize(bordered);
    const auto degenerate = [&](const std::string& why) {
        throw DegenerateSteadyState(sparse_nullity(m), why);
    };
    if (lu.info() != Eigen::Success) degenerate("trace-bordered Liouvillian is singular");
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d);
    rhs(0) = 1.0;
    const Eigen::VectorXcd v = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !v.allFinite()) degenerate("trace-bordered solve failed");
    const double raw_residual = (m * v).norm();
    if (raw_residual > residual_limit(dim) * std::max(1.0, v.norm())) {
        degenerate("bordered solution does not annihilate L (residual " + std::to_string(raw_residual) + ")");
    }
    DensityMatrix rho = to_density(l.space(), v);
    const double residual = (m * vectorize(rho.matrix())).norm();
    return {std::move(rho), residual, SteadyStateMethod::sparse_lu};
}

using OdeState = std::vector<cplx>;

struct LiouvilleRhs {
    const SparseMatrix* m;
    void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
        Eigen::Map<const Eigen::VectorXcd> in(x.data(), static_cast<Index>(x.size()));
        Eigen::Map<Eigen::VectorXcd> out(dxdt.data(), static_cast<Index>(dxdt.size()));
        out.noalias() = (*m) * in;
    }
};

DensityMatrix finalize_state(const SpaceDescriptor& space, const OdeState& x) {
    Eigen::Map<const Eigen::VectorXcd> v(x.data(), static_cast<Index>(x.size()));
    DenseMatrix rho = unvectorize(v, space.dim());
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {space, std::move(rho)};
}

}  // namespace

SteadyStateSolution solve_steady_state(const Superoperator& l, const SteadyStateOptions& options) {
    SteadyStateSolution sol = l.liouville_dim() <= options.dense_liouville_threshold ? solve_dense(l, options)
                                                                                       : solve_sparse(l);
    const double limit = residual_limit(l.space().dim());
    if (!(sol.residual < limit)) {
        throw SolverError("steady-state residual " + std::to_string(sol.residual) + " exceeds " + std::to_string(limit));
    }
    return sol;
}

DensityMatrix steady_state(const Superoperator& l) { return solve_steady_state(l).rho; }

std::vector<DensityMatrix> evolve_trajectory(const DensityMatrix& rho0, const Superoperator& l,
                                             const std::vector<double>& times, const EvolveOptions& options) {
    namespace odeint = boost::numeric::odeint;
    if (!(rho0.space() == l.space())) throw InvalidArgument("state and generator act on different spaces");
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
        throw InvalidArgument("evolve: sample times must be ascending and nonnegative");
    }
    const DenseMatrix& m0 = rho0.matrix();
    OdeState x(m0.data(), m0.data() + m0.size());
    const LiouvilleRhs rhs{&l.matrix()};
    auto stepper = odeint::make_controlled(options.abs_tol, options.rel_tol, odeint::runge_kutta_dopri5<OdeState>());

    std::vector<DensityMatrix> out;
    out.reserve(times.size());
    double t = 0.0;
    double dt = options.initial_step;
    for (double target : times) {
        while (t < target) {
            double step = std::min(dt, target - t);
            const bool clipped = step < dt;
            const auto result = stepper.try_step(rhs, x, t, step);
            if (result == odeint::success) {
                // Landing exactly on a sample time should not shrink the
                // controller's step for the next interval.
                dt = clipped ? std::max(dt, step) : step;
                if (clipped) t = target;
            } else {
                dt = step;
            }
            if (dt < options.min_step_factor * std::max(1.0, std::abs(t))) {
                throw StepSizeUnderflow("step size underflow at t = " + std::to_string(t));
            }
        }
        out.push_back(finalize_state(l.space(), x));
    }
    return out;
}

DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final, const EvolveOptions& options) {
    if (!(t_final >= 0.0)) throw InvalidArgument("evolve: t_final must be nonnegative");
    return std::move(evolve_trajectory(rho0, l, {t_final}, options).front());
}

ObservableSet observables(const DensityMatrix& rho, const SystemParams& params) {
    const SpaceDescriptor& space = rho.space();
    if (space.n_atoms() != params.n_atoms()) throw InvalidArgument("state and parameters disagree on atom count");
    ObservableSet obs;
    const DenseMatrix& m = rho.matrix();
    for (int k = 0; k < space.n_atoms(); ++k) {
        const double p = std::clamp(std::real(expectation(excited_projector(space, k), rho)), 0.0, 1.0);
        obs.pi_e_per_atom.push_back(p);
        obs.i_at_per_atom.push_back(params.gamma * p);
        obs.i_at_total += params.gamma * p;
    }
    // Photon moments read directly off the diagonal / first off-diagonal.
    double n1 = 0.0;
    double n2 = 0.0;
    cplx a{0.0, 0.0};
    for (Index mask = 0; mask < space.atom_dim(); ++mask) {
        for (int n = 0; n <= space.n_max(); ++n) {
            const Index i = space.index(mask, n);
            const double pop = std::real(m(i, i));
            n1 += n * pop;
            n2 += static_cast<double>(n) * (n - 1) * pop;
            if (n >= 1) a += std::sqrt(static_cast<double>(n)) * m(i, space.index(mask, n - 1));
        }
    }
    obs.mean_n = std::max(n1, 0.0);
    obs.alpha = a;  // Tr(a rho) = sum_n sqrt(n) rho_{n, n-1}
    obs.i_cav = params.kappa * obs.mean_n;
    if (obs.mean_n >= 1e-12) obs.g2_zero = std::max(n2, 0.0) / (obs.mean_n * obs.mean_n);
    return obs;
}

double fock_tail(const DensityMatrix& rho) {
    const Eigen::VectorXd pops = rho.fock_populations();
    const Index n = pops.size();
    return n >= 2 ? pops(n - 1) + pops(n - 2) : pops.sum();
}

SteadyPoint solve_steady_point(const SystemParams& params, std::optional<int> n_max) {
    params.validate();
    int cutoff = n_max.value_or(default_space(params).n_max());
    constexpr int kMaxEscalations = 3;
    for (int escalation = 0;; ++escalation) {
        const SpaceDescriptor space(params.n_atoms(), cutoff);
        SteadyStateSolution sol = solve_steady_state(build_liouvillian(params, space));
        const double tail = fock_tail(sol.rho);
        if (tail < 1e-8) {
            ObservableSet obs = observables(sol.rho, params);
            return {std::move(sol.rho), space, std::move(obs), sol.residual, escalation};
        }
        if (escalation == kMaxEscalations) {
            throw TruncationError("Fock tail population " + std::to_string(tail) + " >= 1e-8 at n_max = " +
                                  std::to_string(cutoff) + " after " + std::to_string(kMaxEscalations) +
                                  " escalations");
        }
        cutoff = static_cast<int>(std::ceil(cutoff * 1.5));
    }
}

double free_space_fluorescence(double omega, double delta, double gamma) {
    return gamma * omega * omega / (delta * delta + gamma * gamma / 4.0 + 2.0 * omega * omega);
}

}  // namespace cqed
