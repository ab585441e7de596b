#include "cqed/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SparseLU>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

double probe_coupling(const SystemParams& params) {
    params.validate();
    if (params.n_atoms() != 1) throw DomainError("excitation spectrum is defined for one atom");
    if (params.kappa != 0.0) throw DomainError("excitation spectrum requires kappa = 0");
    if (params.delta_c != 0.0) throw DomainError("excitation spectrum requires delta_c = 0");
    const double g = coupling_at(params.positions[0], params);
    if (g == 0.0) throw DomainError("excitation spectrum requires g(x) != 0");
    return g;
}

using Triplet = Eigen::Triplet<cplx>;

// Solves (m + shift) x = rhs with Tr x = target, the <0|x|0> row replaced by
// the trace condition (it is implied by the others for trace-preserving L).
Eigen::VectorXcd bordered_solve(const SparseMatrix& m, cplx shift, const Eigen::VectorXcd& rhs, cplx target,
                                Index dim) {
    const Index d = m.rows();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(m.nonZeros() + 2 * d));
    for (Index k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
            if (it.row() != 0) entries.emplace_back(it.row(), it.col(), it.value());
        }
    }
    if (shift != 0.0) {
        for (Index k = 1; k < d; ++k) entries.emplace_back(k, k, shift);
    }
    for (Index i = 0; i < dim; ++i) entries.emplace_back(0, i * dim + i, 1.0);
    SparseMatrix a(d, d);
    a.setFromTriplets(entries.begin(), entries.end());
    a.makeCompressed();
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw SolverError("weak-probe response: singular linear system");
    Eigen::VectorXcd b = rhs;
    b(0) = target;
    Eigen::VectorXcd x = lu.solve(b);
    if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("weak-probe response: solve failed");
    return x;
}

}  // namespace

bool ProbeParams::weak(const SystemParams& params) const {
    const double g = std::abs(coupling_at(params.positions.at(0), params));
    const double scale = std::min({g, std::abs(params.pump_amplitude(0)), params.gamma});
    return std::abs(omega_p_tilde) <= 0.1 * scale;
}

double normalized_spectrum(double delta_p, const SystemParams& params) {
    const double g = probe_coupling(params);
    const double d = delta_p;
    const double num = d * d;
    if (num == 0.0) return 0.0;
    const double re = d * (d + params.delta) - g * g;
    return num / (re * re + num * params.gamma * params.gamma / 4.0);
}

double excitation_spectrum(double delta_p, const SystemParams& params, const ProbeParams& probe) {
    return params.gamma * probe.omega_p_tilde * probe.omega_p_tilde * normalized_spectrum(delta_p, params);
}

ResonancePair resonances(const SystemParams& params) {
    const double g = coupling_at(params.positions.at(0), params);
    if (g == 0.0) throw DomainError("resonances require g(x) != 0");
    const double dl = params.delta;
    const double r = std::sqrt(dl * dl + 4.0 * g * g);
    ResonancePair p;
    p.delta_plus = 0.5 * (-dl + r);
    p.delta_minus = 0.5 * (-dl - r);
    p.gamma_plus = 0.25 * params.gamma * (1.0 - dl / r);
    p.gamma_minus = 0.25 * params.gamma * (1.0 + dl / r);
    p.regime_valid = std::sqrt(dl * dl + g * g) > 5.0 * params.gamma;
    return p;
}

cplx transition_amplitude(double delta_p, const SystemParams& params, const ProbeParams& probe) {
    const double g = probe_coupling(params);
    const double d = delta_p;
    if (d == 0.0) return 0.0;
    return probe.omega_p_tilde * d / (d * (d + params.delta + 0.5 * kI * params.gamma) - g * g);
}

std::array<cplx, 2> transition_poles(const SystemParams& params) {
    const double g = probe_coupling(params);
    const cplx c = params.delta + 0.5 * kI * params.gamma;
    const cplx root = std::sqrt(c * c + 4.0 * g * g);
    std::array<cplx, 2> poles{0.5 * (-c + root), 0.5 * (-c - root)};
    if (poles[0].real() < poles[1].real()) std::swap(poles[0], poles[1]);
    return poles;
}

bool stark_dispersive(double delta_2, const SystemParams& params) {
    return std::abs(delta_2) >= 10.0 * std::max(std::abs(params.g0), std::abs(params.omega));
}

double probe_stark_shift(double x_probe, double delta_2, const SystemParams& params, cplx alpha) {
    if (delta_2 == 0.0) throw DomainError("probe Stark shift requires delta_2 != 0");
    const cplx field = params.omega * std::exp(kI * pump_phase_at(x_probe, params)) + coupling_at(x_probe, params) * alpha;
    return std::norm(field) / delta_2;
}

double probe_stark_shift(double x_probe, double delta_2, const SystemParams& params) {
    if (delta_2 == 0.0) throw DomainError("probe Stark shift requires delta_2 != 0");
    return probe_stark_shift(x_probe, delta_2, params, solve_steady_point(params).obs.alpha);
}

WeakProbeResponse::WeakProbeResponse(const SystemParams& params)
    : params_(params), steady_(solve_steady_point(params)) {
    const SpaceDescriptor& space = steady_.space;
    liouvillian_ = build_liouvillian(params_, space).matrix();
    const Operator id = Operator::identity(space);
    const Operator s = atomic_lowering(space, 0);
    const Operator sd = s.adjoint();
    const auto commutator = [&](const Operator& op) {
        return SparseMatrix((sandwich_superoperator(op, id).matrix() - sandwich_superoperator(id, op).matrix()) *
                            (-kI));
    };
    raise_ = commutator(sd);
    lower_ = commutator(s);
}

double WeakProbeResponse::excess(double delta_p) const {
    const Index dim = steady_.space.dim();
    const Eigen::VectorXcd rho = vectorize(steady_.rho.matrix());
    const Eigen::VectorXcd plus = bordered_solve(liouvillian_, kI * delta_p, -(raise_ * rho), 0.0, dim);
    const Eigen::VectorXcd minus = bordered_solve(liouvillian_, -kI * delta_p, -(lower_ * rho), 0.0, dim);
    const Eigen::VectorXcd src = -(raise_ * minus + lower_ * plus);
    const Eigen::VectorXcd second = bordered_solve(liouvillian_, 0.0, src, 0.0, dim);
    const DenseMatrix m = unvectorize(second, dim);
    const DenseMatrix p = excited_projector(steady_.space, 0).dense();
    return std::real((p * m).trace());
}

std::vector<double> WeakProbeResponse::peaks(double lo, double hi, double coarse_step, double fine_step) const {
    if (!(hi > lo) || !(coarse_step > 0.0) || !(fine_step > 0.0)) {
        throw InvalidArgument("peaks: need lo < hi and positive steps");
    }
    const int n = static_cast<int>(std::floor((hi - lo) / coarse_step + 1e-9)) + 1;
    std::vector<double> xs(static_cast<std::size_t>(n));
    std::vector<double> ys(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs[static_cast<std::size_t>(i)] = lo + i * coarse_step;
        ys[static_cast<std::size_t>(i)] = excess(xs[static_cast<std::size_t>(i)]);
    }
    const double top = *std::max_element(ys.begin(), ys.end());
    std::vector<double> out;
    for (int i = 1; i + 1 < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (ys[k] > ys[k - 1] && ys[k] >= ys[k + 1] && ys[k] > 1e-3 * top) {
            const int m = static_cast<int>(std::round(2.0 * coarse_step / fine_step));
            double best_x = xs[k];
            double best_y = ys[k];
            for (int j = -m; j <= m; ++j) {
                const double x = xs[k] + j * fine_step;
                const double y = excess(x);
                if (y > best_y) {
                    best_y = y;
                    best_x = x;
                }
            }
            out.push_back(best_x);
        }
    }
    return out;
}

}  // namespace cqed
