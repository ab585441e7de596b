#include "cqed/collective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

double dipole_denominator(const SystemParams& params) {
    return params.gamma * params.gamma / 4.0 + params.delta * params.delta;
}

double pattern_coupling(const SystemParams& params, const PatternSpec& pattern) {
    if (params.g0 == 0.0) throw DomainError("pattern coupling g0 must be nonzero");
    if (!(pattern.n_atoms > 0.0) || !std::isfinite(pattern.n_atoms)) {
        throw InvalidArgument("pattern atom number must be positive and finite");
    }
    return pattern.parity == Parity::even ? params.g0 : -params.g0;
}

}  // namespace

EffectiveFieldParams effective_field_params(const SystemParams& params) {
    params.validate();
    const CouplingProfile profile = coupling_profile(params);
    const double denom = dipole_denominator(params);
    if (denom == 0.0) throw DomainError("adiabatic elimination undefined for gamma = Delta = 0");
    EffectiveFieldParams e;
    e.n_atoms = params.n_atoms();
    double sum_g2 = 0.0;
    cplx sum_drive{0.0, 0.0};
    double max_g = 0.0;
    double max_pump = 0.0;
    for (int n = 0; n < params.n_atoms(); ++n) {
        const double g = profile.g[static_cast<std::size_t>(n)];
        const double pump = params.pump_amplitude(n);
        e.s_n.push_back(g * g / denom);
        sum_g2 += g * g;
        sum_drive += g * pump * std::exp(kI * profile.phi[static_cast<std::size_t>(n)]);
        max_g = std::max(max_g, std::abs(g));
        max_pump = std::max(max_pump, std::abs(pump));
    }
    if (sum_g2 == 0.0) throw DomainError("every atom sits at a node: the cavity drive is undefined");
    const double ns = std::accumulate(e.s_n.begin(), e.s_n.end(), 0.0);
    e.s = ns / e.n_atoms;
    e.gamma_prime = ns * params.gamma;
    e.delta_prime = params.delta_c - ns * params.delta;
    e.xi = ns * (params.delta - 0.5 * kI * params.gamma) * sum_drive / sum_g2;
    e.below_saturation = std::sqrt(denom) >= 5.0 * std::sqrt(e.n_atoms) * std::max(max_g, max_pump);
    return e;
}

cplx adiabatic_alpha(const SystemParams& params) {
    const EffectiveFieldParams e = effective_field_params(params);
    return -kI * e.xi / (0.5 * (e.gamma_prime + params.kappa) - kI * e.delta_prime);
}

std::vector<double> adiabatic_excited_populations(const SystemParams& params) {
    const cplx alpha = adiabatic_alpha(params);
    const CouplingProfile profile = coupling_profile(params);
    const double denom = dipole_denominator(params);
    std::vector<double> out;
    for (int n = 0; n < params.n_atoms(); ++n) {
        const auto k = static_cast<std::size_t>(n);
        const cplx field = profile.g[k] * alpha + params.pump_amplitude(n) * std::exp(kI * profile.phi[k]);
        out.push_back(std::norm(field) / denom);
    }
    return out;
}

cplx in_phase_alpha(const SystemParams& params, const PatternSpec& pattern) {
    const double g = pattern_coupling(params, pattern);
    const double denom = dipole_denominator(params);
    const cplx collective = pattern.n_atoms * (g * g / denom) * (0.5 * params.gamma + kI * params.delta);
    return -(params.omega / g) * collective / (collective + 0.5 * params.kappa - kI * params.delta_c);
}

double excited_population(const SystemParams& params, const PatternSpec& pattern) {
    const double g = pattern_coupling(params, pattern);
    const double denom = dipole_denominator(params);
    const double ns = pattern.n_atoms * g * g / denom;
    const double gp = ns * params.gamma;
    const double dp = params.delta_c - ns * params.delta;
    const double num = params.kappa * params.kappa / 4.0 + params.delta_c * params.delta_c;
    const double den = (gp + params.kappa) * (gp + params.kappa) / 4.0 + dp * dp;
    return params.omega * params.omega / denom * num / den;
}

std::vector<double> pattern_positions(const PatternSpec& pattern) {
    const double n = std::round(pattern.n_atoms);
    if (n < 1.0 || std::abs(n - pattern.n_atoms) > 1e-9) {
        throw InvalidArgument("pattern_positions needs a positive integer atom number");
    }
    const double offset = pattern.parity == Parity::even ? 0.0 : 0.5;
    std::vector<double> xs;
    for (int i = 0; i < static_cast<int>(n); ++i) xs.push_back(offset + i);
    return xs;
}

CriticalAtomNumbers critical_atom_number(const SystemParams& params) {
    const double s = params.g0 * params.g0 / dipole_denominator(params);
    if (s == 0.0) throw DomainError("critical atom number undefined for s = 0");
    CriticalAtomNumbers c;
    c.n0 = params.kappa / (s * params.gamma);
    c.n0_delta = std::abs(params.delta) * params.kappa / (params.g0 * params.g0);
    c.detuned_regime = std::abs(params.delta) >= 10.0 * std::max(params.gamma, params.kappa);
    return c;
}

ForceTerms semiclassical_force(double x, cplx alpha, const SystemParams& params) {
    const double denom = dipole_denominator(params);
    ForceTerms f;
    f.u0 = params.g0 * params.g0 * params.delta / denom;
    f.gamma0 = params.g0 * params.g0 * 0.5 * params.gamma / denom;
    f.eta_eff = params.omega * params.g0 / (-kI * params.delta + 0.5 * params.gamma);
    // sin(pi t) with exact zeros at integer t, so antinodes give F = 0 exactly.
    const auto exact_sin = [](double turns) {
        const double r = turns - 2.0 * std::round(turns / 2.0);
        if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
        return std::sin(std::numbers::pi * r);
    };
    const double s1 = exact_sin(2.0 * x);
    const double s2 = exact_sin(4.0 * x);
    f.force = f.u0 * std::norm(alpha) * s2 + 2.0 * std::imag(std::conj(f.eta_eff) * alpha) * s1;
    return f;
}

double restoring_coefficient(const SystemParams& params, double n_atoms) {
    if (params.g0 == 0.0) throw DomainError("restoring coefficient requires g0 != 0");
    if (!(n_atoms > 0.0)) throw InvalidArgument("restoring coefficient requires N > 0");
    const double ratio = params.omega / params.g0;
    return 2.0 * kWaveNumber * kWaveNumber * ratio * ratio * params.delta_c / n_atoms;
}

}  // namespace cqed
