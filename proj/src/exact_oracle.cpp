#include "protmeas/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "protmeas/errors.hpp"
#include "protmeas/perturbation.hpp"

namespace protmeas {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::MatrixXcd step_unitary(const SystemModel& system, double coupling, double dt) {
    Eigen::MatrixXcd h = system.observable() * coupling;
    h.diagonal() += system.energies().cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXcd phases =
        solver.eigenvalues().unaryExpr([dt](double e) { return std::polar(1.0, -e * dt); });
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

double peak_coupling(const CouplingProfile& profile) {
    double peak = 0.0;
    const double half = 0.5 * profile.duration();
    for (int i = 0; i <= 1000; ++i) peak = std::max(peak, profile(-half + profile.duration() * i / 1000.0));
    for (double t : profile.corner_points()) peak = std::max(peak, profile(t));
    return peak;
}

}  // namespace

int default_step_count(const SystemModel& system, const CouplingProfile& profile, double a) {
    const double w = system.max_frequency() + 2.0 * std::abs(a) * system.observable_norm() * peak_coupling(profile);
    const double wanted = std::ceil(40.0 * profile.duration() * w / kTwoPi);
    return static_cast<int>(std::min(std::max(256.0, wanted), 1e9));
}

Eigen::VectorXcd propagate(const SystemModel& system, const CouplingProfile& profile, double a, int steps) {
    if (steps < kMinPropagationSteps)
        throw ValidationError("propagate needs at least " + std::to_string(kMinPropagationSteps) + " steps");
    const int d = system.dimension();
    const int n = system.initial_level();
    const double duration = profile.duration();
    const double half = 0.5 * duration;

    // Energies relative to E_n; the dropped global phase is restored below.
    const SystemModel shifted(system.energies().array() - system.energies()(n), system.observable(), n);

    std::vector<double> cuts = profile.corner_points();
    cuts.push_back(-half);
    cuts.push_back(half);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double t) { return t < -half || t > half; }), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    psi(n) = 1.0;
    const auto segments = cuts.size() - 1;
    int remaining = steps;
    Eigen::MatrixXcd cached;
    double cached_coupling = std::numeric_limits<double>::quiet_NaN();
    double cached_dt = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < segments; ++s) {
        const double lo = cuts[s];
        const double hi = cuts[s + 1];
        int count = (s + 1 == segments) ? remaining
                                        : static_cast<int>(std::llround(steps * (hi - lo) / duration));
        count = std::max(count, 1);
        if (s + 1 < segments) count = std::min(count, remaining - static_cast<int>(segments - s - 1));
        count = std::max(count, 1);
        remaining -= count;
        const double dt = (hi - lo) / count;
        for (int k = 0; k < count; ++k) {
            const double mid = lo + (k + 0.5) * dt;
            const double coupling = a * profile(mid);
            if (coupling != cached_coupling || dt != cached_dt) {
                cached = step_unitary(shifted, coupling, dt);
                cached_coupling = coupling;
                cached_dt = dt;
            }
            psi = cached * psi;
        }
    }

    // In shifted energies exp(i (E_n + E_m) T/2) psi_m becomes exp(i (E_m - E_n) T/2) psi_m.
    Eigen::VectorXcd c(d);
    for (int m = 0; m < d; ++m) c(m) = psi(m) * std::polar(1.0, shifted.energies()(m) * half);
    return c;
}

Propagation propagate_converged(const SystemModel& system, const CouplingProfile& profile, double a, double tol,
                                int initial_steps, int max_steps) {
    int steps = initial_steps > 0 ? initial_steps : default_step_count(system, profile, a);
    steps = std::max(steps, kMinPropagationSteps);
    Eigen::VectorXcd previous = propagate(system, profile, a, steps);
    double diff = std::numeric_limits<double>::infinity();
    while (true) {
        if (steps > max_steps / 2) {
            std::ostringstream msg;
            msg << "propagation did not converge: |C(" << steps << ") - C(" << steps / 2 << ")| = " << diff
                << " exceeds " << tol;
            throw AccuracyError(msg.str(), diff / 3.0);
        }
        steps *= 2;
        Eigen::VectorXcd current = propagate(system, profile, a, steps);
        diff = (current - previous).norm();
        previous = std::move(current);
        if (diff <= tol) return {previous, steps, diff / 3.0};
    }
}

Eigen::VectorXcd constant_coupling_diagonalization(const SystemModel& system, const CouplingProfile& profile,
                                                   double a) {
    if (profile.kind() != ProfileKind::Boxcar)
        throw UnsupportedProfileError("diagonalization applies to constant (boxcar) coupling only, got " +
                                      profile.name());
    const int n = system.initial_level();
    const double duration = profile.duration();
    Eigen::MatrixXcd h = system.observable() * (a * profile.area() / duration);
    h.diagonal() += (system.energies().array() - system.energies()(n)).matrix().cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) throw DomainError("eigendecomposition failed");
    const Eigen::VectorXcd phases =
        solver.eigenvalues().unaryExpr([duration](double e) { return std::polar(1.0, -e * duration); });
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    Eigen::VectorXcd psi = v * phases.asDiagonal() * v.row(n).adjoint();
    for (int m = 0; m < system.dimension(); ++m)
        psi(m) *= std::polar(1.0, (system.energies()(m) - system.energies()(n)) * 0.5 * duration);
    return psi;
}

Eigen::VectorXd perturbed_spectrum(const SystemModel& system, double coupling) {
    Eigen::MatrixXcd h = system.observable() * coupling;
    h.diagonal() += system.energies().cast<Complex>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double perturbed_level(const SystemModel& system, double coupling, int level) {
    if (level < 0 || level >= system.dimension()) throw ValidationError("level out of range");
    // Rank of E_level in the unperturbed spectrum; valid while the
    // perturbation is smaller than half the gap around it.
    const Eigen::VectorXd& e = system.energies();
    int rank = 0;
    for (int k = 0; k < system.dimension(); ++k)
        if (e(k) < e(level) || (e(k) == e(level) && k < level)) ++rank;
    return perturbed_spectrum(system, coupling)(rank);
}

EvolutionResult full_measurement_run(const SystemModel& system, const CouplingProfile& profile,
                                     const PointerModel& pointer, const OracleOptions& options) {
    const std::size_t count = pointer.size();
    if (count == 0) throw ValidationError("pointer grid is empty");
    const int d = system.dimension();
    const int n = system.initial_level();
    const double duration = profile.duration();

    EvolutionResult out;
    out.momenta = pointer.momenta;
    PointerModel survival = pointer;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
    double weight_total = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double a = pointer.momenta[i];
        Propagation prop;
        if (a == 0.0) {
            prop.amplitudes = Eigen::VectorXcd::Zero(d);
            prop.amplitudes(n) = 1.0;
        } else {
            try {
                prop = propagate_converged(system, profile, a, options.tolerance, options.initial_steps,
                                           options.max_steps);
            } catch (const AccuracyError& e) {
                std::ostringstream msg;
                msg << "grid point " << i << " (a = " << a << "): " << e.what();
                throw AccuracyError(msg.str(), e.estimate());
            }
        }
        const double w = std::norm(pointer.amplitudes[i]);
        weight_total += w;
        out.norm_error = std::max(out.norm_error, std::abs(prop.amplitudes.norm() - 1.0));
        out.max_steps = std::max(out.max_steps, prop.steps);
        out.convergence = std::max(out.convergence, prop.error_estimate);
        out.survival_probability += w * std::norm(prop.amplitudes(n));
        rho += w * prop.amplitudes * prop.amplitudes.adjoint();
        survival.amplitudes[i] = pointer.amplitudes[i] *
                                 std::polar(1.0, -pointer.apparatus_energies[i] * duration) * prop.amplitudes(n);
        out.amplitudes.push_back(std::move(prop.amplitudes));
    }
    out.survival_probability /= weight_total;
    rho /= weight_total;
    out.disturbance = std::clamp(1.0 - out.survival_probability, 0.0, 1.0);
    out.purity = (rho * rho).trace().real();
    out.pointer_shift = survival.position_expectation() - pointer.x0;

    // Position density of the survival channel on one period of the
    // reciprocal grid, centred on x0.
    if (count > 1) {
        const double spacing = pointer.spacing();
        const double period = kTwoPi / spacing;
        const auto samples = static_cast<int>(count) * std::max(options.density_oversampling, 1);
        double mass = 0.0;
        double first = 0.0;
        double second = 0.0;
        for (int j = 0; j < samples; ++j) {
            const double offset = -0.5 * period + period * (j + 0.5) / samples;
            const double x = pointer.x0 + offset;
            Complex psi{0.0, 0.0};
            for (std::size_t i = 0; i < count; ++i) psi += survival.amplitudes[i] * std::polar(1.0, pointer.momenta[i] * x);
            const double rho_x = std::norm(psi);
            mass += rho_x;
            first += rho_x * offset;
            second += rho_x * offset * offset;
        }
        const double mean = first / mass;
        out.density_shift = mean;
        out.pointer_variance = second / mass - mean * mean;
    } else {
        out.density_shift = out.pointer_shift;
    }
    out.distortion = out.density_shift - out.pointer_shift;
    return out;
}

DisturbanceComparison disturbance_vs_prediction(const SystemModel& system, const CouplingProfile& profile,
                                                double a_rms, double tol) {
    const int n = system.initial_level();
    DisturbanceComparison out;
    const auto prop = propagate_converged(system, profile, a_rms, tol);
    out.exact = std::clamp(1.0 - std::norm(prop.amplitudes(n)), 0.0, 1.0);

    double regime = 0.0;
    for (int m = 0; m < system.dimension(); ++m) {
        if (m == n) continue;
        out.first_order += a_rms * a_rms * first_order_probability(system, profile, m);
        regime = std::max(regime, std::abs(system.element(m, n) *
                                           profile.transform(system.transition_frequency(m, n))));
    }
    out.regime_parameter = std::abs(a_rms) * regime;
    out.perturbative = out.regime_parameter < 0.1;

    DysonRequest req{system, profile, 2, a_rms, kMinDysonNodes};
    const auto table = dyson_amplitudes(req);
    for (int m = 0; m < system.dimension(); ++m)
        if (m != n) out.second_order += std::norm(table.total(m));

    out.ratio = out.first_order > 0.0 ? out.exact / out.first_order : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace protmeas
