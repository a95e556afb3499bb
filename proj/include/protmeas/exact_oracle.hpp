#pragma once

#include <vector>

#include <Eigen/Dense>

#include "protmeas/coupling_profile.hpp"
#include "protmeas/system_model.hpp"

namespace protmeas {

// Brute-force evolution under H(t) = H_S + g(t) a O for fixed pointer
// momentum a. Final states are reported as interaction-picture amplitudes
// C_m = exp(i (E_n + E_m) T / 2) psi_m(T/2), starting from psi(-T/2) = |n>,
// so that a = 0 gives C = e_n and C is directly comparable with Dyson sums.

inline constexpr int kMinPropagationSteps = 64;

/// Midpoint-exponential stepping with `steps` steps distributed over the
/// profile's smooth segments (every corner is a step boundary).
Eigen::VectorXcd propagate(const SystemModel& system, const CouplingProfile& profile, double a, int steps);

/// Default step count: max(256, ceil(40 T w / 2 pi)) where w bounds the
/// fastest frequency of H(t).
int default_step_count(const SystemModel& system, const CouplingProfile& profile, double a);

struct Propagation {
    Eigen::VectorXcd amplitudes;
    int steps = 0;
    /// |C(2N) - C(N)| / 3 for the last doubling.
    double error_estimate = 0.0;
};

/// Doubles the step count from `initial_steps` (0 = default rule) until
/// successive results differ by at most `tol`.
Propagation propagate_converged(const SystemModel& system, const CouplingProfile& profile, double a,
                                double tol = 1e-10, int initial_steps = 0, int max_steps = 1 << 22);

/// Exact final amplitudes for constant coupling by diagonalizing
/// H_S + (a G / T) O.
Eigen::VectorXcd constant_coupling_diagonalization(const SystemModel& system, const CouplingProfile& profile,
                                                   double a);

/// Ascending eigenvalues of H_S + coupling * O.
Eigen::VectorXd perturbed_spectrum(const SystemModel& system, double coupling);

/// Eigenvalue of H_S + coupling * O continuously connected to level `level`.
double perturbed_level(const SystemModel& system, double coupling, int level);

struct OracleOptions {
    double tolerance = 1e-9;
    int initial_steps = 0;
    int max_steps = 1 << 22;
    /// Points of the position window for the density readout (per grid point).
    int density_oversampling = 8;
};

struct EvolutionResult {
    std::vector<double> momenta;
    /// Exact C_m per grid point.
    std::vector<Eigen::VectorXcd> amplitudes;
    double survival_probability = 0.0;
    double disturbance = 0.0;
    /// Phase-gradient readout of the survival channel, minus x0.
    double pointer_shift = 0.0;
    /// Mean of the reassembled position density of the survival channel, minus x0.
    double density_shift = 0.0;
    /// density_shift - pointer_shift.
    double distortion = 0.0;
    /// Position variance of the survival-channel density.
    double pointer_variance = 0.0;
    /// tr(rho_S^2) for the reduced system state.
    double purity = 1.0;
    /// Largest deviation of any per-point norm from 1.
    double norm_error = 0.0;
    int max_steps = 0;
    double convergence = 0.0;
};

/// Propagates every pointer grid point and reads out the pointer.
EvolutionResult full_measurement_run(const SystemModel& system, const CouplingProfile& profile,
                                     const PointerModel& pointer, const OracleOptions& options = {});

struct DisturbanceComparison {
    double exact = 0.0;
    /// a^2 sum_{m != n} P1_m.
    double first_order = 0.0;
    /// sum_{m != n} |a A1_m + a^2 A2_m|^2.
    double second_order = 0.0;
    /// exact / first_order; NaN when the prediction vanishes.
    double ratio = 0.0;
    /// |a| max_{m != n} |O_mn g~(omega_mn)|.
    double regime_parameter = 0.0;
    bool perturbative = true;
};

/// Exact oracle disturbance against the first-order formula at momentum a_rms.
DisturbanceComparison disturbance_vs_prediction(const SystemModel& system, const CouplingProfile& profile,
                                                double a_rms, double tol = 1e-9);

}  // namespace protmeas
