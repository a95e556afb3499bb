#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "protmeas/coupling_profile.hpp"
#include "protmeas/system_model.hpp"

namespace protmeas {

// Time-dependent perturbation theory for H(t) = H_S + g(t) a O (hbar = 1).
// Amplitudes are interaction-picture amplitudes out of the initial level n.
// Order l carries a factor (-i)^l; restoring hbar multiplies it by hbar^-l.

inline constexpr int kMaxDysonOrder = 6;
inline constexpr int kMinDysonNodes = 32;

struct DysonRequest {
    SystemModel system;
    CouplingProfile profile;
    int max_order = 2;
    double pointer_momentum = 1.0;
    /// Chebyshev nodes per time panel.
    int nodes = kMinDysonNodes;
};

/// Order-resolved Dyson amplitudes A^(l)_m(T) for l = 0..L and every m.
struct AmplitudeTable {
    std::vector<Eigen::VectorXcd> orders;
    /// sum_l a^l A^(l)_m at the request's pointer momentum.
    Eigen::VectorXcd total;
    double pointer_momentum = 0.0;
    int max_order = 0;
    int initial_level = 0;
    std::string profile_name;
    double duration = 0.0;
    /// Remainder of the exponential series beyond order L, evaluated at
    /// x = |a| ||O|| G; bounds |C_m - total_m| for every m.
    double truncation_bound = 0.0;
    /// Change of the amplitudes under panel refinement.
    double error_estimate = 0.0;
    /// ||O|| G, the per-unit-momentum bound on each Dyson factor.
    double coupling_scale = 0.0;

    Complex amplitude(int order, int m) const { return orders.at(static_cast<std::size_t>(order))(m); }
    /// sum_l a^l A^(l)_m for another pointer momentum a.
    Eigen::VectorXcd assemble(double a) const;
    /// Exponential-series remainder for momentum a.
    double truncation_bound_at(double a) const;
};

/// Full table of Dyson amplitudes up to req.max_order (cap 6).
AmplitudeTable dyson_amplitudes(const DysonRequest& req);
/// Row for level m: element l is A^(l)_m.
std::vector<Complex> dyson_amplitude(const DysonRequest& req, int m);

/// (-i)^l <p0|O|p1>...<p_{l-1}|O|p_l> times the time-ordered integral over
/// the chain p_l -> ... -> p0. `path` lists levels from final (p0) to initial (p_l).
Complex chain_amplitude(const SystemModel& system, const CouplingProfile& profile, std::span<const int> path,
                        int nodes = kMinDysonNodes);

Complex first_order_amplitude(const SystemModel& system, const CouplingProfile& profile, int m);
/// |<m|O|n>|^2 |g~(omega_mn)|^2, per unit a^2. Requires m != n.
double first_order_probability(const SystemModel& system, const CouplingProfile& profile, int m);

/// exp(-i G a <n|O|n>): the all-orders sum of the k_j = n chains.
Complex pointer_shift_phase(const SystemModel& system, const CouplingProfile& profile, double a);

/// l-fold time-ordered integral of g over the simplex (G^l / l!).
double nested_integral_identity(const CouplingProfile& profile, int ell, int nodes = kMinDysonNodes);

struct SecondOrderBreakdown {
    Complex energy_shift_term;
    Complex mixing_term;
    Complex normalization_term;
    /// Second-order level shift for coupling strength a/T.
    double delta_e2 = 0.0;

    Complex sum() const { return energy_shift_term + mixing_term + normalization_term; }
};

/// Closed-form k != n part of a^2 A^(2)_n for constant coupling.
SecondOrderBreakdown second_order_breakdown(const SystemModel& system, const CouplingProfile& profile, double a);

/// Median |omega| over consecutive levels of a transition path.
double typical_frequency(const SystemModel& system, std::span<const int> path);

/// Factorized estimate (-i)^l (prod O) g~(omega_bar)^l / l! for a chain whose
/// intermediate levels are distinct and differ from both ends.
Complex alpha_distinct_chain(const SystemModel& system, const CouplingProfile& profile, std::span<const int> path,
                             std::optional<double> omega_bar = std::nullopt);

/// Direct n -> m transition at order l with every other factor <n|O|n>:
/// (-i)^l O_mn O_nn^(l-1) integral of e^{i omega_mn t} g(t) G(t)^(l-1)/(l-1)!.
Complex single_transition_term(const SystemModel& system, const CouplingProfile& profile, int m, int ell);

/// T^-(l-1) d^(l-1) g~ / d omega^(l-1) for constant coupling, by
/// Richardson-extrapolated central differences.
Complex gamma_factor(const CouplingProfile& profile, int ell, double omega);

/// Magnitude of the leading large-x form of gamma_l at x = omega T:
/// 2^-(l-1) |sinc(x/2)| for odd l, 2^-(l-1) |cos(x/2)/(x/2)| for even l.
double gamma_leading_order(int ell, double x);

/// Width of the second-order pointer-shift correction on a momentum grid
/// bounded by |a| <= max_momentum: 2 a_max sum_k |O_nk|^2/|omega_nk| * integral g^2.
double shift_correction_band(const SystemModel& system, const CouplingProfile& profile, double max_momentum);

}  // namespace protmeas
