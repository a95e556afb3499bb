#include "protmeas/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "protmeas/errors.hpp"
#include "protmeas/panel_integrator.hpp"
#include "protmeas/quadrature.hpp"

namespace protmeas {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

Complex minus_i_power(int ell) {
    static constexpr Complex cycle[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
    return cycle[ell % 4];
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

void require_level(const SystemModel& system, int m) {
    if (m < 0 || m >= system.dimension())
        throw ValidationError("level " + std::to_string(m) + " out of range [0, " +
                              std::to_string(system.dimension()) + ")");
}

// sum_{l > L} x^l / l!, summed upward from the first omitted term.
double exponential_tail(double x, int order) {
    if (x == 0.0) return 0.0;
    double term = 1.0;
    for (int l = 1; l <= order + 1; ++l) term *= x / l;
    double sum = 0.0;
    for (int l = order + 2; l < 400; ++l) {
        sum += term;
        if (term < 1e-18 * sum) break;
        term *= x / l;
    }
    return sum;
}

Eigen::VectorXd profile_samples(const CouplingProfile& profile, const PanelGrid& grid) {
    Eigen::VectorXd g(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) g(static_cast<Eigen::Index>(i)) = profile(grid.nodes()[i]);
    return g;
}

// Order-resolved amplitudes on one grid. u holds the interaction-picture
// state vector u^(j)(t) at every node (columns).
std::vector<Eigen::VectorXcd> dyson_pass(const SystemModel& system, const CouplingProfile& profile, int order,
                                         const PanelGrid& grid) {
    const int d = system.dimension();
    const auto nodes = static_cast<Eigen::Index>(grid.size());
    const int n = system.initial_level();
    // Energies relative to E_n keep the phases small; D O D^dagger is unchanged.
    const Eigen::VectorXd energies = system.energies().array() - system.energies()(n);
    const Eigen::VectorXd g = profile_samples(profile, grid);

    Eigen::MatrixXcd phase(d, nodes);
    for (Eigen::Index j = 0; j < nodes; ++j)
        for (int k = 0; k < d; ++k) phase(k, j) = std::polar(1.0, energies(k) * grid.nodes()[static_cast<std::size_t>(j)]);

    std::vector<Eigen::VectorXcd> orders;
    Eigen::VectorXcd zeroth = Eigen::VectorXcd::Zero(d);
    zeroth(n) = 1.0;
    orders.push_back(zeroth);

    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, nodes);
    u.row(n).setOnes();
    Eigen::MatrixXcd integrand(d, nodes);
    for (int l = 1; l <= order; ++l) {
        // g(t) D(t) O D(t)^dagger u(t)
        const Eigen::MatrixXcd rotated = phase.conjugate().cwiseProduct(u);
        integrand.noalias() = system.observable() * rotated;
        for (Eigen::Index j = 0; j < nodes; ++j) integrand.col(j) = integrand.col(j).cwiseProduct(phase.col(j)) * g(j);
        for (int k = 0; k < d; ++k) u.row(k) = grid.cumulate(Eigen::VectorXcd(integrand.row(k).transpose())).transpose();
        orders.push_back(minus_i_power(l) * u.col(nodes - 1));
    }
    return orders;
}

}  // namespace

Eigen::VectorXcd AmplitudeTable::assemble(double a) const {
    Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(orders.front().size());
    double power = 1.0;
    for (const auto& amp : orders) {
        sum += power * amp;
        power *= a;
    }
    return sum;
}

double AmplitudeTable::truncation_bound_at(double a) const {
    return exponential_tail(std::abs(a) * coupling_scale, max_order);
}

AmplitudeTable dyson_amplitudes(const DysonRequest& req) {
    if (req.max_order < 1) throw ValidationError("dyson max_order must be at least 1");
    if (req.max_order > kMaxDysonOrder)
        throw CostCapError("dyson max_order " + std::to_string(req.max_order) + " exceeds the cap of " +
                           std::to_string(kMaxDysonOrder));
    if (req.nodes < kMinDysonNodes)
        throw ValidationError("dyson quadrature needs at least " + std::to_string(kMinDysonNodes) + " nodes");

    const double omega = req.system.max_frequency();
    const auto coarse = PanelGrid::for_profile(req.profile, omega, req.nodes, 1);
    const auto fine = PanelGrid::for_profile(req.profile, omega, req.nodes, 2);
    auto rough = dyson_pass(req.system, req.profile, req.max_order, coarse);
    auto orders = dyson_pass(req.system, req.profile, req.max_order, fine);

    double error = 0.0;
    double scale = 0.0;
    for (std::size_t l = 0; l < orders.size(); ++l) {
        error = std::max(error, (orders[l] - rough[l]).cwiseAbs().maxCoeff());
        scale = std::max(scale, orders[l].cwiseAbs().maxCoeff());
    }
    const double tol = 1e-9 * std::max(1.0, scale);
    if (error > tol) {
        std::ostringstream msg;
        msg << "dyson quadrature did not converge: panel refinement changed amplitudes by " << error;
        throw AccuracyError(msg.str(), error);
    }

    AmplitudeTable table;
    table.orders = std::move(orders);
    table.pointer_momentum = req.pointer_momentum;
    table.max_order = req.max_order;
    table.initial_level = req.system.initial_level();
    table.profile_name = req.profile.name();
    table.duration = req.profile.duration();
    table.error_estimate = error;
    table.coupling_scale = req.system.observable_norm() * req.profile.area();
    table.total = table.assemble(req.pointer_momentum);
    table.truncation_bound = table.truncation_bound_at(req.pointer_momentum);
    return table;
}

std::vector<Complex> dyson_amplitude(const DysonRequest& req, int m) {
    require_level(req.system, m);
    const auto table = dyson_amplitudes(req);
    std::vector<Complex> row;
    for (const auto& amp : table.orders) row.push_back(amp(m));
    return row;
}

Complex chain_amplitude(const SystemModel& system, const CouplingProfile& profile, std::span<const int> path,
                        int nodes) {
    if (path.size() < 2) throw ValidationError("chain needs at least an initial and a final level");
    for (int level : path) require_level(system, level);
    if (nodes < 2) throw ValidationError("chain quadrature needs at least two nodes");

    double omega = 0.0;
    for (std::size_t j = 0; j + 1 < path.size(); ++j)
        omega = std::max(omega, std::abs(system.transition_frequency(path[j], path[j + 1])));
    const auto grid = PanelGrid::for_profile(profile, omega, nodes, 1);
    const Eigen::VectorXd g = profile_samples(profile, grid);
    const auto count = static_cast<Eigen::Index>(grid.size());

    Eigen::VectorXcd u = Eigen::VectorXcd::Ones(count);
    Complex elements{1.0, 0.0};
    for (std::size_t j = path.size() - 1; j-- > 0;) {
        const int to = path[j];
        const int from = path[j + 1];
        elements *= system.element(to, from);
        const double w = system.transition_frequency(to, from);
        Eigen::VectorXcd integrand(count);
        for (Eigen::Index i = 0; i < count; ++i)
            integrand(i) = std::polar(g(i), w * grid.nodes()[static_cast<std::size_t>(i)]) * u(i);
        u = grid.cumulate(integrand);
    }
    const int ell = static_cast<int>(path.size()) - 1;
    return minus_i_power(ell) * elements * u(count - 1);
}

Complex first_order_amplitude(const SystemModel& system, const CouplingProfile& profile, int m) {
    require_level(system, m);
    const int n = system.initial_level();
    if (m == n) return kMinusI * system.element(n, n) * profile.area();
    return kMinusI * system.element(m, n) * profile.transform(system.transition_frequency(m, n));
}

double first_order_probability(const SystemModel& system, const CouplingProfile& profile, int m) {
    require_level(system, m);
    const int n = system.initial_level();
    if (m == n) throw DomainError("m equals the initial level: that is the survival amplitude, not a transition");
    return std::norm(system.element(m, n)) * std::norm(profile.transform(system.transition_frequency(m, n)));
}

Complex pointer_shift_phase(const SystemModel& system, const CouplingProfile& profile, double a) {
    return std::polar(1.0, -profile.area() * a * system.expectation());
}

double nested_integral_identity(const CouplingProfile& profile, int ell, int nodes) {
    if (ell < 1 || ell > 8) throw ValidationError("nested integral order must lie in [1, 8]");
    const auto grid = PanelGrid::for_profile(profile, 0.0, nodes, 1);
    const Eigen::VectorXd g = profile_samples(profile, grid);
    Eigen::VectorXd level = Eigen::VectorXd::Ones(g.size());
    for (int l = 0; l < ell; ++l) level = grid.cumulate(Eigen::VectorXd(g.cwiseProduct(level)));
    return level(level.size() - 1);
}

SecondOrderBreakdown second_order_breakdown(const SystemModel& system, const CouplingProfile& profile, double a) {
    if (profile.kind() != ProfileKind::Boxcar)
        throw UnsupportedProfileError("second-order closed forms exist only for constant (boxcar) coupling, got " +
                                      profile.name());
    const double duration = profile.duration();
    const double strength = a * profile.area();  // coupling is strength / T
    const double a2 = strength * strength;
    const int n = system.initial_level();

    SecondOrderBreakdown out;
    double shift_sum = 0.0;
    for (int k = 0; k < system.dimension(); ++k) {
        if (k == n) continue;
        const double weight = std::norm(system.element(n, k));
        if (weight == 0.0) continue;
        const double w = system.transition_frequency(n, k);
        if (std::abs(w) < SystemModel::kDegeneracyGap)
            throw DomainError("second-order breakdown diverges for a coupled level degenerate with the initial one");
        const double wt = w * duration;
        out.energy_shift_term += Complex{0.0, -a2 * weight / wt};
        out.mixing_term += a2 * weight * std::polar(1.0, wt) / (wt * wt);
        out.normalization_term += -a2 * weight / (wt * wt);
        shift_sum += weight / w;
    }
    out.delta_e2 = a2 * shift_sum / (duration * duration);
    return out;
}

double typical_frequency(const SystemModel& system, std::span<const int> path) {
    if (path.size() < 2) throw ValidationError("path needs at least two levels");
    std::vector<double> w;
    for (std::size_t j = 0; j + 1 < path.size(); ++j)
        w.push_back(std::abs(system.transition_frequency(path[j], path[j + 1])));
    std::sort(w.begin(), w.end());
    const std::size_t mid = w.size() / 2;
    return w.size() % 2 == 1 ? w[mid] : 0.5 * (w[mid - 1] + w[mid]);
}

Complex alpha_distinct_chain(const SystemModel& system, const CouplingProfile& profile, std::span<const int> path,
                             std::optional<double> omega_bar) {
    if (path.size() < 2) throw ValidationError("chain needs at least an initial and a final level");
    for (int level : path) require_level(system, level);
    const int m = path.front();
    const int n = path.back();
    for (std::size_t j = 1; j + 1 < path.size(); ++j) {
        if (path[j] == m || path[j] == n)
            throw DomainError("intermediate level " + std::to_string(path[j]) +
                              " repeats an end of the chain; use dyson_amplitude for mixed chains");
        for (std::size_t k = j + 1; k + 1 < path.size(); ++k)
            if (path[j] == path[k])
                throw DomainError("intermediate level " + std::to_string(path[j]) +
                                  " appears twice; use dyson_amplitude for mixed chains");
    }
    const int ell = static_cast<int>(path.size()) - 1;
    Complex elements{1.0, 0.0};
    for (std::size_t j = 0; j + 1 < path.size(); ++j) elements *= system.element(path[j], path[j + 1]);
    const double w = omega_bar ? *omega_bar : typical_frequency(system, path);
    return minus_i_power(ell) * elements * std::pow(profile.transform(w), ell) / factorial(ell);
}

Complex single_transition_term(const SystemModel& system, const CouplingProfile& profile, int m, int ell) {
    require_level(system, m);
    const int n = system.initial_level();
    if (m == n) throw DomainError("single-transition terms need m != n");
    if (ell < 1) throw ValidationError("order must be at least 1");
    std::vector<int> path(static_cast<std::size_t>(ell + 1), n);
    path.front() = m;
    return chain_amplitude(system, profile, path);
}

namespace {

// Fornberg weights for the k-th derivative at 0 on the given offsets.
std::vector<double> fornberg_weights(const std::vector<double>& x, int k) {
    const auto n = x.size();
    std::vector<std::vector<double>> c(n, std::vector<double>(static_cast<std::size_t>(k + 1), 0.0));
    double c1 = 1.0;
    double c4 = x[0];
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = std::min(static_cast<int>(i), k);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i];
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int s = mn; s >= 1; --s) {
                    const auto su = static_cast<std::size_t>(s);
                    c[i][su] = c1 * (s * c[i - 1][su - 1] - c5 * c[i - 1][su]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int s = mn; s >= 1; --s) {
                const auto su = static_cast<std::size_t>(s);
                c[j][su] = (c4 * c[j][su] - s * c[j][su - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = c[i][static_cast<std::size_t>(k)];
    return w;
}

}  // namespace

Complex gamma_factor(const CouplingProfile& profile, int ell, double omega) {
    if (profile.kind() != ProfileKind::Boxcar)
        throw UnsupportedProfileError("gamma factors are defined for constant (boxcar) coupling, got " + profile.name());
    if (ell < 2) throw ValidationError("gamma factor order must be at least 2");
    const int k = ell - 1;
    const double duration = profile.duration();
    // Differentiate F(u) = g~(u / T) in u = omega T; then gamma = F^(k)(u).
    const double u = omega * duration;
    const double h = 0.1;
    if (!std::isfinite(u) || u + h * 0.25 == u)
        throw AccuracyError("finite-difference step underflows at omega T = " + std::to_string(u), h);

    std::vector<double> offsets;
    for (int j = -ell; j <= ell; ++j) offsets.push_back(static_cast<double>(j));
    const auto weights = fornberg_weights(offsets, k);
    auto stencil = [&](double step) {
        double sum = 0.0;
        for (std::size_t j = 0; j < offsets.size(); ++j)
            sum += weights[j] * profile.fourier_transform((u + offsets[j] * step) / duration);
        return sum / std::pow(step, k);
    };
    const int width = static_cast<int>(offsets.size());
    int p = width - k;
    if (p % 2 != 0) ++p;
    const double coarse = stencil(h);
    const double fine = stencil(0.5 * h);
    const double factor = std::pow(2.0, p);
    return {(factor * fine - coarse) / (factor - 1.0), 0.0};
}

double gamma_leading_order(int ell, double x) {
    if (ell < 2) throw ValidationError("gamma factor order must be at least 2");
    const double scale = std::pow(0.5, ell - 1);
    if (ell % 2 == 1) return scale * std::abs(sinc(0.5 * x));
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    return scale * std::abs(std::cos(0.5 * x) / (0.5 * x));
}

double shift_correction_band(const SystemModel& system, const CouplingProfile& profile, double max_momentum) {
    const int n = system.initial_level();
    double sum = 0.0;
    for (int k = 0; k < system.dimension(); ++k) {
        if (k == n) continue;
        const double weight = std::norm(system.element(n, k));
        if (weight == 0.0) continue;
        const double w = std::abs(system.transition_frequency(n, k));
        if (w < SystemModel::kDegeneracyGap) return std::numeric_limits<double>::infinity();
        sum += weight / w;
    }
    const auto corners = profile.corner_points();
    const double half = 0.5 * profile.duration();
    auto square = [&](double t) {
        const double g = profile(t);
        return g * g;
    };
    const double energy = quad::integrate<double>(square, -half, half, corners, 1, 1e-12).value;
    return 2.0 * std::abs(max_momentum) * sum * energy;
}

}  // namespace protmeas
