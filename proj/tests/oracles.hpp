#pragma once

// Independent reference computations used only by the tests: closed-form
// two-level solutions, integral representations, Monte-Carlo estimates.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "protmeas/coupling_profile.hpp"
#include "protmeas/exact_oracle.hpp"
#include "protmeas/quadrature.hpp"
#include "protmeas/system_model.hpp"

namespace test {

using protmeas::Complex;

inline Eigen::MatrixXcd sigma_x() {
    Eigen::MatrixXcd o(2, 2);
    o << 0.0, 1.0, 1.0, 0.0;
    return o;
}

// <0|O|0> = 0.6, |<1|O|0>| = 0.8.
inline Eigen::MatrixXcd tilted_observable() {
    Eigen::MatrixXcd o(2, 2);
    o << 0.6, 0.8, 0.8, -0.6;
    return o;
}

inline Eigen::MatrixXcd random_hermitian(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> n01;
    Eigen::MatrixXcd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = {n01(rng), n01(rng)};
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    return h / h.norm() * std::sqrt(static_cast<double>(d));
}

// Energies with gaps of at least 0.2, Hermitian O, random initial level.
inline protmeas::SystemModel random_system(std::mt19937_64& rng, int d) {
    std::uniform_real_distribution<double> gap(0.2, 1.2);
    Eigen::VectorXd e(d);
    double level = -0.5 * d * 0.7;
    for (int i = 0; i < d; ++i) {
        level += gap(rng);
        e(i) = level;
    }
    std::uniform_int_distribution<int> pick(0, d - 1);
    return {e, random_hermitian(rng, d), pick(rng)};
}

// Qubit H = [[-w/2, g], [g, w/2]] from |0>; C_m = exp(i (E_0 + E_m) T/2) psi_m.
inline Eigen::VectorXcd rabi_amplitudes(double w, double g, double T) {
    const double omega = std::sqrt(g * g + 0.25 * w * w);
    const Complex i{0.0, 1.0};
    const Complex c0 = std::cos(omega * T) - i * std::sin(omega * T) * (-0.5 * w) / omega;
    const Complex c1 = -i * std::sin(omega * T) * g / omega;
    Eigen::VectorXcd out(2);
    out << c0 * std::polar(1.0, -0.5 * w * T), c1;
    return out;
}

inline double rabi_probability(double w, double g, double T) {
    const double omega2 = g * g + 0.25 * w * w;
    const double s = std::sin(std::sqrt(omega2) * T);
    return g * g / omega2 * s * s;
}

// g^2 coefficient of the exact eigenvalue of level n of H_S + g O, by
// Richardson extrapolation of (E(g) - E_n - g O_nn) / g^2 over g, g/2, g/4.
inline double eigen_g2_coefficient(const protmeas::SystemModel& sys, double g) {
    const int n = sys.initial_level();
    auto c = [&](double h) {
        return (protmeas::perturbed_level(sys, h, n) - sys.energies()(n) - h * sys.expectation()) / (h * h);
    };
    const double r1 = 2.0 * c(0.5 * g) - c(g);
    const double r2 = 2.0 * c(0.25 * g) - c(0.5 * g);
    return (4.0 * r2 - r1) / 3.0;
}

// gamma_l for the boxcar at x = omega T from sinc(y) = int_0^1 cos(y s) ds:
// T^-(l-1) d^(l-1)/d omega^(l-1) sinc(omega T/2) = 2^-(l-1) int_0^1 s^k cos(s x/2 + k pi/2) ds.
inline double gamma_reference(int ell, double x) {
    const int k = ell - 1;
    auto f = [&](double s) { return std::pow(s, k) * std::cos(0.5 * x * s + 0.5 * k * std::numbers::pi); };
    const auto periods = static_cast<std::size_t>(std::abs(x) / (4.0 * std::numbers::pi)) + 2;
    return std::pow(0.5, k) * protmeas::quad::integrate<double>(f, 0.0, 1.0, {}, periods, 1e-14).value;
}

// (-i)^l O_mn O_nn^(l-1) int exp(i w_mn t) g(t) G(t)^(l-1) / (l-1)! dt by 1-D quadrature.
inline Complex single_transition_reference(const protmeas::SystemModel& sys, const protmeas::CouplingProfile& p,
                                           int m, int ell) {
    const int n = sys.initial_level();
    const double w = sys.transition_frequency(m, n);
    double fact = 1.0;
    for (int i = 2; i < ell; ++i) fact *= i;
    auto f = [&](double t) { return std::polar(p(t) * std::pow(p.cumulative_area(t), ell - 1) / fact, w * t); };
    const auto corners = p.corner_points();
    const auto periods = static_cast<std::size_t>(std::abs(w) * p.duration() / (2.0 * std::numbers::pi)) + 2;
    const double half = 0.5 * p.duration();
    const Complex integral = protmeas::quad::integrate<Complex>(f, -half, half, corners, periods, 1e-14).value;
    Complex prefactor = sys.element(m, n) * std::pow(sys.element(n, n), ell - 1);
    for (int i = 0; i < ell; ++i) prefactor *= Complex{0.0, -1.0};
    return prefactor * integral;
}

struct MonteCarlo {
    double mean;
    double stderr_mean;
};

// l-fold time-ordered integral of g by uniform sampling of the cube
// [-T/2, T/2]^l: mean of T^l prod g(t_i) on ordered samples.
inline MonteCarlo simplex_monte_carlo(const protmeas::CouplingProfile& p, int ell, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double T = p.duration();
    std::uniform_real_distribution<double> u(-0.5 * T, 0.5 * T);
    double sum = 0.0;
    double sum2 = 0.0;
    std::vector<double> t(static_cast<std::size_t>(ell));
    for (int s = 0; s < samples; ++s) {
        for (auto& ti : t) ti = u(rng);
        double v = 0.0;
        if (std::is_sorted(t.begin(), t.end())) {
            v = std::pow(T, ell);
            for (double ti : t) v *= p(ti);
        }
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / samples;
    const double var = sum2 / samples - mean * mean;
    return {mean, std::sqrt(var / samples)};
}

}  // namespace test
