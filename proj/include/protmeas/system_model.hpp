#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace protmeas {

using Complex = std::complex<double>;

/// Finite-dimensional measured system in its energy eigenbasis (hbar = 1):
/// diagonal energies E_m, Hermitian observable O and the initial level n.
///
/// Degenerate spectra are accepted with a warning so that energy-conserving
/// transitions can be studied on purpose.
class SystemModel {
public:
    SystemModel(Eigen::VectorXd energies, Eigen::MatrixXcd observable, int initial_level);

    int dimension() const noexcept { return static_cast<int>(energies_.size()); }
    int initial_level() const noexcept { return initial_level_; }
    const Eigen::VectorXd& energies() const noexcept { return energies_; }
    const Eigen::MatrixXcd& observable() const noexcept { return observable_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// omega_mk = E_m - E_k.
    double transition_frequency(int m, int k) const;
    Complex element(int m, int k) const;
    /// <n|O|n> for the initial level.
    double expectation() const;
    /// Largest |omega_mk| over all pairs.
    double max_frequency() const;
    /// Smallest |E_m - E_k| over m != k (infinity for d = 1).
    double min_gap() const;
    /// Spectral norm of O.
    double observable_norm() const;
    bool is_degenerate() const { return min_gap() < kDegeneracyGap; }

    /// max over m != n of |O_mn| / (|omega_mn| T); the weak-coupling condition
    /// asks for this to be small. Infinite when a coupled level is degenerate.
    double protection_ratio(double duration) const;

    SystemModel with_initial_level(int level) const;

    static constexpr double kDegeneracyGap = 1e-9;
    static constexpr double kHermiticityTol = 1e-12;

private:
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd observable_;
    int initial_level_;
    std::vector<std::string> warnings_;
};

/// Static pointer: the apparatus Hamiltonian vanishes on the momentum grid.
struct StaticApparatus {};
/// Free pointer of mass M: epsilon_i = a_i^2 / 2M.
struct FreeApparatus {
    double mass = 1.0;
};
using ApparatusModel = std::variant<StaticApparatus, FreeApparatus>;

/// Pointer state on a discrete grid of momentum eigenvalues a_i, with the
/// amplitudes <A_i|phi(x0)> of a Gaussian packet and apparatus energies eps_i.
struct PointerModel {
    std::vector<double> momenta;
    std::vector<Complex> amplitudes;
    std::vector<double> apparatus_energies;
    double x0 = 0.0;
    double sigma_x = 1.0;

    std::size_t size() const noexcept { return momenta.size(); }
    /// Grid spacing; zero for a single-point grid.
    double spacing() const;
    /// Sum of |amplitude|^2.
    double norm_squared() const;
    /// Position expectation from the phase gradient of the amplitudes.
    double position_expectation() const;
    /// sum |amp|^2 a^2 - (sum |amp|^2 a)^2
    double momentum_variance() const;
};

/// Builds a Gaussian pointer on `grid_size` equally spaced momenta covering
/// [-grid_span/2, grid_span/2]. Momentum amplitudes are proportional to
/// exp(-a^2 sigma_x^2) exp(-i a x0), so sigma_p = 1/(2 sigma_x).
PointerModel build_pointer(double x0, double sigma_x, int grid_size, double grid_span,
                           ApparatusModel apparatus = StaticApparatus{});

/// Pointer with explicitly given grid and amplitudes (normalized on entry).
PointerModel custom_pointer(std::vector<double> momenta, std::vector<Complex> amplitudes,
                            std::vector<double> apparatus_energies = {}, double x0 = 0.0);

}  // namespace protmeas
