#include "protmeas/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "protmeas/errors.hpp"

namespace protmeas {

SystemModel::SystemModel(Eigen::VectorXd energies, Eigen::MatrixXcd observable, int initial_level)
    : energies_(std::move(energies)), observable_(std::move(observable)), initial_level_(initial_level) {
    const auto d = energies_.size();
    if (d == 0) throw ValidationError("system needs at least one energy level");
    if (observable_.rows() != observable_.cols())
        throw ValidationError("observable must be square");
    if (observable_.rows() != d) {
        std::ostringstream msg;
        msg << "observable is " << observable_.rows() << "x" << observable_.cols() << " but there are " << d
            << " energies";
        throw ValidationError(msg.str());
    }
    if (initial_level_ < 0 || initial_level_ >= d)
        throw ValidationError("initial level " + std::to_string(initial_level_) + " out of range [0, " +
                              std::to_string(d) + ")");
    if (!energies_.allFinite() || !observable_.allFinite())
        throw ValidationError("system contains non-finite entries");
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (std::abs(observable_(i, j) - std::conj(observable_(j, i))) > kHermiticityTol) {
                std::ostringstream msg;
                msg << "observable is not Hermitian at (" << i << ", " << j << ")";
                throw ValidationError(msg.str());
            }
        }
    }
    // Symmetrize away sub-tolerance asymmetry.
    observable_ = 0.5 * (observable_ + observable_.adjoint()).eval();

    if (d > 1 && min_gap() < kDegeneracyGap) {
        std::ostringstream msg;
        msg << "spectrum is degenerate (min gap " << min_gap()
            << "); energy-conserving transitions will not be suppressed by longer T";
        warnings_.push_back(msg.str());
    }
}

double SystemModel::transition_frequency(int m, int k) const {
    const int d = dimension();
    if (m < 0 || m >= d || k < 0 || k >= d) throw ValidationError("level index out of range");
    return energies_(m) - energies_(k);
}

Complex SystemModel::element(int m, int k) const { return observable_(m, k); }

double SystemModel::expectation() const { return observable_(initial_level_, initial_level_).real(); }

double SystemModel::max_frequency() const {
    return energies_.size() > 1 ? energies_.maxCoeff() - energies_.minCoeff() : 0.0;
}

double SystemModel::min_gap() const {
    double gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dimension(); ++i)
        for (int j = i + 1; j < dimension(); ++j) gap = std::min(gap, std::abs(energies_(i) - energies_(j)));
    return gap;
}

double SystemModel::observable_norm() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(observable_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double SystemModel::protection_ratio(double duration) const {
    double ratio = 0.0;
    const int n = initial_level_;
    for (int m = 0; m < dimension(); ++m) {
        if (m == n) continue;
        const double coupling = std::abs(observable_(m, n));
        if (coupling == 0.0) continue;
        const double omega = std::abs(transition_frequency(m, n));
        if (omega < kDegeneracyGap) return std::numeric_limits<double>::infinity();
        ratio = std::max(ratio, coupling / (omega * duration));
    }
    return ratio;
}

SystemModel SystemModel::with_initial_level(int level) const { return {energies_, observable_, level}; }

double PointerModel::spacing() const {
    return momenta.size() > 1 ? (momenta.back() - momenta.front()) / static_cast<double>(momenta.size() - 1) : 0.0;
}

double PointerModel::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

double PointerModel::position_expectation() const {
    // <X> = sum |phi|^2 (-d arg phi / da), with the packet's own linear phase
    // removed first so no unwrapping is needed.
    if (momenta.size() < 2) return x0;
    const std::size_t n = momenta.size();
    double weighted = 0.0;
    double weight = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
        const Complex left = amplitudes[lo] * std::polar(1.0, momenta[lo] * x0);
        const Complex right = amplitudes[hi] * std::polar(1.0, momenta[hi] * x0);
        const double dphase = std::arg(right * std::conj(left));
        const double gradient = -dphase / (momenta[hi] - momenta[lo]);
        const double w = std::norm(amplitudes[i]);
        weighted += w * gradient;
        weight += w;
    }
    return x0 + weighted / weight;
}

double PointerModel::momentum_variance() const {
    double mean = 0.0;
    double second = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < momenta.size(); ++i) {
        const double w = std::norm(amplitudes[i]);
        mean += w * momenta[i];
        second += w * momenta[i] * momenta[i];
        total += w;
    }
    mean /= total;
    return second / total - mean * mean;
}

PointerModel build_pointer(double x0, double sigma_x, int grid_size, double grid_span, ApparatusModel apparatus) {
    if (grid_size < 16) throw ValidationError("pointer grid_size must be at least 16");
    if (!(sigma_x > 0.0)) throw ValidationError("pointer sigma_x must be positive");
    const double sigma_p = 1.0 / (2.0 * sigma_x);
    if (!(grid_span >= 8.0 * sigma_p))
        throw ValidationError("pointer grid_span " + std::to_string(grid_span) + " covers fewer than 8 sigma_p (" +
                              std::to_string(8.0 * sigma_p) + ")");
    const double edge = 0.5 * grid_span;
    // Edge density relative to the peak density: exp(-2 a^2 sigma_x^2).
    const double edge_ratio = std::exp(-2.0 * edge * edge * sigma_x * sigma_x);
    if (!(edge_ratio < 1e-8))
        throw ValidationError("pointer grid_span too small: edge density is " + std::to_string(edge_ratio) +
                              " of peak (needs < 1e-8)");

    PointerModel p;
    p.x0 = x0;
    p.sigma_x = sigma_x;
    p.momenta.resize(static_cast<std::size_t>(grid_size));
    p.amplitudes.resize(p.momenta.size());
    p.apparatus_energies.assign(p.momenta.size(), 0.0);
    double norm = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double a = -edge + grid_span * static_cast<double>(i) / static_cast<double>(grid_size - 1);
        const auto idx = static_cast<std::size_t>(i);
        p.momenta[idx] = a;
        p.amplitudes[idx] = std::polar(std::exp(-a * a * sigma_x * sigma_x), -a * x0);
        norm += std::norm(p.amplitudes[idx]);
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& amp : p.amplitudes) amp *= scale;

    if (const auto* free = std::get_if<FreeApparatus>(&apparatus)) {
        if (!(free->mass > 0.0)) throw ValidationError("free pointer mass must be positive");
        for (std::size_t i = 0; i < p.momenta.size(); ++i)
            p.apparatus_energies[i] = p.momenta[i] * p.momenta[i] / (2.0 * free->mass);
    }
    return p;
}

PointerModel custom_pointer(std::vector<double> momenta, std::vector<Complex> amplitudes,
                            std::vector<double> apparatus_energies, double x0) {
    if (momenta.empty() || momenta.size() != amplitudes.size())
        throw ValidationError("custom pointer needs matching, non-empty momentum and amplitude arrays");
    if (apparatus_energies.empty()) apparatus_energies.assign(momenta.size(), 0.0);
    if (apparatus_energies.size() != momenta.size())
        throw ValidationError("custom pointer apparatus energies have the wrong length");
    for (std::size_t i = 1; i < momenta.size(); ++i)
        if (!(momenta[i] > momenta[i - 1])) throw ValidationError("custom pointer momenta must be increasing");
    PointerModel p;
    p.momenta = std::move(momenta);
    p.amplitudes = std::move(amplitudes);
    p.apparatus_energies = std::move(apparatus_energies);
    p.x0 = x0;
    const double norm = p.norm_squared();
    if (!(norm > 0.0)) throw ValidationError("custom pointer amplitudes are all zero");
    for (auto& amp : p.amplitudes) amp /= std::sqrt(norm);
    return p;
}

}  // namespace protmeas
