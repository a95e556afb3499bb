#include "protmeas/panel_integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "protmeas/errors.hpp"

namespace protmeas {

Eigen::MatrixXd chebyshev_integration_matrix(int points) {
    if (points < 2) throw ValidationError("Chebyshev panel needs at least two points");
    const int n = points - 1;
    const double pi = std::numbers::pi;
    // Ascending nodes x_i = -cos(i pi / n) = cos(theta_i), theta_i = (n - i) pi / n.
    auto theta = [&](int i) { return static_cast<double>(n - i) * pi / static_cast<double>(n); };

    Eigen::MatrixXd S(points, points);
    std::vector<double> a(static_cast<std::size_t>(n + 1));
    std::vector<double> b(static_cast<std::size_t>(n + 2));
    for (int j = 0; j < points; ++j) {
        // Chebyshev coefficients of the interpolant of the unit vector e_j.
        const double endpoint = (j == 0 || j == n) ? 0.5 : 1.0;
        for (int k = 0; k <= n; ++k) {
            double c = 2.0 / n * endpoint * std::cos(k * theta(j));
            if (k == 0 || k == n) c *= 0.5;
            a[static_cast<std::size_t>(k)] = c;
        }
        std::fill(b.begin(), b.end(), 0.0);
        for (int k = 0; k <= n; ++k) {
            const double ak = a[static_cast<std::size_t>(k)];
            if (k == 0) {
                b[1] += ak;
            } else if (k == 1) {
                b[2] += 0.25 * ak;
            } else {
                b[static_cast<std::size_t>(k + 1)] += ak / (2.0 * (k + 1));
                b[static_cast<std::size_t>(k - 1)] -= ak / (2.0 * (k - 1));
            }
        }
        double at_minus_one = 0.0;
        for (int k = 0; k <= n + 1; ++k) at_minus_one += b[static_cast<std::size_t>(k)] * ((k % 2 == 0) ? 1.0 : -1.0);
        for (int i = 0; i < points; ++i) {
            double value = 0.0;
            for (int k = 0; k <= n + 1; ++k) value += b[static_cast<std::size_t>(k)] * std::cos(k * theta(i));
            S(i, j) = value - at_minus_one;
        }
    }
    return S;
}

PanelGrid::PanelGrid(double lo, double hi, std::span<const double> breakpoints, double max_width,
                     int nodes_per_panel)
    : nodes_per_panel_(nodes_per_panel), integration_(chebyshev_integration_matrix(nodes_per_panel)) {
    if (!(hi > lo)) throw ValidationError("panel grid needs hi > lo");
    if (!(max_width > 0.0)) max_width = hi - lo;

    std::vector<double> cuts{lo, hi};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    const int n = nodes_per_panel - 1;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double width = cuts[s + 1] - cuts[s];
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(width / max_width - 1e-12)));
        const double w = width / static_cast<double>(pieces);
        for (std::size_t p = 0; p < pieces; ++p) {
            const double a = cuts[s] + w * static_cast<double>(p);
            const double b = (p + 1 == pieces) ? cuts[s + 1] : a + w;
            const double half = 0.5 * (b - a);
            half_widths_.push_back(half);
            for (int i = 0; i <= n; ++i) {
                const double x = -std::cos(static_cast<double>(i) * std::numbers::pi / n);
                nodes_.push_back(a + half * (x + 1.0));
            }
            ++panel_count_;
        }
    }
}

PanelGrid PanelGrid::for_profile(const CouplingProfile& profile, double max_frequency, int nodes_per_panel,
                                 int refinement) {
    const double duration = profile.duration();
    double width = duration;
    if (max_frequency > 0.0) width = std::min(width, 2.0 * std::numbers::pi / max_frequency);
    width /= std::max(refinement, 1);
    const auto corners = profile.corner_points();
    return {-0.5 * duration, 0.5 * duration, corners, width, nodes_per_panel};
}

template <typename Vec>
Vec PanelGrid::cumulate_impl(const Vec& values) const {
    const auto n = static_cast<Eigen::Index>(nodes_per_panel_);
    Vec out(values.size());
    typename Vec::Scalar offset{0.0};
    for (std::size_t p = 0; p < panel_count_; ++p) {
        const auto start = static_cast<Eigen::Index>(p) * n;
        out.segment(start, n) = (integration_ * values.segment(start, n)) * half_widths_[p];
        out.segment(start, n).array() += offset;
        offset = out(start + n - 1);
    }
    return out;
}

Eigen::VectorXcd PanelGrid::cumulate(const Eigen::VectorXcd& values) const {
    if (static_cast<std::size_t>(values.size()) != nodes_.size())
        throw ValidationError("cumulate: sample count does not match the grid");
    return cumulate_impl(values);
}

Eigen::VectorXd PanelGrid::cumulate(const Eigen::VectorXd& values) const {
    if (static_cast<std::size_t>(values.size()) != nodes_.size())
        throw ValidationError("cumulate: sample count does not match the grid");
    return cumulate_impl(values);
}

}  // namespace protmeas
