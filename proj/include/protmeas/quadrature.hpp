#pragma once

// Globally adaptive Gauss-Kronrod (G7/K15) integration.
//
// The initial partition is seeded with caller-supplied breakpoints (profile
// corners, oscillation periods); the panel with the largest |K15 - G7| is
// bisected until the summed estimate drops below the absolute tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "protmeas/errors.hpp"

namespace protmeas::quad {

inline constexpr double kDefaultAbsTol = 1e-10;
inline constexpr std::size_t kMaxPanels = std::size_t{1} << 16;

template <typename V>
struct Result {
    V value{};
    double error = 0.0;
    std::size_t panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod abscissae (and the centre).
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename V>
struct Panel {
    double lo;
    double hi;
    V value;
    double error;
};

template <typename V>
struct ByError {
    bool operator()(const Panel<V>& a, const Panel<V>& b) const { return a.error < b.error; }
};

template <typename V, typename F>
Panel<V> gk15(const F& f, double lo, double hi) {
    const double centre = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const V fc = f(centre);
    V kronrod = fc * kWgk[7];
    V gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const V sum = f(centre - dx) + f(centre + dx);
        kronrod += sum * kWgk[j];
        if (j % 2 == 1) gauss += sum * kWg[j / 2];
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [lo, hi]. `breakpoints` (any order, values outside the
/// interval ignored) and `min_panels` seed the initial partition.
template <typename V, typename F>
Result<V> integrate(const F& f, double lo, double hi, std::span<const double> breakpoints = {},
                    std::size_t min_panels = 1, double abs_tol = kDefaultAbsTol,
                    std::size_t max_panels = kMaxPanels) {
    if (!(hi > lo)) return {};

    std::vector<double> cuts{lo, hi};
    for (double b : breakpoints)
        if (b > lo && b < hi) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Refine uniformly until at least min_panels exist, keeping breakpoints.
    const double target_width = (hi - lo) / static_cast<double>(std::max<std::size_t>(min_panels, 1));
    std::vector<double> seeded;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double width = cuts[i + 1] - cuts[i];
        const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(width / target_width - 1e-9)));
        for (std::size_t p = 0; p < pieces; ++p)
            seeded.push_back(cuts[i] + width * static_cast<double>(p) / static_cast<double>(pieces));
    }
    seeded.push_back(hi);

    std::priority_queue<detail::Panel<V>, std::vector<detail::Panel<V>>, detail::ByError<V>> heap;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < seeded.size(); ++i) {
        auto panel = detail::gk15<V>(f, seeded[i], seeded[i + 1]);
        total_error += panel.error;
        heap.push(panel);
    }

    while (total_error > abs_tol) {
        if (heap.size() >= max_panels) break;
        auto worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) break;  // interval exhausted
        heap.pop();
        auto left = detail::gk15<V>(f, worst.lo, mid);
        auto right = detail::gk15<V>(f, mid, worst.hi);
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if (total_error <= abs_tol) {
            // Guard against drift in the running sum before accepting.
            double exact = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                exact += copy.top().error;
                copy.pop();
            }
            total_error = exact;
        }
    }

    Result<V> result;
    result.panels = heap.size();
    result.error = 0.0;
    while (!heap.empty()) {
        result.value += heap.top().value;
        result.error += heap.top().error;
        heap.pop();
    }
    if (result.error > abs_tol) {
        std::ostringstream msg;
        msg << "adaptive quadrature did not converge: error estimate " << result.error
            << " exceeds tolerance " << abs_tol << " after " << result.panels << " panels";
        throw AccuracyError(msg.str(), result.error);
    }
    return result;
}

}  // namespace protmeas::quad
