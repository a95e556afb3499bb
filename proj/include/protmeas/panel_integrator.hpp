#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "protmeas/coupling_profile.hpp"

namespace protmeas {

/// Piecewise Chebyshev-Lobatto grid over [lo, hi] with a spectral
/// indefinite-integration matrix per panel.
///
/// `cumulate` turns samples of f at the nodes into samples of
/// F(t) = integral of f from lo to t at the same nodes, so an l-fold
/// time-ordered integral becomes l chained passes over one shared grid.
/// Panel boundaries are placed on caller-supplied breakpoints so that
/// integrands are smooth within every panel.
class PanelGrid {
public:
    /// `max_width` bounds every panel's length; `nodes_per_panel` >= 2.
    PanelGrid(double lo, double hi, std::span<const double> breakpoints, double max_width, int nodes_per_panel);

    /// Grid adapted to a profile: panels break at its corners and resolve
    /// oscillations of angular frequency up to `max_frequency`.
    static PanelGrid for_profile(const CouplingProfile& profile, double max_frequency, int nodes_per_panel,
                                 int refinement = 1);

    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t panels() const noexcept { return panel_count_; }
    int nodes_per_panel() const noexcept { return nodes_per_panel_; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    /// Cumulative integral of node samples (complex or real). Last entry is
    /// the integral over the whole interval.
    Eigen::VectorXcd cumulate(const Eigen::VectorXcd& values) const;
    Eigen::VectorXd cumulate(const Eigen::VectorXd& values) const;

private:
    template <typename Vec>
    Vec cumulate_impl(const Vec& values) const;

    int nodes_per_panel_;
    std::size_t panel_count_ = 0;
    std::vector<double> nodes_;
    std::vector<double> half_widths_;
    Eigen::MatrixXd integration_;  // on [-1, 1], ascending nodes
};

/// Indefinite-integration matrix on ascending Chebyshev-Lobatto points of [-1, 1].
Eigen::MatrixXd chebyshev_integration_matrix(int points);

}  // namespace protmeas
