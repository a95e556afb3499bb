#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "protmeas/errors.hpp"
#include "protmeas/panel_integrator.hpp"
#include "protmeas/quadrature.hpp"

using namespace protmeas;

TEST_CASE("Gauss-Kronrod integrates smooth and kinked integrands") {
    auto r = quad::integrate<double>([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));

    // |x| has a kink at 0; a breakpoint there makes it exact on both panels.
    const double bp[] = {0.0};
    auto k = quad::integrate<double>([](double x) { return std::abs(x); }, -1.0, 2.0, bp);
    CHECK(k.value == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(k.panels == 2);

    auto c = quad::integrate<std::complex<double>>([](double t) { return std::polar(1.0, 40.0 * t); }, 0.0, 1.0,
                                                   {}, 8);
    const std::complex<double> expected = (std::polar(1.0, 40.0) - 1.0) / std::complex<double>(0.0, 40.0);
    CHECK(std::abs(c.value - expected) < 1e-12);
}

TEST_CASE("quadrature reports non-convergence with its estimate") {
    auto spiky = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
    try {
        (void)quad::integrate<double>(spiky, 0.0, 1.0, {}, 1, 1e-14, 32);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(e.estimate() > 1e-14);
    }
}

TEST_CASE("Chebyshev integration matrix is exact for polynomials") {
    const auto S = chebyshev_integration_matrix(9);
    Eigen::VectorXd f(9);
    Eigen::VectorXd expected(9);
    for (int i = 0; i < 9; ++i) {
        const double x = -std::cos(i * std::numbers::pi / 8.0);
        f(i) = 5.0 * std::pow(x, 4) - 3.0 * x + 1.0;
        expected(i) = (std::pow(x, 5) + 1.0) - 1.5 * (x * x - 1.0) + (x + 1.0);
    }
    CHECK((S * f - expected).cwiseAbs().maxCoeff() < 1e-13);
    CHECK_THROWS_AS((void)chebyshev_integration_matrix(1), ValidationError);
}

TEST_CASE("panel grid cumulates across panels and breakpoints") {
    const double bp[] = {0.25, 0.5};
    PanelGrid grid(-1.0, 1.0, bp, 0.3, 16);
    CHECK(grid.panels() >= 7);
    Eigen::VectorXcd f(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) f(static_cast<Eigen::Index>(i)) = std::polar(1.0, 7.0 * grid.nodes()[i]);
    const auto F = grid.cumulate(f);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.nodes()[i];
        const std::complex<double> exact = (std::polar(1.0, 7.0 * t) - std::polar(1.0, -7.0)) / std::complex<double>(0.0, 7.0);
        CHECK(std::abs(F(static_cast<Eigen::Index>(i)) - exact) < 1e-13);
    }
    CHECK_THROWS_AS((void)grid.cumulate(Eigen::VectorXcd(Eigen::VectorXcd::Zero(3))), ValidationError);
}
