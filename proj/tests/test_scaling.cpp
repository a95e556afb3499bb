#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "protmeas/errors.hpp"
#include "protmeas/scaling.hpp"

using namespace protmeas;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("scan: boxcar antinodes sit on (2/x)^2") {
    const auto scan = probability_scan(0.64, ProfileKind::Boxcar, 0.0, 100.0 * kPi, 500);
    CHECK(scan.envelope.size() == 50);
    for (const auto& s : scan.envelope) CHECK(s.y == doctest::Approx(0.64 * 4.0 / (s.x * s.x)).epsilon(1e-12));
    CHECK(scan.samples.front().x == 0.0);
    CHECK(scan.samples.front().y == doctest::Approx(0.64));
    CHECK(scan.fwhm > 0.0);
    CHECK(std::is_sorted(scan.samples.begin(), scan.samples.end(),
                         [](const ScanSample& a, const ScanSample& b) { return a.x < b.x; }));
}

TEST_CASE("scan: every profile starts at the coupling weight") {
    for (auto kind : {ProfileKind::Boxcar, ProfileKind::Trapezoid, ProfileKind::Triangle, ProfileKind::RaisedCosine}) {
        const auto scan = probability_scan(0.3, kind, 0.0, 1e-3, 50, 0.2);
        for (const auto& s : scan.samples) CHECK(s.y == doctest::Approx(0.3).epsilon(1e-7));
    }
}

TEST_CASE("scan: envelope is a subset of the samples") {
    for (auto kind : {ProfileKind::Boxcar, ProfileKind::Triangle, ProfileKind::RaisedCosine}) {
        const auto scan = probability_scan(1.0, kind, 5.0, 300.0, 120);
        CHECK_FALSE(scan.envelope.empty());
        for (const auto& e : scan.envelope) {
            const bool present = std::any_of(scan.samples.begin(), scan.samples.end(),
                                             [&](const ScanSample& s) { return s.x == e.x && s.y == e.y; });
            CHECK(present);
            CHECK(e.x >= 5.0);
            CHECK(e.x <= 300.0);
        }
    }
    CHECK(probability_scan(1.0, ProfileKind::Trapezoid, 0.0, 100.0, 50, 0.2).envelope.empty());
}

TEST_CASE("raised-cosine envelope lies below the boxcar envelope") {
    const auto box = probability_scan(1.0, ProfileKind::Boxcar, 2.0 * kPi, 400.0 * kPi, 100);
    const auto rc = probability_scan(1.0, ProfileKind::RaisedCosine, 2.0 * kPi, 400.0 * kPi, 100);
    REQUIRE(box.envelope.size() == rc.envelope.size());
    for (std::size_t i = 0; i < box.envelope.size(); ++i) {
        CHECK(rc.envelope[i].x == box.envelope[i].x);
        CHECK(rc.envelope[i].y < box.envelope[i].y);
    }
}

TEST_CASE("antinode placement") {
    const auto box = antinodes(ProfileKind::Boxcar, 0.0, 10.0 * kPi);
    REQUIRE(box.size() == 5);
    CHECK(box[0] == doctest::Approx(kPi));
    CHECK(box[4] == doctest::Approx(9.0 * kPi));
    const auto tri = antinodes(ProfileKind::Triangle, 0.0, 20.0 * kPi);
    REQUIRE(tri.size() == 5);
    CHECK(tri[1] == doctest::Approx(6.0 * kPi));
    CHECK(antinodes(ProfileKind::Trapezoid, 0.0, 100.0).empty());
}

TEST_CASE("scan validation") {
    CHECK_THROWS_AS((void)probability_scan(1.0, ProfileKind::Boxcar, 0.0, 2e4, 100), ValidationError);
    CHECK_THROWS_AS((void)probability_scan(1.0, ProfileKind::Boxcar, -1.0, 10.0, 100), ValidationError);
    CHECK_THROWS_AS((void)probability_scan(1.0, ProfileKind::Boxcar, 0.0, 10.0, 49), ValidationError);
    CHECK_THROWS_AS((void)probability_scan(1.0, ProfileKind::Sampled, 0.0, 10.0, 100), UnsupportedProfileError);
}

TEST_CASE("power-law fit recovers synthetic exponents") {
    for (double beta : {2.0, 4.0, 6.0}) {
        std::vector<double> x;
        std::vector<double> y;
        for (int k = 10; k < 60; ++k) {
            x.push_back((2 * k + 1) * kPi);
            y.push_back(3.7 * std::pow(x.back(), -beta));
        }
        const auto fit = fit_power_law(x, y);
        CHECK(std::abs(fit.beta - beta) <= 1e-6);
        CHECK(fit.stderr_beta <= 1e-6);
        CHECK(fit.log_prefactor == doctest::Approx(std::log(3.7)).epsilon(1e-9));
        CHECK(fit.samples == 50);
    }
    const double x[] = {1.0, 2.0};
    const double y[] = {1.0, 0.5};
    CHECK_THROWS_AS((void)fit_power_law(x, y), InsufficientDataError);
    const double xs[] = {1.0, 2.0, 3.0};
    const double ys[] = {1.0, 0.0, 0.5};
    CHECK_THROWS_AS((void)fit_power_law(xs, ys), DomainError);
}

TEST_CASE("envelope exponents at the default window") {
    const double expected[] = {2.0, 4.0, 6.0};
    const double tolerance[] = {0.05, 0.10, 0.15};
    const ProfileKind kinds[] = {ProfileKind::Boxcar, ProfileKind::Triangle, ProfileKind::RaisedCosine};
    for (int i = 0; i < 3; ++i) {
        const auto scan = probability_scan(1.0, kinds[i], 0.0, kTable1XMax, 2000);
        const auto fit = fit_envelope_exponent(scan, 20.0 * kPi);
        CHECK(std::abs(fit.beta - expected[i]) <= tolerance[i]);
        CHECK(fit.stderr_beta >= 0.0);
        CHECK(fit.samples >= kMinAntinodes);
    }
}

TEST_CASE("envelope fit needs eight antinodes") {
    const auto scan = probability_scan(1.0, ProfileKind::Boxcar, 0.0, 16.0 * kPi, 100);
    CHECK(scan.envelope.size() == 8);
    CHECK_NOTHROW((void)fit_envelope_exponent(scan, 0.0));
    CHECK_THROWS_AS((void)fit_envelope_exponent(scan, 2.0 * kPi), InsufficientDataError);
}

TEST_CASE("FWHM values and bisection cost") {
    const auto box = fwhm_search(ProfileKind::Boxcar);
    const auto tri = fwhm_search(ProfileKind::Triangle);
    const auto rc = fwhm_search(ProfileKind::RaisedCosine);
    CHECK(std::abs(box.width - 5.57) <= 0.02);
    CHECK(std::abs(tri.width - 8.00) <= 0.02);
    CHECK(std::abs(rc.width - 9.06) <= 0.02);
    // High-precision half-power widths, to the bisection tolerance.
    CHECK(std::abs(box.width - 5.5662295) <= 2e-6);
    CHECK(std::abs(tri.width - 8.0152509) <= 2e-6);
    CHECK(std::abs(rc.width - 9.0514473) <= 2e-6);
    for (const auto& r : {box, tri, rc}) {
        CHECK(r.iterations <= 40);
        CHECK(r.iterations > 0);
    }
    CHECK(fwhm(ProfileKind::Boxcar) == box.width);
    CHECK(fwhm(ProfileKind::Trapezoid, 0.5) == doctest::Approx(tri.width).epsilon(1e-9));
    CHECK_THROWS_AS((void)fwhm(ProfileKind::Sampled), UnsupportedProfileError);
}

TEST_CASE("table1 default run") {
    const auto report = table1_report(20.0 * kPi);
    CHECK(report.pass());
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        CHECK(row.error.empty());
        CHECK_FALSE(row.flagged);
        REQUIRE(row.fit.has_value());
        REQUIRE(row.fwhm.has_value());
    }
    CHECK(report.rows[0].expected_fwhm == 5.56);
    CHECK(report.rows[1].expected_beta == 4.0);
    CHECK(report.rows[2].beta_tolerance == 0.15);
}

TEST_CASE("table1 flags a window that reaches into the central peak") {
    const auto wide = table1_report(20.0 * kPi);
    const auto narrow = table1_report(kPi);
    for (const auto& row : narrow.rows) CHECK(row.flagged);
    // Raised cosine: near-peak antinodes bend the fit.
    const auto& near = *narrow.rows[2].fit;
    const auto& far = *wide.rows[2].fit;
    CHECK(near.stderr_beta > 10.0 * far.stderr_beta);
    CHECK(std::abs(near.beta - 6.0) > 5.0 * std::abs(far.beta - 6.0));
}

TEST_CASE("table1 row failures stay local") {
    const ProfileKind kinds[] = {ProfileKind::Boxcar, ProfileKind::Triangle};
    // Above 385 pi the boxcar keeps 8 antinodes and the triangle only 4.
    const auto report = table1_report(385.0 * kPi, kinds);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].error.empty());
    CHECK(report.rows[0].fit.has_value());
    CHECK_FALSE(report.rows[1].error.empty());
    CHECK_FALSE(report.rows[1].fit.has_value());
    CHECK(report.rows[1].fwhm.has_value());
    CHECK_FALSE(report.pass());
    CHECK_THROWS_AS((void)table1_report(20.0 * kPi, std::span<const ProfileKind>{}), ValidationError);
}
