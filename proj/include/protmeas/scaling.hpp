#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "protmeas/coupling_profile.hpp"

namespace protmeas {

struct ScanSample {
    double x = 0.0;  // omega_mn T
    double y = 0.0;  // transition probability per unit a^2
};

struct ExponentFit {
    /// Decay exponent: y ~ x^-beta.
    double beta = 0.0;
    double stderr_beta = 0.0;
    double log_prefactor = 0.0;
    std::size_t samples = 0;
};

struct ScanResult {
    ProfileKind kind = ProfileKind::Boxcar;
    double turn_on_fraction = 0.5;
    double coupling_weight = 1.0;  // |<m|O|n>|^2
    double x_lo = 0.0;
    double x_hi = 0.0;
    std::vector<ScanSample> samples;
    /// Exact antinodes inside [x_lo, x_hi]; empty for kinds without closed-form antinodes.
    std::vector<ScanSample> envelope;
    std::optional<ExponentFit> fit;
    double fwhm = 0.0;
};

inline constexpr double kMaxScanX = 1e4;
inline constexpr int kMinScanPoints = 50;
inline constexpr std::size_t kMinAntinodes = 8;

/// Antinode positions of |g~|^2 in [lo, hi]: (2k+1) pi for Boxcar and
/// RaisedCosine, (4k+2) pi for Triangle, none otherwise.
std::vector<double> antinodes(ProfileKind kind, double lo, double hi);

/// Samples coupling_weight * |g~(x)|^2 on `points` equally spaced x plus the
/// exact antinodes, and fills in the FWHM.
ScanResult probability_scan(double coupling_weight, ProfileKind kind, double x_lo, double x_hi, int points,
                            double turn_on_fraction = 0.5);

/// Ordinary least squares of log y against log x.
ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y);

/// Fit on antinodes with x >= x_min; needs at least 8 of them.
ExponentFit fit_envelope_exponent(const ScanResult& scan, double x_min);

struct FwhmResult {
    double width = 0.0;
    int iterations = 0;
};

/// Full width of the central peak of |g~(x)|^2 at half maximum.
FwhmResult fwhm_search(ProfileKind kind, double turn_on_fraction = 0.5, double tol = 1e-6);
double fwhm(ProfileKind kind, double turn_on_fraction = 0.5);

struct Table1Row {
    ProfileKind kind = ProfileKind::Boxcar;
    std::optional<ExponentFit> fit;
    std::optional<double> fwhm;
    double expected_beta = 0.0;
    double beta_tolerance = 0.0;
    double expected_fwhm = 0.0;
    double fwhm_tolerance = 0.02;
    bool beta_pass = false;
    bool fwhm_pass = false;
    /// Standard error above the flag threshold or x_min below the asymptotic regime.
    bool flagged = false;
    std::string error;

    bool pass() const { return beta_pass && fwhm_pass && error.empty(); }
};

struct Table1Report {
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<Table1Row> rows;

    bool pass() const;
};

inline constexpr double kTable1XMax = 400.0 * 3.14159265358979323846;
inline constexpr double kStderrFlag = 0.02;

/// Envelope exponents and FWHM for the requested profiles (Boxcar, Triangle,
/// RaisedCosine) against the reference table. Row failures are recorded in
/// the row and do not abort the others.
Table1Report table1_report(double x_min, std::span<const ProfileKind> profiles, double x_max = kTable1XMax,
                           int points = 2000);
Table1Report table1_report(double x_min);

}  // namespace protmeas
