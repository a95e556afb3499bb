#include "protmeas/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "protmeas/errors.hpp"

namespace protmeas {

namespace {

constexpr double kPi = std::numbers::pi;

double probability(ProfileKind kind, double x, double turn_on_fraction) {
    const double g = normalized_transform(kind, x, turn_on_fraction);
    return g * g;
}

struct Reference {
    double beta;
    double beta_tol;
    double fwhm;
};

Reference reference_for(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::Boxcar: return {2.0, 0.05, 5.56};
        case ProfileKind::Triangle: return {4.0, 0.10, 8.00};
        case ProfileKind::RaisedCosine: return {6.0, 0.15, 9.06};
        default: break;
    }
    throw ValidationError("no reference values for profile '" + std::string(to_string(kind)) + "'");
}

}  // namespace

std::vector<double> antinodes(ProfileKind kind, double lo, double hi) {
    double first = 0.0;
    double step = 0.0;
    switch (kind) {
        case ProfileKind::Boxcar:
        case ProfileKind::RaisedCosine:
            first = kPi;
            step = 2.0 * kPi;
            break;
        case ProfileKind::Triangle:
            first = 2.0 * kPi;
            step = 4.0 * kPi;
            break;
        default: return {};
    }
    std::vector<double> out;
    const double k0 = std::max(0.0, std::ceil((lo - first) / step - 1e-12));
    for (double k = k0;; k += 1.0) {
        const double x = first + k * step;
        if (x > hi * (1.0 + 1e-14)) break;
        out.push_back(x);
    }
    return out;
}

ScanResult probability_scan(double coupling_weight, ProfileKind kind, double x_lo, double x_hi, int points,
                            double turn_on_fraction) {
    if (kind == ProfileKind::Sampled) throw UnsupportedProfileError("scans need an analytic profile kind");
    if (!(x_lo >= 0.0) || !(x_hi <= kMaxScanX) || !(x_hi > x_lo))
        throw ValidationError("scan range must satisfy 0 <= x_lo < x_hi <= 1e4");
    if (points < kMinScanPoints)
        throw ValidationError("scan needs at least " + std::to_string(kMinScanPoints) + " points");

    ScanResult scan;
    scan.kind = kind;
    scan.turn_on_fraction = turn_on_fraction;
    scan.coupling_weight = coupling_weight;
    scan.x_lo = x_lo;
    scan.x_hi = x_hi;
    scan.samples.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (points - 1);
        scan.samples.push_back({x, coupling_weight * probability(kind, x, turn_on_fraction)});
    }
    for (double x : antinodes(kind, x_lo, x_hi)) {
        const ScanSample s{x, coupling_weight * probability(kind, x, turn_on_fraction)};
        scan.envelope.push_back(s);
        scan.samples.push_back(s);
    }
    std::stable_sort(scan.samples.begin(), scan.samples.end(),
                     [](const ScanSample& a, const ScanSample& b) { return a.x < b.x; });
    scan.fwhm = fwhm(kind, turn_on_fraction);
    return scan;
}

ExponentFit fit_power_law(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ValidationError("fit needs matching x and y arrays");
    if (x.size() < 3) throw InsufficientDataError("power-law fit needs at least 3 points");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("power-law fit needs positive samples");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (!(sxx > 0.0)) throw DomainError("power-law fit needs at least two distinct x values");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - (intercept + slope * std::log(x[i]));
        ssr += r * r;
    }
    ExponentFit fit;
    fit.beta = -slope;
    fit.stderr_beta = std::sqrt(ssr / (n - 2.0) / sxx);
    fit.log_prefactor = intercept;
    fit.samples = x.size();
    return fit;
}

ExponentFit fit_envelope_exponent(const ScanResult& scan, double x_min) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : scan.envelope) {
        if (s.x < x_min) continue;
        xs.push_back(s.x);
        ys.push_back(s.y);
    }
    if (xs.size() < kMinAntinodes)
        throw InsufficientDataError("only " + std::to_string(xs.size()) + " antinodes with x >= " +
                                    std::to_string(x_min) + " (need " + std::to_string(kMinAntinodes) + ")");
    return fit_power_law(xs, ys);
}

FwhmResult fwhm_search(ProfileKind kind, double turn_on_fraction, double tol) {
    if (kind == ProfileKind::Sampled) throw UnsupportedProfileError("FWHM needs an analytic profile kind");
    auto excess = [&](double x) { return probability(kind, x, turn_on_fraction) - 0.5; };
    double lo = 0.0;
    double hi = 1.0;
    while (excess(hi) > 0.0) {
        lo = hi;
        hi += 1.0;
        if (hi > kMaxScanX) throw DomainError("no half-maximum crossing found");
    }
    FwhmResult out;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (excess(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        ++out.iterations;
    }
    out.width = lo + hi;  // twice the midpoint
    return out;
}

double fwhm(ProfileKind kind, double turn_on_fraction) { return fwhm_search(kind, turn_on_fraction).width; }

bool Table1Report::pass() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Table1Row& r) { return r.pass(); });
}

Table1Report table1_report(double x_min, std::span<const ProfileKind> profiles, double x_max, int points) {
    if (profiles.empty()) throw ValidationError("table1 needs at least one profile");
    Table1Report report;
    report.x_min = x_min;
    report.x_max = x_max;
    for (ProfileKind kind : profiles) {
        Table1Row row;
        row.kind = kind;
        try {
            const auto ref = reference_for(kind);
            row.expected_beta = ref.beta;
            row.beta_tolerance = ref.beta_tol;
            row.expected_fwhm = ref.fwhm;
            const auto scan = probability_scan(1.0, kind, 0.0, x_max, points);
            row.fwhm = scan.fwhm;
            row.fwhm_pass = std::abs(scan.fwhm - ref.fwhm) <= row.fwhm_tolerance;
            row.fit = fit_envelope_exponent(scan, x_min);
            row.beta_pass = std::abs(row.fit->beta - ref.beta) <= ref.beta_tol;
            row.flagged = row.fit->stderr_beta > kStderrFlag || x_min < 4.0 * kPi;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

Table1Report table1_report(double x_min) {
    static constexpr ProfileKind kinds[] = {ProfileKind::Boxcar, ProfileKind::Triangle, ProfileKind::RaisedCosine};
    return table1_report(x_min, kinds);
}

}  // namespace protmeas
