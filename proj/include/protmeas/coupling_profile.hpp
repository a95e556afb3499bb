#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace protmeas {

enum class ProfileKind { Boxcar, Trapezoid, Triangle, RaisedCosine, Sampled };

std::string_view to_string(ProfileKind kind);
/// Accepts "boxcar"/"constant", "trapezoid", "triangle", "raised-cosine"/"raised_cosine", "sampled".
ProfileKind parse_profile_kind(std::string_view name);

double sinc(double x);

/// |g~| as a function of the dimensionless x = omega*T for the analytic kinds.
/// `turn_on_fraction` is only read for Trapezoid.
double normalized_transform(ProfileKind kind, double x, double turn_on_fraction = 0.5);

/// Time window g(t) of the system-apparatus coupling, supported on
/// [-T/2, T/2] with total area G (1 unless built through `scaled`).
///
/// Built-in kinds have closed-form values, cumulative areas and cosine
/// transforms. Sampled profiles interpolate linearly between samples, are
/// recentred onto [-T/2, T/2] and rescaled to unit trapezoidal area.
class CouplingProfile {
public:
    static CouplingProfile boxcar(double duration);
    static CouplingProfile trapezoid(double duration, double turn_on_fraction);
    static CouplingProfile triangle(double duration);
    static CouplingProfile raised_cosine(double duration);
    static CouplingProfile sampled(std::vector<double> times, std::vector<double> values);

    /// Same shape with total area `area` instead of 1.
    CouplingProfile scaled(double area) const;
    /// Same kind and shape parameters, new duration.
    CouplingProfile with_duration(double duration) const;

    ProfileKind kind() const noexcept { return kind_; }
    std::string name() const;
    double duration() const noexcept { return duration_; }
    double area() const noexcept { return area_; }
    double turn_on_fraction() const noexcept { return turn_on_fraction_; }
    bool has_analytic_transform() const noexcept { return kind_ != ProfileKind::Sampled; }
    /// False only for Sampled profiles that are not mirror-symmetric about t = 0.
    bool is_even() const noexcept { return even_; }

    /// g(t); exactly zero outside [-T/2, T/2].
    double operator()(double t) const;
    /// G(t) = integral of g from -T/2 to t.
    double cumulative_area(double t) const;
    /// Points where g is not smooth, including both ends of the support.
    std::vector<double> corner_points() const;

    /// Closed-form cosine transform; throws UnsupportedProfileError for Sampled.
    double fourier_transform(double omega) const;
    /// Adaptive-quadrature cosine transform (absolute tolerance 1e-10).
    double numeric_fourier_transform(double omega) const;
    /// Full transform integral of exp(i omega t) g(t): analytic where
    /// available (real for even kinds), quadrature otherwise.
    std::complex<double> transform(double omega) const;

    const std::vector<double>& sample_times() const noexcept { return times_; }
    const std::vector<double>& sample_values() const noexcept { return values_; }

private:
    CouplingProfile(ProfileKind kind, double duration);

    double unit_value(double t) const;
    double unit_cumulative(double t) const;

    ProfileKind kind_;
    double duration_;
    double area_ = 1.0;
    double turn_on_fraction_ = 0.0;
    bool even_ = true;
    std::vector<double> times_;
    std::vector<double> values_;
    std::vector<double> prefix_area_;
};

}  // namespace protmeas
