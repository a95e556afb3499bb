#include "protmeas/coupling_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "protmeas/errors.hpp"
#include "protmeas/quadrature.hpp"

namespace protmeas {

namespace {

constexpr double kPi = std::numbers::pi;

// Raised-cosine transform sinc(x/2) / (1 - (x/2pi)^2). Near |x| = 2pi the
// quotient is rewritten with d = |x|/2 - pi as pi^2 sinc(d) / ((pi+d)(2pi+d))
// and sinc(d) is expanded to four terms.
double raised_cosine_transform(double x) {
    const double ax = std::abs(x);
    if (std::abs(ax / (2.0 * kPi) - 1.0) < 1e-4) {
        const double d = 0.5 * ax - kPi;
        const double d2 = d * d;
        const double series = 1.0 - d2 / 6.0 + d2 * d2 / 120.0 - d2 * d2 * d2 / 5040.0;
        return kPi * kPi * series / ((kPi + d) * (2.0 * kPi + d));
    }
    const double r = ax / (2.0 * kPi);
    return sinc(0.5 * ax) / (1.0 - r * r);
}

void require_duration(double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration))
        throw ValidationError("profile duration must be positive and finite, got " + std::to_string(duration));
}

}  // namespace

std::string_view to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::Boxcar: return "boxcar";
        case ProfileKind::Trapezoid: return "trapezoid";
        case ProfileKind::Triangle: return "triangle";
        case ProfileKind::RaisedCosine: return "raised-cosine";
        case ProfileKind::Sampled: return "sampled";
    }
    return "unknown";
}

ProfileKind parse_profile_kind(std::string_view name) {
    if (name == "boxcar" || name == "constant") return ProfileKind::Boxcar;
    if (name == "trapezoid") return ProfileKind::Trapezoid;
    if (name == "triangle") return ProfileKind::Triangle;
    if (name == "raised-cosine" || name == "raised_cosine") return ProfileKind::RaisedCosine;
    if (name == "sampled") return ProfileKind::Sampled;
    throw ValidationError("unknown profile kind '" + std::string(name) + "'");
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double normalized_transform(ProfileKind kind, double x, double turn_on_fraction) {
    switch (kind) {
        case ProfileKind::Boxcar: return sinc(0.5 * x);
        case ProfileKind::Trapezoid:
            return sinc(0.5 * x * turn_on_fraction) * sinc(0.5 * x * (1.0 - turn_on_fraction));
        case ProfileKind::Triangle: {
            const double s = sinc(0.25 * x);
            return s * s;
        }
        case ProfileKind::RaisedCosine: return raised_cosine_transform(x);
        case ProfileKind::Sampled: break;
    }
    throw UnsupportedProfileError("sampled profiles have no analytic transform; use numeric_fourier_transform");
}

CouplingProfile::CouplingProfile(ProfileKind kind, double duration) : kind_(kind), duration_(duration) {}

CouplingProfile CouplingProfile::boxcar(double duration) {
    require_duration(duration);
    return {ProfileKind::Boxcar, duration};
}

CouplingProfile CouplingProfile::trapezoid(double duration, double turn_on_fraction) {
    require_duration(duration);
    if (!(turn_on_fraction > 0.0 && turn_on_fraction <= 0.5))
        throw ValidationError("trapezoid turn_on_fraction must lie in (0, 1/2], got " +
                              std::to_string(turn_on_fraction));
    CouplingProfile p{ProfileKind::Trapezoid, duration};
    p.turn_on_fraction_ = turn_on_fraction;
    return p;
}

CouplingProfile CouplingProfile::triangle(double duration) {
    require_duration(duration);
    CouplingProfile p{ProfileKind::Triangle, duration};
    p.turn_on_fraction_ = 0.5;
    return p;
}

CouplingProfile CouplingProfile::raised_cosine(double duration) {
    require_duration(duration);
    return {ProfileKind::RaisedCosine, duration};
}

CouplingProfile CouplingProfile::sampled(std::vector<double> times, std::vector<double> values) {
    if (times.size() != values.size())
        throw ValidationError("sampled profile: time and value columns differ in length");
    if (times.size() < 2) throw ValidationError("sampled profile needs at least two samples");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || !std::isfinite(values[i]))
            throw ValidationError("sampled profile: non-finite sample at row " + std::to_string(i));
        if (values[i] < 0.0)
            throw ValidationError("sampled profile: negative coupling at row " + std::to_string(i));
        if (i > 0 && !(times[i] > times[i - 1]))
            throw ValidationError("sampled profile: time points must be strictly increasing (row " +
                                  std::to_string(i) + ")");
    }

    const double centre = 0.5 * (times.front() + times.back());
    for (double& t : times) t -= centre;
    const double duration = times.back() - times.front();
    require_duration(duration);

    std::vector<double> prefix(times.size(), 0.0);
    for (std::size_t i = 1; i < times.size(); ++i)
        prefix[i] = prefix[i - 1] + 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    const double total = prefix.back();
    if (!(total > 0.0)) throw ValidationError("sampled profile has zero area");
    for (double& v : values) v /= total;
    for (double& a : prefix) a /= total;

    CouplingProfile p{ProfileKind::Sampled, duration};
    p.times_ = std::move(times);
    p.values_ = std::move(values);
    p.prefix_area_ = std::move(prefix);

    const double peak = *std::max_element(p.values_.begin(), p.values_.end());
    for (double t : p.times_) {
        if (std::abs(p.unit_value(t) - p.unit_value(-t)) > 1e-9 * peak) {
            p.even_ = false;
            break;
        }
    }
    return p;
}

CouplingProfile CouplingProfile::scaled(double area) const {
    if (!(area > 0.0) || !std::isfinite(area))
        throw ValidationError("profile area must be positive and finite");
    CouplingProfile copy = *this;
    copy.area_ = area;
    return copy;
}

CouplingProfile CouplingProfile::with_duration(double duration) const {
    require_duration(duration);
    if (kind_ == ProfileKind::Sampled) {
        const double factor = duration / duration_;
        std::vector<double> t = times_;
        std::vector<double> v = values_;
        for (double& x : t) x *= factor;
        return sampled(std::move(t), std::move(v)).scaled(area_);
    }
    CouplingProfile copy = *this;
    copy.duration_ = duration;
    return copy;
}

std::string CouplingProfile::name() const {
    std::string n{to_string(kind_)};
    if (kind_ == ProfileKind::Trapezoid) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "(%g)", turn_on_fraction_);
        n += buf;
    }
    return n;
}

double CouplingProfile::unit_value(double t) const {
    const double half = 0.5 * duration_;
    if (t < -half || t > half) return 0.0;
    switch (kind_) {
        case ProfileKind::Boxcar: return 1.0 / duration_;
        case ProfileKind::Trapezoid:
        case ProfileKind::Triangle: {
            const double ramp = turn_on_fraction_ * duration_;
            const double height = 1.0 / (duration_ - ramp);
            const double from_edge = half - std::abs(t);
            return from_edge >= ramp ? height : height * from_edge / ramp;
        }
        case ProfileKind::RaisedCosine: return (1.0 + std::cos(2.0 * kPi * t / duration_)) / duration_;
        case ProfileKind::Sampled: {
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            if (it == times_.end()) return values_.back();
            const auto hi = static_cast<std::size_t>(it - times_.begin());
            if (hi == 0) return values_.front();
            const std::size_t lo = hi - 1;
            const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
            return values_[lo] + w * (values_[hi] - values_[lo]);
        }
    }
    return 0.0;
}

double CouplingProfile::unit_cumulative(double t) const {
    const double half = 0.5 * duration_;
    if (t <= -half) return 0.0;
    if (t >= half) return 1.0;
    const double s = t + half;
    switch (kind_) {
        case ProfileKind::Boxcar: return s / duration_;
        case ProfileKind::Trapezoid:
        case ProfileKind::Triangle: {
            const double ramp = turn_on_fraction_ * duration_;
            const double height = 1.0 / (duration_ - ramp);
            if (t > 0.0) return 1.0 - unit_cumulative(-t);
            if (s <= ramp) return 0.5 * height * s * s / ramp;
            return height * (0.5 * ramp + (s - ramp));
        }
        case ProfileKind::RaisedCosine:
            return s / duration_ + std::sin(2.0 * kPi * t / duration_) / (2.0 * kPi);
        case ProfileKind::Sampled: {
            const auto it = std::upper_bound(times_.begin(), times_.end(), t);
            const auto hi = static_cast<std::size_t>(it - times_.begin());
            const std::size_t lo = hi - 1;
            const double v = unit_value(t);
            return prefix_area_[lo] + 0.5 * (t - times_[lo]) * (values_[lo] + v);
        }
    }
    return 0.0;
}

double CouplingProfile::operator()(double t) const { return area_ * unit_value(t); }

double CouplingProfile::cumulative_area(double t) const { return area_ * unit_cumulative(t); }

std::vector<double> CouplingProfile::corner_points() const {
    const double half = 0.5 * duration_;
    switch (kind_) {
        case ProfileKind::Boxcar:
        case ProfileKind::RaisedCosine: return {-half, half};
        case ProfileKind::Triangle: return {-half, 0.0, half};
        case ProfileKind::Trapezoid: {
            const double inner = half - turn_on_fraction_ * duration_;
            if (inner <= 0.0) return {-half, 0.0, half};
            return {-half, -inner, inner, half};
        }
        case ProfileKind::Sampled: return times_;
    }
    return {-half, half};
}

double CouplingProfile::fourier_transform(double omega) const {
    if (kind_ == ProfileKind::Sampled)
        throw UnsupportedProfileError("sampled profiles have no analytic transform; use numeric_fourier_transform");
    return area_ * normalized_transform(kind_, omega * duration_, turn_on_fraction_);
}

double CouplingProfile::numeric_fourier_transform(double omega) const {
    const auto corners = corner_points();
    const auto periods = static_cast<std::size_t>(std::ceil(std::abs(omega) * duration_ / (2.0 * kPi))) + 1;
    auto integrand = [&](double t) { return std::cos(omega * t) * (*this)(t); };
    const double half = 0.5 * duration_;
    return quad::integrate<double>(integrand, -half, half, corners, periods).value;
}

std::complex<double> CouplingProfile::transform(double omega) const {
    if (has_analytic_transform()) return {fourier_transform(omega), 0.0};
    const auto corners = corner_points();
    const auto periods = static_cast<std::size_t>(std::ceil(std::abs(omega) * duration_ / (2.0 * kPi))) + 1;
    auto integrand = [&](double t) { return std::polar((*this)(t), omega * t); };
    const double half = 0.5 * duration_;
    return quad::integrate<std::complex<double>>(integrand, -half, half, corners, periods).value;
}

}  // namespace protmeas
