#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace gfe {

/// A function f on (0, inf) used as a semigroup argument or occupation
/// functional. Besides pointwise evaluation it knows where it is not smooth
/// (breakpoints in log-mass) so segment integrals can be split there, and it
/// evaluates f(x)/x stably in log-mass for masses far outside double range.
class TestFunction {
public:
    enum class Kind { Zero, Identity, Bump, Power, Indicator, Custom };

    static TestFunction zero();
    /// f(x) = x.
    static TestFunction identity();
    /// C-infinity bump exp(1 - 1/(1 - s^2)), s = log(x/center)/width, on |s| < 1.
    static TestFunction bump(double center, double width);
    /// f(x) = x^theta.
    static TestFunction power(double theta);
    /// Indicator of [lo, hi) in mass; hi may be +inf.
    static TestFunction indicator(double lo, double hi);
    /// Arbitrary callable; `log_breakpoints` lists log-masses where it is not smooth,
    /// `log_support` bounds its support in log-mass (use +-inf when unbounded).
    static TestFunction custom(std::function<double(double)> fn, std::vector<double> log_breakpoints,
                               double log_support_lo, double log_support_hi, std::string name);

    /// Parses `id`, `zero`, `power:THETA`, `indicator:LO;HI`, `bump:C;W` and
    /// `bump:center,C;width,W`.
    static TestFunction parse(std::string_view text);

    double operator()(double x) const;
    /// f(e^z), valid for any finite z.
    double at_log(double z) const;
    /// f(e^z) * e^{-z}.
    double over_mass_at_log(double z) const;

    /// Scaled copy, c * f.
    TestFunction scaled(double factor) const;

    Kind kind() const noexcept { return kind_; }
    double log_support_lo() const noexcept { return support_lo_; }
    double log_support_hi() const noexcept { return support_hi_; }
    /// Sorted log-mass points where f is not smooth (support ends included).
    const std::vector<double>& log_breakpoints() const noexcept { return breakpoints_; }
    const std::string& name() const noexcept { return name_; }

private:
    TestFunction() = default;

    Kind kind_ = Kind::Zero;
    double p0_ = 0.0;
    double p1_ = 0.0;
    double scale_ = 1.0;
    double support_lo_ = 0.0;
    double support_hi_ = 0.0;
    std::vector<double> breakpoints_;
    std::function<double(double)> custom_;
    std::string name_;
};

}  // namespace gfe
