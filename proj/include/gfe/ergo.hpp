#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gfe/model.hpp"

/// Foster-Lyapunov drift checks for exponential ergodicity of X.
namespace gfe::ergo {

/// V(x) = x^-B for x <= 1, x^A for x >= 2, and exp of a C2 quintic in log x
/// in between (matching value, slope and zero curvature at both ends).
class LyapunovSpec {
public:
    LyapunovSpec(double A, double B);

    double A() const noexcept { return A_; }
    double B() const noexcept { return B_; }
    /// log V as a function of z = log x.
    double log_value(double z) const;
    /// d log V / dz.
    double log_slope(double z) const;
    double value(double x) const;
    /// dV/dx.
    double derivative(double x) const;

private:
    double A_;
    double B_;
};

/// K(x) ~ beta0 x^gamma0 as x -> 0 and ~ beta_inf x^gamma_inf as x -> inf.
struct RateAsymptotics {
    double beta0 = 0.0;
    double gamma0 = 0.0;
    double beta_inf = 0.0;
    double gamma_inf = 0.0;
};

RateAsymptotics rate_asymptotics(const Model& model);

struct AssumptionReport {
    double A = 0.0;
    double B = 0.0;
    double M_A = 0.0;
    double M_minus_B = 0.0;
    RateAsymptotics rates;
    double a0 = 0.0;    ///< c(x)/x near 0
    double ainf = 0.0;  ///< c(x)/x near infinity

    // rate inequalities of the sufficient condition
    bool rate_moment_A = false;   ///< M(A) < 1
    bool rate_gamma_inf = false;  ///< gamma_inf = 0
    bool rate_tail = false;       ///< a / beta_inf < (1 - M(A)) / A
    bool rate_small = false;      ///< gamma0 > 0, or gamma0 = 0 and a / beta0 < (M(-B) - 1) / B
    bool rate_conditions = false;

    // limits of GV/V from the generator itself
    double brace_inf = 0.0;   ///< a A + beta_inf (M(A) - 1)
    double brace_zero = 0.0;  ///< -a B + beta0 (M(-B) - 1) when gamma0 = 0, -a B otherwise
    bool drift_tail = false;
    bool drift_small = false;
    bool drift_conditions = false;

    /// Small-x rate inequality and the drift sign disagree.
    bool direction_discrepancy = false;
    std::string note;
};

/// Throws MomentDiverged when M(-B) is infinite.
AssumptionReport check_assumptions(const Model& model, double A, double B);

/// G V(x) = c(x) V'(x) + K(x) int_0^1 (V(xv) - V(x)) q(v) dv.
double generator_of_V(const Model& model, const LyapunovSpec& V, double x);
/// G V(x) / V(x), evaluated without forming V.
double drift_ratio(const Model& model, const LyapunovSpec& V, double x);

struct DriftOptions {
    double grid_lo = 1e-4;
    double grid_hi = 1e4;
    int grid_points = 2001;
    /// Compact centre where delta absorbs the drift; chosen from the brace limits when absent.
    std::optional<double> center_lo;
    std::optional<double> center_hi;
};

struct DriftReport {
    std::vector<double> x;
    std::vector<double> ratio;  ///< GV/V
    double center_lo = 0.0;
    double center_hi = 0.0;
    bool certified = false;
    double alpha = 0.0;
    double delta = 0.0;
    /// Grid nodes outside the centre where GV/V >= 0 (empty when certified).
    std::vector<double> violations;
    std::string note;
};

DriftReport drift_profile(const Model& model, const LyapunovSpec& V, const DriftOptions& options = {});

}  // namespace gfe::ergo
