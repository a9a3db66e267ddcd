#include "gfe/ergo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gfe/quadrature.hpp"

namespace gfe::ergo {

namespace {

const double kBridge = std::numbers::ln2;  // V is a pure power outside [0, log 2] in log-mass

double safe_moment(const Model& model, double s) {
    try {
        return model.moment_sup(s);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Diverged) {
            fail(ErrorCode::MomentDiverged, "M(" + std::to_string(s) + ") is infinite");
        }
        throw;
    }
}

}  // namespace

LyapunovSpec::LyapunovSpec(double A, double B) : A_(A), B_(B) {
    if (!(A > 0.0) || !(B > 0.0)) fail(ErrorCode::InvalidParameter, "Lyapunov exponents must be positive");
}

double LyapunovSpec::log_value(double z) const {
    if (z <= 0.0) return -B_ * z;
    if (z >= kBridge) return A_ * z;
    const double L = kBridge;
    const double t = z / L;
    const double t3 = t * t * t;
    const double t4 = t3 * t;
    const double t5 = t4 * t;
    const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;   // slope at 0
    const double h4 = -4 * t3 + 7 * t4 - 3 * t5;      // slope at 1
    const double h5 = 10 * t3 - 15 * t4 + 6 * t5;     // value at 1
    return L * (-B_) * h1 + L * A_ * h4 + A_ * L * h5;
}

double LyapunovSpec::log_slope(double z) const {
    if (z <= 0.0) return -B_;
    if (z >= kBridge) return A_;
    const double L = kBridge;
    const double t = z / L;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double t4 = t3 * t;
    const double d1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
    const double d4 = -12 * t2 + 28 * t3 - 15 * t4;
    const double d5 = 30 * t2 - 60 * t3 + 30 * t4;
    return (-B_) * d1 + A_ * d4 + A_ * d5;
}

double LyapunovSpec::value(double x) const { return std::exp(log_value(std::log(x))); }

double LyapunovSpec::derivative(double x) const {
    const double z = std::log(x);
    return std::exp(log_value(z)) * log_slope(z) / x;
}

RateAsymptotics rate_asymptotics(const Model& model) {
    RateAsymptotics r;
    const auto& rate = model.spec().frag.rate;
    if (const auto* c = std::get_if<ConstantRate>(&rate)) {
        r.beta0 = r.beta_inf = c->b;
    } else {
        const auto& s = std::get<SaturatingRate>(rate);
        // b x^g / (1 + x^g): ~ b x^g at 0 and -> b at infinity
        r.beta0 = s.b;
        r.gamma0 = s.gamma0;
        r.beta_inf = s.b;
    }
    return r;
}

AssumptionReport check_assumptions(const Model& model, double A, double B) {
    if (!(A > 0.0) || !(B > 0.0)) fail(ErrorCode::InvalidParameter, "A and B must be positive");
    AssumptionReport r;
    r.A = A;
    r.B = B;
    r.M_A = safe_moment(model, A);
    r.M_minus_B = safe_moment(model, -B);
    r.rates = rate_asymptotics(model);
    const auto& grid = model.validation_grid();
    r.a0 = model.growth_per_mass(grid.front());
    r.ainf = model.growth_per_mass(grid.back());

    r.rate_moment_A = r.M_A < 1.0;
    r.rate_gamma_inf = r.rates.gamma_inf == 0.0;
    r.rate_tail = r.rates.beta_inf > 0.0 && r.ainf / r.rates.beta_inf < (1.0 - r.M_A) / A;
    if (r.rates.gamma0 > 0.0) {
        r.rate_small = true;
    } else {
        r.rate_small = r.rates.beta0 > 0.0 && r.a0 / r.rates.beta0 < (r.M_minus_B - 1.0) / B;
    }
    r.rate_conditions = r.rate_moment_A && r.rate_gamma_inf && r.rate_tail && r.rate_small;

    r.brace_inf = r.ainf * A + r.rates.beta_inf * (r.M_A - 1.0);
    r.brace_zero = -r.a0 * B + (r.rates.gamma0 > 0.0 ? 0.0 : r.rates.beta0 * (r.M_minus_B - 1.0));
    r.drift_tail = r.rates.gamma_inf == 0.0 && r.brace_inf < 0.0;
    r.drift_small = r.brace_zero < 0.0;
    r.drift_conditions = r.rate_moment_A && r.drift_tail && r.drift_small;

    r.direction_discrepancy = r.rate_small != r.drift_small;
    if (r.direction_discrepancy) {
        r.note =
            "small-x rate inequality a/beta0 < (M(-B)-1)/B disagrees with the sign of the drift "
            "brace -aB + beta0 (M(-B)-1); the drift sign is used for certification";
    }
    return r;
}

double drift_ratio(const Model& model, const LyapunovSpec& V, double x) {
    const double z = std::log(x);
    const double w_here = V.log_value(z);
    // Split v by where log(x v) falls: below 0 (x^-B branch), inside the bridge, above log 2.
    const double v_low = std::min(1.0, std::exp(-z));
    const double v_high = std::min(1.0, std::exp(kBridge - z));
    double integral = 0.0;
    if (v_low > 0.0) {
        // (x v)^-B / V(x)
        integral += std::exp(-V.B() * z - w_here) * model.partial_moment(-V.B(), 0.0, v_low);
    }
    if (v_high > v_low) {
        integral += quad::adaptive(
                        [&](double v) {
                            return std::exp(V.log_value(z + std::log(v)) - w_here) * model.ratio_density(v);
                        },
                        v_low, v_high, 1e-10)
                        .value;
    }
    if (v_high < 1.0) {
        integral += std::exp(V.A() * z - w_here) * model.partial_moment(V.A(), v_high, 1.0);
    }
    if (!std::isfinite(integral)) fail(ErrorCode::MomentDiverged, "int V(xv) q(v) dv diverges");
    return model.growth_per_mass(x) * V.log_slope(z) + model.jump_rate(x) * (integral - 1.0);
}

double generator_of_V(const Model& model, const LyapunovSpec& V, double x) {
    return V.value(x) * drift_ratio(model, V, x);
}

DriftReport drift_profile(const Model& model, const LyapunovSpec& V, const DriftOptions& options) {
    DriftReport rep;
    rep.x = log_spaced(options.grid_lo, options.grid_hi, options.grid_points);
    rep.ratio.reserve(rep.x.size());
    for (double x : rep.x) rep.ratio.push_back(drift_ratio(model, V, x));

    const double end_lo = rep.ratio.front();
    const double end_hi = rep.ratio.back();
    if (end_lo >= 0.0 || end_hi >= 0.0) {
        // No compact centre can absorb a non-negative drift at the ends.
        for (std::size_t i = 0; i < rep.x.size(); ++i) {
            if (rep.ratio[i] >= 0.0) rep.violations.push_back(rep.x[i]);
        }
        rep.center_lo = rep.center_hi = model.x0();
        rep.note = "GV/V >= 0 on [" + std::to_string(rep.violations.front()) + ", " +
                   std::to_string(rep.violations.back()) + "], reaching the end of the grid";
        return rep;
    }

    if (options.center_lo && options.center_hi) {
        rep.center_lo = *options.center_lo;
        rep.center_hi = *options.center_hi;
    } else {
        // Centre: where GV/V exceeds half the weaker (negative) limit; ends of the
        // grid must stay outside it for a certificate.
        const double level = 0.5 * std::max(end_lo, end_hi);
        std::size_t first = rep.x.size();
        std::size_t last = 0;
        for (std::size_t i = 0; i < rep.x.size(); ++i) {
            if (rep.ratio[i] > level) {
                first = std::min(first, i);
                last = std::max(last, i);
            }
        }
        if (first > last) {
            rep.center_lo = rep.center_hi = model.x0();
        } else {
            rep.center_lo = rep.x[first];
            rep.center_hi = rep.x[last];
        }
    }

    double worst_outside = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rep.x.size(); ++i) {
        const double x = rep.x[i];
        if (x >= rep.center_lo && x <= rep.center_hi) continue;
        worst_outside = std::max(worst_outside, rep.ratio[i]);
        if (rep.ratio[i] >= 0.0) rep.violations.push_back(x);
    }
    const bool centre_touches_ends = rep.center_lo <= rep.x.front() || rep.center_hi >= rep.x.back();
    rep.alpha = std::max(0.0, -worst_outside);
    rep.certified = rep.alpha > 0.0 && !centre_touches_ends;
    if (rep.certified) {
        double delta = 0.0;
        for (std::size_t i = 0; i < rep.x.size(); ++i) {
            const double x = rep.x[i];
            if (x < rep.center_lo || x > rep.center_hi) continue;
            const double v = V.value(x);
            delta = std::max(delta, v * (rep.ratio[i] + rep.alpha));
        }
        rep.delta = delta;
    } else {
        rep.alpha = 0.0;
        if (centre_touches_ends) rep.note = "drift is not negative near the ends of the grid";
        if (!rep.violations.empty()) {
            rep.note = "GV/V >= 0 on [" + std::to_string(rep.violations.front()) + ", " +
                       std::to_string(rep.violations.back()) + "] outside the centre";
        }
    }
    return rep;
}

}  // namespace gfe::ergo
