#include "gfe/levy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "gfe/quadrature.hpp"

namespace gfe::levy {

namespace {

void in_domain(const LevyParams& p, double theta) {
    if (!(theta > -p.beta)) {
        fail(ErrorCode::OutOfDomain,
             "psi is defined for theta > -beta = " + std::to_string(-p.beta) + ", got " +
                 std::to_string(theta));
    }
}

}  // namespace

void check(const LevyParams& p) {
    if (!(p.a > 0.0) || !(p.lambda > 0.0) || !(p.beta > 0.0)) {
        fail(ErrorCode::InvalidParameter, "Levy parameters a, lambda, beta must be positive");
    }
}

LevyParams from_model(const Model& model) {
    const auto& s = model.spec();
    const auto* rate = std::get_if<ConstantRate>(&s.frag.rate);
    if (!model.is_linear() || rate == nullptr || !(model.power_beta() > 0.0)) {
        fail(ErrorCode::InvalidParameter,
             "closed forms need linear growth, constant rate and a power-law ratio law");
    }
    LevyParams p{model.linear_rate(), rate->b, model.power_beta()};
    check(p);
    return p;
}

double psi(const LevyParams& p, double theta) {
    in_domain(p, theta);
    return p.a * theta - p.lambda * theta / (p.beta + theta);
}

double psi_prime(const LevyParams& p, double theta) {
    in_domain(p, theta);
    const double d = p.beta + theta;
    return p.a - p.lambda * p.beta / (d * d);
}

double psi_second(const LevyParams& p, double theta) {
    in_domain(p, theta);
    const double d = p.beta + theta;
    return 2.0 * p.lambda * p.beta / (d * d * d);
}

double kappa(const LevyParams& p, double theta) { return psi(p, theta - 1.0) + p.a; }

double kappa_second(const LevyParams& p, double theta) { return psi_second(p, theta - 1.0); }

ThetaRho theta0_rho(const LevyParams& p) {
    check(p);
    const double root = std::sqrt(p.lambda * p.beta / p.a);
    if (std::abs(root - p.beta) <= 1e-12 * p.beta) {
        fail(ErrorCode::DriftZero, "lambda beta / a = beta^2: theta0 = 1 is excluded");
    }
    ThetaRho r;
    r.theta0 = 1.0 - p.beta + root;
    r.rho = kappa(p, r.theta0);
    if (!(r.rho < p.a)) {
        fail(ErrorCode::OutOfDomain, "spectral radius is not below the drift coefficient");
    }
    return r;
}

double Phi(const LevyParams& p, double r) {
    check(p);
    // Increasing branch of the convex psi starts at its minimiser.
    const double lo_theta = std::sqrt(p.lambda * p.beta / p.a) - p.beta;
    const double psi_min = psi(p, lo_theta);
    if (r < psi_min) {
        fail(ErrorCode::OutOfDomain, "Phi(r) needs r >= min psi = " + std::to_string(psi_min));
    }
    if (r == psi_min) return lo_theta;
    double lo = lo_theta;
    double hi = lo_theta + 1.0;
    while (psi(p, hi) < r) {
        lo = hi;
        hi = lo_theta + 2.0 * (hi - lo_theta);
    }
    double theta = hi;
    for (int it = 0; it < 200; ++it) {
        const double f = psi(p, theta) - r;
        if (f > 0.0) {
            hi = theta;
        } else {
            lo = theta;
        }
        if (f == 0.0 || hi - lo <= 1e-15 * std::max(1.0, std::abs(theta))) break;
        double next = theta - f / psi_prime(p, theta);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == theta) break;
        theta = next;
    }
    return theta;
}

double L_closed(const LevyParams& p, double q) {
    const auto tr = theta0_rho(p);
    if (q < tr.rho) fail(ErrorCode::OutOfDomain, "L_closed needs q >= rho");
    if (q == tr.rho) return 1.0;
    return 1.0 - psi_prime(p, Phi(p, q - p.a));
}

double minus_Lprime_closed(const LevyParams& p, double q) {
    const auto tr = theta0_rho(p);
    if (q < tr.rho) fail(ErrorCode::OutOfDomain, "L' needs q >= rho");
    if (q == tr.rho) return std::numeric_limits<double>::infinity();
    const double th = Phi(p, q - p.a);
    return psi_second(p, th) / psi_prime(p, th);
}

double ell_closed(const LevyParams& p, double x, double x0) {
    const auto tr = theta0_rho(p);
    return std::pow(x / x0, tr.theta0 - 1.0);
}

double profile_integral(const LevyParams& p, const TestFunction& f) {
    const auto tr = theta0_rho(p);
    const double lo = f.log_support_lo();
    const double hi = f.log_support_hi();
    if (f.kind() == TestFunction::Kind::Zero) return 0.0;
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        fail(ErrorCode::InvalidParameter, "asymptotic profile needs a compactly supported f");
    }
    // y = e^u: f(y) y^-(theta0+1) dy = f(e^u) e^{-theta0 u} du.
    auto g = [&](double u) { return f.at_log(u) * std::exp(-tr.theta0 * u); };
    double total = 0.0;
    double a = lo;
    for (double b : f.log_breakpoints()) {
        if (b <= a) continue;
        if (b >= hi) break;
        total += quad::adaptive(g, a, b, 1e-13).value;
        a = b;
    }
    total += quad::adaptive(g, a, hi, 1e-13).value;
    return total;
}

double asymptotic_value(const LevyParams& p, double t, const TestFunction& f, double x) {
    if (!(t > 0.0)) fail(ErrorCode::InvalidParameter, "asymptotic_value needs t > 0");
    const auto tr = theta0_rho(p);
    const double integral = profile_integral(p, f);
    if (integral == 0.0) return 0.0;
    const double k2 = kappa_second(p, tr.theta0);
    return std::pow(x, tr.theta0) * std::exp(t * tr.rho) /
           std::sqrt(2.0 * std::numbers::pi * t * k2) * integral;
}

}  // namespace gfe::levy
