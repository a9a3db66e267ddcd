#include "gfe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gfe/quadrature.hpp"

namespace gfe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double growth_of(const GrowthSpec& g, double x) {
    return std::visit(overloaded{[&](const LinearGrowth& l) { return l.a * x; },
                                 [&](const GeneralGrowth& gg) { return gg.c(x); }},
                      g);
}

double cbar_of(const GrowthSpec& g) {
    return std::visit(overloaded{[](const LinearGrowth& l) { return l.a; },
                                 [](const GeneralGrowth& gg) { return gg.cbar_sup; }},
                      g);
}

// K as a function of log-mass; the saturating family is a logistic in z.
double rate_of_log(const RateSpec& r, double z) {
    return std::visit(overloaded{[](const ConstantRate& c) { return c.b; },
                                 [&](const SaturatingRate& s) {
                                     return s.b / (1.0 + std::exp(-s.gamma0 * z));
                                 }},
                      r);
}

double rate_bound_of(const RateSpec& r) {
    return std::visit(overloaded{[](const ConstantRate& c) { return c.b; },
                                 [](const SaturatingRate& s) { return s.b; }},
                      r);
}

double beta_of(const RatioLaw& q) {
    return std::visit(overloaded{[](const UniformBinaryRatio&) { return 2.0; },
                                 [](const PowerBetaRatio& p) { return p.beta; },
                                 [](const CustomRatio&) { return 0.0; }},
                      q);
}

double density_of(const RatioLaw& q, double v) {
    if (!(v > 0.0 && v < 1.0)) return 0.0;
    return std::visit(overloaded{[&](const UniformBinaryRatio&) { return 2.0 * v; },
                                 [&](const PowerBetaRatio& p) {
                                     return p.beta * std::pow(v, p.beta - 1.0);
                                 },
                                 [&](const CustomRatio& c) { return c.density(v); }},
                      q);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

}  // namespace

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out;
    if (n <= 0) return out;
    if (n == 1) return {lo};
    out.reserve(static_cast<std::size_t>(n));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < n; ++i) {
        out.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::string ValidationReport::summary() const {
    if (issues.empty()) return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i) os << "; ";
        os << to_string(issues[i].code) << ": " << issues[i].message;
    }
    return os.str();
}

ValidationError::ValidationError(ValidationReport report)
    : Error(report.issues.empty() ? ErrorCode::InvalidParameter : report.issues.front().code,
            report.summary()),
      report_(std::move(report)) {}

ValidationReport check_model(const ModelSpec& spec, const ValidationOptions& options) {
    ValidationReport report;
    auto add = [&](ErrorCode code, std::string msg, double where, double value) {
        report.issues.push_back({code, std::move(msg), where, value});
    };

    if (!(spec.x0 > 0.0)) add(ErrorCode::InvalidParameter, "x0 must be positive", 0.0, spec.x0);

    const auto grid = log_spaced(options.grid_lo, options.grid_hi, options.grid_points);
    const double cbar = cbar_of(spec.growth);
    if (const auto* g = std::get_if<GeneralGrowth>(&spec.growth); g && !g->c) {
        add(ErrorCode::InvalidParameter, "general growth has no rate function", 0.0, 0.0);
    } else {
        for (double x : grid) {
            const double c = growth_of(spec.growth, x);
            if (!(c > 0.0) || !std::isfinite(c)) {
                add(ErrorCode::CBoundViolated, "c(x) must be positive and finite at x=" + fmt(x), x, c);
                break;
            }
            if (c / x > cbar * (1.0 + 1e-12)) {
                add(ErrorCode::CBoundViolated,
                    "c(x)/x = " + fmt(c / x) + " exceeds the bound " + fmt(cbar) + " at x=" + fmt(x), x,
                    c / x);
                break;
            }
        }
    }

    const double k_sup = rate_bound_of(spec.frag.rate);
    if (!(k_sup >= 0.0) || !std::isfinite(k_sup)) {
        add(ErrorCode::KUnbounded, "jump-rate bound must be finite and non-negative", 0.0, k_sup);
    } else {
        for (double x : grid) {
            const double k = rate_of_log(spec.frag.rate, std::log(x));
            if (!(k >= 0.0) || k > k_sup * (1.0 + 1e-12)) {
                add(ErrorCode::KUnbounded, "K(x) = " + fmt(k) + " outside [0, " + fmt(k_sup) +
                                               "] at x=" + fmt(x),
                    x, k);
                break;
            }
        }
    }

    bool law_ok = true;
    if (const auto* p = std::get_if<PowerBetaRatio>(&spec.frag.ratio); p && !(p->beta > 0.0)) {
        add(ErrorCode::InvalidParameter, "power-beta ratio law needs beta > 0", 0.0, p->beta);
        law_ok = false;
    }
    if (const auto* c = std::get_if<CustomRatio>(&spec.frag.ratio)) {
        if (!c->density || !(c->density_bound > 0.0)) {
            add(ErrorCode::InvalidParameter, "custom ratio law needs a density and a positive bound",
                0.0, c->density_bound);
            law_ok = false;
        } else {
            for (double v : log_spaced(1e-6, 1.0 - 1e-9, 512)) {
                const double d = c->density(v);
                if (!(d >= 0.0) || d > c->density_bound) {
                    add(ErrorCode::RatioDensityNotNormalized,
                        "custom density outside [0, bound] at v=" + fmt(v), v, d);
                    law_ok = false;
                    break;
                }
            }
        }
    }
    if (law_ok) {
        const auto r = quad::endpoint_singular([&](double v) { return density_of(spec.frag.ratio, v); },
                                               0.0, 1.0, 1e-13);
        report.ratio_integral = r.value;
        if (!(std::abs(r.value - 1.0) <= options.normalization_tol)) {
            add(ErrorCode::RatioDensityNotNormalized,
                "ratio density integrates to " + fmt(r.value) + " instead of 1", 0.0, r.value);
        }
    }
    return report;
}

Model Model::validate(ModelSpec spec, const ValidationOptions& options) {
    auto report = check_model(spec, options);
    if (!report.ok()) throw ValidationError(std::move(report));
    Model m;
    m.spec_ = std::move(spec);
    m.linear_ = std::holds_alternative<LinearGrowth>(m.spec_.growth);
    m.cbar_sup_ = cbar_of(m.spec_.growth);
    m.a_ = m.cbar_sup_;
    m.k_sup_ = rate_bound_of(m.spec_.frag.rate);
    m.beta_ = beta_of(m.spec_.frag.ratio);
    m.grid_ = log_spaced(options.grid_lo, options.grid_hi, options.grid_points);
    return m;
}

double Model::growth(double x) const { return growth_of(spec_.growth, x); }

double Model::growth_per_mass(double x) const {
    if (linear_) return a_;
    return growth_of(spec_.growth, x) / x;
}

double Model::growth_per_mass_log(double z) const {
    if (linear_) return a_;
    return growth_per_mass(std::exp(z));
}

double Model::jump_rate(double x) const {
    if (!(x > 0.0)) return rate_of_log(spec_.frag.rate, -kInf);
    return rate_of_log(spec_.frag.rate, std::log(x));
}

double Model::jump_rate_log(double z) const { return rate_of_log(spec_.frag.rate, z); }

double Model::ratio_density(double v) const { return density_of(spec_.frag.ratio, v); }

double Model::ratio_cdf(double v) const {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (beta_ > 0.0) return std::pow(v, beta_);
    return quad::endpoint_singular([&](double u) { return ratio_density(u); }, 0.0, v, 1e-12).value;
}

double Model::sample_log_ratio(Rng& rng) const {
    if (beta_ > 0.0) return std::log(rng.uniform()) / beta_;
    const auto& c = std::get<CustomRatio>(spec_.frag.ratio);
    for (;;) {
        const double v = rng.uniform();
        if (rng.uniform() * c.density_bound < c.density(v)) return std::log(v);
    }
}

double Model::partial_moment(double s, double v_lo, double v_hi) const {
    v_lo = std::max(v_lo, 0.0);
    v_hi = std::min(v_hi, 1.0);
    if (!(v_hi > v_lo)) return 0.0;
    if (beta_ > 0.0) {
        const double e = s + beta_;
        if (e == 0.0) {
            if (v_lo == 0.0) return kInf;
            return beta_ * (std::log(v_hi) - std::log(v_lo));
        }
        if (e < 0.0 && v_lo == 0.0) return kInf;
        return beta_ / e * (std::pow(v_hi, e) - std::pow(v_lo, e));
    }
    const auto r = quad::endpoint_singular([&](double v) { return std::pow(v, s) * ratio_density(v); },
                                           v_lo, v_hi, 1e-12);
    return r.value;
}

double Model::moment_ratio(double /*x*/, double s) const {
    if (s == 0.0) return 1.0;
    double m = 0.0;
    if (beta_ > 0.0) {
        m = s + beta_ > 0.0 ? beta_ / (s + beta_) : kInf;
    } else {
        const auto r = quad::endpoint_singular(
            [&](double v) { return std::pow(v, s) * ratio_density(v); }, 0.0, 1.0, 1e-12);
        m = (std::isfinite(r.value) && r.error <= 1e-6 * std::max(1.0, std::abs(r.value))) ? r.value
                                                                                            : kInf;
    }
    if (!std::isfinite(m)) {
        fail(ErrorCode::Diverged, "moment M(" + fmt(s) + ") of the ratio law diverges");
    }
    return m;
}

double Model::moment_sup(double s) const {
    double best = -kInf;
    for (double x : grid_) best = std::max(best, moment_ratio(x, s));
    return best;
}

double Model::kernel_density(double x, double y) const {
    if (!(y > 0.0) || !(y < x)) return 0.0;
    return jump_rate(x) * ratio_density(y / x) / x;
}

double Model::fragmentation_kernel(double x, double y) const {
    if (!(y > 0.0) || !(y < x)) return 0.0;
    return x / y * kernel_density(x, y);
}

ModelSpec linear_power_beta_spec(double a, double lambda, double beta, double x0, std::string label) {
    return ModelSpec{LinearGrowth{a}, FragmentationSpec{ConstantRate{lambda}, PowerBetaRatio{beta}}, x0,
                     std::move(label)};
}

ModelSpec linear_uniform_binary_spec(double a, double b, double gamma0, double x0, std::string label) {
    return ModelSpec{LinearGrowth{a},
                     FragmentationSpec{SaturatingRate{b, gamma0}, UniformBinaryRatio{}}, x0,
                     std::move(label)};
}

}  // namespace gfe
