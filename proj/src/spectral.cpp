#include "gfe/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace gfe {

namespace {

std::vector<double> weights(const HitSampleSet& set, double q) {
    std::vector<double> w(set.samples.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const auto& s = set.samples[i];
        if (s.hit) w[i] = std::exp(s.log_W - q * s.H);
    }
    return w;
}

}  // namespace

Estimate laplace_estimate(const HitSampleSet& set, double q) {
    const auto w = weights(set, q);
    return mean_estimate(w);
}

double laplace_value(const HitSampleSet& set, double q) {
    const auto w = weights(set, q);
    return pairwise_sum(w) / static_cast<double>(w.size());
}

DerivativeEstimate laplace_derivative(const HitSampleSet& set, double q) {
    auto w = weights(set, q);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= set.samples[i].H;
    DerivativeEstimate d;
    const auto e = mean_estimate(w);
    d.value = e.mean;
    d.std_error = e.std_error;
    const double total = pairwise_sum(w);
    if (total > 0.0) {
        const std::size_t top = std::max<std::size_t>(1, (w.size() + 99) / 100);
        std::partial_sort(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(top), w.end(),
                          std::greater<>());
        double s = 0.0;
        for (std::size_t i = 0; i < top; ++i) s += w[i];
        d.top_share = s / total;
        d.divergent = d.top_share > 0.5;
    }
    return d;
}

SpectralEstimate find_rho(const HitSampleSet& set, double cbar_sup, double tol) {
    if (set.samples.empty()) fail(ErrorCode::InvalidParameter, "empty sample set");
    const std::size_t hits = set.hit_count();
    if (hits == 0) fail(ErrorCode::NoHits, "no path returned before T_max");

    double lo = -cbar_sup - 100.0;
    double hi = cbar_sup + 1.0;
    const double l_lo = laplace_value(set, lo);
    if (!(l_lo > 1.0)) {
        fail(ErrorCode::BracketFailure,
             "L_hat(" + std::to_string(lo) + ") = " + std::to_string(l_lo) + " does not exceed 1");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (laplace_value(set, mid) > 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    SpectralEstimate r;
    r.rho_hat = 0.5 * (lo + hi);
    r.root_tolerance = 0.5 * (hi - lo);
    const auto L = laplace_estimate(set, r.rho_hat);
    const auto d = laplace_derivative(set, r.rho_hat);
    r.L_at_rho = L.mean;
    r.L_std_error = L.std_error;
    r.minus_Lprime = d.value;
    r.divergent = d.divergent;
    r.std_error = d.value > 0.0 ? L.std_error / d.value : std::numeric_limits<double>::infinity();
    r.ci_lo = r.rho_hat - 1.96 * r.std_error;
    r.ci_hi = r.rho_hat + 1.96 * r.std_error;
    r.N = set.samples.size();
    r.hit_fraction = static_cast<double>(hits) / static_cast<double>(r.N);
    r.censor_fraction = 1.0 - r.hit_fraction;
    r.T_max = set.censor_time;
    r.seed = set.seed;
    return r;
}

SpectralEstimate estimate_rho(const Model& model, const HitOptions& options) {
    const auto set = sample_hitting_set(model, model.x0(), model.x0(), options);
    return find_rho(set, model.cbar_sup());
}

EllTable::EllTable(std::vector<Point> points, double rho_used, double x0)
    : points_(std::move(points)), rho_(rho_used), x0_(x0) {
    std::sort(points_.begin(), points_.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const auto& p : points_) {
        if (p.valid && p.value > 0.0) {
            lz_.push_back(std::log(p.x));
            lv_.push_back(std::log(p.value));
        }
    }
    if (lz_.empty()) fail(ErrorCode::NoHits, "eigenfunction table has no valid point");
}

double EllTable::log_at(double z) const {
    if (z <= lz_.front()) return lv_.front();
    if (z >= lz_.back()) return lv_.back();
    const auto it = std::upper_bound(lz_.begin(), lz_.end(), z);
    const std::size_t j = static_cast<std::size_t>(it - lz_.begin());
    const double w = (z - lz_[j - 1]) / (lz_[j] - lz_[j - 1]);
    return lv_[j - 1] + w * (lv_[j] - lv_[j - 1]);
}

double EllTable::operator()(double x) const { return std::exp(log_at(std::log(x))); }

bool EllTable::extrapolates(double x) const {
    const double z = std::log(x);
    return z < lz_.front() || z > lz_.back();
}

EllTable build_ell_table(const Model& model, double rho, std::span<const double> grid,
                         const HitOptions& options) {
    std::vector<EllTable::Point> pts;
    pts.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        HitOptions o = options;
        o.seed = derive_seed(options.seed, k);
        const auto set = sample_hitting_set(model, grid[k], model.x0(), o);
        const auto e = laplace_estimate(set, rho);
        EllTable::Point p;
        p.x = grid[k];
        p.value = e.mean;
        p.std_error = e.std_error;
        p.minus_drho = laplace_derivative(set, rho).value;
        p.hits = set.hit_count();
        p.valid = p.hits > 0 && e.mean > 0.0;
        pts.push_back(p);
    }
    return EllTable(std::move(pts), rho, model.x0());
}

double log_log_slope(const EllTable& table, double lo, double hi) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (const auto& p : table.points()) {
        if (!p.valid || p.x < lo * (1 - 1e-12) || p.x > hi * (1 + 1e-12)) continue;
        const double u = std::log(p.x);
        const double v = std::log(p.value);
        sx += u;
        sy += v;
        sxx += u * u;
        sxy += u * v;
        ++n;
    }
    if (n < 2) fail(ErrorCode::NoHits, "fewer than two valid points in the slope window");
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

double nu_density(const Model& model, double ell_y, double minus_Lprime, double y) {
    if (!std::isfinite(minus_Lprime)) {
        fail(ErrorCode::DivergentDerivative, "-L'_{y,y}(rho) is not finite at y=" + std::to_string(y));
    }
    return 1.0 / (model.growth(y) * y * ell_y * std::abs(minus_Lprime));
}

double trapezoid_log(std::span<const double> y, std::span<const double> g) {
    double s = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i) {
        const double du = std::log(y[i]) - std::log(y[i - 1]);
        s += 0.5 * du * (g[i] * y[i] + g[i - 1] * y[i - 1]);
    }
    return s;
}

NuProfile estimate_nu(const Model& model, const std::function<double(double)>& ell, double rho,
                      std::span<const double> y_grid, const HitOptions& options) {
    NuProfile nu;
    nu.y.assign(y_grid.begin(), y_grid.end());
    for (std::size_t k = 0; k < nu.y.size(); ++k) {
        const double y = nu.y[k];
        HitOptions o = options;
        o.seed = derive_seed(options.seed, k);
        const auto set = sample_hitting_set(model, y, y, o);
        const auto d = laplace_derivative(set, rho);
        if (d.divergent) {
            fail(ErrorCode::DivergentDerivative,
                 "-L'_{y,y}(rho) flagged divergent at y=" + std::to_string(y));
        }
        nu.minus_Lprime.push_back(d.value);
        nu.minus_Lprime_se.push_back(d.std_error);
        nu.ell.push_back(ell(y));
        nu.density.push_back(nu_density(model, nu.ell.back(), d.value, y));
    }
    std::vector<double> weighted(nu.y.size());
    for (std::size_t k = 0; k < nu.y.size(); ++k) weighted[k] = nu.density[k] * nu.y[k] * nu.ell[k];
    nu.normalizer = trapezoid_log(nu.y, weighted);
    nu.normalized.resize(nu.y.size());
    for (std::size_t k = 0; k < nu.y.size(); ++k) nu.normalized[k] = nu.density[k] / nu.normalizer;
    return nu;
}

double pair_nu(const NuProfile& nu, const std::function<double(double)>& f) {
    std::vector<double> g(nu.y.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = nu.normalized[k] * f(nu.y[k]);
    return trapezoid_log(nu.y, g);
}

}  // namespace gfe
