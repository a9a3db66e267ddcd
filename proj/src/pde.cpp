#include "gfe/pde.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/legendre.hpp>

namespace gfe::pde {

namespace {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1] built from boost's Legendre zeros.
GaussRule gauss_rule(int m) {
    GaussRule r;
    const auto half = boost::math::legendre_p_zeros<double>(m);
    for (double x : half) {
        const double dp = boost::math::legendre_p_prime(m, x);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes.push_back(x);
        r.weights.push_back(w);
        if (x != 0.0) {
            r.nodes.push_back(-x);
            r.weights.push_back(w);
        }
    }
    return r;
}

template <class F>
double integrate(const GaussRule& rule, F&& f, double a, double b) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (b + a);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) s += rule.weights[k] * f(c + h * rule.nodes[k]);
    return h * s;
}

// Harmonic (van Leer) slope limiter.
double van_leer(double a, double b) { return a * b > 0.0 ? 2.0 * a * b / (a + b) : 0.0; }

}  // namespace

PdeGrid::PdeGrid(const PdeOptions& options) : opt_(options) {
    if (opt_.n < 16) fail(ErrorCode::InvalidParameter, "pde.n must be at least 16");
    if (!(opt_.x_min > 0.0) || !(opt_.x_max > opt_.x_min)) {
        fail(ErrorCode::InvalidParameter, "pde grid needs 0 < x_min < x_max");
    }
    if (!(opt_.cfl > 0.0)) fail(ErrorCode::InvalidParameter, "pde.cfl must be positive");
    if (opt_.quad_nodes < 2) fail(ErrorCode::InvalidParameter, "pde.quad_nodes must be at least 2");
    const double a = std::log(opt_.x_min);
    const double b = std::log(opt_.x_max);
    dz_ = (b - a) / (opt_.n - 1);
    z_.resize(static_cast<std::size_t>(opt_.n));
    x_.resize(z_.size());
    for (int i = 0; i < opt_.n; ++i) {
        z_[static_cast<std::size_t>(i)] = a + dz_ * i;
        x_[static_cast<std::size_t>(i)] = std::exp(z_[static_cast<std::size_t>(i)]);
    }
}

GridFunction sample(const PdeGrid& grid, const TestFunction& f) {
    GridFunction g;
    g.values.resize(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) g.values[static_cast<std::size_t>(i)] = f.at_log(grid.z(i));
    g.label = f.name();
    return g;
}

GridFunction sample_over_mass(const PdeGrid& grid, const TestFunction& f) {
    GridFunction g;
    g.values.resize(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
        g.values[static_cast<std::size_t>(i)] = f.over_mass_at_log(grid.z(i));
    }
    g.label = f.name() + "/x";
    return g;
}

double interpolate(const PdeGrid& grid, std::span<const double> g, double x) {
    const double u = (std::log(x) - grid.z(0)) / grid.dz();
    if (u <= 0.0) return g.front();
    if (u >= grid.size() - 1) return g.back();
    const auto i = static_cast<std::size_t>(std::floor(u));
    const double w = u - static_cast<double>(i);
    return (1.0 - w) * g[i] + w * g[i + 1];
}

Discretization::Discretization(const Model& model, const PdeGrid& grid) : grid_(&grid) {
    const auto n = static_cast<std::size_t>(grid.size());
    const double dz = grid.dz();
    cbar_.resize(n);
    k_.resize(n);
    tail_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        cbar_[i] = model.growth_per_mass_log(grid.zs()[i]);
        k_[i] = model.jump_rate_log(grid.zs()[i]);
    }
    cbar_sup_ = model.cbar_sup();
    k_sup_ = model.jump_rate_bound();

    // Law of S = -log V: density p(s) = q(e^{-s}) e^{-s}.
    const auto rule = gauss_rule(grid.options().quad_nodes);
    auto p = [&](double s) {
        const double v = std::exp(-s);
        return model.ratio_density(v) * v;
    };
    // rising half of the hat centred at offset d, on [(d-1)dz, d dz]
    auto rising = [&](std::size_t d) {
        const double dd = static_cast<double>(d);
        return integrate(rule, [&](double s) { return (s / dz - dd + 1.0) * p(s); }, (dd - 1.0) * dz,
                         dd * dz);
    };
    // falling half on [d dz, (d+1) dz]
    auto falling = [&](std::size_t d) {
        const double dd = static_cast<double>(d);
        return integrate(rule, [&](double s) { return (dd + 1.0 - s / dz) * p(s); }, dd * dz,
                         (dd + 1.0) * dz);
    };
    w_.assign(n, 0.0);
    w_boundary_.assign(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        const double r = d == 0 ? 0.0 : rising(d);
        w_[d] = r + falling(d);
        // Below x_min the node value g_0 is extended as a constant.
        tail_[d] = model.ratio_cdf(std::exp(-static_cast<double>(d) * dz));
        w_boundary_[d] = r + tail_[d];
    }
    tail_[0] = 1.0;
}

void Discretization::apply_G(std::span<const double> g, std::span<double> out) const {
    const auto n = g.size();
    const double dz = grid_->dz();
    auto at = [&](std::ptrdiff_t j) {
        if (j < 0) return g.front();
        if (j >= static_cast<std::ptrdiff_t>(n)) return g.back();
        return g[static_cast<std::size_t>(j)];
    };
    // face value at i + 1/2, reconstructed from the right (upwind side)
    auto face = [&](std::ptrdiff_t i) {
        const double gr = at(i + 1);
        return gr - 0.5 * van_leer(gr - at(i), at(i + 2) - gr);
    };
    double left_face = face(-1);
    for (std::size_t i = 0; i < n; ++i) {
        const double right_face = face(static_cast<std::ptrdiff_t>(i));
        const double transport = cbar_[i] * (right_face - left_face) / dz;
        left_face = right_face;

        double frag = 0.0;
        if (k_[i] != 0.0 && i > 0) {
            const double gi = g[i];
            for (std::size_t d = 1; d < i; ++d) frag += w_[d] * (g[i - d] - gi);
            frag += w_boundary_[i] * (g[0] - gi);
            frag *= k_[i];
        }
        out[i] = transport + frag;
    }
}

void Discretization::apply_Abar(std::span<const double> g, std::span<double> out) const {
    apply_G(g, out);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] += cbar_[i] * g[i];
}

GridFunction apply_generator(const Model& model, const PdeGrid& grid, const GridFunction& g) {
    const Discretization disc(model, grid);
    GridFunction out{std::vector<double>(g.values.size()), g.time, "Abar " + g.label};
    disc.apply_Abar(g.values, out.values);
    return out;
}

GridFunction apply_G(const Model& model, const PdeGrid& grid, const GridFunction& g) {
    const Discretization disc(model, grid);
    GridFunction out{std::vector<double>(g.values.size()), g.time, "Gbar " + g.label};
    disc.apply_G(g.values, out.values);
    return out;
}

GridFunction apply_A(const Model& model, const PdeGrid& grid, const GridFunction& fbar) {
    GridFunction f = fbar;
    for (int i = 0; i < grid.size(); ++i) f.values[static_cast<std::size_t>(i)] /= grid.x(i);
    auto out = apply_generator(model, grid, f);
    for (int i = 0; i < grid.size(); ++i) out.values[static_cast<std::size_t>(i)] *= grid.x(i);
    out.label = "A " + fbar.label;
    return out;
}

EvolveResult evolve_backward(const Model& model, const PdeGrid& grid, const GridFunction& g0, double t,
                             double support_hi, std::optional<double> dt_override) {
    if (!(t >= 0.0)) fail(ErrorCode::InvalidParameter, "evolution time must be non-negative");
    if (g0.values.size() != static_cast<std::size_t>(grid.size())) {
        fail(ErrorCode::InvalidParameter, "grid function does not match the grid");
    }
    const double cbar = model.cbar_sup();
    const double x_max = grid.options().x_max;
    if (!(support_hi * std::exp(cbar * t) < x_max)) {
        fail(ErrorCode::DomainTooSmall, "support reaches " + std::to_string(support_hi * std::exp(cbar * t)) +
                                            " >= x_max = " + std::to_string(x_max) +
                                            " within the evolution time");
    }
    const double dz = grid.dz();
    const double cfl_max = grid.options().cfl;
    double dt = cfl_max * dz / cbar;
    // Keep the explicit fragmentation part well inside its stability region as well.
    if (model.jump_rate_bound() > 0.0) dt = std::min(dt, 1.0 / model.jump_rate_bound());
    if (dt_override) {
        const double courant = *dt_override * cbar / dz;
        if (!(*dt_override > 0.0) || courant > 0.5 * (1.0 + 1e-12)) {
            fail(ErrorCode::CflViolation,
                 "dt = " + std::to_string(*dt_override) + " gives Courant number " +
                     std::to_string(courant) + " > 0.5");
        }
        dt = *dt_override;
    }

    const Discretization disc(model, grid);
    const auto n = g0.values.size();
    EvolveResult res;
    res.g = g0;
    res.dt = dt;
    res.boundary_leak.assign(n, 0.0);
    std::vector<double> k1(n), stage(n), k2(n);
    auto& g = res.g.values;
    double now = 0.0;
    const auto& tail = disc.tail_probability();
    const auto& krate = disc.jump_rate();
    while (now < t) {
        const double h = std::min(dt, t - now);
        disc.apply_Abar(g, k1);
        for (std::size_t i = 0; i < n; ++i) stage[i] = g[i] + h * k1[i];
        disc.apply_Abar(stage, k2);
        // oscillation of g next to the left edge, a proxy for what the extension misses
        double osc = 0.0;
        for (std::size_t j = 1; j < std::min<std::size_t>(n, 8); ++j) osc = std::max(osc, std::abs(g[j] - g[0]));
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = 0.5 * (g[i] + stage[i] + h * k2[i]);
            if (i > 0) res.boundary_leak[i] += h * krate[i] * tail[i] * (osc + std::abs(g[0]));
        }
        now = (t - now <= dt) ? t : now + h;
        ++res.steps;
    }
    res.g.time = t;
    res.max_boundary_leak = *std::max_element(res.boundary_leak.begin(), res.boundary_leak.end());
    return res;
}

EvolveResult evolve_semigroup(const Model& model, const PdeGrid& grid, const TestFunction& f, double t,
                              std::optional<double> dt_override) {
    const double hi = std::exp(f.log_support_hi());
    return evolve_backward(model, grid, sample_over_mass(grid, f), t, hi, dt_override);
}

double semigroup_value(const PdeGrid& grid, const EvolveResult& r, double x) {
    return x * interpolate(grid, r.g.values, x);
}

}  // namespace gfe::pde
