#include "gfe/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "gfe/quadrature.hpp"

namespace gfe {

// ---------------------------------------------------------------------------
// Eigenfunction
// ---------------------------------------------------------------------------

Eigenfunction Eigenfunction::constant_one() { return Eigenfunction{}; }

Eigenfunction Eigenfunction::power_law(double exponent, double x0) {
    if (!(exponent >= 0.0)) {
        fail(ErrorCode::InvalidParameter,
             "a power-law eigenfunction needs a non-negative exponent for a finite acceptance bound");
    }
    if (!(x0 > 0.0)) fail(ErrorCode::InvalidParameter, "x0 must be positive");
    Eigenfunction e;
    e.kind_ = Kind::Power;
    e.exponent_ = exponent;
    e.log_x0_ = std::log(x0);
    return e;
}

Eigenfunction Eigenfunction::from_table(const EllTable& table, double safety) {
    if (!(safety >= 1.0)) fail(ErrorCode::InvalidParameter, "safety factor must be at least 1");
    Eigenfunction e;
    e.kind_ = Kind::Table;
    e.safety_ = safety;
    e.lz_ = table.log_nodes();
    e.lv_ = table.log_values();
    e.prefix_max_.resize(e.lv_.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < e.lv_.size(); ++j) {
        m = std::max(m, e.lv_[j]);
        e.prefix_max_[j] = m;
    }
    // ell is log-linear between nodes, so on [z_j, z_{j+1}] it is at least min(lv_j, lv_{j+1}).
    double g = 1.0;
    for (std::size_t j = 0; j < e.lv_.size(); ++j) {
        const double low = j + 1 < e.lv_.size() ? std::min(e.lv_[j], e.lv_[j + 1]) : e.lv_[j];
        g = std::max(g, std::exp(e.prefix_max_[j] - low));
    }
    e.global_ = safety * g;
    return e;
}

double Eigenfunction::log_at(double z) const {
    switch (kind_) {
        case Kind::One:
            return 0.0;
        case Kind::Power:
            return exponent_ * (z - log_x0_);
        case Kind::Table:
            break;
    }
    if (z <= lz_.front()) return lv_.front();
    if (z >= lz_.back()) return lv_.back();
    const auto it = std::upper_bound(lz_.begin(), lz_.end(), z);
    const auto j = static_cast<std::size_t>(it - lz_.begin());
    const double w = (z - lz_[j - 1]) / (lz_[j] - lz_[j - 1]);
    return lv_[j - 1] + w * (lv_[j] - lv_[j - 1]);
}

double Eigenfunction::accept_bound_log(double z) const {
    if (kind_ != Kind::Table) return 1.0;
    if (z <= lz_.front()) return safety_;
    const auto it = std::upper_bound(lz_.begin(), lz_.end(), z);
    const auto j = static_cast<std::size_t>(it - lz_.begin()) - 1;
    return safety_ * std::max(1.0, std::exp(prefix_max_[j] - log_at(z)));
}

TiltedModel::TiltedModel(const Model& base, Eigenfunction ell, double rho)
    : base_(&base), ell_(std::move(ell)), rho_(rho) {}

double TiltedJumps::accept(double z, double log_v) const {
    const auto& ell = tm->ell();
    const double ratio = std::exp(ell.log_at(z + log_v) - ell.log_at(z));
    const double bound = ell.accept_bound_log(z);
    if (ratio > bound * (1.0 + 1e-12)) {
        fail(ErrorCode::BoundViolated, "ell(xv)/ell(x) = " + std::to_string(ratio) +
                                           " exceeds the acceptance bound " + std::to_string(bound) +
                                           " at x = " + std::to_string(std::exp(z)));
    }
    return tm->base().jump_rate_log(z) * ratio;
}

Trajectory simulate_tilted(const TiltedModel& tm, double x, double t_end, Rng& rng) {
    return simulate_with(tm.base(), TiltedJumps{&tm}, x, t_end, rng);
}

// ---------------------------------------------------------------------------
// Occupation measure of an excursion from x0
// ---------------------------------------------------------------------------

namespace {

struct SegmentIntegrals {
    const Model* model;
    std::span<const TestFunction> fs;
    std::vector<double>* acc;
    void segment(double, double z0, double, double z1) {
        for (std::size_t k = 0; k < fs.size(); ++k) (*acc)[k] += integrate_segment(*model, fs[k], z0, z1);
    }
    void jump(double, double, double) {}
};

}  // namespace

OccupationSamples occupation_samples(const TiltedModel& tm, std::span<const TestFunction> fs,
                                     const OccupationOptions& options) {
    const double z0 = std::log(tm.base().x0());
    struct One {
        std::vector<double> v;
        bool completed = false;
    };
    const auto runs = map_indices(options.n_excursions, options.exec, [&](std::size_t i) {
        Rng rng = path_stream(options.seed, i);
        One o;
        o.v.assign(fs.size(), 0.0);
        const auto r = run_path(tm.base(), TiltedJumps{&tm}, z0, options.t_max, rng, z0,
                                SegmentIntegrals{&tm.base(), fs, &o.v});
        o.completed = r.end == RunEnd::Hit;
        return o;
    });
    OccupationSamples s;
    s.values.resize(fs.size());
    for (const auto& o : runs) {
        if (!o.completed) {
            ++s.censored;
            continue;
        }
        for (std::size_t k = 0; k < fs.size(); ++k) s.values[k].push_back(o.v[k]);
    }
    return s;
}

OccupationEstimate occupation_measure(const TiltedModel& tm, const TestFunction& f,
                                      const OccupationOptions& options) {
    const std::vector<TestFunction> fs{f};
    const auto s = occupation_samples(tm, fs, options);
    OccupationEstimate e;
    e.censored = s.censored;
    e.completed = s.values[0].size();
    if (e.completed == 0) fail(ErrorCode::NoHits, "every excursion was censored");
    const auto m = mean_estimate(s.values[0]);
    e.value = m.mean;
    e.std_error = m.std_error;
    return e;
}

TestFunction divide_by_ellbar(const TiltedModel& tm, const TestFunction& f) {
    const TiltedModel* t = &tm;
    return TestFunction::custom(
        [t, f](double x) {
            const double v = f(x);
            if (v == 0.0) return 0.0;
            return v * std::exp(-t->log_ellbar(std::log(x)));
        },
        f.log_breakpoints(), f.log_support_lo(), f.log_support_hi(), f.name() + "/ell_bar");
}

// ---------------------------------------------------------------------------
// Stationary density
// ---------------------------------------------------------------------------

namespace {

struct Occupancy {
    const Model* model;
    double t_burn;
    double batch_len;
    int batches;
    std::vector<double> log_edges;
    std::vector<std::vector<double>> time;  // [batch][bin]
    std::vector<double> total;              // [batch], all time including outside the bins

    void add(int batch, double za, double zb, double ta, double tb) {
        total[static_cast<std::size_t>(batch)] += tb - ta;
        const double lo = std::max(za, log_edges.front());
        const double hi = std::min(zb, log_edges.back());
        if (!(hi > lo)) return;
        auto first = std::upper_bound(log_edges.begin(), log_edges.end(), lo) - log_edges.begin() - 1;
        for (auto b = first; b + 1 < static_cast<std::ptrdiff_t>(log_edges.size()); ++b) {
            const double a = std::max(lo, log_edges[static_cast<std::size_t>(b)]);
            const double c = std::min(hi, log_edges[static_cast<std::size_t>(b) + 1]);
            if (a >= hi) break;
            if (c > a) time[static_cast<std::size_t>(batch)][static_cast<std::size_t>(b)] += time_to_reach_log(*model, a, c);
        }
    }

    void segment(double t0, double z0, double t1, double z1) {
        if (t1 <= t_burn) return;
        if (t0 < t_burn) {
            z0 = flow_log(*model, z0, t_burn - t0);
            t0 = t_burn;
        }
        while (t0 < t1) {
            const int b = std::min(batches - 1, static_cast<int>((t0 - t_burn) / batch_len));
            const double b_end = b == batches - 1 ? t1 : std::min(t1, t_burn + (b + 1) * batch_len);
            const double z_end = b_end == t1 ? z1 : flow_log(*model, z0, b_end - t0);
            add(b, z0, z_end, t0, b_end);
            t0 = b_end;
            z0 = z_end;
        }
    }
    void jump(double, double, double) {}
};

}  // namespace

StationaryResult stationary_density(const TiltedModel& tm, const StationaryOptions& options) {
    if (options.bins < 2 || options.batches < 2) {
        fail(ErrorCode::InvalidParameter, "need at least two bins and two batches");
    }
    if (!(options.y_hi > options.y_lo) || !(options.y_lo > 0.0)) {
        fail(ErrorCode::InvalidParameter, "need 0 < y_lo < y_hi");
    }
    const Model& model = tm.base();
    StationaryResult res;
    const int nb = options.bins;
    res.edges = log_spaced(options.y_lo, options.y_hi, nb + 1);
    for (int b = 0; b < nb; ++b) res.centers.push_back(std::sqrt(res.edges[b] * res.edges[b + 1]));

    // empirical occupation of one long path
    Occupancy occ{&model, options.t_burn, options.t_run / options.batches, options.batches, {}, {}, {}};
    for (double e : res.edges) occ.log_edges.push_back(std::log(e));
    occ.time.assign(static_cast<std::size_t>(options.batches), std::vector<double>(static_cast<std::size_t>(nb), 0.0));
    occ.total.assign(static_cast<std::size_t>(options.batches), 0.0);
    Rng rng = path_stream(options.seed, 0);
    run_path(model, TiltedJumps{&tm}, std::log(model.x0()), options.t_burn + options.t_run, rng, std::nullopt,
             occ);

    std::vector<double> in_range(static_cast<std::size_t>(options.batches), 0.0);
    double all_in = 0.0, all = 0.0;
    for (int k = 0; k < options.batches; ++k) {
        for (int b = 0; b < nb; ++b) in_range[static_cast<std::size_t>(k)] += occ.time[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
        all_in += in_range[static_cast<std::size_t>(k)];
        all += occ.total[static_cast<std::size_t>(k)];
    }
    res.fraction_in_range = all_in / all;
    std::vector<double> prob(static_cast<std::size_t>(nb)), prob_se(static_cast<std::size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        double s = 0.0;
        std::vector<double> per_batch;
        for (int k = 0; k < options.batches; ++k) {
            const double t = occ.time[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
            s += t;
            per_batch.push_back(t / in_range[static_cast<std::size_t>(k)]);
        }
        prob[static_cast<std::size_t>(b)] = s / all_in;
        prob_se[static_cast<std::size_t>(b)] = mean_estimate(per_batch).std_error;
    }

    // model curve at edges and centres: sigma_Y(y) = 1 / (c(y) |L'_{y,y}(rho)|)
    std::vector<double> nodes;
    for (int b = 0; b < nb; ++b) {
        nodes.push_back(res.edges[static_cast<std::size_t>(b)]);
        nodes.push_back(res.centers[static_cast<std::size_t>(b)]);
    }
    nodes.push_back(res.edges.back());
    const Eigenfunction& ell = tm.ell();
    res.nu = estimate_nu(model, [&](double y) { return ell(y); }, tm.rho(), nodes, options.curve);
    std::vector<double> sigma(nodes.size()), sigma_rel(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        sigma[k] = 1.0 / (model.growth(nodes[k]) * res.nu.minus_Lprime[k]);
        sigma_rel[k] = res.nu.minus_Lprime_se[k] / res.nu.minus_Lprime[k];
    }
    std::vector<double> mass(static_cast<std::size_t>(nb)), mass_se(static_cast<std::size_t>(nb));
    double total_mass = 0.0;
    for (int b = 0; b < nb; ++b) {
        const auto i = static_cast<std::size_t>(2 * b);
        const double du = std::log(nodes[i + 2]) - std::log(nodes[i]);
        const double f0 = sigma[i] * nodes[i];
        const double f1 = sigma[i + 1] * nodes[i + 1];
        const double f2 = sigma[i + 2] * nodes[i + 2];
        mass[static_cast<std::size_t>(b)] = du / 6.0 * (f0 + 4.0 * f1 + f2);
        mass_se[static_cast<std::size_t>(b)] =
            du / 6.0 *
            std::sqrt(std::pow(f0 * sigma_rel[i], 2) + std::pow(4.0 * f1 * sigma_rel[i + 1], 2) +
                      std::pow(f2 * sigma_rel[i + 2], 2));
        total_mass += mass[static_cast<std::size_t>(b)];
    }

    res.chi2 = 0.0;
    for (int b = 0; b < nb; ++b) {
        const auto i = static_cast<std::size_t>(b);
        const double width = res.edges[i + 1] - res.edges[i];
        const double m = mass[i] / total_mass;
        const double m_se = mass_se[i] / total_mass;
        res.empirical.push_back(prob[i] / width);
        res.empirical_se.push_back(prob_se[i] / width);
        res.model_curve.push_back(m / width);
        res.model_se.push_back(m_se / width);
        const double var = prob_se[i] * prob_se[i] + m_se * m_se;
        if (var > 0.0) res.chi2 += (prob[i] - m) * (prob[i] - m) / var;
    }
    res.dof = nb - 1;
    const boost::math::chi_squared dist(res.dof);
    res.critical = boost::math::quantile(boost::math::complement(dist, options.significance));
    res.passes = res.chi2 < res.critical;
    return res;
}

// ---------------------------------------------------------------------------
// Asymptotic profile
// ---------------------------------------------------------------------------

Estimate tilted_profile(const TiltedModel& tm, const TestFunction& f, double x, double t,
                        const ProfileOptions& options) {
    const double z0 = std::log(x);
    const double lead = tm.log_ellbar(z0);
    const auto v = map_indices(options.n, options.exec, [&](std::size_t i) {
        Rng rng = path_stream(options.seed, i);
        const auto r = run_path(tm.base(), TiltedJumps{&tm}, z0, t, rng);
        const double fv = f.at_log(r.z);
        if (fv == 0.0) return 0.0;
        return fv * std::exp(lead - tm.log_ellbar(r.z));
    });
    return mean_estimate(v);
}

ProfileValue asymptotic_profile(const TiltedModel& tm, const TestFunction& f, double x, double t,
                                const ProfileOptions& options) {
    ProfileValue pv;
    pv.t = t;
    PathOptions direct{options.n, derive_seed(options.seed, 1), options.exec};
    const auto d = feynman_kac(tm.base(), x, t, f, direct);
    const double discount = std::exp(-tm.rho() * t);
    pv.direct = discount * d.mean;
    pv.direct_se = discount * d.std_error;
    ProfileOptions tilted = options;
    tilted.seed = derive_seed(options.seed, 2);
    const auto q = tilted_profile(tm, f, x, t, tilted);
    pv.tilted = q.mean;
    pv.tilted_se = q.std_error;
    return pv;
}

// ---------------------------------------------------------------------------
// Ratio limit
// ---------------------------------------------------------------------------

namespace {

// x e^{-rho s} E_s f(X_s) / X_s integrated over the part of a flow segment with
// log-mass in [u_lo, u_hi]; the segment starts at (t0, z0) with log E = log_e0.
double discounted_piece(const Model& model, const TestFunction& f, double x, double rho, double t0,
                        double z0, double log_e0, double u_lo, double u_hi) {
    const double lo = std::max(u_lo, f.log_support_lo());
    const double hi = std::min(u_hi, f.log_support_hi());
    if (!(hi > lo)) return 0.0;
    auto integrand = [&](double u) {
        const double fv = f.at_log(u);
        if (fv == 0.0) return 0.0;
        double s, log_e;
        if (model.is_linear()) {
            const double a = model.linear_rate();
            s = t0 + (u - z0) / a;
            log_e = a * s;
        } else {
            s = t0 + time_to_reach_log(model, z0, u);
            log_e = log_e0 + (u - z0);
        }
        return x * fv * std::exp(log_e - rho * s - u) / model.growth_per_mass_log(u);
    };
    double total = 0.0;
    double a = lo;
    for (double b : f.log_breakpoints()) {
        if (b <= a) continue;
        if (b >= hi) break;
        total += quad::gauss_legendre(integrand, a, b);
        a = b;
    }
    total += quad::gauss_legendre(integrand, a, hi);
    return total;
}

struct RatioObserver {
    const Model* model;
    const TestFunction* f;
    const TestFunction* g;
    double x;
    double rho;
    double z_start;
    std::span<const double> t_grid;
    std::vector<double>* num;  // per grid interval
    std::vector<double>* den;
    double jumps = 0.0;

    void segment(double t0, double z0, double t1, double z1) {
        const double log_e0 = (z0 - z_start) + jumps;
        double ta = t0;
        double za = z0;
        for (std::size_t k = 0; k < t_grid.size() && ta < t1; ++k) {
            if (t_grid[k] <= ta) continue;
            const double tb = std::min(t1, t_grid[k]);
            const double zb = tb == t1 ? z1 : flow_log(*model, z0, tb - t0);
            (*num)[k] += discounted_piece(*model, *f, x, rho, t0, z0, log_e0, za, zb);
            (*den)[k] += discounted_piece(*model, *g, x, rho, t0, z0, log_e0, za, zb);
            ta = tb;
            za = zb;
        }
    }
    void jump(double, double pre, double post) { jumps += pre - post; }
};

}  // namespace

std::vector<RatioPoint> ratio_limit(const TiltedModel& tm, const TestFunction& f, const TestFunction& g,
                                    double x, std::span<const double> t_grid, const ProfileOptions& options) {
    if (t_grid.empty()) return {};
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) fail(ErrorCode::InvalidParameter, "t_grid must increase");
    }
    const Model& model = tm.base();
    const double z0 = std::log(x);
    const std::size_t K = t_grid.size();
    struct PathSums {
        std::vector<double> num, den;
    };
    const auto paths = map_indices(options.n, options.exec, [&](std::size_t i) {
        Rng rng = path_stream(options.seed, i);
        PathSums p{std::vector<double>(K, 0.0), std::vector<double>(K, 0.0)};
        RatioObserver obs{&model, &f, &g, x, tm.rho(), z0, t_grid, &p.num, &p.den};
        run_path(model, BaseJumps{&model}, z0, t_grid.back(), rng, std::nullopt, obs);
        return p;
    });
    std::vector<RatioPoint> out(K);
    std::vector<double> col(options.n);
    double cum_num = 0.0, cum_den = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t i = 0; i < options.n; ++i) col[i] = paths[i].num[k];
        cum_num += pairwise_sum(col) / static_cast<double>(options.n);
        for (std::size_t i = 0; i < options.n; ++i) col[i] = paths[i].den[k];
        cum_den += pairwise_sum(col) / static_cast<double>(options.n);
        out[k].t = t_grid[k];
        out[k].numerator = cum_num;
        out[k].denominator = cum_den;
        out[k].ratio = cum_num / cum_den;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Eigenmeasure residual
// ---------------------------------------------------------------------------

ResidualResult eigenmeasure_residual(const Model& model, std::span<const double> y_grid,
                                     std::span<const double> nu, const TestFunction& f, double rho,
                                     const pde::PdeOptions& grid_options) {
    if (y_grid.size() != nu.size() || y_grid.size() < 2) {
        fail(ErrorCode::InvalidParameter, "nu must be given on a grid of at least two points");
    }
    const pde::PdeGrid grid(grid_options);
    const auto g = pde::sample(grid, f);
    const auto abar = pde::apply_generator(model, grid, g);
    std::vector<double> a_vals(y_grid.size()), f_vals(y_grid.size());
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
        const double y = y_grid[k];
        a_vals[k] = nu[k] * y * pde::interpolate(grid, abar.values, y);
        f_vals[k] = nu[k] * y * f(y);
    }
    ResidualResult r;
    r.pairing_A = trapezoid_log(y_grid, a_vals);
    r.pairing_f = trapezoid_log(y_grid, f_vals);
    r.residual = r.pairing_A - rho * r.pairing_f;
    const double scale = std::abs(rho * r.pairing_f);
    r.relative = scale > 0.0 ? std::abs(r.residual) / scale : (r.residual == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return r;
}

}  // namespace gfe
