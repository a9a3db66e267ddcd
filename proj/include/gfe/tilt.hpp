#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gfe/model.hpp"
#include "gfe/parallel.hpp"
#include "gfe/pde.hpp"
#include "gfe/pdmp.hpp"
#include "gfe/spectral.hpp"

namespace gfe {

/// The eigenfunction ell used to tilt X into the recurrent process Y, in log form.
class Eigenfunction {
public:
    /// ell = 1 exactly; the tilted kernel equals the base kernel.
    static Eigenfunction constant_one();
    /// ell(x) = (x/x0)^exponent with exponent >= 0, so ell(xv)/ell(x) = v^exponent <= 1.
    static Eigenfunction power_law(double exponent, double x0);
    /// Log-log interpolation of a table; the acceptance bound carries a safety factor.
    static Eigenfunction from_table(const EllTable& table, double safety = 1.05);

    /// log ell(e^z).
    double log_at(double z) const;
    double operator()(double x) const { return std::exp(log_at(std::log(x))); }
    /// Bound on sup_{0<v<1} ell(e^z v) / ell(e^z).
    double accept_bound_log(double z) const;
    double accept_bound(double x) const { return accept_bound_log(std::log(x)); }
    /// sup over z of accept_bound_log.
    double global_bound() const noexcept { return global_; }

private:
    enum class Kind { One, Power, Table };
    Kind kind_ = Kind::One;
    double exponent_ = 0.0;
    double log_x0_ = 0.0;
    double safety_ = 1.0;
    double global_ = 1.0;
    std::vector<double> lz_;
    std::vector<double> lv_;
    std::vector<double> prefix_max_;  ///< max of lv_[0..j]
};

class TiltedModel {
public:
    TiltedModel(const Model& base, Eigenfunction ell, double rho);

    const Model& base() const noexcept { return *base_; }
    const Eigenfunction& ell() const noexcept { return ell_; }
    double rho() const noexcept { return rho_; }
    /// log of ell_bar(x) = x ell(x).
    double log_ellbar(double z) const { return z + ell_.log_at(z); }

private:
    const Model* base_;
    Eigenfunction ell_;
    double rho_;
};

/// Thinning policy for Y: propose at rate Ksup * global_bound, accept with
/// K(p) ell(pV) / ell(p) divided by that rate. Throws BoundViolated when a
/// ratio exceeds the bound at p.
struct TiltedJumps {
    const TiltedModel* tm;

    double rate_bound() const { return tm->base().jump_rate_bound() * tm->ell().global_bound(); }
    double proposal_bound(double z) const {
        return tm->base().jump_rate_log(z) * tm->ell().accept_bound_log(z);
    }
    double accept(double z, double log_v) const;
};

Trajectory simulate_tilted(const TiltedModel& tm, double x, double t_end, Rng& rng);

struct OccupationOptions {
    std::size_t n_excursions = 10000;
    double t_max = 1000.0;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

struct OccupationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t completed = 0;
    std::size_t censored = 0;
};

/// Per-excursion integrals int_0^{H_Y(x0)} f_k(Y_s) ds for every f_k, from the
/// same excursions. Censored excursions are dropped (and counted).
struct OccupationSamples {
    std::vector<std::vector<double>> values;  ///< [function][completed excursion]
    std::size_t censored = 0;
};

OccupationSamples occupation_samples(const TiltedModel& tm, std::span<const TestFunction> fs,
                                     const OccupationOptions& options);

OccupationEstimate occupation_measure(const TiltedModel& tm, const TestFunction& f,
                                      const OccupationOptions& options);

/// f(x) / ell_bar(x) as a test function with the breakpoints of f.
TestFunction divide_by_ellbar(const TiltedModel& tm, const TestFunction& f);

struct StationaryOptions {
    double t_burn = 100.0;
    double t_run = 5e4;
    int bins = 32;
    double y_lo = 0.1;
    double y_hi = 10.0;
    int batches = 50;
    std::uint64_t seed = 1;
    /// Return samples used for the model curve at bin edges and centres.
    HitOptions curve;
    double significance = 1e-3;
};

struct StationaryResult {
    std::vector<double> edges;
    std::vector<double> centers;        ///< geometric bin centres
    std::vector<double> empirical;      ///< occupation density of Y (per unit mass), normalized on the bins
    std::vector<double> empirical_se;
    std::vector<double> model_curve;    ///< bin average of 1/(c(y) |L'_{y,y}(rho)|), normalized on the bins
    std::vector<double> model_se;
    double fraction_in_range = 0.0;     ///< share of run time spent inside [y_lo, y_hi]
    double chi2 = 0.0;
    double critical = 0.0;
    int dof = 0;
    bool passes = false;
    /// -L'_{y,y}(rho) at edges and centres (ordered edge, centre, edge, ...).
    NuProfile nu;
};

/// Time-average occupation histogram of one long Y path against the
/// stationary curve built from return-time derivatives of X.
StationaryResult stationary_density(const TiltedModel& tm, const StationaryOptions& options);

struct ProfileOptions {
    std::size_t n = 20000;
    std::uint64_t seed = 1;
    Execution exec = Execution::Parallel;
};

struct ProfileValue {
    double t = 0.0;
    double direct = 0.0;  ///< e^{-rho t} T_t f(x) by Feynman-Kac over X
    double direct_se = 0.0;
    double tilted = 0.0;  ///< ell_bar(x) mean of f(Y_t)/ell_bar(Y_t)
    double tilted_se = 0.0;
};

/// Both estimators of e^{-rho t} T_t f(x), from independent streams.
ProfileValue asymptotic_profile(const TiltedModel& tm, const TestFunction& f, double x, double t,
                                const ProfileOptions& options);

/// Only the tilted representation, e^{rho t} ell_bar(x) Q_x[f(Y_t)/ell_bar(Y_t)] without the e^{rho t}.
Estimate tilted_profile(const TiltedModel& tm, const TestFunction& f, double x, double t,
                        const ProfileOptions& options);

struct RatioPoint {
    double t = 0.0;
    double numerator = 0.0;    ///< int_0^t e^{-rho s} T_s f(x) ds
    double denominator = 0.0;  ///< int_0^t e^{-rho s} T_s g(x) ds
    double ratio = 0.0;
};

/// Time-integrated Feynman-Kac ratio on t_grid (increasing), f and g from the same paths.
std::vector<RatioPoint> ratio_limit(const TiltedModel& tm, const TestFunction& f, const TestFunction& g,
                                    double x, std::span<const double> t_grid, const ProfileOptions& options);

struct ResidualResult {
    double pairing_A = 0.0;    ///< <nu, A fbar>
    double pairing_f = 0.0;    ///< <nu, fbar>
    double residual = 0.0;     ///< <nu, A fbar> - rho <nu, fbar>
    double relative = 0.0;     ///< |residual| / |rho <nu, fbar>|
};

/// Eigenmeasure residual with nu given as a density on y_grid (trapezoid in
/// log-mass) and A fbar from the grid operator, fbar(x) = x f(x).
ResidualResult eigenmeasure_residual(const Model& model, std::span<const double> y_grid,
                                     std::span<const double> nu, const TestFunction& f, double rho,
                                     const pde::PdeOptions& grid_options = {});

}  // namespace gfe
