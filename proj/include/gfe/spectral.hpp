#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gfe/model.hpp"
#include "gfe/parallel.hpp"
#include "gfe/pdmp.hpp"

namespace gfe {

/// L_hat(q) = (1/N) sum over hits of exp(log W - q H); censored paths count as 0.
Estimate laplace_estimate(const HitSampleSet& set, double q);
/// Same mean without the standard error (used inside root finding).
double laplace_value(const HitSampleSet& set, double q);

struct DerivativeEstimate {
    double value = 0.0;  ///< -L_hat'(q) = (1/N) sum H exp(log W - q H)
    double std_error = 0.0;
    /// Share of the total carried by the largest 1% of summands.
    double top_share = 0.0;
    /// Heuristic for -L'(q) = inf: the top 1% carry more than half the mass.
    bool divergent = false;
};

DerivativeEstimate laplace_derivative(const HitSampleSet& set, double q);

struct SpectralEstimate {
    double rho_hat = 0.0;
    double std_error = 0.0;
    /// Half-width of the final bisection bracket; rho_hat is only resolved to this.
    double root_tolerance = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double L_at_rho = 0.0;
    double L_std_error = 0.0;
    double minus_Lprime = 0.0;
    bool divergent = false;
    double hit_fraction = 0.0;
    double censor_fraction = 0.0;
    std::size_t N = 0;
    double T_max = 0.0;
    std::uint64_t seed = 0;
};

/// Solves L_hat(q) = 1 by bisection on the fixed sample (common random
/// numbers). Censoring biases L_hat and therefore rho_hat downwards.
SpectralEstimate find_rho(const HitSampleSet& set, double cbar_sup, double tol = 1e-8);

/// Samples returns to x0 and runs find_rho.
SpectralEstimate estimate_rho(const Model& model, const HitOptions& options);

/// Eigenfunction table ell_hat(x) = L_hat_{x,x0}(rho) with log-log interpolation.
class EllTable {
public:
    struct Point {
        double x = 0.0;
        double value = 0.0;
        double std_error = 0.0;
        /// -d ell_hat / d rho at the tabulated rho, for propagating the error of rho_hat.
        double minus_drho = 0.0;
        std::size_t hits = 0;
        bool valid = false;  ///< false when no path hit x0 (NoHits); skipped by interpolation
    };

    EllTable(std::vector<Point> points, double rho_used, double x0);

    const std::vector<Point>& points() const noexcept { return points_; }
    double rho_used() const noexcept { return rho_; }
    double x0() const noexcept { return x0_; }

    /// Linear in (log x, log ell) between valid nodes, constant beyond the ends.
    double operator()(double x) const;
    double log_at(double z) const;
    bool extrapolates(double x) const;

    /// Valid nodes as (log x, log ell), sorted by log x.
    const std::vector<double>& log_nodes() const noexcept { return lz_; }
    const std::vector<double>& log_values() const noexcept { return lv_; }

private:
    std::vector<Point> points_;
    std::vector<double> lz_;
    std::vector<double> lv_;
    double rho_ = 0.0;
    double x0_ = 1.0;
};

/// Point k draws from seed derive_seed(options.seed, k).
EllTable build_ell_table(const Model& model, double rho, std::span<const double> grid,
                         const HitOptions& options);

/// Least-squares slope of log ell_hat against log x over valid nodes in [lo, hi].
double log_log_slope(const EllTable& table, double lo, double hi);

/// Unnormalized eigenmeasure density 1 / (c(y) y ell(y) |L'_{y,y}(rho)|).
double nu_density(const Model& model, double ell_y, double minus_Lprime, double y);

struct NuProfile {
    std::vector<double> y;
    std::vector<double> minus_Lprime;
    std::vector<double> minus_Lprime_se;
    std::vector<double> ell;
    std::vector<double> density;     ///< unnormalized
    double normalizer = 0.0;         ///< trapezoid of density * y ell(y) over the grid
    std::vector<double> normalized;  ///< density / normalizer, so that <nu, ell_bar> = 1
};

/// Estimates -L'_{y,y}(rho) at every grid point from fresh return samples
/// (point k uses seed derive_seed(options.seed, k)) and assembles nu.
/// Throws DivergentDerivative when the heuristic flags a point.
NuProfile estimate_nu(const Model& model, const std::function<double(double)>& ell, double rho,
                      std::span<const double> y_grid, const HitOptions& options);

/// Trapezoid in log-mass of g(y) * y over the grid: int g(y) dy.
double trapezoid_log(std::span<const double> y, std::span<const double> g);

/// <nu, f> with the normalized density, trapezoid in log-mass.
double pair_nu(const NuProfile& nu, const std::function<double(double)>& f);

}  // namespace gfe
