#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gfe/model.hpp"
#include "gfe/test_function.hpp"

/// Grid solver for the backward equation d/dt g = Abar g on a uniform grid in
/// log-mass, with Abar g = c g' + int_0^x (g(y) - g(x)) kbar(x, y) dy + cbar g.
namespace gfe::pde {

struct PdeOptions {
    int n = 512;
    double x_min = 1e-3;
    double x_max = 1e3;
    double cfl = 0.5;
    /// Gauss-Legendre nodes per half-cell when building the fragmentation weights.
    int quad_nodes = 32;
};

class PdeGrid {
public:
    explicit PdeGrid(const PdeOptions& options = {});

    int size() const noexcept { return static_cast<int>(z_.size()); }
    double dz() const noexcept { return dz_; }
    double z(int i) const { return z_[static_cast<std::size_t>(i)]; }
    double x(int i) const { return x_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& zs() const noexcept { return z_; }
    const std::vector<double>& xs() const noexcept { return x_; }
    const PdeOptions& options() const noexcept { return opt_; }

private:
    PdeOptions opt_;
    double dz_ = 0.0;
    std::vector<double> z_;
    std::vector<double> x_;
};

struct GridFunction {
    std::vector<double> values;
    double time = 0.0;
    std::string label;
};

/// Nodal values of f.
GridFunction sample(const PdeGrid& grid, const TestFunction& f);
/// Nodal values of f(x) / x.
GridFunction sample_over_mass(const PdeGrid& grid, const TestFunction& f);
/// Linear interpolation in log-mass; constant beyond the ends.
double interpolate(const PdeGrid& grid, std::span<const double> g, double x);

/// The discretized operators for one (model, grid) pair.
class Discretization {
public:
    Discretization(const Model& model, const PdeGrid& grid);

    /// Gbar g = cbar(x) dg/dz + K(x) int (g(xv) - g(x)) q(v) dv.
    void apply_G(std::span<const double> g, std::span<double> out) const;
    /// Abar g = Gbar g + cbar(x) g.
    void apply_Abar(std::span<const double> g, std::span<double> out) const;

    /// P(x V < x_min) at each node: the ratio-law mass handled by constant extrapolation.
    const std::vector<double>& tail_probability() const noexcept { return tail_; }
    const std::vector<double>& growth_per_mass() const noexcept { return cbar_; }
    const std::vector<double>& jump_rate() const noexcept { return k_; }
    const PdeGrid& grid() const noexcept { return *grid_; }
    double cbar_sup() const noexcept { return cbar_sup_; }
    double k_sup() const noexcept { return k_sup_; }

private:
    const PdeGrid* grid_;
    std::vector<double> cbar_;
    std::vector<double> k_;
    std::vector<double> tail_;
    // offset weights: w_[d] couples node i to node i - d; the left boundary node
    // additionally collects its right half-hat plus the tail mass.
    std::vector<double> w_;
    std::vector<double> w_boundary_;
    double cbar_sup_ = 0.0;
    double k_sup_ = 0.0;
};

/// Abar g.
GridFunction apply_generator(const Model& model, const PdeGrid& grid, const GridFunction& g);
/// A fbar via A fbar(x) = x Abar f(x), with f = fbar / x; input and output are fbar-side values.
GridFunction apply_A(const Model& model, const PdeGrid& grid, const GridFunction& fbar);
/// Gbar g (Abar without the zero-order term).
GridFunction apply_G(const Model& model, const PdeGrid& grid, const GridFunction& g);

struct EvolveResult {
    GridFunction g;
    /// Per-node accumulated estimate of the error from constant extrapolation below x_min.
    std::vector<double> boundary_leak;
    double max_boundary_leak = 0.0;
    int steps = 0;
    double dt = 0.0;
};

/// Heun (SSP-RK2) integration of d/dt g = Abar g up to time t.
/// `support_hi` is the largest mass where g0 is non-zero; the run is refused
/// (DomainTooSmall) when support_hi e^{cbar_sup t} reaches x_max.
EvolveResult evolve_backward(const Model& model, const PdeGrid& grid, const GridFunction& g0, double t,
                             double support_hi, std::optional<double> dt_override = std::nullopt);

/// T_t f on the grid: evolves g0 = f/x; T_t f(x) = x g_t(x).
EvolveResult evolve_semigroup(const Model& model, const PdeGrid& grid, const TestFunction& f, double t,
                              std::optional<double> dt_override = std::nullopt);

/// x g_t(x) from an evolve_semigroup result.
double semigroup_value(const PdeGrid& grid, const EvolveResult& r, double x);

}  // namespace gfe::pde
