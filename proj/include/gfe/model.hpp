#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "gfe/error.hpp"
#include "gfe/rng.hpp"

namespace gfe {

// ---------------------------------------------------------------------------
// Problem definition
// ---------------------------------------------------------------------------

/// c(x) = a x.
struct LinearGrowth {
    double a = 1.0;
};

/// Arbitrary positive growth rate with sup_x c(x)/x <= cbar_sup. The flow is
/// integrated numerically (see pdmp.hpp) to relative tolerance `rel_tol`.
struct GeneralGrowth {
    std::function<double(double)> c;
    double cbar_sup = 0.0;
    std::string name = "general";
    double rel_tol = 1e-12;
    int max_iterations = 200;
};

using GrowthSpec = std::variant<LinearGrowth, GeneralGrowth>;

/// K(x) = b.
struct ConstantRate {
    double b = 0.0;
};

/// K(x) = b x^gamma0 / (1 + x^gamma0).
struct SaturatingRate {
    double b = 0.0;
    double gamma0 = 1.0;
};

using RateSpec = std::variant<ConstantRate, SaturatingRate>;

/// Size-biased daughter ratio with density 2v on (0, 1) (uniform binary splitting).
struct UniformBinaryRatio {};

/// Density beta v^(beta - 1) on (0, 1).
struct PowerBetaRatio {
    double beta = 2.0;
};

/// User-supplied density on (0, 1), sampled by rejection against `density_bound`.
/// The law must have full support in (0, 1) for the process to be irreducible.
struct CustomRatio {
    std::function<double(double)> density;
    double density_bound = 0.0;
    std::string name = "custom";
};

using RatioLaw = std::variant<UniformBinaryRatio, PowerBetaRatio, CustomRatio>;

struct FragmentationSpec {
    RateSpec rate;
    RatioLaw ratio;
};

struct ModelSpec {
    GrowthSpec growth;
    FragmentationSpec frag;
    double x0 = 1.0;
    std::string label;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct ValidationOptions {
    double grid_lo = 1e-4;
    double grid_hi = 1e4;
    int grid_points = 256;
    double normalization_tol = 1e-8;
};

struct ValidationIssue {
    ErrorCode code;
    std::string message;
    double location = 0.0;  ///< offending grid point (or 0 when not applicable)
    double value = 0.0;     ///< offending value / integral
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    double ratio_integral = 0.0;

    bool ok() const noexcept { return issues.empty(); }
    std::string summary() const;
};

class ValidationError : public Error {
public:
    explicit ValidationError(ValidationReport report);
    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

std::vector<double> log_spaced(double lo, double hi, int n);

ValidationReport check_model(const ModelSpec& spec, const ValidationOptions& options = {});

/// A validated, immutable model. Safe to share between threads.
class Model {
public:
    /// Runs the grid checks and throws ValidationError on any violation.
    static Model validate(ModelSpec spec, const ValidationOptions& options = {});

    const ModelSpec& spec() const noexcept { return spec_; }
    const std::string& label() const noexcept { return spec_.label; }
    double x0() const noexcept { return spec_.x0; }

    // growth -----------------------------------------------------------------
    bool is_linear() const noexcept { return linear_; }
    /// a for linear growth; cbar_sup otherwise.
    double linear_rate() const noexcept { return a_; }
    double growth(double x) const;
    /// c(x) / x.
    double growth_per_mass(double x) const;
    double growth_per_mass_log(double z) const;
    /// sup_x c(x)/x.
    double cbar_sup() const noexcept { return cbar_sup_; }

    // fragmentation ------------------------------------------------------------
    double jump_rate(double x) const;
    double jump_rate_log(double z) const;
    /// sup_x K(x).
    double jump_rate_bound() const noexcept { return k_sup_; }

    double ratio_density(double v) const;
    /// P(V <= v).
    double ratio_cdf(double v) const;
    /// Draws log V with V ~ Q.
    double sample_log_ratio(Rng& rng) const;
    /// Density of the ratio law is x-independent for every supported family.
    double moment_ratio(double x, double s) const;
    /// sup over the validation grid of M_x(s).
    double moment_sup(double s) const;
    /// int_{lo}^{hi} v^s q(v) dv.
    double partial_moment(double s, double v_lo, double v_hi) const;
    /// kbar(x, y) = K(x) q(y/x) / x on 0 < y < x, zero otherwise.
    double kernel_density(double x, double y) const;
    /// k(x, y) = (x/y) kbar(x, y).
    double fragmentation_kernel(double x, double y) const;

    /// Exponent beta when the ratio law is a power law (uniform binary: 2); 0 otherwise.
    double power_beta() const noexcept { return beta_; }

    const std::vector<double>& validation_grid() const noexcept { return grid_; }

private:
    Model() = default;

    ModelSpec spec_;
    bool linear_ = false;
    double a_ = 0.0;
    double cbar_sup_ = 0.0;
    double k_sup_ = 0.0;
    double beta_ = 0.0;
    std::vector<double> grid_;
};

// Built-in model constructors ---------------------------------------------------

ModelSpec linear_power_beta_spec(double a, double lambda, double beta, double x0 = 1.0,
                                 std::string label = "levy");
ModelSpec linear_uniform_binary_spec(double a, double b, double gamma0, double x0 = 1.0,
                                     std::string label = "uniform-binary");

}  // namespace gfe
