#pragma once

#include "gfe/model.hpp"
#include "gfe/test_function.hpp"

/// Closed forms for linear growth c(x) = a x, constant rate lambda and
/// power-law ratio density beta v^(beta-1). log X is then a compound Poisson
/// process with drift a and jumps of law beta e^{beta u} du on u < 0.
namespace gfe::levy {

struct LevyParams {
    double a = 1.0;
    double lambda = 4.0;
    double beta = 2.0;
};

/// Throws InvalidParameter unless a, lambda, beta are all positive.
void check(const LevyParams& p);

/// Reads (a, lambda, beta) from a linear / constant-rate / power-law model.
LevyParams from_model(const Model& model);

/// Laplace exponent psi(theta) = a theta - lambda theta / (beta + theta), theta > -beta.
double psi(const LevyParams& p, double theta);
double psi_prime(const LevyParams& p, double theta);
double psi_second(const LevyParams& p, double theta);
/// Cumulant kappa(theta) = psi(theta - 1) + a, so that A x^theta = kappa(theta) x^theta.
double kappa(const LevyParams& p, double theta);
double kappa_second(const LevyParams& p, double theta);

struct ThetaRho {
    double theta0 = 0.0;
    double rho = 0.0;
};

/// Minimiser theta0 of kappa and rho = kappa(theta0). DriftZero when theta0 = 1.
ThetaRho theta0_rho(const LevyParams& p);

/// Right inverse of psi: the largest theta with psi(theta) = r.
double Phi(const LevyParams& p, double r);

/// First-return transform L_{x0,x0}(q) = 1 - psi'(Phi(q - a)), q >= rho.
double L_closed(const LevyParams& p, double q);
/// -L'(q) = psi''(Phi) / psi'(Phi); +inf at q = rho.
double minus_Lprime_closed(const LevyParams& p, double q);

/// ell(x) = (x/x0)^(theta0 - 1).
double ell_closed(const LevyParams& p, double x, double x0);

/// Large-t equivalent of T_t f(x):
/// x^theta0 e^{t kappa(theta0)} / sqrt(2 pi t kappa''(theta0)) * int f(y) y^-(theta0+1) dy.
double asymptotic_value(const LevyParams& p, double t, const TestFunction& f, double x);

/// int f(y) y^-(theta0+1) dy for compactly supported f.
double profile_integral(const LevyParams& p, const TestFunction& f);

}  // namespace gfe::levy
