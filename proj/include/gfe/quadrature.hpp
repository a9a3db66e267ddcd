#pragma once

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace gfe::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
};

/// Fixed 15-point Gauss-Legendre on [a, b]; exact for polynomials of degree <= 29.
template <class F>
double gauss_legendre(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

/// Adaptive Gauss-Kronrod (31 points) for smooth integrands on a finite interval.
template <class F>
Result adaptive(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 15) {
    Result r;
    if (!(b > a)) return r;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol,
                                                                           &r.error);
    return r;
}

/// Double-exponential rule; tolerates integrable endpoint singularities.
template <class F>
Result endpoint_singular(F&& f, double a, double b, double tol = 1e-12) {
    Result r;
    if (!(b > a)) return r;
    boost::math::quadrature::tanh_sinh<double> integrator;
    double l1 = 0.0;
    try {
        r.value = integrator.integrate(f, a, b, tol, &r.error, &l1);
    } catch (const std::exception&) {
        r.value = std::numeric_limits<double>::infinity();
        r.error = std::numeric_limits<double>::infinity();
    }
    return r;
}

}  // namespace gfe::quad
