#pragma once

#include <functional>

namespace svolt::quad {

struct Options {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 60;
};

/// Adaptive Gauss-Kronrod (7,15) on a finite interval. Throws integration_error
/// when the error estimate cannot be brought below tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 Options opts = {});

/// \f$\int_0^T f(s)\,ds\f$ where f(s) ~ c s^exponent as s -> 0, exponent > -1.
/// The power substitution s = u^{1/(1+exponent)} removes the singularity.
double integrate_singular0(const std::function<double(double)>& f, double T,
                           double exponent, Options opts = {});

/// \f$\int_a^\infty f\f$ by geometric continuation; stops when three successive
/// cells contribute less than the tolerance relative to the accumulated value.
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double first_width, Options opts = {});

} // namespace svolt::quad
