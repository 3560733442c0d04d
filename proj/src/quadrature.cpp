#include "svolt/quadrature.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "svolt/error.hpp"

namespace svolt::quad {

namespace {

// QUADPACK (7,15) Gauss-Kronrod pair on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct CellResult {
  double kronrod;
  double error;
};

CellResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    resk += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
  }
  const double kron = resk * h;
  const double err = std::abs((resk - resg) * h);
  return {kron, err};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                const Options& opts, int depth, double whole_scale) {
  const CellResult r = gk15(f, a, b);
  const double tol =
      std::max(opts.abs_tol, opts.rel_tol * std::max(std::abs(r.kronrod), whole_scale));
  if (r.error <= tol || b - a < 1e-15 * std::max(1.0, std::abs(a))) return r.kronrod;
  if (depth >= opts.max_depth)
    throw integration_error("adaptive quadrature: max depth reached, error " +
                            std::to_string(r.error) + " on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, opts, depth + 1, whole_scale) +
         adaptive(f, m, b, opts, depth + 1, whole_scale);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 Options opts) {
  if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
  if (a == b) return 0.0;
  const CellResult first = gk15(f, a, b);
  if (!std::isfinite(first.kronrod))
    throw integration_error("integrate: non-finite integrand");
  return adaptive(f, a, b, opts, 0, std::abs(first.kronrod));
}

double integrate_singular0(const std::function<double(double)>& f, double T,
                           double exponent, Options opts) {
  if (T <= 0.0) throw std::invalid_argument("integrate_singular0: T must be positive");
  if (exponent <= -1.0)
    throw integration_error("integrate_singular0: non-integrable exponent");
  if (exponent == 0.0) return integrate(f, 0.0, T, opts);
  const double p = 1.0 + exponent;
  // s = u^{1/p}, ds = (1/p) u^{1/p - 1} du
  auto g = [&f, p](double u) {
    const double s = std::pow(u, 1.0 / p);
    return f(s) * std::pow(u, (1.0 - p) / p) / p;
  };
  return integrate(g, 0.0, std::pow(T, p), opts);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double first_width, Options opts) {
  if (first_width <= 0.0)
    throw std::invalid_argument("integrate_to_inf: width must be positive");
  double total = 0.0;
  double lo = a;
  double w = first_width;
  int quiet = 0;
  for (int cell = 0; cell < 200; ++cell) {
    const double hi = lo + w;
    const double part = integrate(f, lo, hi, opts);
    total += part;
    if (std::abs(part) <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)))
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 3) return total;
    lo = hi;
    w *= 2.0;
  }
  throw integration_error("integrate_to_inf: tail did not become negligible");
}

} // namespace svolt::quad
