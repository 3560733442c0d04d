#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace svolt {

/// Point mass c at location x > 0.
struct MeasureAtom {
  double x;
  double c;
};

/// Absolutely continuous piece of a Bernstein measure with a closed-form
/// density. RLPower is scale * (x - shift)^{-alpha} * e^{-tilt x} on (a, b);
/// LogKernel is scale * (1 - e^{-x})/x * e^{-tilt x} on (a, b).
struct DensitySegment {
  enum class Family { RLPower, LogKernel };
  Family family = Family::RLPower;
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  double alpha = 0.75; // RLPower exponent, in (0, 1)
  double shift = 0.0;  // RLPower offset; support starts at max(a, shift)
  double scale = 1.0;
  double tilt = 0.0; // extra e^{-tilt x} factor (kernel time shift)

  double density(double x) const;
};

/// Bernstein measure of a completely monotone kernel:
/// K(t) = k_infinity + int e^{-xt} mu(dx), mu = atoms + density segments.
/// mu({0}) = 0 by construction; k_infinity is the K(inf) delta_0 coordinate.
struct BernsteinMeasure {
  double k_infinity = 0.0;
  std::vector<MeasureAtom> atoms;
  std::vector<DensitySegment> segments;

  void validate() const;

  /// Named catalog entries.
  static BernsteinMeasure riemann_liouville(double alpha, double beta = 0.0,
                                            double scale_mult = 1.0);
  static BernsteinMeasure log_kernel();
  static BernsteinMeasure from_atoms(double k_infinity,
                                     std::vector<MeasureAtom> atoms);
};

/// e^{-eps x} tilt of every component (Bernstein measure of K(. + eps)).
BernsteinMeasure tilt_measure(const BernsteinMeasure& mu, double eps);

/// K(t) = k_infinity + int e^{-xt} mu(dx); closed forms per segment family.
double measure_laplace(const BernsteinMeasure& mu, double t);

/// mu((0, x]) excluding the k_infinity coordinate.
double measure_cdf(const BernsteinMeasure& mu, double x);

/// int_B^inf e^{-xt} mu(dx) and int_B^inf x e^{-xt} mu(dx) over the density
/// segments only (tail integrals used by the quadrature discretizer).
double density_tail_laplace(const DensitySegment& seg, double B, double t);
double density_tail_laplace_x(const DensitySegment& seg, double B, double t);

/// Segment mass and first moment over [lo, hi] (closed forms).
double segment_mass(const DensitySegment& seg, double lo, double hi);
double segment_first_moment(const DensitySegment& seg, double lo, double hi);

/// int f dmu over atoms and densities; decay_hint > 0 tells the tail
/// truncation that f decays at least like e^{-decay_hint x}.
double measure_integrate(const BernsteinMeasure& mu,
                         const std::function<double(double)>& f,
                         double decay_hint = 0.0, double rel_tol = 1e-11);

/// eta_* = inf{eta : int (1+x)^{-eta} dmu < inf}; closed form per catalog
/// family, numeric bisection on tail convergence otherwise.
double eta_star(const BernsteinMeasure& mu);

/// True when int (1+x)^{-eta} dmu converges (tail rule per family).
bool weight_integral_finite(const BernsteinMeasure& mu, double eta);

std::string measure_to_config(const BernsteinMeasure& mu);
BernsteinMeasure measure_from_config(const std::string& text);

} // namespace svolt
