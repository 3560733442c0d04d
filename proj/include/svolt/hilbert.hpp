#pragma once

#include <functional>
#include <memory>
#include <string>

#include "svolt/kernel.hpp"
#include "svolt/measure.hpp"

namespace svolt {

/// Element of the weighted space H_eta attached to a Bernstein measure.
/// Stored as a base function together with an exact exponential decay, so
/// that semigroup applications compose without round-off:
/// y(x) = base(x) * e^{-decay x}, y(0-coordinate) = at_zero.
struct HilbertElement {
  double at_zero = 0.0;
  std::function<double(double)> base = [](double) { return 0.0; };
  double decay = 0.0;
  double eta = 0.0; // the space H_eta this element claims membership of

  double eval(double x) const {
    const double b = base(x);
    return decay == 0.0 ? b : b * std::exp(-decay * x);
  }

  static HilbertElement zero(double eta = 0.0);
  /// w_eta(x) = (1+x)^{-eta}, the Riesz representer of the projection.
  static HilbertElement weight(double eta);
  /// xi_K: indicator of (0,inf) plus K(inf) at the zero coordinate.
  static HilbertElement xi_k(const BernsteinMeasure& mu, double eta = 0.0);
  static HilbertElement constant_curve(double x0, double eta = 0.0);
};

/// Xi y = y(0) + int y dmu; continuous on H_eta for eta > eta_*.
double xi_projection(const HilbertElement& y, const BernsteinMeasure& mu);

/// <y, y2>_eta = y(0)y2(0) + int y y2 (1+x)^eta dmu.
double inner_product_eta(const HilbertElement& y, const HilbertElement& y2,
                         double eta, const BernsteinMeasure& mu);

double norm_eta(const HilbertElement& y, double eta, const BernsteinMeasure& mu);

/// S(t)y(x) = e^{-tx} y(x); exact semigroup law via accumulated decay.
HilbertElement semigroup_apply(double t, HilbertElement y);

/// kappa(delta) from the semigroup operator-norm bound
/// ||S(t)||_{H_eta' -> H_eta} <= C_T kappa(eta - eta') t^{-(eta-eta')/2}.
double semigroup_kappa(double delta);

/// Functionals y used in the lift CLTs, of the form
/// y(x) = (1+x)^{-eta} d(nu-bar)/d(mu_K-bar)(x).
struct LiftFunctional {
  enum class Kind { Projection, Shift, RLTarget };
  Kind kind = Kind::Projection;
  double param = 0.0; // Shift: epsilon; RLTarget: beta_j in (1/2, 1)

  static LiftFunctional projection();
  static LiftFunctional shift(double eps);
  static LiftFunctional rl_target(double beta);

  HilbertElement element(double eta, const BernsteinMeasure& mu) const;
  std::string name() const;
};

struct FunctionalKernelResult {
  KernelSpec kernel;
  double rho = 0.0;      // density bound d(nu)/d(mu_K) <= C (1+x)^rho on [1,inf)
  double eta_star_j = 0.0;
  bool rho_known = true; // false -> CLT precondition checks fail soft
};

/// Kernel K_j(t) = <S(t) xi_K, y_j>_eta induced by the transformed Bernstein
/// measure; for the projection functional this returns the original kernel.
FunctionalKernelResult functional_kernel(const LiftFunctional& y,
                                         const BernsteinMeasure& mu, double eta,
                                         const KernelSpec& base_kernel);

} // namespace svolt
