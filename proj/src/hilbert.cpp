#include "svolt/hilbert.hpp"

#include <cmath>
#include <stdexcept>

#include "svolt/error.hpp"

namespace svolt {

HilbertElement HilbertElement::zero(double eta) {
  HilbertElement y;
  y.eta = eta;
  return y;
}

HilbertElement HilbertElement::weight(double eta) {
  HilbertElement y;
  y.at_zero = 1.0;
  y.base = [eta](double x) { return std::pow(1.0 + x, -eta); };
  y.eta = eta;
  return y;
}

HilbertElement HilbertElement::xi_k(const BernsteinMeasure& mu, double eta) {
  HilbertElement y;
  y.at_zero = mu.k_infinity;
  y.base = [](double) { return 1.0; };
  y.eta = eta;
  return y;
}

HilbertElement HilbertElement::constant_curve(double x0, double eta) {
  // g = x0 lives entirely on the semigroup-invariant zero coordinate,
  // so Xi S(t) xi_g = x0 for every t.
  HilbertElement y;
  y.at_zero = x0;
  y.eta = eta;
  return y;
}

double xi_projection(const HilbertElement& y, const BernsteinMeasure& mu) {
  const double star = eta_star(mu);
  if (!(y.eta > star))
    throw std::domain_error("xi_projection: functional unbounded on H_eta "
                            "(eta <= eta_*)");
  try {
    return y.at_zero +
           measure_integrate(mu, [&y](double x) { return y.eval(x); }, y.decay);
  } catch (const integration_error& err) {
    throw std::domain_error(std::string("xi_projection: ") + err.what());
  }
}

double inner_product_eta(const HilbertElement& y, const HilbertElement& y2,
                         double eta, const BernsteinMeasure& mu) {
  try {
    const double tail = measure_integrate(
        mu,
        [&](double x) { return y.eval(x) * y2.eval(x) * std::pow(1.0 + x, eta); },
        y.decay + y2.decay);
    return y.at_zero * y2.at_zero + tail;
  } catch (const integration_error& err) {
    throw std::domain_error(std::string("inner_product_eta: ") + err.what());
  }
}

double norm_eta(const HilbertElement& y, double eta, const BernsteinMeasure& mu) {
  return std::sqrt(inner_product_eta(y, y, eta, mu));
}

HilbertElement semigroup_apply(double t, HilbertElement y) {
  if (t < 0.0) throw std::domain_error("semigroup_apply: t < 0");
  y.decay += t;
  return y;
}

double semigroup_kappa(double delta) {
  if (delta <= 0.0) return 1.0;
  return std::max(1.0, std::pow(0.5 * delta, 0.5 * delta));
}

LiftFunctional LiftFunctional::projection() { return {Kind::Projection, 0.0}; }

LiftFunctional LiftFunctional::shift(double eps) {
  if (eps <= 0.0) throw std::invalid_argument("LiftFunctional::shift: eps <= 0");
  return {Kind::Shift, eps};
}

LiftFunctional LiftFunctional::rl_target(double beta) {
  if (beta <= 0.5 || beta >= 1.0)
    throw std::invalid_argument("LiftFunctional::rl_target: beta must be in (1/2,1)");
  return {Kind::RLTarget, beta};
}

std::string LiftFunctional::name() const {
  switch (kind) {
    case Kind::Projection:
      return "projection";
    case Kind::Shift:
      return "shift(" + std::to_string(param) + ")";
    case Kind::RLTarget:
      return "rl_target(" + std::to_string(param) + ")";
  }
  return "?";
}

HilbertElement LiftFunctional::element(double eta, const BernsteinMeasure& mu) const {
  HilbertElement y;
  y.eta = eta;
  switch (kind) {
    case Kind::Projection:
      return HilbertElement::weight(eta);
    case Kind::Shift: {
      const double eps = param;
      y.at_zero = 1.0; // density e^{-eps x} equals 1 at the zero coordinate
      y.base = [eta](double x) { return std::pow(1.0 + x, -eta); };
      y.decay = eps;
      return y;
    }
    case Kind::RLTarget: {
      // base measure must be an RL density x^{-alpha}/(Gamma(alpha)Gamma(1-alpha));
      // the functional carries the density ratio to the beta_j target.
      if (mu.segments.size() != 1 ||
          mu.segments[0].family != DensitySegment::Family::RLPower ||
          mu.segments[0].shift != 0.0 || mu.segments[0].tilt != 0.0)
        throw std::invalid_argument(
            "LiftFunctional::rl_target: base measure must be a plain RL density");
      const auto seg = mu.segments[0];
      const double beta = param;
      const double ratio_scale =
          (1.0 / (std::tgamma(beta) * std::tgamma(1.0 - beta))) / seg.scale;
      y.at_zero = 0.0;
      y.base = [eta, seg, beta, ratio_scale](double x) {
        return std::pow(1.0 + x, -eta) * ratio_scale * std::pow(x, seg.alpha - beta);
      };
      return y;
    }
  }
  return y;
}

FunctionalKernelResult functional_kernel(const LiftFunctional& y,
                                         const BernsteinMeasure& mu, double eta,
                                         const KernelSpec& base_kernel) {
  (void)eta;
  FunctionalKernelResult out{base_kernel, 0.0, eta_star(mu), true};
  switch (y.kind) {
    case LiftFunctional::Kind::Projection:
      out.rho = 0.0;
      return out;
    case LiftFunctional::Kind::Shift: {
      out.kernel = KernelSpec::shifted(base_kernel, y.param);
      out.rho = -std::max(eta_star(mu), 0.0);
      out.eta_star_j = -std::numeric_limits<double>::infinity();
      return out;
    }
    case LiftFunctional::Kind::RLTarget: {
      if (mu.segments.size() != 1 ||
          mu.segments[0].family != DensitySegment::Family::RLPower) {
        out.rho_known = false;
        return out;
      }
      const double alpha = mu.segments[0].alpha;
      const double beta = y.param;
      out.kernel = KernelSpec::riemann_liouville(beta - 0.5);
      out.rho = alpha - beta;
      out.eta_star_j = 1.0 - beta;
      return out;
    }
  }
  return out;
}

} // namespace svolt
