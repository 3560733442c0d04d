#include "svolt/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "svolt/error.hpp"
#include "svolt/quadrature.hpp"
#include "svolt/special.hpp"

namespace svolt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_A^B e^{-y tau} y^{-alpha} dy, 0 <= A <= B <= inf, tau >= 0.
double power_exp_integral(double A, double B, double alpha, double tau) {
  using special::upper_inc_gamma;
  if (tau == 0.0) {
    if (std::isinf(B)) throw integration_error("power_exp_integral: divergent");
    return (std::pow(B, 1.0 - alpha) - std::pow(A, 1.0 - alpha)) / (1.0 - alpha);
  }
  const double hi = std::isinf(B) ? 0.0 : upper_inc_gamma(1.0 - alpha, B * tau);
  return std::pow(tau, alpha - 1.0) * (upper_inc_gamma(1.0 - alpha, A * tau) - hi);
}

// int_A^B e^{-y tau} y^{1-alpha} dy.
double power_exp_integral_x(double A, double B, double alpha, double tau) {
  using special::upper_inc_gamma;
  if (tau == 0.0) {
    if (std::isinf(B)) throw integration_error("power_exp_integral_x: divergent");
    return (std::pow(B, 2.0 - alpha) - std::pow(A, 2.0 - alpha)) / (2.0 - alpha);
  }
  const double hi = std::isinf(B) ? 0.0 : upper_inc_gamma(2.0 - alpha, B * tau);
  return std::pow(tau, alpha - 2.0) * (upper_inc_gamma(2.0 - alpha, A * tau) - hi);
}

// int_A^B e^{-c u} / u du = E1(cA) - E1(cB); A = 0 must be paired by caller.
double e1_diff(double c, double A, double B) {
  using special::expint_e1;
  const double hi = std::isinf(B) ? 0.0 : expint_e1(c * B);
  return expint_e1(c * A) - hi;
}

} // namespace

double DensitySegment::density(double x) const {
  if (x <= a || x >= b) return 0.0;
  const double damp = tilt > 0.0 ? std::exp(-tilt * x) : 1.0;
  switch (family) {
    case Family::RLPower:
      if (x <= shift) return 0.0;
      return scale * std::pow(x - shift, -alpha) * damp;
    case Family::LogKernel:
      return scale * (x > 0 ? -std::expm1(-x) / x : 1.0) * damp;
  }
  return 0.0;
}

void BernsteinMeasure::validate() const {
  if (k_infinity < 0.0) throw std::invalid_argument("measure: k_infinity < 0");
  for (const auto& atom : atoms) {
    if (atom.x <= 0.0) throw std::invalid_argument("measure: atom at x <= 0 (mu({0}) = 0)");
    if (atom.c <= 0.0) throw std::invalid_argument("measure: atom mass must be positive");
  }
  for (const auto& seg : segments) {
    if (seg.scale <= 0.0) throw std::invalid_argument("measure: segment scale <= 0");
    if (seg.tilt < 0.0) throw std::invalid_argument("measure: segment tilt < 0");
    if (!(seg.b > seg.a)) throw std::invalid_argument("measure: segment interval empty");
    if (seg.family == DensitySegment::Family::RLPower) {
      if (seg.alpha <= 0.0 || seg.alpha >= 1.0)
        throw std::invalid_argument("measure: RLPower alpha must be in (0,1)");
      if (seg.a < seg.shift) throw std::invalid_argument("measure: RLPower a < shift");
    }
    if (seg.a < 0.0) throw std::invalid_argument("measure: segment a < 0");
  }
}

BernsteinMeasure BernsteinMeasure::riemann_liouville(double alpha, double beta,
                                                     double scale_mult) {
  if (alpha <= 0.5 || alpha >= 1.0)
    throw std::invalid_argument("riemann_liouville measure: alpha must be in (1/2, 1)");
  DensitySegment seg;
  seg.family = DensitySegment::Family::RLPower;
  seg.alpha = alpha;
  seg.shift = beta;
  seg.a = beta;
  seg.b = kInf;
  seg.scale = scale_mult / (std::tgamma(alpha) * std::tgamma(1.0 - alpha));
  BernsteinMeasure mu;
  mu.segments.push_back(seg);
  mu.validate();
  return mu;
}

BernsteinMeasure BernsteinMeasure::log_kernel() {
  DensitySegment seg;
  seg.family = DensitySegment::Family::LogKernel;
  seg.a = 0.0;
  seg.b = kInf;
  BernsteinMeasure mu;
  mu.segments.push_back(seg);
  return mu;
}

BernsteinMeasure BernsteinMeasure::from_atoms(double k_infinity,
                                              std::vector<MeasureAtom> atoms) {
  BernsteinMeasure mu;
  mu.k_infinity = k_infinity;
  mu.atoms = std::move(atoms);
  mu.validate();
  return mu;
}

BernsteinMeasure tilt_measure(const BernsteinMeasure& mu, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("tilt_measure: eps must be positive");
  BernsteinMeasure out = mu;
  for (auto& atom : out.atoms) atom.c *= std::exp(-eps * atom.x);
  for (auto& seg : out.segments) seg.tilt += eps;
  return out;
}

double density_tail_laplace(const DensitySegment& seg, double B, double t) {
  const double lo = std::max(B, seg.a);
  if (lo >= seg.b) return 0.0;
  const double tau = t + seg.tilt;
  switch (seg.family) {
    case DensitySegment::Family::RLPower: {
      const double A = lo - seg.shift;
      const double Bs = std::isinf(seg.b) ? kInf : seg.b - seg.shift;
      return seg.scale * std::exp(-seg.shift * tau) *
             power_exp_integral(A, Bs, seg.alpha, tau);
    }
    case DensitySegment::Family::LogKernel: {
      if (lo == 0.0) {
        // E1(a tau) - E1(a (tau+1)) -> log(1 + 1/tau) as a -> 0
        const double hi1 = std::isinf(seg.b) ? 0.0 : special::expint_e1(seg.b * tau);
        const double hi2 =
            std::isinf(seg.b) ? 0.0 : special::expint_e1(seg.b * (tau + 1.0));
        return seg.scale * (std::log1p(1.0 / tau) - hi1 + hi2);
      }
      return seg.scale * (e1_diff(tau, lo, seg.b) - e1_diff(tau + 1.0, lo, seg.b));
    }
  }
  return 0.0;
}

double density_tail_laplace_x(const DensitySegment& seg, double B, double t) {
  const double lo = std::max(B, seg.a);
  if (lo >= seg.b) return 0.0;
  const double tau = t + seg.tilt;
  switch (seg.family) {
    case DensitySegment::Family::RLPower: {
      const double A = lo - seg.shift;
      const double Bs = std::isinf(seg.b) ? kInf : seg.b - seg.shift;
      const double damp = std::exp(-seg.shift * tau);
      return seg.scale * damp *
             (power_exp_integral_x(A, Bs, seg.alpha, tau) +
              seg.shift * power_exp_integral(A, Bs, seg.alpha, tau));
    }
    case DensitySegment::Family::LogKernel: {
      // int (1 - e^{-x}) e^{-x tau} dx
      auto prim = [tau](double x) {
        return std::exp(-x * tau) / tau - std::exp(-x * (tau + 1.0)) / (tau + 1.0);
      };
      const double hi = std::isinf(seg.b) ? 0.0 : prim(seg.b);
      return seg.scale * (prim(lo) - hi);
    }
  }
  return 0.0;
}

double measure_laplace(const BernsteinMeasure& mu, double t) {
  if (t < 0.0) throw std::domain_error("measure_laplace: t < 0");
  double value = mu.k_infinity;
  for (const auto& atom : mu.atoms) value += atom.c * std::exp(-atom.x * t);
  for (const auto& seg : mu.segments) value += density_tail_laplace(seg, 0.0, t);
  return value;
}

double segment_mass(const DensitySegment& seg, double lo, double hi) {
  lo = std::max(lo, seg.a);
  hi = std::min(hi, seg.b);
  if (hi <= lo) return 0.0;
  switch (seg.family) {
    case DensitySegment::Family::RLPower:
      return seg.scale * std::exp(-seg.shift * seg.tilt) *
             power_exp_integral(lo - seg.shift, hi - seg.shift, seg.alpha, seg.tilt);
    case DensitySegment::Family::LogKernel: {
      if (seg.tilt == 0.0) {
        auto prim = [](double x) {
          if (x == 0.0) return 0.0;
          if (std::isinf(x)) throw integration_error("log segment: infinite mass");
          // int_0^x (1-e^{-u})/u du = gamma_E + log x + E1(x)
          return 0.57721566490153286 + std::log(x) + special::expint_e1(x);
        };
        return seg.scale * (prim(hi) - prim(lo));
      }
      if (lo == 0.0)
        return seg.scale * (std::log1p(1.0 / seg.tilt) - e1_diff(seg.tilt, hi, kInf) +
                            e1_diff(seg.tilt + 1.0, hi, kInf));
      return seg.scale *
             (e1_diff(seg.tilt, lo, hi) - e1_diff(seg.tilt + 1.0, lo, hi));
    }
  }
  return 0.0;
}

double segment_first_moment(const DensitySegment& seg, double lo, double hi) {
  lo = std::max(lo, seg.a);
  hi = std::min(hi, seg.b);
  if (hi <= lo) return 0.0;
  switch (seg.family) {
    case DensitySegment::Family::RLPower: {
      const double damp = std::exp(-seg.shift * seg.tilt);
      return seg.scale * damp *
             (power_exp_integral_x(lo - seg.shift, hi - seg.shift, seg.alpha, seg.tilt) +
              seg.shift *
                  power_exp_integral(lo - seg.shift, hi - seg.shift, seg.alpha, seg.tilt));
    }
    case DensitySegment::Family::LogKernel: {
      if (seg.tilt == 0.0) {
        if (std::isinf(hi)) throw integration_error("log segment: infinite moment");
        auto prim = [](double x) { return x + std::exp(-x); };
        return seg.scale * (prim(hi) - prim(lo));
      }
      auto prim = [&seg](double x) {
        return std::exp(-x * seg.tilt) / seg.tilt -
               std::exp(-x * (seg.tilt + 1.0)) / (seg.tilt + 1.0);
      };
      const double top = std::isinf(hi) ? 0.0 : prim(hi);
      return seg.scale * (prim(lo) - top);
    }
  }
  return 0.0;
}

double measure_cdf(const BernsteinMeasure& mu, double x) {
  if (x <= 0.0) return 0.0;
  double mass = 0.0;
  for (const auto& atom : mu.atoms)
    if (atom.x <= x) mass += atom.c;
  for (const auto& seg : mu.segments) mass += segment_mass(seg, 0.0, x);
  return mass;
}

double measure_integrate(const BernsteinMeasure& mu,
                         const std::function<double(double)>& f, double decay_hint,
                         double rel_tol) {
  double total = 0.0;
  for (const auto& atom : mu.atoms) total += atom.c * f(atom.x);

  quad::Options opts;
  opts.rel_tol = rel_tol;
  for (const auto& seg : mu.segments) {
    auto g = [&](double x) { return f(x) * seg.density(x); };
    const bool singular = seg.family == DensitySegment::Family::RLPower &&
                          seg.a == seg.shift;
    const double start = seg.a;
    double window = std::isinf(seg.b) ? std::max(1.0, 2.0 * start)
                                      : (seg.b - seg.a);
    if (!std::isinf(seg.b)) {
      // finite support: one singular window plus the remainder
      if (singular) {
        const double w0 = std::min(window, 1.0);
        auto h = [&](double y) { return g(start + y); };
        total += quad::integrate_singular0(h, w0, -seg.alpha, opts);
        if (start + w0 < seg.b) total += quad::integrate(g, start + w0, seg.b, opts);
      } else {
        total += quad::integrate(g, seg.a, seg.b, opts);
      }
      continue;
    }
    // infinite support: singular head window, then geometric continuation
    double acc = 0.0;
    double lo = start;
    if (singular) {
      auto h = [&](double y) { return g(start + y); };
      acc += quad::integrate_singular0(h, window, -seg.alpha, opts);
      lo = start + window;
    }
    int quiet = 0;
    double w = std::max(window, 1.0);
    bool done = false;
    for (int cell = 0; cell < 200; ++cell) {
      const double hi = lo + w;
      const double part = quad::integrate(g, lo, hi, opts);
      acc += part;
      const double scale = std::max(std::abs(acc), std::abs(total));
      if (std::abs(part) <= rel_tol * std::max(scale, 1e-300))
        ++quiet;
      else
        quiet = 0;
      if (quiet >= 3) {
        done = true;
        break;
      }
      lo = hi;
      w *= 2.0;
      // decaying integrands cannot contribute past ~ 745 / rate
      if ((decay_hint + seg.tilt) > 0.0 && lo > 745.0 / (decay_hint + seg.tilt)) {
        done = true;
        break;
      }
    }
    if (!done)
      throw integration_error("measure_integrate: tail did not converge "
                              "(divergent integral or missing decay)");
    total += acc;
  }
  return total;
}

double eta_star(const BernsteinMeasure& mu) {
  double star = -kInf;
  for (const auto& seg : mu.segments) {
    if (!std::isinf(seg.b) || seg.tilt > 0.0) continue; // finite mass piece
    switch (seg.family) {
      case DensitySegment::Family::RLPower:
        star = std::max(star, 1.0 - seg.alpha);
        break;
      case DensitySegment::Family::LogKernel:
        star = std::max(star, 0.0);
        break;
    }
  }
  return star;
}

bool weight_integral_finite(const BernsteinMeasure& mu, double eta) {
  const double star = eta_star(mu);
  if (std::isinf(star) && star < 0) return true;
  return eta > star;
}

std::string measure_to_config(const BernsteinMeasure& mu) {
  std::ostringstream os;
  os.precision(17);
  if (mu.k_infinity != 0.0) os << "k_infinity " << mu.k_infinity << "\n";
  for (const auto& atom : mu.atoms) os << "atom " << atom.x << " " << atom.c << "\n";
  for (const auto& seg : mu.segments) {
    os << "density " << (seg.family == DensitySegment::Family::RLPower ? "rl" : "log");
    if (seg.family == DensitySegment::Family::RLPower)
      os << " alpha " << seg.alpha << " beta " << seg.shift;
    os << " scale " << seg.scale;
    if (seg.tilt != 0.0) os << " tilt " << seg.tilt;
    os << "\n";
  }
  return os.str();
}

BernsteinMeasure measure_from_config(const std::string& text) {
  BernsteinMeasure mu;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "k_infinity") {
      if (!(ls >> mu.k_infinity)) throw config_error("measure: bad k_infinity");
    } else if (head == "atom") {
      MeasureAtom atom{};
      if (!(ls >> atom.x >> atom.c)) throw config_error("measure: bad atom line");
      mu.atoms.push_back(atom);
    } else if (head == "density") {
      std::string fam;
      if (!(ls >> fam)) throw config_error("measure: missing density family");
      DensitySegment seg;
      if (fam == "rl")
        seg.family = DensitySegment::Family::RLPower;
      else if (fam == "log")
        seg.family = DensitySegment::Family::LogKernel;
      else
        throw config_error("measure: unknown density family '" + fam + "'");
      bool have_scale = false;
      std::string key;
      while (ls >> key) {
        double v;
        if (!(ls >> v)) throw config_error("measure: missing value for '" + key + "'");
        if (key == "alpha")
          seg.alpha = v;
        else if (key == "beta") {
          seg.shift = v;
          seg.a = v;
        } else if (key == "scale") {
          seg.scale = v;
          have_scale = true;
        } else if (key == "tilt")
          seg.tilt = v;
        else
          throw config_error("measure: unknown density field '" + key + "'");
      }
      if (!have_scale && seg.family == DensitySegment::Family::RLPower)
        seg.scale = 1.0 / (std::tgamma(seg.alpha) * std::tgamma(1.0 - seg.alpha));
      mu.segments.push_back(seg);
    } else {
      throw config_error("measure: unknown directive '" + head + "'");
    }
  }
  mu.validate();
  return mu;
}

} // namespace svolt
