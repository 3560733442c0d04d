#include "svolt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "svolt/error.hpp"
#include "svolt/quadrature.hpp"
#include "svolt/special.hpp"

namespace svolt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (c, lambda) pairs with the constant part folded in as lambda = 0.
std::vector<ExpSumTerm> flat_terms(const ExpSum& k) {
  std::vector<ExpSumTerm> out;
  if (k.c0 > 0.0) out.push_back({k.c0, 0.0});
  out.insert(out.end(), k.terms.begin(), k.terms.end());
  return out;
}

struct LogLogFit {
  double slope;
  double intercept;
  double r2;
};

LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double den = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / den;
  const double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double ly = std::log(y[i]);
    const double fit = slope * std::log(x[i]) + intercept;
    ss_res += (ly - fit) * (ly - fit);
    ss_tot += (ly - ybar) * (ly - ybar);
  }
  const double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return {slope, intercept, r2};
}

double gamma_norm(double H) { return std::tgamma(H + 0.5); }

bool measure_has_log_tail(const BernsteinMeasure& mu) {
  for (const auto& seg : mu.segments)
    if (seg.family == DensitySegment::Family::LogKernel && std::isinf(seg.b) &&
        seg.tilt == 0.0)
      return true;
  return false;
}

// Sum of scale * Gamma(1-alpha) over the segments that drive the t -> 0
// singularity (unbounded, untilted RLPower pieces at the maximal alpha).
double singular_prefactor(const BernsteinMeasure& mu) {
  const double star = eta_star(mu);
  double c = 0.0;
  for (const auto& seg : mu.segments) {
    if (seg.family != DensitySegment::Family::RLPower) continue;
    if (!std::isinf(seg.b) || seg.tilt > 0.0) continue;
    if (std::abs((1.0 - seg.alpha) - star) < 1e-14)
      c += seg.scale * std::tgamma(1.0 - seg.alpha);
  }
  return c;
}

} // namespace

KernelSpec KernelSpec::riemann_liouville(double H) {
  KernelSpec s{RiemannLiouville{H}};
  s.validate();
  return s;
}
KernelSpec KernelSpec::gamma_kernel(double H, double beta) {
  KernelSpec s{GammaKernel{H, beta}};
  s.validate();
  return s;
}
KernelSpec KernelSpec::exp_sum(double c0, std::vector<ExpSumTerm> terms) {
  KernelSpec s{ExpSum{c0, std::move(terms)}};
  s.validate();
  return s;
}
KernelSpec KernelSpec::log_modulated(double H, double alpha) {
  KernelSpec s{LogModulated{H, alpha}};
  s.validate();
  return s;
}
KernelSpec KernelSpec::shifted(KernelSpec base, double epsilon) {
  KernelSpec s{Shifted{std::make_shared<const KernelSpec>(std::move(base)), epsilon}};
  s.validate();
  return s;
}
KernelSpec KernelSpec::from_measure(BernsteinMeasure mu) {
  KernelSpec s{FromMeasure{std::move(mu)}};
  s.validate();
  return s;
}

void KernelSpec::validate() const {
  std::visit(
      [](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          if (k.H <= 0.0 || k.H >= 1.0)
            throw std::invalid_argument("RiemannLiouville: H must be in (0,1)");
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          if (k.H <= 0.0 || k.H >= 1.0)
            throw std::invalid_argument("GammaKernel: H must be in (0,1)");
          if (k.beta < 0.0) throw std::invalid_argument("GammaKernel: beta < 0");
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          if (k.c0 < 0.0) throw std::invalid_argument("ExpSum: c0 < 0");
          if (k.c0 == 0.0 && k.terms.empty())
            throw std::invalid_argument("ExpSum: needs c0 > 0 or at least one term");
          for (const auto& t : k.terms) {
            if (t.c <= 0.0) throw std::invalid_argument("ExpSum: c_i must be positive");
            if (t.lambda < 0.0) throw std::invalid_argument("ExpSum: lambda_i < 0");
          }
        } else if constexpr (std::is_same_v<T, LogModulated>) {
          if (k.H <= 0.0 || k.H > 0.5)
            throw std::invalid_argument("LogModulated: H must be in (0, 1/2]");
          if (k.alpha <= 0.0 || k.alpha > 1.0)
            throw std::invalid_argument("LogModulated: alpha must be in (0, 1]");
        } else if constexpr (std::is_same_v<T, Shifted>) {
          if (!k.base) throw std::invalid_argument("Shifted: missing base kernel");
          if (k.epsilon <= 0.0)
            throw std::invalid_argument("Shifted: epsilon must be positive");
          k.base->validate();
        } else if constexpr (std::is_same_v<T, FromMeasure>) {
          k.measure.validate();
          if (k.measure.k_infinity == 0.0 && k.measure.atoms.empty() &&
              k.measure.segments.empty())
            throw std::invalid_argument("FromMeasure: empty measure");
          if (eta_star(k.measure) >= 0.5)
            throw std::invalid_argument("FromMeasure: eta_star must be < 1/2");
        }
      },
      family);
}

std::string KernelSpec::family_name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) return "rl";
        if constexpr (std::is_same_v<T, GammaKernel>) return "gamma";
        if constexpr (std::is_same_v<T, ExpSum>) return "expsum";
        if constexpr (std::is_same_v<T, LogModulated>) return "logmod";
        if constexpr (std::is_same_v<T, Shifted>) return "shifted";
        return "measure";
      },
      family);
}

double small_t_exponent(const KernelSpec& spec) {
  return std::visit(
      [](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) return k.H - 0.5;
        if constexpr (std::is_same_v<T, GammaKernel>) return k.H - 0.5;
        if constexpr (std::is_same_v<T, LogModulated>) return k.H - 0.5;
        if constexpr (std::is_same_v<T, ExpSum>) return 0.0;
        if constexpr (std::is_same_v<T, Shifted>) return 0.0;
        if constexpr (std::is_same_v<T, FromMeasure>)
          return -std::max(eta_star(k.measure), 0.0);
        return 0.0;
      },
      spec.family);
}

double eval_kernel(const KernelSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("eval_kernel: t < 0");
  return std::visit(
      [t](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          if (t == 0.0) {
            if (k.H < 0.5) throw std::domain_error("eval_kernel: singular at t = 0");
            return k.H == 0.5 ? 1.0 : 0.0;
          }
          return std::pow(t, k.H - 0.5) / gamma_norm(k.H);
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          if (t == 0.0) {
            if (k.H < 0.5) throw std::domain_error("eval_kernel: singular at t = 0");
            return k.H == 0.5 ? 1.0 : 0.0;
          }
          return std::pow(t, k.H - 0.5) * std::exp(-k.beta * t) / gamma_norm(k.H);
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          double v = k.c0;
          for (const auto& term : k.terms) v += term.c * std::exp(-term.lambda * t);
          return v;
        } else if constexpr (std::is_same_v<T, LogModulated>) {
          if (t == 0.0) throw std::domain_error("eval_kernel: singular at t = 0");
          return std::pow(t, k.H - 0.5) * std::log1p(std::pow(t, -k.alpha)) /
                 gamma_norm(k.H);
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return eval_kernel(*k.base, t + k.epsilon);
        } else {
          if (t == 0.0) {
            double mass = k.measure.k_infinity;
            for (const auto& a : k.measure.atoms) mass += a.c;
            for (const auto& seg : k.measure.segments) {
              if (std::isinf(seg.b) && seg.tilt == 0.0)
                throw std::domain_error("eval_kernel: singular at t = 0");
              mass += segment_mass(seg, seg.a, seg.b);
            }
            return mass;
          }
          return measure_laplace(k.measure, t);
        }
      },
      spec.family);
}

double integral_k(const KernelSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("integral_k: t < 0");
  if (t == 0.0) return 0.0;
  return std::visit(
      [t, &spec](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          return std::pow(t, k.H + 0.5) / ((k.H + 0.5) * gamma_norm(k.H));
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          if (k.beta == 0.0)
            return std::pow(t, k.H + 0.5) / ((k.H + 0.5) * gamma_norm(k.H));
          return special::lower_inc_gamma(k.H + 0.5, k.beta * t) /
                 (std::pow(k.beta, k.H + 0.5) * gamma_norm(k.H));
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          double v = 0.0;
          for (const auto& term : flat_terms(k))
            v += term.lambda == 0.0 ? term.c * t
                                    : -term.c * std::expm1(-term.lambda * t) / term.lambda;
          return v;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return integral_k(*k.base, t + k.epsilon) - integral_k(*k.base, k.epsilon);
        } else {
          const double e = small_t_exponent(spec);
          auto f = [&spec](double s) { return eval_kernel(spec, s); };
          return quad::integrate_singular0(f, t, std::min(e, 0.0));
        }
      },
      spec.family);
}

double l2_norm_sq(const KernelSpec& spec, double t) {
  if (t < 0.0) throw std::domain_error("l2_norm_sq: t < 0");
  if (t == 0.0) return 0.0;
  return std::visit(
      [t, &spec](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          const double g = gamma_norm(k.H);
          return std::pow(t, 2.0 * k.H) / (2.0 * k.H * g * g);
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          const double g = gamma_norm(k.H);
          if (k.beta == 0.0) return std::pow(t, 2.0 * k.H) / (2.0 * k.H * g * g);
          return special::lower_inc_gamma(2.0 * k.H, 2.0 * k.beta * t) /
                 (std::pow(2.0 * k.beta, 2.0 * k.H) * g * g);
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          const auto terms = flat_terms(k);
          double v = 0.0;
          for (const auto& ti : terms)
            for (const auto& tj : terms) {
              const double lam = ti.lambda + tj.lambda;
              v += lam == 0.0 ? ti.c * tj.c * t
                              : -ti.c * tj.c * std::expm1(-lam * t) / lam;
            }
          return v;
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return l2_norm_sq(*k.base, t + k.epsilon) - l2_norm_sq(*k.base, k.epsilon);
        } else {
          const double e = small_t_exponent(spec);
          auto f = [&spec](double s) {
            const double v = eval_kernel(spec, s);
            return v * v;
          };
          return quad::integrate_singular0(f, t, std::min(2.0 * e, 0.0));
        }
      },
      spec.family);
}

double lambda_n(const KernelSpec& spec, long n) {
  if (n < 1) throw std::invalid_argument("lambda_n: n must be >= 1");
  const double l2 = l2_norm_sq(spec, 1.0 / double(n));
  if (l2 <= 0.0) throw analysis_error("lambda_n: degenerate kernel, int_0^{1/n} K^2 = 0");
  return 1.0 / l2;
}

LimitKernel LimitKernel::power(double c, double exponent) {
  if (exponent <= -0.5) throw std::invalid_argument("LimitKernel: exponent <= -1/2");
  LimitKernel k;
  k.form = Form::Power;
  k.c = c;
  k.exponent = exponent;
  return k;
}

LimitKernel LimitKernel::constant(double c) {
  LimitKernel k;
  k.form = Form::Constant;
  k.c = c;
  return k;
}

double LimitKernel::eval(double t) const {
  switch (form) {
    case Form::Constant:
      return c;
    case Form::Power:
      if (t <= 0.0) throw std::domain_error("LimitKernel: t <= 0");
      return c * std::pow(t, exponent);
    case Form::Tabulated: {
      if (grid_t.empty()) throw std::invalid_argument("LimitKernel: empty table");
      auto it = std::lower_bound(grid_t.begin(), grid_t.end(), t);
      if (it == grid_t.begin()) return grid_v.front();
      if (it == grid_t.end()) return grid_v.back();
      const std::size_t i = std::size_t(it - grid_t.begin());
      const double w = (t - grid_t[i - 1]) / (grid_t[i] - grid_t[i - 1]);
      return grid_v[i - 1] * (1.0 - w) + grid_v[i] * w;
    }
  }
  return 0.0;
}

double LimitKernel::l1_cum(double t) const {
  switch (form) {
    case Form::Constant:
      return c * t;
    case Form::Power:
      return c * std::pow(t, exponent + 1.0) / (exponent + 1.0);
    case Form::Tabulated:
      return quad::integrate([this](double s) { return eval(s); }, 0.0, t,
                             {1e-10, 0.0, 48});
  }
  return 0.0;
}

double LimitKernel::l2_cum(double t) const {
  switch (form) {
    case Form::Constant:
      return c * c * t;
    case Form::Power:
      return c * c * std::pow(t, 2.0 * exponent + 1.0) / (2.0 * exponent + 1.0);
    case Form::Tabulated:
      return quad::integrate(
          [this](double s) {
            const double v = eval(s);
            return v * v;
          },
          0.0, t, {1e-10, 0.0, 48});
  }
  return 0.0;
}

LimitKernel limit_kernel_numeric(const KernelSpec& spec) {
  // Fit a power law to Q_n(t) = t K(t/n)^2 / K(1/n)^2 on a decreasing
  // n-sequence; declare convergence when successive fits agree to 1e-3.
  const std::vector<double> ts = {0.2, 0.4, 0.6, 0.8};
  double prev_slope = kInf;
  LogLogFit fit{0, 0, 0};
  bool converged = false;
  for (long n = 64; n <= (1L << 16); n *= 2) {
    const double kn = eval_kernel(spec, 1.0 / double(n));
    std::vector<double> q;
    q.reserve(ts.size());
    for (const double t : ts) {
      const double kt = eval_kernel(spec, t / double(n));
      q.push_back(t * kt * kt / (kn * kn));
    }
    fit = fit_loglog(ts, q);
    if (std::abs(fit.slope - prev_slope) < 1e-3) {
      converged = true;
      break;
    }
    prev_slope = fit.slope;
  }
  if (!converged)
    throw analysis_error("limit_kernel: quotient identity did not converge "
                         "(last slope " + std::to_string(fit.slope) + ")");
  const double p = fit.slope; // int_0^t Kbar^2 = t^p, p = 2e + 1
  if (p <= 0.0) throw analysis_error("limit_kernel: nonpositive fitted order");
  const double e = 0.5 * (p - 1.0);
  auto out = std::abs(e) < 1e-9 ? LimitKernel::constant(1.0)
                                : LimitKernel::power(std::sqrt(p), e);
  out.fit_residual = 1.0 - fit.r2;
  return out;
}

LimitKernel limit_kernel(const KernelSpec& spec) {
  return std::visit(
      [&spec](const auto& k) -> LimitKernel {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville> ||
                      std::is_same_v<T, GammaKernel> ||
                      std::is_same_v<T, LogModulated>) {
          if (k.H == 0.5) return LimitKernel::constant(1.0);
          return LimitKernel::power(std::sqrt(2.0 * k.H), k.H - 0.5);
        } else if constexpr (std::is_same_v<T, ExpSum> || std::is_same_v<T, Shifted>) {
          return LimitKernel::constant(1.0);
        } else {
          const double star = eta_star(k.measure);
          if (star < 0.5 && star > 0.0 && !measure_has_log_tail(k.measure)) {
            const double H = 0.5 - star;
            return LimitKernel::power(std::sqrt(2.0 * H), H - 0.5);
          }
          if (star <= 0.0) return LimitKernel::constant(1.0);
          return limit_kernel_numeric(spec);
        }
      },
      spec.family);
}

KernelAnalysis analyze_kernel(const KernelSpec& spec, double chi_b, double chi_sigma,
                              AnalyzeOptions opts) {
  if (chi_b <= 0.0 || chi_b > 1.0 || chi_sigma <= 0.0 || chi_sigma > 1.0)
    throw std::invalid_argument("analyze_kernel: Hoelder exponents must be in (0,1]");
  spec.validate();

  KernelAnalysis a;
  a.chi_b = chi_b;
  a.chi_sigma = chi_sigma;

  bool closed = opts.use_closed_forms;
  if (closed) {
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, RiemannLiouville> ||
                        std::is_same_v<T, GammaKernel>) {
            a.gamma = a.gamma_star = k.H;
            a.gamma_bar = std::min(k.H, 0.5);
            a.completely_monotone = k.H <= 0.5;
            a.eta_star = k.H < 0.5 ? 0.5 - k.H : -kInf;
            if (!a.completely_monotone) a.eta_star = std::nan("");
            a.has_closed_lambda = true;
          } else if constexpr (std::is_same_v<T, ExpSum>) {
            a.gamma = a.gamma_star = 0.5;
            a.gamma_bar = 1.0;
            a.completely_monotone = true;
            a.eta_star = -kInf;
            a.has_closed_lambda = true;
          } else if constexpr (std::is_same_v<T, LogModulated>) {
            a.gamma_star = k.H;
            a.gamma = k.H - opts.log_mod_delta;
            a.gamma_bar = std::nullopt;
            a.completely_monotone = true;
            a.eta_star = k.H < 0.5 ? 0.5 - k.H : 0.0;
            a.has_closed_lambda = false;
          } else if constexpr (std::is_same_v<T, Shifted>) {
            a.gamma = a.gamma_star = 0.5;
            a.gamma_bar = 1.0;
            a.completely_monotone = true;
            a.eta_star = -kInf;
            a.has_closed_lambda = true;
          } else {
            const double star = eta_star(k.measure);
            a.completely_monotone = true;
            a.eta_star = star;
            a.has_closed_lambda = false;
            if (star <= 0.0) {
              a.gamma = a.gamma_star = 0.5;
              a.gamma_bar = 0.5;
            } else {
              a.gamma_star = 0.5 - star;
              a.gamma_bar = 0.5 - star;
              a.gamma = a.gamma_star;
            }
            if (measure_has_log_tail(k.measure)) {
              // slowly varying factor: strict upper order only
              a.gamma = a.gamma_star - opts.log_mod_delta;
              a.gamma_bar = std::nullopt;
            }
          }
        },
        spec.family);
  } else {
    // Log-log regression of int_0^t K^2 over 40 log-spaced points.
    std::vector<double> ts, l2s;
    for (int i = 0; i < 40; ++i) {
      const double t = std::pow(10.0, -6.0 + 6.0 * i / 39.0);
      ts.push_back(t);
      l2s.push_back(l2_norm_sq(spec, t));
    }
    const auto fit = fit_loglog(ts, l2s);
    a.used_regression = true;
    a.regression_r2 = fit.r2;
    if (fit.r2 < 0.999)
      throw analysis_error("analyze_kernel: regression R^2 = " +
                           std::to_string(fit.r2) + " below 0.999 (slope " +
                           std::to_string(fit.slope) + ")");
    a.gamma = a.gamma_star = 0.5 * fit.slope;
    a.gamma_bar = std::nullopt;
    a.eta_star = std::nan("");
  }

  a.theorem_condition_i =
      a.gamma_star < std::min(a.gamma + 0.5, a.gamma * (1.0 + chi_sigma));
  a.fclt_applicable = a.gamma_bar.has_value() &&
                      std::abs(std::min(a.gamma, *a.gamma_bar) - a.gamma_star) < 1e-12;
  const double q_lo = a.gamma_star;
  const double q_hi =
      std::min(0.5 + a.gamma * (1.0 + chi_b), a.gamma * (1.0 + chi_sigma));
  if (q_hi > q_lo) a.q_interval = std::make_pair(q_lo, q_hi);
  return a;
}

Eigen::MatrixXd limit_covariance(const LimitKernel& kbar, double sigma_xbar,
                                 const std::vector<double>& times) {
  const auto n = static_cast<Eigen::Index>(times.size());
  if (n == 0) throw std::invalid_argument("limit_covariance: empty times");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] <= 0.0)
      throw std::invalid_argument("limit_covariance: times must be positive");
    if (i > 0 && times[i] < times[i - 1])
      throw std::invalid_argument("limit_covariance: times must be nondecreasing");
  }
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n, n);
  if (sigma_xbar == 0.0) return sigma;
  const double s2 = sigma_xbar * sigma_xbar;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double ti = times[std::size_t(i)];
      const double tj = times[std::size_t(j)];
      const double d = tj - ti;
      double v;
      if (d == 0.0) {
        v = kbar.l2_cum(ti);
      } else if (kbar.form == LimitKernel::Form::Constant) {
        v = kbar.c * kbar.c * ti;
      } else {
        auto f = [&kbar, d](double s) { return kbar.eval(d + s) * kbar.eval(s); };
        const double e =
            kbar.form == LimitKernel::Form::Power ? std::min(kbar.exponent, 0.0) : 0.0;
        v = quad::integrate_singular0(f, ti, e, {1e-12, 0.0, 60});
      }
      sigma(i, j) = sigma(j, i) = s2 * v;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const double min_eig = es.eigenvalues().minCoeff();
  const double scale = std::max(1.0, es.eigenvalues().maxCoeff());
  if (min_eig < -1e-10 * scale)
    throw covariance_error("limit_covariance: matrix not PSD, min eigenvalue " +
                           std::to_string(min_eig));
  return sigma;
}

double increment_l2(const KernelSpec& spec, double h, double T) {
  if (h <= 0.0 || h > T) throw std::invalid_argument("increment_l2: need 0 < h <= T");
  const double e = small_t_exponent(spec);
  auto f = [&spec, h](double s) {
    const double d = eval_kernel(spec, s + h) - eval_kernel(spec, s);
    return d * d;
  };
  return quad::integrate_singular0(f, T, std::min(2.0 * e, 0.0), {1e-10, 1e-300, 60});
}

double fit_gamma_bar(const KernelSpec& spec, const std::vector<double>& h_grid,
                     double T) {
  if (h_grid.size() < 2) throw std::invalid_argument("fit_gamma_bar: need >= 2 points");
  std::vector<double> inc;
  inc.reserve(h_grid.size());
  for (const double h : h_grid) inc.push_back(increment_l2(spec, h, T));
  return 0.5 * fit_loglog(h_grid, inc).slope;
}

double lambda_ratio_limit(const KernelSpec& spec, double gamma_star) {
  // Closed forms first.
  if (const auto* rl = std::get_if<RiemannLiouville>(&spec.family))
    return std::sqrt(2.0 * rl->H) * gamma_norm(rl->H);
  if (const auto* gk = std::get_if<GammaKernel>(&spec.family))
    return std::sqrt(2.0 * gk->H) * gamma_norm(gk->H);
  if (std::holds_alternative<ExpSum>(spec.family) ||
      std::holds_alternative<Shifted>(spec.family))
    return 1.0 / eval_kernel(spec, 0.0);
  if (const auto* fm = std::get_if<FromMeasure>(&spec.family)) {
    const double star = eta_star(fm->measure);
    if (star > 0.0 && star < 0.5 && !measure_has_log_tail(fm->measure)) {
      const double alpha = 1.0 - star;
      const double c = singular_prefactor(fm->measure);
      if (c > 0.0) return std::sqrt(2.0 * alpha - 1.0) / c;
    }
    if (star < 0.0 && !measure_has_log_tail(fm->measure))
      return 1.0 / eval_kernel(spec, 0.0);
  }
  // Ratio limit sqrt(lambda(n)) / n^{gamma_*} on a doubling n-sequence.
  double prev = -1.0;
  for (long n = 64; n <= (1L << 20); n *= 2) {
    const double r = std::sqrt(lambda_n(spec, n)) / std::pow(double(n), gamma_star);
    if (prev > 0.0 && std::abs(r - prev) < 1e-4 * prev) return r;
    prev = r;
  }
  throw analysis_error("lambda_ratio_limit: sqrt(lambda(n))/n^gamma_* did not "
                       "converge; boundary regime undetermined");
}

BernsteinMeasure bernstein_measure(const KernelSpec& spec) {
  return std::visit(
      [](const auto& k) -> BernsteinMeasure {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          if (k.H > 0.5)
            throw std::invalid_argument("bernstein_measure: RL with H > 1/2 is not "
                                        "completely monotone");
          if (k.H == 0.5) return BernsteinMeasure::from_atoms(1.0, {});
          return BernsteinMeasure::riemann_liouville(k.H + 0.5);
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          if (k.H > 0.5)
            throw std::invalid_argument("bernstein_measure: gamma kernel with H > 1/2 "
                                        "is not completely monotone");
          if (k.H == 0.5) {
            if (k.beta == 0.0) return BernsteinMeasure::from_atoms(1.0, {});
            return BernsteinMeasure::from_atoms(0.0, {{k.beta, 1.0}});
          }
          return BernsteinMeasure::riemann_liouville(k.H + 0.5, k.beta);
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          BernsteinMeasure mu;
          mu.k_infinity = k.c0;
          for (const auto& t : k.terms) {
            if (t.lambda == 0.0)
              mu.k_infinity += t.c;
            else
              mu.atoms.push_back({t.lambda, t.c});
          }
          return mu;
        } else if constexpr (std::is_same_v<T, LogModulated>) {
          if (k.H == 0.5 && k.alpha == 1.0) return BernsteinMeasure::log_kernel();
          throw std::invalid_argument("bernstein_measure: no closed Bernstein measure "
                                      "for the modulated power family");
        } else if constexpr (std::is_same_v<T, Shifted>) {
          return tilt_measure(bernstein_measure(*k.base), k.epsilon);
        } else {
          return k.measure;
        }
      },
      spec.family);
}

std::string kernel_to_config(const KernelSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&os](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, RiemannLiouville>) {
          os << "family rl\nH " << k.H << "\n";
        } else if constexpr (std::is_same_v<T, GammaKernel>) {
          os << "family gamma\nH " << k.H << "\nbeta " << k.beta << "\n";
        } else if constexpr (std::is_same_v<T, ExpSum>) {
          os << "family expsum\nc0 " << k.c0 << "\nterms";
          for (const auto& t : k.terms) os << " " << t.c << " " << t.lambda;
          os << "\n";
        } else if constexpr (std::is_same_v<T, LogModulated>) {
          os << "family logmod\nH " << k.H << "\nalpha " << k.alpha << "\n";
        } else if constexpr (std::is_same_v<T, Shifted>) {
          os << "family shifted\nepsilon " << k.epsilon << "\n";
          std::istringstream base(kernel_to_config(*k.base));
          std::string line;
          while (std::getline(base, line)) os << "base." << line << "\n";
        } else {
          os << "family measure\n";
          std::istringstream m(measure_to_config(k.measure));
          std::string line;
          while (std::getline(m, line)) os << "measure." << line << "\n";
        }
      },
      spec.family);
  return os.str();
}

KernelSpec kernel_from_config(const std::string& text) {
  std::map<std::string, std::string> fields;
  std::string measure_text, base_text;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::string rest;
    std::getline(ls, rest);
    const auto first = rest.find_first_not_of(" \t");
    rest = first == std::string::npos ? "" : rest.substr(first);
    if (key.rfind("measure.", 0) == 0)
      measure_text += key.substr(8) + " " + rest + "\n";
    else if (key.rfind("base.", 0) == 0)
      base_text += key.substr(5) + " " + rest + "\n";
    else
      fields[key] = rest;
  }
  const auto family = fields.find("family");
  if (family == fields.end()) throw config_error("kernel config: missing 'family'");
  auto num = [&fields](const std::string& key, std::optional<double> fallback =
                                                   std::nullopt) -> double {
    const auto it = fields.find(key);
    if (it == fields.end()) {
      if (fallback) return *fallback;
      throw config_error("kernel config: missing field '" + key + "'");
    }
    return std::stod(it->second);
  };
  const std::string& fam = family->second;
  if (fam == "rl") return KernelSpec::riemann_liouville(num("H"));
  if (fam == "gamma") return KernelSpec::gamma_kernel(num("H"), num("beta"));
  if (fam == "logmod") return KernelSpec::log_modulated(num("H"), num("alpha", 1.0));
  if (fam == "expsum") {
    std::vector<ExpSumTerm> terms;
    const auto it = fields.find("terms");
    if (it != fields.end()) {
      std::istringstream ts(it->second);
      double c, lam;
      while (ts >> c >> lam) terms.push_back({c, lam});
    }
    return KernelSpec::exp_sum(num("c0", 0.0), std::move(terms));
  }
  if (fam == "shifted") {
    if (base_text.empty()) throw config_error("kernel config: shifted needs base.*");
    return KernelSpec::shifted(kernel_from_config(base_text), num("epsilon"));
  }
  if (fam == "measure") {
    if (measure_text.empty())
      throw config_error("kernel config: measure family needs measure.*");
    return KernelSpec::from_measure(measure_from_config(measure_text));
  }
  throw config_error("kernel config: unknown family '" + fam + "'");
}

} // namespace svolt
