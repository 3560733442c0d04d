#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "svolt/measure.hpp"

namespace svolt {

// Parametric Volterra kernel families. Power-law families carry the
// 1/Gamma(H + 1/2) normalization so that lambda(n) has the closed form
// 2H Gamma(H+1/2)^2 n^{2H}; the un-normalized variants are reachable
// through FromMeasure with a scaled density.
struct RiemannLiouville {
  double H; // t^{H - 1/2} / Gamma(H + 1/2)
};
struct GammaKernel {
  double H;
  double beta; // t^{H - 1/2} e^{-beta t} / Gamma(H + 1/2)
};
struct ExpSumTerm {
  double c;
  double lambda;
};
struct ExpSum {
  double c0 = 0.0;
  std::vector<ExpSumTerm> terms; // c0 + sum c_i e^{-lambda_i t}
};
struct LogModulated {
  double H;
  double alpha = 1.0; // t^{H - 1/2} log(1 + t^{-alpha}) / Gamma(H + 1/2)
};
struct KernelSpec;
struct Shifted {
  std::shared_ptr<const KernelSpec> base;
  double epsilon; // K_base(. + epsilon)
};
struct FromMeasure {
  BernsteinMeasure measure;
};

struct KernelSpec {
  std::variant<RiemannLiouville, GammaKernel, ExpSum, LogModulated, Shifted,
               FromMeasure>
      family;

  static KernelSpec riemann_liouville(double H);
  static KernelSpec gamma_kernel(double H, double beta);
  static KernelSpec exp_sum(double c0, std::vector<ExpSumTerm> terms);
  static KernelSpec log_modulated(double H, double alpha = 1.0);
  static KernelSpec shifted(KernelSpec base, double epsilon);
  static KernelSpec from_measure(BernsteinMeasure mu);

  void validate() const;
  std::string family_name() const;
};

/// Limiting kernel of the normalized small-time covariances, scaled so that
/// the L2 norm over (0,1] is one.
struct LimitKernel {
  enum class Form { Power, Constant, Tabulated };
  Form form = Form::Constant;
  double c = 1.0;
  double exponent = 0.0; // Power: c t^exponent with exponent > -1/2
  std::vector<double> grid_t, grid_v;
  double fit_residual = 0.0;

  static LimitKernel power(double c, double exponent);
  static LimitKernel constant(double c);

  double eval(double t) const;
  double l1_cum(double t) const; // int_0^t Kbar
  double l2_cum(double t) const; // int_0^t Kbar^2
};

struct KernelAnalysis {
  double gamma = 0.0;
  double gamma_star = 0.0;
  std::optional<double> gamma_bar;
  bool completely_monotone = false;
  double eta_star = -std::numeric_limits<double>::infinity();
  bool has_closed_lambda = false;
  std::optional<std::pair<double, double>> q_interval;
  bool theorem_condition_i = false; // gamma_* < min{gamma + 1/2, gamma(1+chi_sigma)}
  bool fclt_applicable = false;     // gamma ^ gamma_bar == gamma_*
  bool used_regression = false;
  double regression_r2 = 1.0;
  double chi_b = 1.0;
  double chi_sigma = 1.0;
};

struct AnalyzeOptions {
  bool use_closed_forms = true;
  double log_mod_delta = 0.01; // reported gamma = H - delta for log-modulated
};

double eval_kernel(const KernelSpec& spec, double t);
double integral_k(const KernelSpec& spec, double t); // int_0^t K
double l2_norm_sq(const KernelSpec& spec, double t); // int_0^t K^2
double lambda_n(const KernelSpec& spec, long n);

/// Leading power of K at 0+: K(t) ~ c t^e (log factors ignored).
double small_t_exponent(const KernelSpec& spec);

LimitKernel limit_kernel(const KernelSpec& spec);
KernelAnalysis analyze_kernel(const KernelSpec& spec, double chi_b, double chi_sigma,
                              AnalyzeOptions opts = {});

/// Sigma_ij = sigma^2 int_0^{t_i ^ t_j} Kbar(|t_j - t_i| + s) Kbar(s) ds.
Eigen::MatrixXd limit_covariance(const LimitKernel& kbar, double sigma_xbar,
                                 const std::vector<double>& times);

/// int_0^T |K(s + h) - K(s)|^2 ds.
double increment_l2(const KernelSpec& spec, double h, double T);

/// Log-log fit of increment_l2 over an h-grid; returns the estimated
/// Hoelder order gamma_bar.
double fit_gamma_bar(const KernelSpec& spec, const std::vector<double>& h_grid,
                     double T);

/// C_lambda with sqrt(lambda(n)) ~ C_lambda n^{gamma_*}; closed form where
/// known, otherwise a convergence-checked ratio limit. Throws analysis_error
/// when the ratio does not settle (e.g. log-modulated kernels).
double lambda_ratio_limit(const KernelSpec& spec, double gamma_star);

/// Bernstein measure of a completely monotone spec (throws for H > 1/2
/// power families which are not completely monotone).
BernsteinMeasure bernstein_measure(const KernelSpec& spec);

std::string kernel_to_config(const KernelSpec& spec);
KernelSpec kernel_from_config(const std::string& text);

} // namespace svolt
