#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "svolt/hilbert.hpp"
#include "svolt/kernel.hpp"

namespace svolt {

struct SimGrid {
  double T = 1.0;
  std::size_t n_steps = 256;
  double dt() const { return T / double(n_steps); }
  double time(std::size_t k) const { return T * double(k) / double(n_steps); }
};

/// Drift/diffusion descriptors with their true Hoelder exponents.
struct Coefficient {
  enum class Kind { Constant, Affine, PowerHolder, SqrtPos };
  Kind kind = Kind::Constant;
  double a = 0.0; // Constant: value; Affine: kappa; PowerHolder: c; SqrtPos: xi
  double b = 0.0; // Affine: theta; PowerHolder: chi

  double eval(double x) const;
  double holder_exponent() const;
  bool is_zero() const { return kind == Kind::Constant && a == 0.0; }

  static Coefficient constant(double v) { return {Kind::Constant, v, 0.0}; }
  static Coefficient zero() { return constant(0.0); }
  static Coefficient affine(double kappa, double theta) {
    return {Kind::Affine, kappa, theta};
  }
  static Coefficient power_holder(double c, double chi);
  static Coefficient sqrt_pos(double xi) { return {Kind::SqrtPos, xi, 0.0}; }
};

/// Initial data: a constant level or a curve g(t) = Xi S(t) xi_g.
struct InitialCondition {
  double x0 = 0.0;
  bool is_constant = true;
  std::shared_ptr<const BernsteinMeasure> measure;
  HilbertElement xi_g;

  double eval(double t) const;
  static InitialCondition constant(double x0);
  static InitialCondition curve(BernsteinMeasure mu, HilbertElement xi_g);
};

struct SVIEModel {
  KernelSpec kernel;
  Coefficient drift = Coefficient::zero();
  Coefficient diffusion = Coefficient::constant(1.0);
  InitialCondition initial = InitialCondition::constant(0.0);
  double chi_b = 1.0;
  double chi_sigma = 1.0;
};

enum class Scheme { DirectConv, FftConv, ExactGaussian, Lift };
std::string scheme_name(Scheme s);

/// Cell rule for the diffusion weights. VarianceExact makes the stochastic
/// convolution of a constant sigma match int_0^t K^2 exactly at grid points
/// and is the only rule defined for kernels singular at zero. LeftPoint
/// samples K at the cell's left edge and is the discrete convolution the
/// exponential-integrator lift reproduces exactly.
enum class DiffusionRule { VarianceExact, LeftPoint };

struct ConvWeights {
  std::vector<double> drift;
  std::vector<double> diffusion;
};
ConvWeights convolution_weights(const KernelSpec& kernel, const SimGrid& grid,
                                DiffusionRule rule = DiffusionRule::VarianceExact);

struct SimOptions {
  DiffusionRule diffusion_rule = DiffusionRule::VarianceExact;
  bool parallel = true;             // OpenMP over paths (bitwise-identical either way)
  double flagged_fraction_max = 0.01;
  std::uint32_t noise_substream = 0;
};

struct PathEnsemble {
  std::vector<double> values; // (n_paths) x (n_steps + 1), row-major
  std::size_t n_paths = 0;
  SimGrid grid;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::DirectConv;
  std::vector<std::uint8_t> flagged;
  std::size_t n_flagged = 0;

  double at(std::size_t path, std::size_t step) const {
    return values[path * (grid.n_steps + 1) + step];
  }
  std::span<const double> path(std::size_t p) const {
    return {values.data() + p * (grid.n_steps + 1), grid.n_steps + 1};
  }
};

/// Per-path callback; invoked concurrently for distinct paths, so it must
/// only touch state indexed by `path`. `x` has n_steps+1 values, the source
/// arrays n_steps. Flagged (non-finite) paths are not visited.
using PathVisitor = std::function<void(
    std::size_t path, std::span<const double> x, std::span<const double> src_drift,
    std::span<const double> src_diff, std::span<const double> dB)>;

/// Runs the left-point Volterra-Euler recursion for every path and feeds the
/// results to the visitor. Returns the number of flagged paths; throws
/// simulation_error when the flagged fraction exceeds the configured limit.
std::size_t simulate_paths(const SVIEModel& model, const SimGrid& grid,
                           std::size_t n_paths, std::uint64_t seed,
                           const SimOptions& opts, Scheme scheme,
                           const PathVisitor& visit);

PathEnsemble euler_volterra(const SVIEModel& model, const SimGrid& grid,
                            std::size_t n_paths, std::uint64_t seed,
                            SimOptions opts = {});

/// Serial reference path loop (no OpenMP); kept for testing and benchmarks.
PathEnsemble euler_volterra_serial(const SVIEModel& model, const SimGrid& grid,
                                   std::size_t n_paths, std::uint64_t seed,
                                   SimOptions opts = {});

/// Same recursion evaluated with divide-and-conquer FFT convolution.
PathEnsemble fft_convolution(const SVIEModel& model, const SimGrid& grid,
                             std::size_t n_paths, std::uint64_t seed,
                             SimOptions opts = {});

/// Draws from N(0, Sigma) with Sigma = limit_covariance(kbar, sigma, times).
/// Row p is path p; reproducible per (seed, path).
Eigen::MatrixXd exact_gaussian_limit(const LimitKernel& kbar, double sigma_xbar,
                                     const std::vector<double>& times,
                                     std::size_t n_paths, std::uint64_t seed);

struct SlopeReport {
  std::vector<double> times;
  std::vector<double> moments;
  double slope = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string warning;
};

/// Monte Carlo check of the remainder moment bound: fits the log-log slope
/// of E|Z_t|^p, Z = X - x0 - b(x0) (K*dt) - sigma(x0) (K*dB), against
/// p * min{1/2 + gamma(1+chi_b), gamma(1+chi_sigma)} - 0.1 p.
SlopeReport z_moment_diagnostic(const SVIEModel& model, double p,
                                const std::vector<double>& t_grid,
                                std::size_t n_steps, std::size_t n_paths,
                                std::uint64_t seed);

/// Slope of E|X_t - g(t)|^p against the bound p*gamma - 0.1 p.
SlopeReport moment_bound_check(const SVIEModel& model, double p,
                               const std::vector<double>& t_grid,
                               std::size_t n_steps, std::size_t n_paths,
                               std::uint64_t seed);

/// Deterministic solve of m(t) = g(t) + int_0^t K(t-s) b(m(s)) ds by Picard
/// iteration on the grid (first-moment oracle for affine drift models).
std::vector<double> mean_volterra_picard(const SVIEModel& model, const SimGrid& grid,
                                         int max_iter = 64, double tol = 1e-12);

void write_ensemble_binary(const PathEnsemble& e, const std::string& path);
PathEnsemble read_ensemble_binary(const std::string& path);
void write_ensemble_csv(const PathEnsemble& e, const std::string& path);

} // namespace svolt
