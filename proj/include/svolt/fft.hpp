#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace svolt::fft {

/// Iterative radix-2 complex FFT, in place. Size must be a power of two.
void transform(std::vector<std::complex<double>>& a, bool invert);

/// Full linear convolution of two real sequences (test/reference helper).
std::vector<double> linear_convolve(std::span<const double> a,
                                    std::span<const double> b);

/// Online evaluation of the causal feedback recursion
///   x[m] = g[m] + sum_{j<m} wb[m-1-j] sb[j] + ws[m-1-j] ss[j],
/// where the sources (sb[k], ss[k]) = emit(x[k], k) depend on the value just
/// produced. Divide-and-conquer: past blocks are folded into the future via
/// FFT convolution, O(n log^2 n) instead of the O(n^2) direct sum.
class ConvPlan {
public:
  /// Weights must cover n_steps lags. base_block is the direct-sum cutoff.
  ConvPlan(std::vector<double> wb, std::vector<double> ws, std::size_t n_steps,
           std::size_t base_block = 64);

  std::size_t steps() const { return n_; }

  /// emit(x_k, k) -> (sb_k, ss_k); x must have n_steps + 1 slots.
  /// Returns false when a non-finite value was produced (path flagged).
  bool run(std::span<const double> g,
           const std::function<std::pair<double, double>(double, std::size_t)>& emit,
           std::span<double> x) const;

private:
  struct Level {
    std::size_t seg;   // dyadic segment length
    std::size_t fft_n; // transform size for this segment
    std::vector<std::complex<double>> wb_hat, ws_hat;
  };
  struct Workspace;

  void cdq(std::size_t lo, std::size_t hi, Workspace& w) const;

  std::vector<double> wb_, ws_;
  std::size_t n_ = 0;
  std::size_t base_ = 64;
  std::size_t padded_ = 0;
  std::vector<Level> levels_;
};

} // namespace svolt::fft
