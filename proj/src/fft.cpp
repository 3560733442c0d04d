#include "svolt/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace svolt::fft {

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

} // namespace

void transform(std::vector<std::complex<double>>& a, bool invert) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = 2.0 * M_PI / double(len) * (invert ? -1.0 : 1.0);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (invert)
    for (auto& z : a) z /= double(n);
}

std::vector<double> linear_convolve(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_n = a.size() + b.size() - 1;
  const std::size_t n = next_pow2(out_n);
  std::vector<std::complex<double>> fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  transform(fa, false);
  transform(fb, false);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  transform(fa, true);
  std::vector<double> out(out_n);
  for (std::size_t i = 0; i < out_n; ++i) out[i] = fa[i].real();
  return out;
}

struct ConvPlan::Workspace {
  std::span<const double> g;
  const std::function<std::pair<double, double>(double, std::size_t)>* emit = nullptr;
  std::span<double> x;
  std::vector<double> sb, ss, acc;
  std::vector<std::complex<double>> z, gbuf;
  bool ok = true;
};

ConvPlan::ConvPlan(std::vector<double> wb, std::vector<double> ws,
                   std::size_t n_steps, std::size_t base_block)
    : wb_(std::move(wb)), ws_(std::move(ws)), n_(n_steps),
      base_(std::max<std::size_t>(base_block, 8)) {
  if (wb_.size() < n_ || ws_.size() < n_)
    throw std::invalid_argument("ConvPlan: weights shorter than n_steps");
  padded_ = next_pow2(std::max(n_ + 1, base_));
  // One cached weight transform per dyadic segment size. A node of size seg
  // convolves seg/2 sources against lags [0, seg-2]; the product needs
  // fft_n >= (seg - 1) + seg/2 - 1 samples.
  for (std::size_t seg = 2 * base_; seg <= padded_; seg <<= 1) {
    Level lvl;
    lvl.seg = seg;
    lvl.fft_n = next_pow2(seg + seg / 2 - 2);
    lvl.wb_hat.assign(lvl.fft_n, {0.0, 0.0});
    lvl.ws_hat.assign(lvl.fft_n, {0.0, 0.0});
    for (std::size_t k = 0; k + 1 < seg && k < n_; ++k) {
      lvl.wb_hat[k] = wb_[k];
      lvl.ws_hat[k] = ws_[k];
    }
    transform(lvl.wb_hat, false);
    transform(lvl.ws_hat, false);
    levels_.push_back(std::move(lvl));
  }
}

void ConvPlan::cdq(std::size_t lo, std::size_t hi, Workspace& w) const {
  if (!w.ok) return;
  const std::size_t seg = hi - lo;
  if (seg <= base_) {
    for (std::size_t k = lo; k < hi; ++k) {
      if (k > n_) break;
      double acc = w.acc[k];
      for (std::size_t j = lo; j < k; ++j)
        acc += wb_[k - 1 - j] * w.sb[j] + ws_[k - 1 - j] * w.ss[j];
      const double xk = (k < w.g.size() ? w.g[k] : 0.0) + acc;
      if (!std::isfinite(xk)) {
        w.ok = false;
        return;
      }
      if (k <= n_) w.x[k] = xk;
      if (k < n_) {
        const auto [sb, ss] = (*w.emit)(xk, k);
        w.sb[k] = sb;
        w.ss[k] = ss;
      }
    }
    return;
  }
  const std::size_t mid = lo + seg / 2;
  cdq(lo, mid, w);
  if (!w.ok) return;

  // Fold sources [lo, mid) into targets [mid, hi) with one FFT convolution.
  const Level* lvl = nullptr;
  for (const auto& l : levels_)
    if (l.seg == seg) lvl = &l;
  if (lvl == nullptr) throw std::logic_error("ConvPlan: missing level");
  const std::size_t L = mid - lo;
  const std::size_t N = lvl->fft_n;
  w.z.assign(N, {0.0, 0.0});
  for (std::size_t u = 0; u < L; ++u) w.z[u] = {w.sb[lo + u], w.ss[lo + u]};
  transform(w.z, false);
  w.gbuf.assign(N, {0.0, 0.0});
  for (std::size_t k = 0; k < N; ++k) {
    const auto zk = w.z[k];
    const auto zc = std::conj(w.z[(N - k) & (N - 1)]);
    const auto fb = 0.5 * (zk + zc);
    const auto fs = std::complex<double>(0.0, -0.5) * (zk - zc);
    w.gbuf[k] = fb * lvl->wb_hat[k] + fs * lvl->ws_hat[k];
  }
  transform(w.gbuf, true);
  for (std::size_t m = mid; m < hi; ++m) {
    if (m > n_) break;
    w.acc[m] += w.gbuf[L - 1 + (m - mid)].real();
  }

  cdq(mid, hi, w);
}

bool ConvPlan::run(
    std::span<const double> g,
    const std::function<std::pair<double, double>(double, std::size_t)>& emit,
    std::span<double> x) const {
  if (x.size() < n_ + 1) throw std::invalid_argument("ConvPlan::run: x too small");
  Workspace w;
  w.g = g;
  w.emit = &emit;
  w.x = x;
  w.sb.assign(padded_, 0.0);
  w.ss.assign(padded_, 0.0);
  w.acc.assign(padded_ + 1, 0.0);
  cdq(0, padded_, w);
  return w.ok;
}

} // namespace svolt::fft
