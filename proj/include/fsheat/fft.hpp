#pragma once

// Minimal iterative radix-2 FFT, enough for zero-padded linear convolution
// of real fields on uniform grids.

#include <cassert>
#include <complex>
#include <cstddef>
#include <vector>

namespace fsheat {

class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    assert(n >= 1 && (n & (n - 1)) == 0);
    twiddle_.resize(n_ / 2);
    const double two_pi = 6.283185307179586476925286766559;
    for (std::size_t k = 0; k < n_ / 2; ++k) {
      double ang = -two_pi * static_cast<double>(k) / static_cast<double>(n_);
      twiddle_[k] = {std::cos(ang), std::sin(ang)};
    }
    rev_.resize(n_);
    std::size_t lg = 0;
    while ((std::size_t(1) << lg) < n_) ++lg;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < lg; ++b)
        if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (lg - 1 - b);
      rev_[i] = r;
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* a) const { transform(a, false); }

  void inverse(std::complex<double>* a) const {
    transform(a, true);
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) a[i] *= s;
  }

 private:
  void transform(std::complex<double>* a, bool inv) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      std::size_t step = n_ / len;
      for (std::size_t i = 0; i < n_; i += len) {
        for (std::size_t k = 0; k < len / 2; ++k) {
          std::complex<double> w = twiddle_[k * step];
          if (inv) w = std::conj(w);
          std::complex<double> u = a[i + k];
          std::complex<double> v = a[i + k + len / 2] * w;
          a[i + k] = u + v;
          a[i + k + len / 2] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::complex<double>> twiddle_;
  std::vector<std::size_t> rev_;
};

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// Linear convolution of two real sequences, output length na+nb-1.
inline std::vector<double> linear_convolve(const std::vector<double>& a,
                                           const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::size_t nout = a.size() + b.size() - 1;
  std::size_t np = next_pow2(nout);
  Fft fft(np);
  std::vector<std::complex<double>> fa(np), fb(np);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  fft.forward(fa.data());
  fft.forward(fb.data());
  for (std::size_t i = 0; i < np; ++i) fa[i] *= fb[i];
  fft.inverse(fa.data());
  std::vector<double> out(nout);
  for (std::size_t i = 0; i < nout; ++i) out[i] = fa[i].real();
  return out;
}

/// Repeated convolutions against a fixed right-hand factor: caches its
/// spectrum.  Both inputs are length n; the central n samples of the
/// linear convolution are returned (offsets aligned so that index
/// (n-1)/2 of the kernel is "zero lag").
class SpectralConvolver {
 public:
  SpectralConvolver(std::size_t n, std::size_t npad)
      : n_(n), npad_(npad), fft_(npad) {
    assert(npad_ >= 2 * n_ - 1);
  }

  std::size_t n() const { return n_; }
  std::size_t npad() const { return npad_; }
  const Fft& fft() const { return fft_; }

  std::vector<std::complex<double>> spectrum(const double* a) const {
    std::vector<std::complex<double>> fa(npad_);
    for (std::size_t i = 0; i < n_; ++i) fa[i] = a[i];
    fft_.forward(fa.data());
    return fa;
  }

  /// Inverse transform of a product spectrum; returns the n central
  /// samples assuming both factors were centered at index (n-1)/2.
  std::vector<double> centered_inverse(std::vector<std::complex<double>> prod) const {
    fft_.inverse(prod.data());
    std::vector<double> out(n_);
    std::size_t off = (n_ - 1) / 2;
    for (std::size_t i = 0; i < n_; ++i) out[i] = prod[i + off].real();
    return out;
  }

 private:
  std::size_t n_;
  std::size_t npad_;
  Fft fft_;
};

}  // namespace fsheat
