#pragma once

#include <vector>

#include "prism/types.hpp"

namespace prism {

/// Precomputed transform of one fixed length. Powers of two run through an
/// iterative radix-2 kernel; every other length goes through Bluestein's
/// chirp-z algorithm, so all sizes are O(n log n).
class FftPlan {
 public:
  explicit FftPlan(Index length);

  Index length() const { return n_; }

  /// In-place forward DFT: X_k = sum_j x_j e^{-2*pi*i*jk/n}.
  void forward(Complex* data) const;

  /// In-place inverse DFT, scaled by 1/n.
  void inverse(Complex* data) const;

 private:
  void radix2(Complex* data) const;
  void bluestein(Complex* data) const;

  Index n_;
  bool pow2_;
  std::vector<Complex> twiddle_;      // radix-2: n/2 roots of unity
  std::vector<Index> bitrev_;
  std::vector<Complex> chirp_;        // bluestein: e^{-i pi k^2 / n}
  std::vector<Complex> kernel_fft_;   // FFT of the conjugate-chirp filter
  std::vector<FftPlan> inner_;        // power-of-two convolution plan
};

/// 2D DFT of a real matrix (rows indexed by y, columns by x):
///   out(v, u) = sum_x sum_y in(y, x) e^{-2*pi*i*(u*x/n_x + v*y/n_y)}.
ComplexMatrix fft2(const Eigen::Ref<const Matrix>& input);

/// 2D inverse DFT (test support), scaled by 1/(n_x*n_y).
ComplexMatrix ifft2(const Eigen::Ref<const ComplexMatrix>& input);

}  // namespace prism
