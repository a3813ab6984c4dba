#include "prism/fft.hpp"

#include <cmath>
#include <numbers>

#include "prism/error.hpp"

namespace prism {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_pow2(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Index next_pow2(Index n) {
  Index m = 1;
  while (m < n) m <<= 1;
  return m;
}

}  // namespace

FftPlan::FftPlan(Index length) : n_(length), pow2_(is_pow2(length)) {
  if (n_ < 1) raise(errc::invalid_argument, "FFT length must be positive");

  if (pow2_) {
    twiddle_.resize(static_cast<std::size_t>(n_ / 2));
    for (Index k = 0; k < n_ / 2; ++k) {
      double angle = -kTwoPi * static_cast<double>(k) / static_cast<double>(n_);
      twiddle_[static_cast<std::size_t>(k)] = std::polar(1.0, angle);
    }
    bitrev_.resize(static_cast<std::size_t>(n_));
    Index bits = 0;
    while ((Index{1} << bits) < n_) ++bits;
    for (Index i = 0; i < n_; ++i) {
      Index r = 0;
      for (Index b = 0; b < bits; ++b) r |= ((i >> b) & 1) << (bits - 1 - b);
      bitrev_[static_cast<std::size_t>(i)] = r;
    }
    return;
  }

  // Bluestein: convolve the chirped input with a conjugate-chirp kernel of
  // length >= 2n-1, rounded up to a power of two. Chirp angles are reduced
  // with exact integer arithmetic (k^2 mod 2n) to keep precision at large k.
  Index m = next_pow2(2 * n_ - 1);
  chirp_.resize(static_cast<std::size_t>(n_));
  const auto mod = static_cast<std::uint64_t>(2 * n_);
  for (Index k = 0; k < n_; ++k) {
    std::uint64_t k2 = (static_cast<std::uint64_t>(k) *
                        static_cast<std::uint64_t>(k)) % mod;
    double angle = -std::numbers::pi * static_cast<double>(k2) /
                   static_cast<double>(n_);
    chirp_[static_cast<std::size_t>(k)] = std::polar(1.0, angle);
  }

  inner_.emplace_back(m);
  kernel_fft_.assign(static_cast<std::size_t>(m), Complex{0.0, 0.0});
  kernel_fft_[0] = std::conj(chirp_[0]);
  for (Index k = 1; k < n_; ++k) {
    Complex c = std::conj(chirp_[static_cast<std::size_t>(k)]);
    kernel_fft_[static_cast<std::size_t>(k)] = c;
    kernel_fft_[static_cast<std::size_t>(m - k)] = c;
  }
  inner_[0].forward(kernel_fft_.data());
}

void FftPlan::radix2(Complex* data) const {
  for (Index i = 0; i < n_; ++i) {
    Index j = bitrev_[static_cast<std::size_t>(i)];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (Index len = 2; len <= n_; len <<= 1) {
    Index half = len / 2;
    Index stride = n_ / len;
    for (Index start = 0; start < n_; start += len) {
      for (Index k = 0; k < half; ++k) {
        Complex w = twiddle_[static_cast<std::size_t>(k * stride)];
        Complex even = data[start + k];
        Complex odd = data[start + k + half] * w;
        data[start + k] = even + odd;
        data[start + k + half] = even - odd;
      }
    }
  }
}

void FftPlan::bluestein(Complex* data) const {
  Index m = inner_[0].length();
  std::vector<Complex> work(static_cast<std::size_t>(m), Complex{0.0, 0.0});
  for (Index k = 0; k < n_; ++k) {
    work[static_cast<std::size_t>(k)] =
        data[k] * chirp_[static_cast<std::size_t>(k)];
  }
  inner_[0].forward(work.data());
  for (Index k = 0; k < m; ++k) {
    work[static_cast<std::size_t>(k)] *= kernel_fft_[static_cast<std::size_t>(k)];
  }
  inner_[0].inverse(work.data());
  for (Index k = 0; k < n_; ++k) {
    data[k] = work[static_cast<std::size_t>(k)] *
              chirp_[static_cast<std::size_t>(k)];
  }
}

void FftPlan::forward(Complex* data) const {
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data);
  } else {
    bluestein(data);
  }
}

void FftPlan::inverse(Complex* data) const {
  for (Index i = 0; i < n_; ++i) data[i] = std::conj(data[i]);
  forward(data);
  double scale = 1.0 / static_cast<double>(n_);
  for (Index i = 0; i < n_; ++i) data[i] = std::conj(data[i]) * scale;
}

ComplexMatrix fft2(const Eigen::Ref<const Matrix>& input) {
  const Index rows = input.rows();
  const Index cols = input.cols();
  ComplexMatrix out = input.cast<Complex>();

  FftPlan row_plan(cols);
  std::vector<Complex> buffer(static_cast<std::size_t>(cols));
  for (Index y = 0; y < rows; ++y) {
    for (Index x = 0; x < cols; ++x) buffer[static_cast<std::size_t>(x)] = out(y, x);
    row_plan.forward(buffer.data());
    for (Index x = 0; x < cols; ++x) out(y, x) = buffer[static_cast<std::size_t>(x)];
  }

  // Columns are contiguous in Eigen's default layout.
  FftPlan col_plan(rows);
  for (Index x = 0; x < cols; ++x) col_plan.forward(out.col(x).data());
  return out;
}

ComplexMatrix ifft2(const Eigen::Ref<const ComplexMatrix>& input) {
  ComplexMatrix out = input;
  const Index rows = out.rows();
  const Index cols = out.cols();

  FftPlan row_plan(cols);
  std::vector<Complex> buffer(static_cast<std::size_t>(cols));
  for (Index y = 0; y < rows; ++y) {
    for (Index x = 0; x < cols; ++x) buffer[static_cast<std::size_t>(x)] = out(y, x);
    row_plan.inverse(buffer.data());
    for (Index x = 0; x < cols; ++x) out(y, x) = buffer[static_cast<std::size_t>(x)];
  }

  FftPlan col_plan(rows);
  for (Index x = 0; x < cols; ++x) col_plan.inverse(out.col(x).data());
  return out;
}

}  // namespace prism
