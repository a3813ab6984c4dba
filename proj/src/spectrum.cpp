#include "prism/spectrum.hpp"

#include <cmath>
#include <numbers>

#include "prism/error.hpp"
#include "prism/fft.hpp"

namespace prism {

namespace {

// roll(n, shift): out[(i + shift) mod n] = in[i].
ComplexMatrix roll(const Eigen::Ref<const ComplexMatrix>& in, Index row_shift,
                   Index col_shift) {
  const Index rows = in.rows();
  const Index cols = in.cols();
  ComplexMatrix out(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    Index cc = (c + col_shift) % cols;
    for (Index r = 0; r < rows; ++r) {
      out((r + row_shift) % rows, cc) = in(r, c);
    }
  }
  return out;
}

}  // namespace

ComplexMatrix dft2(const Eigen::Ref<const Matrix>& channel) {
  if (channel.rows() < 2 || channel.cols() < 2) {
    raise(errc::dimension_mismatch, "dft2 requires a channel of at least 2x2");
  }
  return fft2(channel);
}

ComplexMatrix centralize(const Eigen::Ref<const ComplexMatrix>& spectrum) {
  return roll(spectrum, spectrum.rows() / 2, spectrum.cols() / 2);
}

ComplexMatrix decentralize(const Eigen::Ref<const ComplexMatrix>& spectrum) {
  const Index rows = spectrum.rows();
  const Index cols = spectrum.cols();
  return roll(spectrum, rows - rows / 2, cols - cols / 2);
}

CentralizedSpectrum to_planes(const Eigen::Ref<const ComplexMatrix>& spectrum) {
  const Index rows = spectrum.rows();
  const Index cols = spectrum.cols();
  CentralizedSpectrum planes;
  planes.log_magnitude.resize(rows, cols);
  planes.phase.resize(rows, cols);
  for (Index c = 0; c < cols; ++c) {
    for (Index r = 0; r < rows; ++r) {
      const Complex z = spectrum(r, c);
      const double mag = std::abs(z);
      planes.log_magnitude(r, c) = std::log1p(mag);
      if (mag == 0.0) {
        planes.phase(r, c) = 0.0;
      } else {
        double p = std::arg(z);
        if (p <= -std::numbers::pi) p = std::numbers::pi;  // keep (-pi, pi]
        planes.phase(r, c) = p;
      }
    }
  }
  return planes;
}

CentralizedSpectrum channel_spectrum(const Eigen::Ref<const Matrix>& channel) {
  return to_planes(centralize(dft2(channel)));
}

}  // namespace prism
