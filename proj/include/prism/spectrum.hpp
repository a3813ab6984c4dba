#pragma once

#include "prism/types.hpp"

namespace prism {

/// Log-magnitude and phase planes of a DC-centred spectrum.
struct CentralizedSpectrum {
  Matrix log_magnitude;  // log(|z| + 1), entrywise >= 0
  Matrix phase;          // arg(z) in (-pi, pi]; arg(0) := 0

  Index rows() const { return log_magnitude.rows(); }
  Index cols() const { return log_magnitude.cols(); }
};

/// 2D DFT of one colour channel. Input must be at least 2x2.
ComplexMatrix dft2(const Eigen::Ref<const Matrix>& channel);

/// Circularly shifts the spectrum so the DC term lands at
/// (floor(n_y/2), floor(n_x/2)), the usual fftshift.
ComplexMatrix centralize(const Eigen::Ref<const ComplexMatrix>& spectrum);

/// Exact inverse of centralize.
ComplexMatrix decentralize(const Eigen::Ref<const ComplexMatrix>& spectrum);

/// Splits a centralized spectrum into log-magnitude and phase planes.
CentralizedSpectrum to_planes(const Eigen::Ref<const ComplexMatrix>& spectrum);

/// dft2 + centralize + to_planes in one step.
CentralizedSpectrum channel_spectrum(const Eigen::Ref<const Matrix>& channel);

}  // namespace prism
