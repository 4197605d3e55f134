#include "fft_convolver.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

#include <fftw3.h>

namespace mcms::detail {

FftConvolver::FftConvolver(int nx, int ny) : nx_(nx), ny_(ny), scratch_(spectrum_size()) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("FftConvolver: size too small");
  std::vector<double> real(real_size());
  std::vector<std::complex<double>> spec(spectrum_size());
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_r2c_2d(ny_, nx_, real.data(), c, flags);
  inverse_plan_ = fftw_plan_dft_c2r_2d(ny_, nx_, c, real.data(), flags);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FftConvolver: FFTW planning failed");
  }
}

FftConvolver::~FftConvolver() {
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void FftConvolver::forward(std::span<const double> in,
                           std::span<std::complex<double>> out) const {
  if (in.size() != real_size() || out.size() != spectrum_size()) {
    throw std::invalid_argument("FftConvolver::forward: size mismatch");
  }
  // r2c out-of-place leaves the input untouched.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void FftConvolver::inverse(std::span<const std::complex<double>> in,
                           std::span<double> out) const {
  if (in.size() != spectrum_size() || out.size() != real_size()) {
    throw std::invalid_argument("FftConvolver::inverse: size mismatch");
  }
  std::memcpy(scratch_.data(), in.data(), in.size_bytes());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch_.data()), out.data());
}

int FftConvolver::good_size(int minimum) {
  for (int n = std::max(minimum, 2);; ++n) {
    int m = n;
    for (int p : {2, 3, 5, 7}) {
      while (m % p == 0) m /= p;
    }
    if (m == 1) return n;
  }
}

}  // namespace mcms::detail
