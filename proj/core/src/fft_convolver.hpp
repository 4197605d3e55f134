#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mcms::detail {

/// Real 2-D transforms of a fixed padded size (row-major, x fastest).
/// Not thread-safe: the inverse transform uses an internal scratch buffer.
class FftConvolver {
 public:
  FftConvolver(int nx, int ny);
  ~FftConvolver();
  FftConvolver(const FftConvolver&) = delete;
  FftConvolver& operator=(const FftConvolver&) = delete;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t real_size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t spectrum_size() const { return static_cast<std::size_t>(ny_) * (nx_ / 2 + 1); }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Unnormalised inverse (scaled by nx * ny).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

  /// Smallest n >= minimum of the form 2^a 3^b 5^c 7^d.
  static int good_size(int minimum);

 private:
  int nx_;
  int ny_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
  mutable std::vector<std::complex<double>> scratch_;
};

}  // namespace mcms::detail
