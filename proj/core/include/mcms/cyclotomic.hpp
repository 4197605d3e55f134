#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <iosfwd>

namespace mcms {

/// Exact element m0 + m1*xi + m2*xi^2 + m3*xi^3 of Z[xi], xi = exp(2 pi i / 5).
///
/// The basis {1, xi, xi^2, xi^3} is fixed and xi^4 is always reduced through
/// 1 + xi + xi^2 + xi^3 + xi^4 = 0, so equality of values is equality of
/// coefficient tuples. Arithmetic is checked: any 64-bit overflow throws
/// std::overflow_error.
class CycInt {
 public:
  using Coeffs = std::array<std::int64_t, 4>;

  constexpr CycInt() = default;
  constexpr explicit CycInt(const Coeffs& c) : c_(c) {}
  constexpr CycInt(std::int64_t m0, std::int64_t m1, std::int64_t m2,
                   std::int64_t m3)
      : c_{m0, m1, m2, m3} {}

  static constexpr CycInt integer(std::int64_t k) { return {k, 0, 0, 0}; }
  static constexpr CycInt xi() { return {0, 1, 0, 0}; }
  /// The golden ratio, -xi^2 - xi^3.
  static constexpr CycInt tau() { return {0, 0, -1, -1}; }

  constexpr const Coeffs& coeffs() const { return c_; }
  constexpr std::int64_t operator[](std::size_t k) const { return c_[k]; }

  friend constexpr bool operator==(const CycInt&, const CycInt&) = default;
  friend constexpr auto operator<=>(const CycInt&, const CycInt&) = default;

  friend CycInt operator+(const CycInt& a, const CycInt& b);
  friend CycInt operator-(const CycInt& a, const CycInt& b);
  friend CycInt operator-(const CycInt& a);
  friend CycInt operator*(const CycInt& a, const CycInt& b);

  CycInt& operator+=(const CycInt& b) { return *this = *this + b; }
  CycInt& operator*=(const CycInt& b) { return *this = *this * b; }

 private:
  Coeffs c_{};
};

std::ostream& operator<<(std::ostream& os, const CycInt& a);

/// xi^k as a complex number.
std::complex<double> xi_power(int k);

/// The inclusion Z[xi] -> C (physical space).
std::complex<double> embed_physical(const CycInt& a);

/// Galois automorphism xi -> xi^2.
CycInt star(const CycInt& a);

/// embed_physical(star(a)) (internal space).
std::complex<double> embed_internal(const CycInt& a);

/// Coefficient sum mod 5, in [0, 5).
int rho(const CycInt& a);

}  // namespace mcms
