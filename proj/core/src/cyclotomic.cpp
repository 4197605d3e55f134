#include "mcms/cyclotomic.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace mcms {
namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw std::overflow_error("CycInt: integer overflow in addition");
  }
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw std::overflow_error("CycInt: integer overflow in subtraction");
  }
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw std::overflow_error("CycInt: integer overflow in multiplication");
  }
  return r;
}

}  // namespace

CycInt operator+(const CycInt& a, const CycInt& b) {
  CycInt::Coeffs r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = checked_add(a[k], b[k]);
  return CycInt(r);
}

CycInt operator-(const CycInt& a, const CycInt& b) {
  CycInt::Coeffs r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = checked_sub(a[k], b[k]);
  return CycInt(r);
}

CycInt operator-(const CycInt& a) { return CycInt() - a; }

CycInt operator*(const CycInt& a, const CycInt& b) {
  // Full product has degree <= 6; fold xi^5 = 1 first, then xi^4.
  std::array<std::int64_t, 7> full{};
  for (std::size_t p = 0; p < 4; ++p) {
    for (std::size_t q = 0; q < 4; ++q) {
      full[p + q] = checked_add(full[p + q], checked_mul(a[p], b[q]));
    }
  }
  std::array<std::int64_t, 5> five{full[0], full[1], full[2], full[3], full[4]};
  five[0] = checked_add(five[0], full[5]);
  five[1] = checked_add(five[1], full[6]);
  CycInt::Coeffs r;
  for (std::size_t k = 0; k < 4; ++k) r[k] = checked_sub(five[k], five[4]);
  return CycInt(r);
}

std::ostream& operator<<(std::ostream& os, const CycInt& a) {
  return os << '(' << a[0] << ',' << a[1] << ',' << a[2] << ',' << a[3] << ')';
}

std::complex<double> xi_power(int k) {
  k %= 5;
  if (k < 0) k += 5;
  if (k == 0) return {1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * k / 5.0);
}

std::complex<double> embed_physical(const CycInt& a) {
  std::complex<double> z{0.0, 0.0};
  for (int k = 0; k < 4; ++k) z += static_cast<double>(a[k]) * xi_power(k);
  return z;
}

CycInt star(const CycInt& a) {
  // 1 -> 1, xi -> xi^2, xi^2 -> xi^4 = -1-xi-xi^2-xi^3, xi^3 -> xi^6 = xi.
  return {checked_sub(a[0], a[2]), checked_sub(a[3], a[2]),
          checked_sub(a[1], a[2]), checked_sub(0, a[2])};
}

std::complex<double> embed_internal(const CycInt& a) {
  std::complex<double> z{0.0, 0.0};
  for (int k = 0; k < 4; ++k) z += static_cast<double>(a[k]) * xi_power(2 * k);
  return z;
}

int rho(const CycInt& a) {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < 4; ++k) s += a[k] % 5;
  int r = static_cast<int>(s % 5);
  return r < 0 ? r + 5 : r;
}

}  // namespace mcms
