#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace sfs {

using Rational = mpq_class;

/// Element of the prime field GF(P) with P = 2^63 - 25.
///
/// All randomized identity tests and generic-rank computations run in this
/// field. The modulus is above 2^61 - 1 so a single evaluation of a
/// desk-scale minor vanishes by accident with probability far below 2^-40.
class Fp {
 public:
  static constexpr std::uint64_t kModulus = 9223372036854775783ULL;

  constexpr Fp() = default;
  constexpr explicit Fp(std::uint64_t v) : v_(v % kModulus) {}
  static Fp from_signed(std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(kModulus);
    if (r < 0) r += static_cast<std::int64_t>(kModulus);
    return Fp(static_cast<std::uint64_t>(r));
  }

  constexpr std::uint64_t value() const { return v_; }
  constexpr bool is_zero() const { return v_ == 0; }

  friend constexpr Fp operator+(Fp a, Fp b) {
    std::uint64_t s = a.v_ + b.v_;  // < 2^64 since both < 2^63
    if (s >= kModulus) s -= kModulus;
    return raw(s);
  }
  friend constexpr Fp operator-(Fp a, Fp b) {
    return raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + kModulus - b.v_);
  }
  friend constexpr Fp operator-(Fp a) { return raw(a.v_ == 0 ? 0 : kModulus - a.v_); }
  friend constexpr Fp operator*(Fp a, Fp b) {
    return raw(static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a.v_) * b.v_ % kModulus));
  }
  friend Fp operator/(Fp a, Fp b) { return a * b.inverse(); }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }
  friend constexpr bool operator==(Fp a, Fp b) { return a.v_ == b.v_; }

  Fp pow(std::uint64_t e) const {
    Fp base = *this, acc = raw(1);
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }
  Fp inverse() const {
    if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
    return pow(kModulus - 2);
  }

  friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

 private:
  static constexpr Fp raw(std::uint64_t v) {
    Fp f;
    f.v_ = v;
    return f;
  }
  std::uint64_t v_ = 0;
};

/// Reduces a rational modulo P. Throws if P divides the denominator.
Fp to_field(const Rational& r);

/// Canonical "num/den" form (denominator always printed, even when 1).
std::string rational_to_string(const Rational& r);
/// Accepts "num/den" or "num"; throws std::invalid_argument otherwise.
Rational rational_from_string(const std::string& s);

}  // namespace sfs
