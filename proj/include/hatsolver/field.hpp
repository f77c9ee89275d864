#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hatsolver {

inline bool is_prime(std::uint32_t q) {
  if (q < 2) return false;
  for (std::uint64_t d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

// Called once wherever a field is fixed (system construction, generator
// config). Extension fields are not representable here.
inline void require_prime_field(std::uint32_t q) {
  if (!is_prime(q))
    throw std::invalid_argument("modulus " + std::to_string(q) +
                                " is not prime; only prime fields are supported");
}

// Element of F_q stored as the canonical residue in [0, q).
class Fp {
 public:
  Fp() : v_(0), q_(2) {}
  Fp(std::int64_t value, std::uint32_t q) : q_(q) {
    if (q < 2) throw std::invalid_argument("modulus must be >= 2");
    std::int64_t m = value % static_cast<std::int64_t>(q);
    if (m < 0) m += q;
    v_ = static_cast<std::uint32_t>(m);
  }

  std::uint32_t value() const { return v_; }
  std::uint32_t modulus() const { return q_; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return v_ == 1; }

  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_ && a.q_ == b.q_; }
  friend bool operator!=(const Fp& a, const Fp& b) { return !(a == b); }

  friend Fp operator+(const Fp& a, const Fp& b) {
    check_same(a, b);
    std::uint32_t s = a.v_ + b.v_;
    if (s >= a.q_) s -= a.q_;
    return Fp(s, a.q_, Raw{});
  }
  friend Fp operator-(const Fp& a, const Fp& b) {
    check_same(a, b);
    std::uint32_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.q_ - b.v_;
    return Fp(s, a.q_, Raw{});
  }
  friend Fp operator*(const Fp& a, const Fp& b) {
    check_same(a, b);
    return Fp(static_cast<std::uint32_t>(
                  (static_cast<std::uint64_t>(a.v_) * b.v_) % a.q_),
              a.q_, Raw{});
  }
  Fp operator-() const { return Fp(v_ == 0 ? 0 : q_ - v_, q_, Raw{}); }

  Fp pow(std::uint64_t e) const {
    Fp base = *this, acc(1 % q_, q_, Raw{});
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // a^(q-2); valid because q is prime.
  Fp inv() const {
    if (v_ == 0) throw std::domain_error("inversion of zero in F_" + std::to_string(q_));
    return pow(q_ - 2);
  }

  friend Fp operator/(const Fp& a, const Fp& b) { return a * b.inv(); }

 private:
  struct Raw {};
  Fp(std::uint32_t v, std::uint32_t q, Raw) : v_(v), q_(q) {}
  static void check_same(const Fp& a, const Fp& b) {
    if (a.q_ != b.q_)
      throw std::invalid_argument("field modulus mismatch: " + std::to_string(a.q_) + " vs " +
                                  std::to_string(b.q_));
  }
  std::uint32_t v_;
  std::uint32_t q_;
};

}  // namespace hatsolver
