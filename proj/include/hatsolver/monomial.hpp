#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace hatsolver {

// Serialized forms stay compact as long as exponents fit in 6 bits; anything
// bigger is refused rather than silently wrapped.
inline constexpr int kDefaultMaxExponent = 63;

// x^alpha as its exponent vector (alpha_1..alpha_n).
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::vector<int> exponents) : e_(std::move(exponents)) {
    for (int v : e_)
      if (v < 0) throw std::invalid_argument("negative exponent");
  }
  static Monomial one(int n) { return Monomial(std::vector<int>(n, 0)); }
  static Monomial variable(int i, int n, int power = 1) {
    std::vector<int> e(n, 0);
    if (i < 0 || i >= n) throw std::invalid_argument("variable index out of range");
    e[static_cast<std::size_t>(i)] = power;
    return Monomial(std::move(e));
  }

  int n() const { return static_cast<int>(e_.size()); }
  int exponent(int i) const { return e_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& exponents() const { return e_; }
  int total_degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  bool is_one() const {
    for (int v : e_)
      if (v) return false;
    return true;
  }
  // Univariate in x_i: every other exponent zero (constants qualify).
  bool univariate_in(int i) const {
    for (int j = 0; j < n(); ++j)
      if (j != i && e_[static_cast<std::size_t>(j)] != 0) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  friend Monomial mul(const Monomial& a, const Monomial& b, int max_exponent = kDefaultMaxExponent) {
    check_same_n(a, b);
    std::vector<int> e(a.e_.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      e[i] = a.e_[i] + b.e_[i];
      if (e[i] > max_exponent)
        throw std::domain_error("exponent " + std::to_string(e[i]) + " exceeds the cap of " +
                                std::to_string(max_exponent));
    }
    return Monomial(std::move(e));
  }

  friend bool divides(const Monomial& a, const Monomial& b) {  // a | b
    check_same_n(a, b);
    for (std::size_t i = 0; i < a.e_.size(); ++i)
      if (a.e_[i] > b.e_[i]) return false;
    return true;
  }

  friend Monomial div(const Monomial& a, const Monomial& b) {  // a / b, requires b | a
    check_same_n(a, b);
    std::vector<int> e(a.e_.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (b.e_[i] > a.e_[i]) throw std::domain_error("monomial division with remainder");
      e[i] = a.e_[i] - b.e_[i];
    }
    return Monomial(std::move(e));
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    check_same_n(a, b);
    std::vector<int> e(a.e_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(a.e_[i], b.e_[i]);
    return Monomial(std::move(e));
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    check_same_n(a, b);
    for (std::size_t i = 0; i < a.e_.size(); ++i)
      if (a.e_[i] > 0 && b.e_[i] > 0) return false;
    return true;
  }

 private:
  static void check_same_n(const Monomial& a, const Monomial& b) {
    if (a.e_.size() != b.e_.size())
      throw std::invalid_argument("monomial variable count mismatch");
  }
  std::vector<int> e_;
};

enum class OrderKind { lex, grevlex };

// Total multiplicative order with 1 as the minimum. Variable precedence is
// x_0 > x_1 > ... > x_{n-1} for both kinds.
struct MonomialOrder {
  OrderKind kind = OrderKind::lex;

  // <0 if a < b, 0 if equal, >0 if a > b.
  int compare(const Monomial& a, const Monomial& b) const {
    if (a.n() != b.n()) throw std::invalid_argument("monomial variable count mismatch");
    switch (kind) {
      case OrderKind::lex: {
        // a < b iff the leftmost nonzero entry of b - a is positive.
        for (int i = 0; i < a.n(); ++i) {
          int d = b.exponent(i) - a.exponent(i);
          if (d != 0) return d > 0 ? -1 : 1;
        }
        return 0;
      }
      case OrderKind::grevlex: {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db ? -1 : 1;
        // Equal degree: a > b iff the rightmost nonzero entry of a - b is
        // negative.
        for (int i = a.n() - 1; i >= 0; --i) {
          int d = a.exponent(i) - b.exponent(i);
          if (d != 0) return d < 0 ? 1 : -1;
        }
        return 0;
      }
    }
    throw std::logic_error("unknown order kind");
  }

  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
  bool equal(const Monomial& a, const Monomial& b) const { return compare(a, b) == 0; }

  friend bool operator==(const MonomialOrder& a, const MonomialOrder& b) { return a.kind == b.kind; }

  std::string name() const { return kind == OrderKind::lex ? "lex" : "grevlex"; }
  static MonomialOrder from_name(const std::string& s) {
    if (s == "lex") return {OrderKind::lex};
    if (s == "grevlex") return {OrderKind::grevlex};
    throw std::invalid_argument("unknown monomial order: " + s);
  }
};

}  // namespace hatsolver
