#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hatsolver/common.hpp"
#include "hatsolver/field.hpp"
#include "hatsolver/monomial.hpp"

namespace hatsolver {

struct Term {
  Monomial mono;
  Fp coeff;
};

// Sparse multivariate polynomial over F_q. Terms are kept in strictly
// descending order under the monomial order supplied at normalization time;
// the order itself is not stored, so a polynomial can be re-sorted when the
// active order changes.
class Polynomial {
 public:
  Polynomial() : n_(0), q_(2) {}
  Polynomial(int n, std::uint32_t q) : n_(n), q_(q) {
    if (n < 0) throw std::invalid_argument("negative variable count");
  }

  static Polynomial zero(int n, std::uint32_t q) { return Polynomial(n, q); }
  static Polynomial constant(std::int64_t c, int n, std::uint32_t q,
                             const MonomialOrder& ord = {}) {
    return from_terms({{Monomial::one(n), Fp(c, q)}}, n, q, ord);
  }

  // Merges duplicate monomials, prunes zero coefficients, sorts descending.
  static Polynomial from_terms(std::vector<Term> terms, int n, std::uint32_t q,
                               const MonomialOrder& ord) {
    Polynomial p(n, q);
    for (auto& t : terms) {
      if (t.mono.n() != n) throw std::invalid_argument("term variable count mismatch");
      if (t.coeff.modulus() != q) throw std::invalid_argument("term modulus mismatch");
    }
    std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
      return ord.greater(a.mono, b.mono);
    });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coeff = p.terms_.back().coeff + t.coeff;
        if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      } else if (!t.coeff.is_zero()) {
        p.terms_.push_back(t);
      }
    }
    return p;
  }

  // For transforms that provably preserve the canonical form (negation,
  // nonzero scaling, multiplication of every monomial by one fixed monomial —
  // each keeps strict descending order under any multiplicative order and can
  // never merge terms).
  static Polynomial from_sorted_terms_unchecked(std::vector<Term> terms, int n, std::uint32_t q) {
    Polynomial p(n, q);
    p.terms_ = std::move(terms);
    return p;
  }

  int n() const { return n_; }
  std::uint32_t q() const { return q_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  const Term& leading_term() const {
    if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
    return terms_.front();
  }
  const Monomial& leading_monomial() const { return leading_term().mono; }

  int total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
    return d;
  }

  bool univariate_in(int i) const {
    for (const auto& t : terms_)
      if (!t.mono.univariate_in(i)) return false;
    return true;
  }

  // Degree in x_i (0 for constants; -1 for the zero polynomial).
  int degree_in(int i) const {
    if (terms_.empty()) return -1;
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(i));
    return d;
  }

  Polynomial resorted(const MonomialOrder& ord) const {
    return from_terms(terms_, n_, q_, ord);
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    if (a.n_ != b.n_ || a.q_ != b.q_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (a.terms_[i].mono != b.terms_[i].mono || a.terms_[i].coeff != b.terms_[i].coeff)
        return false;
    return true;
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  int n_;
  std::uint32_t q_;
  std::vector<Term> terms_;
};

inline void check_same_ambient(const Polynomial& f, const Polynomial& g) {
  if (f.n() != g.n() || f.q() != g.q())
    throw std::invalid_argument("ambient mismatch: F_" + std::to_string(f.q()) + "[x_0.." +
                                std::to_string(f.n() - 1) + "] vs F_" + std::to_string(g.q()) +
                                "[x_0.." + std::to_string(g.n() - 1) + "]");
}

inline Polynomial poly_add(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
  check_same_ambient(f, g);
  std::vector<Term> terms = f.terms();
  terms.insert(terms.end(), g.terms().begin(), g.terms().end());
  return Polynomial::from_terms(std::move(terms), f.n(), f.q(), ord);
}

inline Polynomial poly_neg(const Polynomial& f) {
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.coeff = -t.coeff;
  return Polynomial::from_sorted_terms_unchecked(std::move(terms), f.n(), f.q());
}

inline Polynomial poly_sub(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord) {
  check_same_ambient(f, g);
  std::vector<Term> terms = f.terms();
  for (const auto& t : g.terms()) terms.push_back({t.mono, -t.coeff});
  return Polynomial::from_terms(std::move(terms), f.n(), f.q(), ord);
}

inline Polynomial poly_scale(const Polynomial& f, const Fp& c) {
  if (c.modulus() != f.q()) throw std::invalid_argument("scalar modulus mismatch");
  if (c.is_zero()) return Polynomial::zero(f.n(), f.q());
  std::vector<Term> terms = f.terms();
  for (auto& t : terms) t.coeff = t.coeff * c;
  return Polynomial::from_sorted_terms_unchecked(std::move(terms), f.n(), f.q());
}

// f * (c * x^m); the workhorse of reduction steps.
inline Polynomial poly_mul_term(const Polynomial& f, const Monomial& m, const Fp& c,
                                int max_exponent = kDefaultMaxExponent) {
  if (c.is_zero()) return Polynomial::zero(f.n(), f.q());
  std::vector<Term> terms;
  terms.reserve(f.term_count());
  for (const auto& t : f.terms()) terms.push_back({mul(t.mono, m, max_exponent), t.coeff * c});
  return Polynomial::from_sorted_terms_unchecked(std::move(terms), f.n(), f.q());
}

inline Polynomial poly_mul(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord,
                           int max_exponent = kDefaultMaxExponent) {
  check_same_ambient(f, g);
  std::vector<Term> terms;
  terms.reserve(f.term_count() * g.term_count());
  for (const auto& a : f.terms())
    for (const auto& b : g.terms())
      terms.push_back({mul(a.mono, b.mono, max_exponent), a.coeff * b.coeff});
  return Polynomial::from_terms(std::move(terms), f.n(), f.q(), ord);
}

inline Polynomial poly_monic(const Polynomial& f) {
  if (f.is_zero()) return f;
  return poly_scale(f, f.leading_term().coeff.inv());
}

// Number of monomials in n variables of total degree <= d: binom(d+n, d).
inline std::uint64_t count_monomials(int n, int d) {
  if (n < 1 || d < 0) throw std::invalid_argument("count_monomials requires n >= 1, d >= 0");
  // binom(d+n, n) with the smaller of n, d as the loop bound.
  std::uint64_t k = static_cast<std::uint64_t>(std::min(n, d));
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (static_cast<std::uint64_t>(d + n) - k + i) / i;
  }
  return result;
}

// --- text form -------------------------------------------------------------
//
// A polynomial prints as its terms joined by " + ", each term as
//   <coeff>            when all exponents are zero
//   <coeff>*x<i>^<e>*...   otherwise, omitting "^e" when e == 1 and skipping
//                          zero exponents entirely
// e.g. "3*x0^2*x1 + 5". The zero polynomial prints as "0".

inline std::string to_text(const Polynomial& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (std::size_t i = 0; i < f.terms().size(); ++i) {
    const Term& t = f.terms()[i];
    if (i) out += " + ";
    out += std::to_string(t.coeff.value());
    for (int j = 0; j < f.n(); ++j) {
      int e = t.mono.exponent(j);
      if (e == 0) continue;
      out += "*x" + std::to_string(j);
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

namespace detail {

inline void skip_spaces(const std::string& s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

inline std::int64_t parse_int(const std::string& s, std::size_t& pos) {
  skip_spaces(s, pos);
  std::size_t start = pos;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) ++pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == start || (pos == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
    throw ParseError("expected integer at offset " + std::to_string(start),
                     static_cast<std::int64_t>(start));
  return std::stoll(s.substr(start, pos - start));
}

}  // namespace detail

inline Polynomial parse_polynomial(const std::string& text, int n, std::uint32_t q,
                                   const MonomialOrder& ord,
                                   int max_exponent = kDefaultMaxExponent) {
  std::size_t pos = 0;
  detail::skip_spaces(text, pos);
  if (text.compare(pos, 1, "0") == 0 && pos + 1 >= text.size())
    return Polynomial::zero(n, q);
  std::vector<Term> terms;
  while (true) {
    std::int64_t c = detail::parse_int(text, pos);
    std::vector<int> expo(static_cast<std::size_t>(n), 0);
    detail::skip_spaces(text, pos);
    while (pos < text.size() && text[pos] == '*') {
      ++pos;
      detail::skip_spaces(text, pos);
      if (pos >= text.size() || text[pos] != 'x')
        throw ParseError("expected variable after '*' at offset " + std::to_string(pos),
                         static_cast<std::int64_t>(pos));
      ++pos;
      std::int64_t vi = detail::parse_int(text, pos);
      if (vi < 0 || vi >= n)
        throw ParseError("variable index " + std::to_string(vi) + " out of range",
                         static_cast<std::int64_t>(pos));
      int e = 1;
      detail::skip_spaces(text, pos);
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        std::int64_t ei = detail::parse_int(text, pos);
        if (ei < 1 || ei > max_exponent)
          throw ParseError("exponent " + std::to_string(ei) + " out of range",
                           static_cast<std::int64_t>(pos));
        e = static_cast<int>(ei);
      }
      expo[static_cast<std::size_t>(vi)] += e;
      detail::skip_spaces(text, pos);
    }
    terms.push_back({Monomial(std::move(expo)), Fp(c, q)});
    detail::skip_spaces(text, pos);
    if (pos >= text.size()) break;
    if (text[pos] != '+')
      throw ParseError("expected '+' between terms at offset " + std::to_string(pos),
                       static_cast<std::int64_t>(pos));
    ++pos;
  }
  return Polynomial::from_terms(std::move(terms), n, q, ord);
}

// A generating set; all members share (n, q) and the sort convention.
struct PolySystem {
  std::vector<Polynomial> polys;

  PolySystem() = default;
  explicit PolySystem(std::vector<Polynomial> ps) : polys(std::move(ps)) { validate(); }

  void validate() const {
    if (polys.empty()) throw std::invalid_argument("polynomial system must be non-empty");
    for (const auto& p : polys) check_same_ambient(polys.front(), p);
    require_prime_field(polys.front().q());
  }

  int n() const { return polys.front().n(); }
  std::uint32_t q() const { return polys.front().q(); }
  std::size_t size() const { return polys.size(); }

  friend bool operator==(const PolySystem& a, const PolySystem& b) { return a.polys == b.polys; }
};

// Set comparison irrespective of element order (used by "F != G" checks).
inline bool same_polynomial_set(const PolySystem& a, const PolySystem& b) {
  if (a.polys.size() != b.polys.size()) return false;
  std::vector<std::string> sa, sb;
  for (const auto& p : a.polys) sa.push_back(to_text(p));
  for (const auto& p : b.polys) sb.push_back(to_text(p));
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  return sa == sb;
}

}  // namespace hatsolver
