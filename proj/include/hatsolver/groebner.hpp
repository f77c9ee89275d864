#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hatsolver/common.hpp"
#include "hatsolver/polynomial.hpp"

namespace hatsolver {

struct GroebnerBasis {
  PolySystem basis;
  MonomialOrder order;
  bool reduced = false;
};

// Intermediate polynomials in Buchberger runs legitimately swell past the
// serialization exponent cap; oracle internals use this bound instead.
inline constexpr int kOracleMaxExponent = 1 << 16;

struct BuchbergerLimits {
  std::uint64_t max_steps = 100000;  // S-pair reductions
  double max_seconds = std::numeric_limits<double>::infinity();
};

struct ReduceResult {
  Polynomial remainder;
  std::vector<Polynomial> quotients;  // one per basis element; f = sum q_i b_i + r
};

// Normal form of f modulo `basis`: repeatedly cancels the leading monomial
// against the earliest basis element whose leading term divides it, moving
// irreducible leading terms to the remainder. No monomial of the result is
// divisible by any basis leading term. Deterministic by the earliest-divisor
// rule.
inline ReduceResult reduce_with_quotients(const Polynomial& f,
                                          const std::vector<Polynomial>& basis,
                                          const MonomialOrder& ord,
                                          int max_exponent = kOracleMaxExponent) {
  ReduceResult out;
  out.quotients.assign(basis.size(), Polynomial::zero(f.n(), f.q()));
  std::vector<Term> remainder_terms;
  Polynomial h = f;
  while (!h.is_zero()) {
    const Term& lt = h.leading_term();
    bool cancelled = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Polynomial& b = basis[i];
      if (b.is_zero()) continue;
      check_same_ambient(f, b);
      if (divides(b.leading_monomial(), lt.mono)) {
        Monomial m = div(lt.mono, b.leading_monomial());
        Fp c = lt.coeff / b.leading_term().coeff;
        h = poly_sub(h, poly_mul_term(b, m, c, max_exponent), ord);
        out.quotients[i] = poly_add(out.quotients[i],
                                    Polynomial::from_terms({{m, c}}, f.n(), f.q(), ord), ord);
        cancelled = true;
        break;
      }
    }
    if (!cancelled) {
      remainder_terms.push_back(lt);
      h = Polynomial::from_sorted_terms_unchecked(
          std::vector<Term>(h.terms().begin() + 1, h.terms().end()), h.n(), h.q());
    }
  }
  // Leading terms were peeled in strictly descending order.
  out.remainder = Polynomial::from_sorted_terms_unchecked(std::move(remainder_terms), f.n(), f.q());
  return out;
}

inline Polynomial reduce(const Polynomial& f, const std::vector<Polynomial>& basis,
                         const MonomialOrder& ord, int max_exponent = kOracleMaxExponent) {
  if (basis.empty()) return f;
  Polynomial h = f;
  std::vector<Term> remainder_terms;
  while (!h.is_zero()) {
    const Term& lt = h.leading_term();
    bool cancelled = false;
    for (const Polynomial& b : basis) {
      if (b.is_zero()) continue;
      if (divides(b.leading_monomial(), lt.mono)) {
        Monomial m = div(lt.mono, b.leading_monomial());
        Fp c = lt.coeff / b.leading_term().coeff;
        h = poly_sub(h, poly_mul_term(b, m, c, max_exponent), ord);
        cancelled = true;
        break;
      }
    }
    if (!cancelled) {
      remainder_terms.push_back(lt);
      h = Polynomial::from_sorted_terms_unchecked(
          std::vector<Term>(h.terms().begin() + 1, h.terms().end()), h.n(), h.q());
    }
  }
  return Polynomial::from_sorted_terms_unchecked(std::move(remainder_terms), f.n(), f.q());
}

inline Polynomial reduce(const Polynomial& f, const PolySystem& basis, const MonomialOrder& ord,
                         int max_exponent = kOracleMaxExponent) {
  return reduce(f, basis.polys, ord, max_exponent);
}

// S(f, g) = (lcm/lt(f)) f - (lcm/lt(g)) g; the leading terms cancel.
inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g, const MonomialOrder& ord,
                               int max_exponent = kOracleMaxExponent) {
  if (f.is_zero() || g.is_zero())
    throw std::invalid_argument("s_polynomial of a zero polynomial");
  check_same_ambient(f, g);
  Monomial l = lcm(f.leading_monomial(), g.leading_monomial());
  Polynomial a = poly_mul_term(f, div(l, f.leading_monomial()), f.leading_term().coeff.inv(),
                               max_exponent);
  Polynomial b = poly_mul_term(g, div(l, g.leading_monomial()), g.leading_term().coeff.inv(),
                               max_exponent);
  return poly_sub(a, b, ord);
}

namespace detail {

struct SPair {
  std::size_t i, j;
  Monomial lcm_lm;
};

class DeadlineCheck {
 public:
  explicit DeadlineCheck(double max_seconds)
      : enabled_(std::isfinite(max_seconds)),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(enabled_ ? max_seconds : 0.0))) {}
  bool expired() const {
    return enabled_ && std::chrono::steady_clock::now() > deadline_;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point deadline_;
};

// Normal selection strategy: smallest lcm under the active order, FIFO on
// ties. The pair list keeps insertion order, so a linear scan taking the
// first strict improvement realizes the tie-break.
inline std::size_t select_pair(const std::vector<SPair>& pairs, const MonomialOrder& ord) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < pairs.size(); ++k)
    if (ord.less(pairs[k].lcm_lm, pairs[best].lcm_lm)) best = k;
  return best;
}

}  // namespace detail

// Buchberger's algorithm with the first-criterion prune (coprime leading
// monomials). Deterministic: normal selection with FIFO tie-break, reduction
// against earliest divisor. Throws BudgetExceeded when the step or wall-clock
// limit runs out.
inline GroebnerBasis buchberger(const PolySystem& gens, const MonomialOrder& ord,
                                const BuchbergerLimits& limits = {},
                                int max_exponent = kOracleMaxExponent) {
  gens.validate();
  std::vector<Polynomial> g;
  for (const auto& p : gens.polys)
    if (!p.is_zero()) g.push_back(poly_monic(p.resorted(ord)));
  if (g.empty()) throw std::invalid_argument("buchberger requires a nonzero generator");

  std::vector<detail::SPair> pairs;
  auto push_pairs_with = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i)
      pairs.push_back({i, j, lcm(g[i].leading_monomial(), g[j].leading_monomial())});
  };
  for (std::size_t j = 1; j < g.size(); ++j) push_pairs_with(j);

  detail::DeadlineCheck deadline(limits.max_seconds);
  std::uint64_t steps = 0;
  while (!pairs.empty()) {
    if (deadline.expired())
      throw BudgetExceeded("buchberger wall-clock budget exceeded", g.size(), steps);
    std::size_t k = detail::select_pair(pairs, ord);
    detail::SPair p = pairs[k];
    pairs.erase(pairs.begin() + static_cast<std::ptrdiff_t>(k));
    if (coprime(g[p.i].leading_monomial(), g[p.j].leading_monomial())) continue;
    if (++steps > limits.max_steps)
      throw BudgetExceeded("buchberger step budget exceeded after " +
                               std::to_string(limits.max_steps) + " S-pair reductions",
                           g.size(), steps);
    Polynomial r = reduce(s_polynomial(g[p.i], g[p.j], ord, max_exponent), g, ord, max_exponent);
    if (!r.is_zero()) {
      g.push_back(poly_monic(r));
      push_pairs_with(g.size() - 1);
    }
  }
  return GroebnerBasis{PolySystem(std::move(g)), ord, false};
}

// Unique reduced basis via autoreduction: replace each element by its normal
// form against the others until nothing changes, dropping zeros; then make
// everything monic and sort by leading monomial descending. Terminates
// because every replacement strictly shrinks the element under the order;
// idempotent by construction.
inline GroebnerBasis inter_reduce(const GroebnerBasis& gb,
                                  int max_exponent = kOracleMaxExponent) {
  const MonomialOrder& ord = gb.order;
  std::vector<Polynomial> g;
  for (const auto& p : gb.basis.polys)
    if (!p.is_zero()) g.push_back(poly_monic(p));
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::vector<Polynomial> others;
      others.reserve(g.size() - 1);
      for (std::size_t j = 0; j < g.size(); ++j)
        if (j != i) others.push_back(g[j]);
      Polynomial r = reduce(g[i], others, ord, max_exponent);
      if (r == g[i]) continue;
      changed = true;
      if (r.is_zero()) {
        g.erase(g.begin() + static_cast<std::ptrdiff_t>(i));
        --i;
      } else {
        g[i] = poly_monic(r);
      }
    }
  }
  std::sort(g.begin(), g.end(), [&](const Polynomial& a, const Polynomial& b) {
    return ord.greater(a.leading_monomial(), b.leading_monomial());
  });
  return GroebnerBasis{PolySystem(std::move(g)), ord, true};
}

// Buchberger's criterion: every S-polynomial reduces to zero. Coprime leading
// monomials are skipped (their S-polynomials always reduce to zero). Early
// exit on the first nonzero normal form.
inline bool is_groebner(const PolySystem& sys, const MonomialOrder& ord,
                        const BuchbergerLimits& limits = {},
                        int max_exponent = kOracleMaxExponent) {
  sys.validate();
  std::vector<Polynomial> g;
  for (const auto& p : sys.polys)
    if (!p.is_zero()) g.push_back(p.resorted(ord));
  if (g.empty()) return true;
  detail::DeadlineCheck deadline(limits.max_seconds);
  std::uint64_t steps = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (coprime(g[i].leading_monomial(), g[j].leading_monomial())) continue;
      if (deadline.expired() || ++steps > limits.max_steps)
        throw BudgetExceeded("is_groebner budget exceeded", g.size(), steps);
      if (!reduce(s_polynomial(g[i], g[j], ord, max_exponent), g, ord, max_exponent).is_zero())
        return false;
    }
  }
  return true;
}

// Triangular lex basis {h(x_{n-1}), x_0 - g_0(x_{n-1}), ..., x_{n-2} - g_{n-2}(x_{n-1})}
// with deg g_i < deg h. h is stored monic; the g_i are univariate in the last
// variable (possibly zero).
struct ShapeBasis {
  Polynomial h;
  std::vector<Polynomial> g;  // size n-1, index i corresponds to variable x_i

  int n() const { return h.n(); }
  std::uint32_t q() const { return h.q(); }

  // Canonical reduced-lex-basis element order: leading monomials descending,
  // i.e. x_0 - g_0, ..., x_{n-2} - g_{n-2}, h.
  PolySystem expand() const {
    MonomialOrder lex{OrderKind::lex};
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < g.size(); ++i) {
      Polynomial xi = Polynomial::from_terms(
          {{Monomial::variable(static_cast<int>(i), n()), Fp(1, q())}}, n(), q(), lex);
      polys.push_back(poly_sub(xi, g[i], lex));
    }
    polys.push_back(h);
    return PolySystem(std::move(polys));
  }
};

// Matches a reduced lex basis against the triangular pattern; empty when the
// pattern does not apply. Non-reduced or non-lex input is a contract
// violation.
inline std::optional<ShapeBasis> is_shape_position(const GroebnerBasis& gb) {
  if (gb.order.kind != OrderKind::lex)
    throw std::invalid_argument("shape position is defined for lex bases");
  if (!gb.reduced) throw std::invalid_argument("shape position requires a reduced basis");
  const int n = gb.basis.n();
  const std::uint32_t q = gb.basis.q();
  const int last = n - 1;
  if (gb.basis.size() != static_cast<std::size_t>(n)) return std::nullopt;

  MonomialOrder lex{OrderKind::lex};
  std::optional<Polynomial> h;
  std::vector<std::optional<Polynomial>> g(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (const auto& p : gb.basis.polys) {
    if (p.is_zero()) return std::nullopt;
    const Monomial& lm = p.leading_monomial();
    if (p.univariate_in(last)) {
      if (h) return std::nullopt;
      h = p;
      continue;
    }
    // Expect x_i - g_i(x_last): leading term exactly x_i, tail univariate in
    // the last variable.
    int var = -1;
    for (int i = 0; i < last; ++i)
      if (lm == Monomial::variable(i, n)) var = i;
    if (var < 0) return std::nullopt;
    if (!p.leading_term().coeff.is_one()) return std::nullopt;
    std::vector<Term> tail(p.terms().begin() + 1, p.terms().end());
    Polynomial gi = poly_neg(Polynomial::from_sorted_terms_unchecked(std::move(tail), n, q));
    if (!gi.univariate_in(last)) return std::nullopt;
    if (g[static_cast<std::size_t>(var)]) return std::nullopt;
    g[static_cast<std::size_t>(var)] = gi;
  }
  if (!h || h->is_zero() || !h->leading_term().coeff.is_one()) return std::nullopt;
  int dh = h->degree_in(last);
  if (dh < 1) return std::nullopt;
  ShapeBasis out;
  out.h = *h;
  for (auto& gi : g) {
    if (!gi) return std::nullopt;
    if (gi->degree_in(last) >= dh) return std::nullopt;
    out.g.push_back(*gi);
  }
  return out;
}

// Finiteness criterion: every variable has a pure power among the basis
// leading monomials.
inline bool is_zero_dimensional(const GroebnerBasis& gb) {
  const int n = gb.basis.n();
  for (int v = 0; v < n; ++v) {
    bool found = false;
    for (const auto& p : gb.basis.polys) {
      if (p.is_zero()) continue;
      const Monomial& lm = p.leading_monomial();
      if (lm.exponent(v) > 0 && lm.univariate_in(v)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace hatsolver
