#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "hatsolver/groebner.hpp"
#include "test_support.hpp"

using namespace hatsolver;
using testsupport::random_nonzero_polynomial;

namespace {

const MonomialOrder lex{OrderKind::lex};

Polynomial P(const std::string& text, int n = 2, std::uint32_t q = 7) {
  return parse_polynomial(text, n, q, lex);
}

PolySystem random_system(int n, int max_deg, int max_polys, Rng& rng) {
  std::uniform_int_distribution<int> count(1, max_polys);
  std::vector<Polynomial> polys;
  int m = count(rng);
  for (int i = 0; i < m; ++i) polys.push_back(random_nonzero_polynomial(n, max_deg, 4, 7, rng, lex));
  return PolySystem(std::move(polys));
}

}  // namespace

TEST_CASE("reduce basics") {
  CHECK(reduce(P("1*x0"), {P("1*x0")}, lex).is_zero());
  Polynomial f = P("1*x0^2 + 2*x1");
  CHECK(reduce(f, std::vector<Polynomial>{}, lex) == f);

  // Substitution oracle: modulo x0 - x1, reducing x0^2 + x1 amounts to
  // substituting x0 = x1, giving x1^2 + x1.
  Polynomial r = reduce(P("1*x0^2 + 1*x1"), {P("1*x0 + 6*x1")}, lex);
  CHECK(to_text(r) == "1*x1^2 + 1*x1");
}

TEST_CASE("reduce leaves no divisible monomial and witnesses membership") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    PolySystem basis = random_system(2, 3, 3, rng);
    Polynomial f = random_nonzero_polynomial(2, 4, 6, 7, rng, lex);
    ReduceResult rr = reduce_with_quotients(f, basis.polys, lex);
    for (const auto& term : rr.remainder.terms())
      for (const auto& b : basis.polys)
        CHECK_FALSE(divides(b.leading_monomial(), term.mono));
    // f - r = sum q_i b_i, so the quotients witness that f - r lies in the
    // ideal generated by the basis.
    Polynomial recomposed = rr.remainder;
    for (std::size_t i = 0; i < basis.polys.size(); ++i)
      recomposed = poly_add(recomposed, poly_mul(rr.quotients[i], basis.polys[i], lex), lex);
    CHECK(recomposed == f);
    // Idempotence.
    CHECK(reduce(rr.remainder, basis.polys, lex) == rr.remainder);
  }
}

TEST_CASE("s_polynomial") {
  Polynomial f = P("1*x0^2 + 6*x1");   // x0^2 - x1
  Polynomial g = P("1*x0*x1 + 6");     // x0*x1 - 1
  // Hand expansion oracle: lcm = x0^2 x1, S = x1*f - x0*g = x0 - x1^2.
  Polynomial by_hand = poly_sub(poly_mul(P("1*x1"), f, lex), poly_mul(P("1*x0"), g, lex), lex);
  Polynomial s = s_polynomial(f, g, lex);
  CHECK(s == by_hand);
  CHECK(to_text(s) == "1*x0 + 6*x1^2");

  CHECK(s_polynomial(f, f, lex).is_zero());
  CHECK_THROWS_AS(s_polynomial(f, Polynomial::zero(2, 7), lex), std::invalid_argument);
}

TEST_CASE("coprime leading monomials reduce to zero") {
  // Buchberger's first criterion, checked by explicit reduction.
  Rng rng(17);
  int checked = 0;
  while (checked < 50) {
    Polynomial f = random_nonzero_polynomial(3, 3, 4, 7, rng, lex);
    Polynomial g = random_nonzero_polynomial(3, 3, 4, 7, rng, lex);
    if (!coprime(f.leading_monomial(), g.leading_monomial())) continue;
    if (f.leading_monomial() == g.leading_monomial()) continue;
    CHECK(reduce(s_polynomial(f, g, lex), {f, g}, lex).is_zero());
    ++checked;
  }
}

TEST_CASE("buchberger on already-Groebner input") {
  GroebnerBasis gb = buchberger(PolySystem({P("1*x0"), P("1*x1")}), lex);
  CHECK(gb.basis.size() == 2);
  CHECK(is_groebner(gb.basis, lex));
  GroebnerBasis red = inter_reduce(gb);
  CHECK(red.basis == PolySystem({P("1*x0"), P("1*x1")}));
}

TEST_CASE("one reduction step") {
  GroebnerBasis red = inter_reduce(buchberger(PolySystem({P("1*x0 + 1*x1"), P("1*x1")}), lex));
  CHECK(red.basis == PolySystem({P("1*x0"), P("1*x1")}));
}

TEST_CASE("oracle soundness on random systems") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    PolySystem sys = random_system(3, 3, 3, rng);
    GroebnerBasis gb = buchberger(sys, lex, {100000, 60.0});
    CHECK(is_groebner(gb.basis, lex));
    for (const auto& f : sys.polys) CHECK(reduce(f, gb.basis, lex).is_zero());
  }
}

TEST_CASE("buchberger determinism") {
  Rng rng(5);
  PolySystem sys = random_system(3, 3, 3, rng);
  GroebnerBasis a = buchberger(sys, lex);
  GroebnerBasis b = buchberger(sys, lex);
  CHECK(a.basis == b.basis);
}

TEST_CASE("reduced basis is invariant under generator permutation") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    PolySystem sys = random_system(3, 3, 4, rng);
    PolySystem shuffled = sys;
    std::shuffle(shuffled.polys.begin(), shuffled.polys.end(), rng);
    GroebnerBasis a = inter_reduce(buchberger(sys, lex));
    GroebnerBasis b = inter_reduce(buchberger(shuffled, lex));
    CHECK(a.basis == b.basis);
  }
}

TEST_CASE("inter_reduce") {
  GroebnerBasis gb{PolySystem({P("1*x0"), P("1*x0 + 1*x1")}), lex, false};
  GroebnerBasis red = inter_reduce(gb);
  CHECK(red.reduced);
  CHECK(red.basis == PolySystem({P("1*x0"), P("1*x1")}));
  // Idempotence.
  CHECK(inter_reduce(red).basis == red.basis);
  // Scaling any element is washed out by monic normalization.
  GroebnerBasis scaled{PolySystem({poly_scale(P("1*x0"), Fp(3, 7)), P("1*x0 + 1*x1")}), lex, false};
  CHECK(inter_reduce(scaled).basis == red.basis);
  // Reduced flag semantics: no monomial of any element is divisible by
  // another element's leading term, and every element is monic.
  for (const auto& g : red.basis.polys) {
    CHECK(g.leading_term().coeff.is_one());
    for (const auto& t : g.terms())
      for (const auto& other : red.basis.polys)
        if (&other != &g) CHECK_FALSE(divides(other.leading_monomial(), t.mono));
  }
}

TEST_CASE("is_groebner") {
  CHECK(is_groebner(PolySystem({P("2*x0^2 + 1*x1")}), lex));
  CHECK_FALSE(is_groebner(PolySystem({P("1*x0^2 + 6*x1"), P("1*x0*x1 + 6")}), lex));
  Rng rng(8);
  PolySystem sys = random_system(2, 3, 3, rng);
  CHECK(is_groebner(buchberger(sys, lex).basis, lex));
}

TEST_CASE("budget exceeded surfaces as a typed error") {
  PolySystem sys({P("1*x0^2 + 6*x1"), P("1*x0*x1 + 6")});
  CHECK_THROWS_AS(buchberger(sys, lex, {0, 60.0}), BudgetExceeded);
  try {
    buchberger(sys, lex, {0, 60.0});
  } catch (const BudgetExceeded& e) {
    CHECK(e.basis_size >= 2);
  }
}

TEST_CASE("shape position detection") {
  GroebnerBasis gb{PolySystem({P("1*x1^2 + 1"), P("1*x0 + 6*x1")}), lex, true};
  auto shape = is_shape_position(gb);
  REQUIRE(shape.has_value());
  CHECK(to_text(shape->h) == "1*x1^2 + 1");
  REQUIRE(shape->g.size() == 1);
  CHECK(to_text(shape->g[0]) == "1*x1");
  // Expansion reproduces a reduced lex basis equal to the input.
  CHECK(shape->expand() == PolySystem({P("1*x0 + 6*x1"), P("1*x1^2 + 1")}));

  GroebnerBasis not_shape{PolySystem({P("1*x0^2"), P("1*x1")}), lex, true};
  CHECK_FALSE(is_shape_position(not_shape).has_value());

  GroebnerBasis grevlex_gb{PolySystem({P("1*x0")}), MonomialOrder{OrderKind::grevlex}, true};
  CHECK_THROWS_AS(is_shape_position(grevlex_gb), std::invalid_argument);
  GroebnerBasis unreduced{PolySystem({P("1*x0")}), lex, false};
  CHECK_THROWS_AS(is_shape_position(unreduced), std::invalid_argument);
}

TEST_CASE("zero dimensionality") {
  GroebnerBasis shape{PolySystem({P("1*x0 + 6*x1"), P("1*x1^2 + 1")}), lex, true};
  CHECK(is_zero_dimensional(shape));
  GroebnerBasis line{PolySystem({P("1*x0")}), lex, true};
  CHECK_FALSE(is_zero_dimensional(line));

  GroebnerBasis box{PolySystem({P("1*x0^2"), P("1*x1^3")}), lex, true};
  CHECK(is_zero_dimensional(box));
  // Staircase oracle: monomials outside <x0^2, x1^3> are x0^a x1^b with
  // a < 2, b < 3, i.e. the quotient has dimension 6.
  int staircase = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (!(a >= 2) && !(b >= 3)) ++staircase;
  CHECK(staircase == 6);
}
