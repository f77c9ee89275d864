#include <catch2/catch_amalgamated.hpp>

#include "hatsolver/datagen.hpp"
#include "hatsolver/tokenizer.hpp"
#include "test_support.hpp"

using namespace hatsolver;
using testsupport::random_nonzero_polynomial;

namespace {

const MonomialOrder lex{OrderKind::lex};

PolySystem worked_example() {
  // p1 = x0^2 x1^2 + 5 x0^2 x1, p2 = 3 x0^3 + 2 x1 over F_7.
  return PolySystem({parse_polynomial("1*x0^2*x1^2 + 5*x0^2*x1", 2, 7, lex),
                     parse_polynomial("3*x0^3 + 2*x1", 2, 7, lex)});
}

PolySystem random_system(int n, int max_deg, int max_polys, std::uint32_t q, Rng& rng) {
  std::uniform_int_distribution<int> count(1, max_polys);
  std::vector<Polynomial> polys;
  int m = count(rng);
  for (int i = 0; i < m; ++i)
    polys.push_back(random_nonzero_polynomial(n, max_deg, 5, q, rng, lex));
  return PolySystem(std::move(polys));
}

}  // namespace

TEST_CASE("vocabulary layout and size") {
  for (std::uint32_t q : {2u, 5u, 7u, 17u}) {
    for (int d : {0, 3, 11}) {
      Vocab v(q, d);
      CHECK(v.size() == static_cast<int>(q) - 1 + d + 1 + 3 + 2);
      // token <-> id is a bijection.
      for (int id = 0; id < v.size(); ++id) CHECK(v.id_of(v.token_name(id)) == id);
    }
  }
  Vocab v(7, 3);
  CHECK(v.token_name(Vocab::kPad) == "<pad>");
  CHECK(Vocab::kPad == 0);
  CHECK(v.coeff_id(1) == 5);
  CHECK(v.exp_id(0) == 11);
  CHECK_THROWS_AS(v.coeff_id(0), std::invalid_argument);
  CHECK_THROWS_AS(v.coeff_id(7), std::invalid_argument);
  CHECK_THROWS_AS(v.exp_id(4), std::invalid_argument);

  Vocab back = Vocab::from_json(v.to_json());
  CHECK(back == v);
}

TEST_CASE("tokenization of the worked example") {
  Vocab vocab(7, 3);
  FlatSequence seq = tokenize_system(worked_example(), vocab);
  CHECK(tokens_to_string(seq, vocab) ==
        "<bos> C1 E2 E2 + C5 E2 E1 <sep> C3 E3 E0 + C2 E0 E1");
  CHECK(seq.size() == 16);  // 4 terms x (n + 2)
}

TEST_CASE("single constant polynomial") {
  Vocab vocab(7, 3);
  PolySystem sys({Polynomial::constant(4, 2, 7)});
  CHECK(tokens_to_string(tokenize_system(sys, vocab), vocab) == "<bos> C4 E0 E0");
}

TEST_CASE("tokenize rejects out-of-range content") {
  Vocab vocab(7, 2);
  PolySystem sys({parse_polynomial("1*x0^3", 2, 7, lex)});
  CHECK_THROWS_AS(tokenize_system(sys, vocab), std::invalid_argument);
  PolySystem zero_sys({Polynomial::zero(2, 7), Polynomial::constant(1, 2, 7)});
  CHECK_THROWS_AS(tokenize_system(zero_sys, vocab), std::invalid_argument);
}

TEST_CASE("detokenize inverts the worked example") {
  Vocab vocab(7, 3);
  PolySystem sys = worked_example();
  CHECK(detokenize(tokenize_system(sys, vocab), vocab, 2) == sys);
}

TEST_CASE("detokenize error positions") {
  Vocab vocab(7, 3);
  CHECK_THROWS_AS(detokenize({}, vocab, 2), ParseError);
  // Empty body after <bos>.
  CHECK_THROWS_AS(detokenize({Vocab::kBos}, vocab, 2), ParseError);
  // Term with a missing exponent token (arity n+1 instead of n+2).
  FlatSequence bad = {Vocab::kBos, vocab.coeff_id(1), vocab.exp_id(0)};
  try {
    detokenize(bad, vocab, 2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.where == 3);
  }
  // Coefficient token in an exponent slot.
  FlatSequence swapped = {Vocab::kBos, vocab.coeff_id(1), vocab.coeff_id(2), vocab.exp_id(0)};
  CHECK_THROWS_AS(detokenize(swapped, vocab, 2), ParseError);
  // Unknown structural token mid-sequence.
  FlatSequence stray = {Vocab::kBos, vocab.coeff_id(1), vocab.exp_id(0), vocab.exp_id(0),
                        Vocab::kEos};
  CHECK_THROWS_AS(detokenize(stray, vocab, 2), ParseError);
}

TEST_CASE("round trip on random systems") {
  Rng rng(2718);
  for (std::uint32_t q : {5u, 7u}) {
    for (int n : {1, 2, 3}) {
      Vocab vocab(q, 4);
      for (int trial = 0; trial < 400; ++trial) {
        PolySystem sys = random_system(n, 4, 3, q, rng);
        CHECK(detokenize(tokenize_system(sys, vocab), vocab, n) == sys);
      }
    }
  }
}

TEST_CASE("datagen output round trips through the tokenizer") {
  GenConfig cfg;
  cfg.n = 2;
  cfg.max_degree_G = 2;
  cfg.seed = 9;
  Vocab vocab(7, 11);
  for (std::uint64_t i = 0; i < 50; ++i) {
    SamplePair s = backward_generate(cfg, i);
    CHECK(detokenize(tokenize_system(s.F, vocab), vocab, 2) == s.F);
    CHECK(detokenize(tokenize_system(s.G_expanded, vocab), vocab, 2) == s.G_expanded);
  }
}

TEST_CASE("three-level tree of the worked example matches the reference layout") {
  Vocab vocab(7, 3);
  TokenTree tree = to_token_tree(worked_example(), vocab, 3, {2, 2});
  REQUIRE(tree.ids.shape == std::vector<std::int64_t>({2, 2, 4}));
  // Equation 0: [<bos> C1 E2 E2], [+ C5 E2 E1]; equation 1: [<sep> C3 E3 E0],
  // [+ C2 E1 E0].
  CHECK(tree.ids.at({0, 0, 0}) == Vocab::kBos);
  CHECK(tree.ids.at({0, 0, 1}) == vocab.coeff_id(1));
  CHECK(tree.ids.at({0, 0, 2}) == vocab.exp_id(2));
  CHECK(tree.ids.at({0, 0, 3}) == vocab.exp_id(2));
  CHECK(tree.ids.at({0, 1, 0}) == Vocab::kPlus);
  CHECK(tree.ids.at({0, 1, 1}) == vocab.coeff_id(5));
  CHECK(tree.ids.at({1, 0, 0}) == Vocab::kSep);
  CHECK(tree.ids.at({1, 0, 1}) == vocab.coeff_id(3));
  CHECK(tree.ids.at({1, 1, 0}) == Vocab::kPlus);
  CHECK(tree.ids.at({1, 1, 2}) == vocab.exp_id(0));
  CHECK(tree.ids.at({1, 1, 3}) == vocab.exp_id(1));
  for (std::int64_t i = 0; i < tree.mask.size(); ++i) CHECK(tree.mask.data[i] == 1);
}

TEST_CASE("two-level tree flattens terms across equations") {
  Vocab vocab(7, 3);
  TokenTree tree = to_token_tree(worked_example(), vocab, 2, {4});
  REQUIRE(tree.ids.shape == std::vector<std::int64_t>({4, 4}));
  CHECK(tree.ids.at({0, 0}) == Vocab::kBos);
  CHECK(tree.ids.at({2, 0}) == Vocab::kSep);
  CHECK(flatten_without_padding(tree) == tokenize_system(worked_example(), vocab));
}

TEST_CASE("padding produces prefix masks and preserves the flat order") {
  Vocab vocab(7, 4);
  Rng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    PolySystem sys = random_system(2, 3, 3, 7, rng);
    FlatSequence flat = tokenize_system(sys, vocab);
    TokenTree t3 = to_token_tree(sys, vocab, 3, {5, 8});
    CHECK(flatten_without_padding(t3) == flat);
    TokenTree t2 = to_token_tree(sys, vocab, 2, {24});
    CHECK(flatten_without_padding(t2) == flat);
    // Prefix property: along the term axis, a real term never follows a
    // padded slot within the same equation, and a real equation never follows
    // a padded one.
    bool seen_padded_eq = false;
    for (std::int64_t e = 0; e < t3.ids.shape[0]; ++e) {
      bool eq_real = t3.mask.at({e, 0, 0}) != 0;
      if (seen_padded_eq) CHECK_FALSE(eq_real);
      if (!eq_real) seen_padded_eq = true;
      bool seen_padded_term = false;
      for (std::int64_t t = 0; t < t3.ids.shape[1]; ++t) {
        bool term_real = t3.mask.at({e, t, 0}) != 0;
        if (seen_padded_term) CHECK_FALSE(term_real);
        if (!term_real) seen_padded_term = true;
        // Leaf axis groups are all-real or all-pad.
        for (std::int64_t k = 1; k < t3.ids.shape[2]; ++k)
          CHECK((t3.mask.at({e, t, k}) != 0) == term_real);
      }
    }
  }
}

TEST_CASE("tree overflow names the axis") {
  Vocab vocab(7, 3);
  try {
    to_token_tree(worked_example(), vocab, 3, {1, 2});
    FAIL("expected overflow");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("axis 0 (equations)") != std::string::npos);
  }
  try {
    to_token_tree(worked_example(), vocab, 3, {2, 1});
    FAIL("expected overflow");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("axis 1 (terms)") != std::string::npos);
  }
  try {
    to_token_tree(worked_example(), vocab, 2, {3});
    FAIL("expected overflow");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("axis 0 (terms)") != std::string::npos);
  }
  CHECK_THROWS_AS(to_token_tree(worked_example(), vocab, 4, {2, 2}), std::invalid_argument);
}

TEST_CASE("strip_generation") {
  Vocab vocab(7, 3);
  FlatSequence seq = tokenize_system(worked_example(), vocab);
  FlatSequence decorated = seq;
  decorated.push_back(Vocab::kEos);
  decorated.push_back(Vocab::kPad);
  decorated.push_back(Vocab::kPad);
  CHECK(strip_generation(decorated) == seq);
}
