#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hatsolver/common.hpp"
#include "hatsolver/polynomial.hpp"

namespace hatsolver {

// Token alphabet for systems over F_q with exponents up to max_degree:
// coefficient tokens C1..C(q-1), exponent tokens E0..Ed, the structural
// tokens <bos> / + / <sep>, plus <pad> and <eos> for batching and
// autoregressive termination. <pad> is id 0 and is always masked out of
// losses and metrics.
class Vocab {
 public:
  Vocab() = default;
  Vocab(std::uint32_t q, int max_degree) : q_(q), d_(max_degree) {
    require_prime_field(q);
    if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  }

  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kPlus = 2;
  static constexpr int kSep = 3;
  static constexpr int kEos = 4;
  static constexpr int kFirstCoeff = 5;

  std::uint32_t q() const { return q_; }
  int max_degree() const { return d_; }
  int size() const { return 5 + static_cast<int>(q_) - 1 + d_ + 1; }

  int coeff_id(std::uint32_t c) const {
    if (c == 0 || c >= q_)
      throw std::invalid_argument("coefficient " + std::to_string(c) + " outside 1.." +
                                  std::to_string(q_ - 1));
    return kFirstCoeff + static_cast<int>(c) - 1;
  }
  int exp_id(int e) const {
    if (e < 0 || e > d_)
      throw std::invalid_argument("exponent " + std::to_string(e) + " outside 0.." +
                                  std::to_string(d_));
    return kFirstCoeff + static_cast<int>(q_) - 1 + e;
  }
  bool is_coeff(int id) const { return id >= kFirstCoeff && id < kFirstCoeff + static_cast<int>(q_) - 1; }
  bool is_exp(int id) const {
    return id >= kFirstCoeff + static_cast<int>(q_) - 1 && id < size();
  }
  std::uint32_t coeff_of(int id) const {
    if (!is_coeff(id)) throw std::invalid_argument("token is not a coefficient");
    return static_cast<std::uint32_t>(id - kFirstCoeff + 1);
  }
  int exp_of(int id) const {
    if (!is_exp(id)) throw std::invalid_argument("token is not an exponent");
    return id - kFirstCoeff - static_cast<int>(q_) + 1;
  }

  std::string token_name(int id) const {
    switch (id) {
      case kPad: return "<pad>";
      case kBos: return "<bos>";
      case kPlus: return "+";
      case kSep: return "<sep>";
      case kEos: return "<eos>";
      default: break;
    }
    if (is_coeff(id)) return "C" + std::to_string(coeff_of(id));
    if (is_exp(id)) return "E" + std::to_string(exp_of(id));
    throw std::invalid_argument("token id " + std::to_string(id) + " out of range");
  }

  int id_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (token_name(i) == name) return i;
    throw std::invalid_argument("unknown token: " + name);
  }

  nlohmann::json to_json() const {
    std::vector<std::string> names;
    for (int i = 0; i < size(); ++i) names.push_back(token_name(i));
    return {{"q", q_}, {"max_degree", d_}, {"tokens", names}};
  }
  static Vocab from_json(const nlohmann::json& j) {
    Vocab v(j.at("q").get<std::uint32_t>(), j.at("max_degree").get<int>());
    return v;
  }

  friend bool operator==(const Vocab& a, const Vocab& b) { return a.q_ == b.q_ && a.d_ == b.d_; }

 private:
  std::uint32_t q_ = 7;
  int d_ = 0;
};

using FlatSequence = std::vector<int>;

// Hierarchically grouped token ids plus a validity mask. For levels == 3 the
// axes are (equations, terms per equation, n + 2); for levels == 2 they are
// (total terms across the system, n + 2). Padding always trails real content
// along every axis.
struct TokenTree {
  NdArray<std::int32_t> ids;
  NdArray<std::uint8_t> mask;
  int levels = 0;
};

// Every term serializes as n + 2 tokens: its structural prefix (<bos> for the
// very first term, <sep> for the first term of later polynomials, + inside a
// polynomial), the coefficient token, then one exponent token per variable
// including null powers. Terms appear in each polynomial's stored
// (descending) order.
inline FlatSequence tokenize_system(const PolySystem& sys, const Vocab& vocab) {
  if (sys.q() != vocab.q()) throw std::invalid_argument("system/vocab modulus mismatch");
  FlatSequence out;
  const int n = sys.n();
  for (std::size_t p = 0; p < sys.polys.size(); ++p) {
    const Polynomial& poly = sys.polys[p];
    if (poly.is_zero())
      throw std::invalid_argument("cannot tokenize the zero polynomial (equation " +
                                  std::to_string(p) + ")");
    for (std::size_t t = 0; t < poly.terms().size(); ++t) {
      const Term& term = poly.terms()[t];
      if (t == 0)
        out.push_back(p == 0 ? Vocab::kBos : Vocab::kSep);
      else
        out.push_back(Vocab::kPlus);
      out.push_back(vocab.coeff_id(term.coeff.value()));
      for (int v = 0; v < n; ++v) out.push_back(vocab.exp_id(term.mono.exponent(v)));
    }
  }
  return out;
}

// Strict inverse of tokenize_system. Reports the offset of the first
// offending token; trailing <eos>/<pad> are rejected here (strip them first
// when consuming model output).
inline PolySystem detokenize(const FlatSequence& seq, const Vocab& vocab, int n,
                             const MonomialOrder& ord = {}) {
  if (seq.empty() || seq[0] != Vocab::kBos) throw ParseError("sequence must begin with <bos>", 0);
  std::vector<Polynomial> polys;
  std::vector<Term> terms;
  std::size_t pos = 0;
  auto flush_poly = [&](std::int64_t at) {
    if (terms.empty()) throw ParseError("empty polynomial", at);
    polys.push_back(Polynomial::from_terms(std::move(terms), n, vocab.q(), ord));
    terms.clear();
  };
  while (pos < seq.size()) {
    int head = seq[pos];
    if (head == Vocab::kSep) {
      flush_poly(static_cast<std::int64_t>(pos));
    } else if (head == Vocab::kPlus) {
      if (terms.empty()) throw ParseError("'+' before any term", static_cast<std::int64_t>(pos));
    } else if (head != Vocab::kBos || pos != 0) {
      throw ParseError("expected a structural token at offset " + std::to_string(pos) + ", got " +
                           vocab.token_name(head),
                       static_cast<std::int64_t>(pos));
    }
    ++pos;
    if (pos >= seq.size() || !vocab.is_coeff(seq[pos]))
      throw ParseError("expected a coefficient token at offset " + std::to_string(pos),
                       static_cast<std::int64_t>(pos));
    Fp coeff(vocab.coeff_of(seq[pos]), vocab.q());
    ++pos;
    std::vector<int> exps(static_cast<std::size_t>(n), 0);
    for (int v = 0; v < n; ++v, ++pos) {
      if (pos >= seq.size() || !vocab.is_exp(seq[pos]))
        throw ParseError("expected exponent token " + std::to_string(v) + "/" + std::to_string(n) +
                             " at offset " + std::to_string(pos),
                         static_cast<std::int64_t>(pos));
      exps[static_cast<std::size_t>(v)] = vocab.exp_of(seq[pos]);
    }
    terms.push_back({Monomial(std::move(exps)), coeff});
  }
  flush_poly(static_cast<std::int64_t>(seq.size()));
  return PolySystem(std::move(polys));
}

// Drops everything from the first <eos> on and removes pad tokens; the
// leading <bos> stays because detokenize expects it.
inline FlatSequence strip_generation(const FlatSequence& seq) {
  FlatSequence out;
  for (int id : seq) {
    if (id == Vocab::kEos) break;
    if (id == Vocab::kPad) continue;
    out.push_back(id);
  }
  return out;
}

namespace detail {

// Term-aligned view of a flat sequence: offsets of each term's n + 2 block
// and the polynomial index it belongs to.
struct TermLayout {
  std::vector<std::size_t> term_offset;
  std::vector<int> poly_index;
  int num_polys = 0;
};

inline TermLayout term_layout(const FlatSequence& seq, int n) {
  TermLayout out;
  const std::size_t stride = static_cast<std::size_t>(n) + 2;
  if (seq.size() % stride != 0)
    throw std::invalid_argument("sequence length is not a multiple of n + 2");
  for (std::size_t off = 0; off < seq.size(); off += stride) {
    int head = seq[off];
    if (head == Vocab::kBos) {
      if (off != 0) throw std::invalid_argument("<bos> inside the sequence");
      out.num_polys = 1;
    } else if (head == Vocab::kSep) {
      ++out.num_polys;
    } else if (head != Vocab::kPlus) {
      throw std::invalid_argument("term does not start with a structural token");
    }
    out.term_offset.push_back(off);
    out.poly_index.push_back(out.num_polys - 1);
  }
  return out;
}

}  // namespace detail

// Groups a tokenized system into the padded tree consumed by the encoder.
// levels == 3: axes (equations, terms, n + 2); the pad lengths must cover
// (num equations, max terms in any equation). levels == 2: axes (total terms,
// n + 2). Leaf slot 0 always holds the term's structural token.
inline TokenTree to_token_tree(const FlatSequence& seq, int n, int levels,
                               const std::vector<std::int64_t>& pad_lengths) {
  const std::int64_t leaf = static_cast<std::int64_t>(n) + 2;
  detail::TermLayout layout = detail::term_layout(seq, n);
  TokenTree tree;
  tree.levels = levels;
  if (levels == 2) {
    if (pad_lengths.size() != 1)
      throw std::invalid_argument("levels=2 takes one pad length (total terms)");
    std::int64_t lt = pad_lengths[0];
    std::int64_t terms = static_cast<std::int64_t>(layout.term_offset.size());
    if (terms > lt)
      throw std::invalid_argument("axis 0 (terms) overflow: " + std::to_string(terms) + " > " +
                                  std::to_string(lt));
    tree.ids = NdArray<std::int32_t>({lt, leaf}, Vocab::kPad);
    tree.mask = NdArray<std::uint8_t>({lt, leaf}, 0);
    for (std::int64_t t = 0; t < terms; ++t)
      for (std::int64_t k = 0; k < leaf; ++k) {
        tree.ids.at({t, k}) =
            seq[layout.term_offset[static_cast<std::size_t>(t)] + static_cast<std::size_t>(k)];
        tree.mask.at({t, k}) = 1;
      }
    return tree;
  }
  if (levels == 3) {
    if (pad_lengths.size() != 2)
      throw std::invalid_argument("levels=3 takes two pad lengths (equations, terms)");
    std::int64_t le = pad_lengths[0], lt = pad_lengths[1];
    if (layout.num_polys > le)
      throw std::invalid_argument("axis 0 (equations) overflow: " +
                                  std::to_string(layout.num_polys) + " > " + std::to_string(le));
    std::vector<std::int64_t> per_poly(static_cast<std::size_t>(layout.num_polys), 0);
    for (int pi : layout.poly_index) ++per_poly[static_cast<std::size_t>(pi)];
    for (std::size_t p = 0; p < per_poly.size(); ++p)
      if (per_poly[p] > lt)
        throw std::invalid_argument("axis 1 (terms) overflow: " + std::to_string(per_poly[p]) +
                                    " > " + std::to_string(lt));
    tree.ids = NdArray<std::int32_t>({le, lt, leaf}, Vocab::kPad);
    tree.mask = NdArray<std::uint8_t>({le, lt, leaf}, 0);
    std::vector<std::int64_t> cursor(static_cast<std::size_t>(layout.num_polys), 0);
    for (std::size_t t = 0; t < layout.term_offset.size(); ++t) {
      std::int64_t e = layout.poly_index[t];
      std::int64_t slot = cursor[static_cast<std::size_t>(e)]++;
      for (std::int64_t k = 0; k < leaf; ++k) {
        tree.ids.at({e, slot, k}) = seq[layout.term_offset[t] + static_cast<std::size_t>(k)];
        tree.mask.at({e, slot, k}) = 1;
      }
    }
    return tree;
  }
  throw std::invalid_argument("levels must be 2 or 3");
}

inline TokenTree to_token_tree(const PolySystem& sys, const Vocab& vocab, int levels,
                               const std::vector<std::int64_t>& pad_lengths) {
  return to_token_tree(tokenize_system(sys, vocab), sys.n(), levels, pad_lengths);
}

// Row-major flattening with padded leaves removed; inverse of the grouping.
inline FlatSequence flatten_without_padding(const TokenTree& tree) {
  FlatSequence out;
  for (std::int64_t i = 0; i < tree.ids.size(); ++i)
    if (tree.mask.data[static_cast<std::size_t>(i)])
      out.push_back(tree.ids.data[static_cast<std::size_t>(i)]);
  return out;
}

inline std::string tokens_to_string(const FlatSequence& seq, const Vocab& vocab) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += " ";
    out += vocab.token_name(seq[i]);
  }
  return out;
}

}  // namespace hatsolver
