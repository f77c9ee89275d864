#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hatsolver/common.hpp"
#include "hatsolver/groebner.hpp"
#include "hatsolver/polynomial.hpp"

namespace hatsolver {

struct GenConfig {
  int n = 2;
  std::uint32_t q = 7;
  double rho = 1.0;        // probability that a free matrix entry is nonzero
  int max_degree_G = 5;    // degree of h
  int max_num_terms_G = 5;
  int max_degree_F = 3;    // degree bound for matrix entries
  int max_num_terms_F = 2;
  int max_size_F = 0;      // 0 -> n + 2
  int term_cap = 400;      // per-equation monomial cap, enforced by row resampling
  bool uniform_degree_h = false;  // draw deg h uniformly in [1, max_degree_G]
  std::uint64_t seed = 0;
  int resample_budget = 100;
  BuchbergerLimits oracle_limits{100000, std::numeric_limits<double>::infinity()};
  int max_exponent = kDefaultMaxExponent;

  int effective_max_size_F() const { return max_size_F > 0 ? max_size_F : n + 2; }

  void validate() const {
    require_prime_field(q);
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
    if (max_degree_G < 1) throw std::invalid_argument("max_degree_G must be >= 1");
    if (max_num_terms_G < 1 || max_num_terms_F < 1)
      throw std::invalid_argument("term limits must be >= 1");
    if (max_degree_F < 0) throw std::invalid_argument("max_degree_F must be >= 0");
    if (effective_max_size_F() < n)
      throw std::invalid_argument("max_size_F must be at least n");
    if (term_cap < 1) throw std::invalid_argument("term_cap must be >= 1");
  }
};

struct SampleMeta {
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  int deg_h = 0;
  int num_equations = 0;
  std::vector<int> terms_per_equation;
  std::int64_t token_count_F = 0;  // (n + 2) tokens per term
  std::int64_t token_count_G = 0;
  bool verified = false;
  std::string oracle = "skipped";  // "match" | "skipped" | "timeout"
  int attempts = 0;
};

struct SamplePair {
  PolySystem F;
  ShapeBasis G;
  PolySystem G_expanded;
  SampleMeta meta;
};

// Rectangular polynomial matrix whose leading cols x cols block is unit
// upper-triangular; rows past the block are unconstrained.
struct UnimodularMatrix {
  std::vector<std::vector<Polynomial>> entries;  // [row][col]

  int rows() const { return static_cast<int>(entries.size()); }
  int cols() const { return entries.empty() ? 0 : static_cast<int>(entries.front().size()); }

  void check_structure() const {
    int r = rows(), c = cols();
    if (r < c) throw std::invalid_argument("unimodular matrix needs rows >= cols");
    for (int i = 0; i < c; ++i) {
      for (int j = 0; j < c; ++j) {
        const Polynomial& e = entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (i == j) {
          if (e.term_count() != 1 || !e.leading_term().coeff.is_one() ||
              !e.leading_monomial().is_one())
            throw std::invalid_argument("unimodular diagonal entry must be the constant 1");
        } else if (j < i && !e.is_zero()) {
          throw std::invalid_argument("unimodular entry below the leading diagonal must be 0");
        }
      }
    }
  }

  static UnimodularMatrix identity(int s, int n_vars, std::uint32_t q) {
    UnimodularMatrix u;
    u.entries.assign(static_cast<std::size_t>(s),
                     std::vector<Polynomial>(static_cast<std::size_t>(s),
                                             Polynomial::zero(n_vars, q)));
    for (int i = 0; i < s; ++i)
      u.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] =
          Polynomial::constant(1, n_vars, q);
    return u;
  }
};

namespace detail {

inline void enumerate_monomials_upto(int n, int d, std::vector<int>& cur, int pos, int left,
                                     std::vector<Monomial>& out) {
  if (pos == n) {
    out.push_back(Monomial(cur));
    return;
  }
  for (int e = 0; e <= left; ++e) {
    cur[static_cast<std::size_t>(pos)] = e;
    enumerate_monomials_upto(n, d, cur, pos + 1, left - e, out);
  }
  cur[static_cast<std::size_t>(pos)] = 0;
}

inline std::vector<Monomial> all_monomials_upto(int n, int d) {
  std::vector<Monomial> out;
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  enumerate_monomials_upto(n, d, cur, 0, d, out);
  return out;
}

// Nonzero polynomial with at most max_terms terms, each monomial uniform over
// total degree <= max_degree, coefficients uniform over F_q \ {0}.
inline Polynomial random_entry_poly(const GenConfig& cfg, const std::vector<Monomial>& pool,
                                    Rng& rng) {
  MonomialOrder lex{OrderKind::lex};
  std::uniform_int_distribution<int> term_count(1, cfg.max_num_terms_F);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<std::uint32_t> coeff(1, cfg.q - 1);
  for (int retry = 0; retry < 64; ++retry) {
    std::vector<Term> terms;
    int t = term_count(rng);
    for (int k = 0; k < t; ++k)
      terms.push_back({pool[pick(rng)], Fp(coeff(rng), cfg.q)});
    Polynomial p = Polynomial::from_terms(std::move(terms), cfg.n, cfg.q, lex);
    if (!p.is_zero()) return p;  // duplicate monomials may cancel; redraw
  }
  throw std::logic_error("random entry polynomial kept cancelling to zero");
}

}  // namespace detail

// h monic in the last variable with the configured degree plus uniformly many
// lower-order terms; each g_i univariate in the last variable with
// deg g_i < deg h. The expansion is a reduced lex basis by construction
// (pairwise coprime leading terms).
inline ShapeBasis sample_shape_basis(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  MonomialOrder lex{OrderKind::lex};
  const int last = cfg.n - 1;
  std::uniform_int_distribution<std::uint32_t> coeff(1, cfg.q - 1);

  int deg_h = cfg.max_degree_G;
  if (cfg.uniform_degree_h)
    deg_h = std::uniform_int_distribution<int>(1, cfg.max_degree_G)(rng);

  auto univariate = [&](int degree_cap, int max_terms, bool monic_of_cap) {
    // Distinct exponents; the leading exponent is forced when monic_of_cap.
    std::vector<int> exps;
    int available = monic_of_cap ? degree_cap : degree_cap + 1;
    int upper = std::min(max_terms - (monic_of_cap ? 1 : 0), available);
    int extra = upper >= 1 ? std::uniform_int_distribution<int>(monic_of_cap ? 0 : 1, upper)(rng)
                           : 0;
    std::vector<int> candidates;
    for (int e = 0; e < (monic_of_cap ? degree_cap : degree_cap + 1); ++e) candidates.push_back(e);
    for (int k = 0; k < extra; ++k) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      std::size_t idx = pick(rng);
      exps.push_back(candidates[idx]);
      candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(idx));
    }
    std::vector<Term> terms;
    if (monic_of_cap)
      terms.push_back({Monomial::variable(last, cfg.n, degree_cap), Fp(1, cfg.q)});
    for (int e : exps)
      terms.push_back({Monomial::variable(last, cfg.n, e), Fp(coeff(rng), cfg.q)});
    return Polynomial::from_terms(std::move(terms), cfg.n, cfg.q, lex);
  };

  ShapeBasis out;
  out.h = univariate(deg_h, cfg.max_num_terms_G, true);
  for (int i = 0; i < cfg.n - 1; ++i)
    out.g.push_back(univariate(deg_h - 1, cfg.max_num_terms_G, false));
  return out;
}

// Free entries (strictly above the diagonal of the leading block, and every
// entry of the extra rows) are independently nonzero with probability rho.
inline UnimodularMatrix sample_unimodular(int rows, int cols, const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  if (rows < cols) throw std::invalid_argument("unimodular matrix needs rows >= cols");
  std::vector<Monomial> pool = detail::all_monomials_upto(cfg.n, cfg.max_degree_F);
  std::bernoulli_distribution keep(cfg.rho);
  UnimodularMatrix u;
  u.entries.assign(static_cast<std::size_t>(rows),
                   std::vector<Polynomial>(static_cast<std::size_t>(cols),
                                           Polynomial::zero(cfg.n, cfg.q)));
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      auto& e = u.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i < cols) {
        if (i == j) {
          e = Polynomial::constant(1, cfg.n, cfg.q);
        } else if (j > i && keep(rng)) {
          e = detail::random_entry_poly(cfg, pool, rng);
        }
      } else if (keep(rng)) {
        e = detail::random_entry_poly(cfg, pool, rng);
      }
    }
  }
  u.check_structure();
  return u;
}

inline std::vector<int> sample_permutation(int s, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(s));
  for (int i = 0; i < s; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = s - 1; i > 0; --i) {
    int j = std::uniform_int_distribution<int>(0, i)(rng);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

inline std::vector<Polynomial> matvec(const UnimodularMatrix& u,
                                      const std::vector<Polynomial>& v, const MonomialOrder& ord,
                                      int max_exponent) {
  if (u.cols() != static_cast<int>(v.size()))
    throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<Polynomial> out;
  out.reserve(static_cast<std::size_t>(u.rows()));
  for (int i = 0; i < u.rows(); ++i) {
    Polynomial acc = Polynomial::zero(v.front().n(), v.front().q());
    for (int j = 0; j < u.cols(); ++j) {
      const Polynomial& e = u.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (e.is_zero()) continue;
      acc = poly_add(acc, poly_mul(e, v[static_cast<std::size_t>(j)], ord, max_exponent), ord);
    }
    out.push_back(std::move(acc));
  }
  return out;
}

// Test hook: mutate the drawn transformation before it is applied. Returns
// control to the generator, which re-checks validity and resamples as usual.
using DrawOverride =
    std::function<void(int attempt, UnimodularMatrix& u1, std::vector<int>& perm,
                       UnimodularMatrix& u2)>;

// One (F, G) pair: G a random shape-position basis, F = U1 P U2 G with fresh
// draws until F has no zero rows, respects the per-equation term cap, differs
// from G as a set, and is not itself a Groebner basis.
inline SamplePair backward_generate(const GenConfig& cfg, std::uint64_t sample_index,
                                    const DrawOverride& hook = {}) {
  cfg.validate();
  MonomialOrder lex{OrderKind::lex};
  Rng rng = derive_rng(cfg.seed, sample_index);
  const int s_hi = cfg.effective_max_size_F();

  for (int attempt = 1; attempt <= cfg.resample_budget; ++attempt) {
    ShapeBasis shape = sample_shape_basis(cfg, rng);
    PolySystem gx = shape.expand();
    int s = std::uniform_int_distribution<int>(cfg.n, s_hi)(rng);
    UnimodularMatrix u2 = sample_unimodular(s, cfg.n, cfg, rng);
    std::vector<int> perm = sample_permutation(s, rng);
    UnimodularMatrix u1 = sample_unimodular(s, s, cfg, rng);
    if (hook) hook(attempt, u1, perm, u2);

    std::vector<Polynomial> w = matvec(u2, gx.polys, lex, cfg.max_exponent);
    std::vector<Polynomial> v(w.size(), Polynomial::zero(cfg.n, cfg.q));
    for (std::size_t i = 0; i < w.size(); ++i)
      v[i] = w[perm[i]];
    std::vector<Polynomial> f = matvec(u1, v, lex, cfg.max_exponent);

    // Row repair: a zero or over-cap row is redrawn through the free entries
    // of the corresponding U1 row.
    std::vector<Monomial> pool = detail::all_monomials_upto(cfg.n, cfg.max_degree_F);
    std::bernoulli_distribution keep(cfg.rho);
    bool rows_ok = true;
    for (int i = 0; i < s && rows_ok; ++i) {
      auto& fi = f[static_cast<std::size_t>(i)];
      auto bad = [&] {
        return fi.is_zero() || static_cast<int>(fi.term_count()) > cfg.term_cap;
      };
      for (int tries = 0; bad() && tries < 20; ++tries) {
        if (i == s - 1) break;  // last row has no free entries
        Polynomial acc = v[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < s; ++j) {
          Polynomial e = keep(rng) ? detail::random_entry_poly(cfg, pool, rng)
                                   : Polynomial::zero(cfg.n, cfg.q);
          u1.entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = e;
          if (!e.is_zero())
            acc = poly_add(acc, poly_mul(e, v[static_cast<std::size_t>(j)], lex,
                                         cfg.max_exponent), lex);
        }
        fi = acc;
      }
      if (bad()) rows_ok = false;
    }
    if (!rows_ok) continue;

    PolySystem F(std::move(f));
    if (same_polynomial_set(F, gx)) continue;
    try {
      if (is_groebner(F, lex, cfg.oracle_limits)) continue;
    } catch (const BudgetExceeded&) {
      continue;  // could not confirm F is non-Groebner; draw again
    }

    SamplePair out{F, shape, gx, {}};
    out.meta.seed = cfg.seed;
    out.meta.sample_index = sample_index;
    out.meta.deg_h = shape.h.degree_in(cfg.n - 1);
    out.meta.num_equations = s;
    std::int64_t terms_f = 0;
    for (const auto& p : F.polys) {
      out.meta.terms_per_equation.push_back(static_cast<int>(p.term_count()));
      terms_f += static_cast<std::int64_t>(p.term_count());
    }
    std::int64_t terms_g = 0;
    for (const auto& p : gx.polys) terms_g += static_cast<std::int64_t>(p.term_count());
    out.meta.token_count_F = terms_f * (cfg.n + 2);
    out.meta.token_count_G = terms_g * (cfg.n + 2);
    out.meta.attempts = attempt;

    if (cfg.n <= 3 && cfg.max_degree_G <= 3) {
      try {
        GroebnerBasis recovered = inter_reduce(buchberger(F, lex, cfg.oracle_limits));
        if (recovered.basis != gx)
          throw std::logic_error("backward generation produced an inequivalent pair");
        out.meta.verified = true;
        out.meta.oracle = "match";
      } catch (const BudgetExceeded&) {
        out.meta.oracle = "timeout";
      }
    }
    return out;
  }
  throw std::runtime_error("backward_generate: resample budget exhausted (n=" +
                           std::to_string(cfg.n) + ", q=" + std::to_string(cfg.q) +
                           ", rho=" + std::to_string(cfg.rho) + ")");
}

// Deterministic regardless of thread count: sample i always comes from the
// stream derived from (seed, i).
inline std::vector<SamplePair> generate_dataset(const GenConfig& cfg, std::int64_t count,
                                                int threads = 1) {
  cfg.validate();
  if (count < 0) throw std::invalid_argument("negative sample count");
  std::vector<std::optional<SamplePair>> slots(static_cast<std::size_t>(count));
  if (threads < 1) threads = 1;
  threads = std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1));
  std::atomic<std::int64_t> next{0};
  std::vector<std::string> errors(static_cast<std::size_t>(threads));
  auto worker = [&](int tid) {
    try {
      for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
        slots[static_cast<std::size_t>(i)] =
            backward_generate(cfg, static_cast<std::uint64_t>(i));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(tid)] = e.what();
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (!err.empty()) throw std::runtime_error(err);
  std::vector<SamplePair> out;
  out.reserve(static_cast<std::size_t>(count));
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

struct DatasetStats {
  std::int64_t num_systems = 0;
  std::int64_t num_equations = 0;
  int max_terms_per_equation = 0;
  double mean_terms_per_equation = 0.0;
  double std_terms_per_equation = 0.0;
  double mean_total_terms_per_system = 0.0;
  double std_total_terms_per_system = 0.0;
  int max_total_degree = 0;

  std::string to_string() const {
    std::ostringstream os;
    os << "systems=" << num_systems << " equations=" << num_equations
       << " terms/eq max=" << max_terms_per_equation << " mean=" << mean_terms_per_equation
       << " std=" << std_terms_per_equation
       << " terms/system mean=" << mean_total_terms_per_system
       << " std=" << std_total_terms_per_system << " max_degree=" << max_total_degree;
    return os.str();
  }
};

inline DatasetStats dataset_stats(const std::vector<SamplePair>& samples) {
  if (samples.empty()) throw std::invalid_argument("dataset_stats needs at least one sample");
  DatasetStats st;
  st.num_systems = static_cast<std::int64_t>(samples.size());
  double sum_eq = 0, sumsq_eq = 0, sum_sys = 0, sumsq_sys = 0;
  for (const auto& s : samples) {
    std::int64_t total = 0;
    for (const auto& p : s.F.polys) {
      int t = static_cast<int>(p.term_count());
      st.num_equations += 1;
      st.max_terms_per_equation = std::max(st.max_terms_per_equation, t);
      sum_eq += t;
      sumsq_eq += static_cast<double>(t) * t;
      total += t;
      st.max_total_degree = std::max(st.max_total_degree, p.total_degree());
    }
    sum_sys += static_cast<double>(total);
    sumsq_sys += static_cast<double>(total) * static_cast<double>(total);
  }
  double ne = static_cast<double>(st.num_equations);
  double ns = static_cast<double>(st.num_systems);
  st.mean_terms_per_equation = sum_eq / ne;
  st.std_terms_per_equation = std::sqrt(std::max(0.0, sumsq_eq / ne - st.mean_terms_per_equation *
                                                                          st.mean_terms_per_equation));
  st.mean_total_terms_per_system = sum_sys / ns;
  st.std_total_terms_per_system =
      std::sqrt(std::max(0.0, sumsq_sys / ns -
                                  st.mean_total_terms_per_system * st.mean_total_terms_per_system));
  return st;
}

// --- JSONL persistence -------------------------------------------------------

inline nlohmann::json sample_to_json(const SamplePair& s, const GenConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["rho"] = cfg.rho;
  std::vector<std::string> f_texts, g_texts;
  for (const auto& p : s.F.polys) f_texts.push_back(to_text(p));
  for (const auto& p : s.G_expanded.polys) g_texts.push_back(to_text(p));
  j["F"] = f_texts;
  j["G"] = g_texts;
  j["meta"] = {{"seed", s.meta.seed},
               {"sample_index", s.meta.sample_index},
               {"deg_h", s.meta.deg_h},
               {"num_equations", s.meta.num_equations},
               {"terms_per_equation", s.meta.terms_per_equation},
               {"token_count_F", s.meta.token_count_F},
               {"token_count_G", s.meta.token_count_G},
               {"verified", s.meta.verified},
               {"oracle", s.meta.oracle},
               {"attempts", s.meta.attempts}};
  return j;
}

inline SamplePair sample_from_json(const nlohmann::json& j) {
  MonomialOrder lex{OrderKind::lex};
  int n = j.at("n").get<int>();
  std::uint32_t q = j.at("q").get<std::uint32_t>();
  std::vector<Polynomial> f_polys, g_polys;
  for (const auto& t : j.at("F")) f_polys.push_back(parse_polynomial(t.get<std::string>(), n, q, lex));
  for (const auto& t : j.at("G")) g_polys.push_back(parse_polynomial(t.get<std::string>(), n, q, lex));
  SamplePair s{PolySystem(std::move(f_polys)), {}, PolySystem(std::move(g_polys)), {}};
  auto shape = is_shape_position(GroebnerBasis{s.G_expanded, lex, true});
  if (!shape) throw std::invalid_argument("stored basis G is not in shape position");
  s.G = *shape;
  const auto& m = j.at("meta");
  s.meta.seed = m.at("seed").get<std::uint64_t>();
  s.meta.sample_index = m.at("sample_index").get<std::uint64_t>();
  s.meta.deg_h = m.at("deg_h").get<int>();
  s.meta.num_equations = m.at("num_equations").get<int>();
  s.meta.terms_per_equation = m.at("terms_per_equation").get<std::vector<int>>();
  s.meta.token_count_F = m.at("token_count_F").get<std::int64_t>();
  s.meta.token_count_G = m.at("token_count_G").get<std::int64_t>();
  s.meta.verified = m.at("verified").get<bool>();
  s.meta.oracle = m.at("oracle").get<std::string>();
  s.meta.attempts = m.at("attempts").get<int>();
  return s;
}

inline void write_dataset(const std::string& path, const std::vector<SamplePair>& samples,
                          const GenConfig& cfg) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& s : samples) out << sample_to_json(s, cfg).dump() << "\n";
  if (!out) throw std::runtime_error("write failed for " + path);
}

inline std::vector<SamplePair> read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<SamplePair> out;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what(), line_no);
    }
  }
  return out;
}

}  // namespace hatsolver
