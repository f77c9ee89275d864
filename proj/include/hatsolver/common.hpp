#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hatsolver {

// Thrown when buchberger (or a verification pass built on it) exhausts its
// step or wall-clock budget. Carries the partial state size so callers can
// report it instead of crashing.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::string what, std::size_t basis_size, std::uint64_t steps_done)
      : std::runtime_error(std::move(what)), basis_size(basis_size), steps_done(steps_done) {}
  std::size_t basis_size;
  std::uint64_t steps_done;
};

// Structured parse failure: `where` is a token offset (sequences) or a line
// number (files), depending on the producer.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string what, std::int64_t where)
      : std::runtime_error(std::move(what)), where(where) {}
  std::int64_t where;
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, index); used so parallel workers agree with a
// sequential run byte-for-byte.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701)));
}

inline std::string rng_state_string(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

inline void rng_set_state(Rng& rng, const std::string& state) {
  std::istringstream is(state);
  is >> rng;
  if (is.fail()) throw std::invalid_argument("bad rng state string");
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fnv1a_hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

// Minimal dense row-major array used for token ids and masks (no gradients).
template <class T>
struct NdArray {
  std::vector<std::int64_t> shape;
  std::vector<T> data;

  NdArray() = default;
  explicit NdArray(std::vector<std::int64_t> s, T fill = T{}) : shape(std::move(s)) {
    data.assign(static_cast<std::size_t>(count(shape)), fill);
  }

  static std::int64_t count(const std::vector<std::int64_t>& s) {
    std::int64_t c = 1;
    for (auto d : s) {
      if (d < 0) throw std::invalid_argument("negative axis length");
      c *= d;
    }
    return c;
  }

  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }

  std::int64_t offset(const std::vector<std::int64_t>& idx) const {
    if (idx.size() != shape.size()) throw std::invalid_argument("index rank mismatch");
    std::int64_t off = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= shape[i]) throw std::out_of_range("index out of range");
      off = off * shape[i] + idx[i];
    }
    return off;
  }

  T& at(const std::vector<std::int64_t>& idx) { return data[static_cast<std::size_t>(offset(idx))]; }
  const T& at(const std::vector<std::int64_t>& idx) const {
    return data[static_cast<std::size_t>(offset(idx))];
  }
};

inline std::string shape_to_string(const std::vector<std::int64_t>& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  out += ")";
  return out;
}

}  // namespace hatsolver
