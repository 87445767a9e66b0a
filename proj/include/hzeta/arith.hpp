#pragma once

// Exact integer substrate: 128-bit helpers, primality, factorization,
// a persistent factorization cache and polynomial roots modulo prime powers.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hzeta/errors.hpp"

namespace hzeta {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-v));
  return to_string(static_cast<u128>(v));
}

inline u128 parse_u128(std::string_view s) {
  if (s.empty()) throw error(errc::invalid_argument, "empty integer literal");
  u128 v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw error(errc::invalid_argument, "bad integer literal '" + std::string(s) + "'");
    u128 next = v * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != v) throw error(errc::overflow, "integer literal exceeds 128 bits");
    v = next;
  }
  return v;
}

inline u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 powmod64(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a modulo m (gcd(a, m) = 1 required).
inline u64 invmod64(u64 a, u64 m) {
  i128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    i128 qq = r / nr;
    i128 tmp = t - qq * nt;
    t = nt;
    nt = tmp;
    tmp = r - qq * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw error(errc::precondition_violated, "value not invertible modulo m");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

namespace detail {

// Montgomery form modulo an odd 64-bit modulus.
struct Montgomery64 {
  u64 n;
  u64 ninv;  // n^{-1} mod 2^64
  u64 r2;    // 2^128 mod n

  explicit Montgomery64(u64 modulus) : n(modulus) {
    ninv = n;
    for (int i = 0; i < 6; ++i) ninv *= 2 - n * ninv;
    r2 = static_cast<u64>((static_cast<u128>(1) << 64) % n);
    r2 = mulmod64(r2, r2, n);
  }

  u64 reduce(u128 t) const {
    u64 m = static_cast<u64>(t) * ninv;
    u64 hi = static_cast<u64>(t >> 64);
    u64 mn = static_cast<u64>((static_cast<u128>(m) * n) >> 64);
    return hi >= mn ? hi - mn : hi - mn + n;
  }
  u64 mul(u64 a, u64 b) const { return reduce(static_cast<u128>(a) * b); }
  u64 to(u64 a) const { return mul(a % n, r2); }
  u64 from(u64 a) const { return reduce(a); }
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return (s < a || s >= n) ? s - n : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a - b + n; }
};

using u256 = boost::multiprecision::uint256_t;

inline u128 mulmod128(u128 a, u128 b, u128 m) {
  if ((a >> 64) == 0 && (b >> 64) == 0 && (m >> 64) == 0) return static_cast<u128>(static_cast<u64>(a)) * static_cast<u64>(b) % m;
  u256 r = (u256(static_cast<u64>(a >> 64)) << 64 | u256(static_cast<u64>(a))) *
           (u256(static_cast<u64>(b >> 64)) << 64 | u256(static_cast<u64>(b)));
  r %= (u256(static_cast<u64>(m >> 64)) << 64 | u256(static_cast<u64>(m)));
  u128 hi = static_cast<u64>(r >> 64);
  u128 lo = static_cast<u64>(r & u256(~u64{0}));
  return hi << 64 | lo;
}

inline u128 powmod128(u128 b, u128 e, u128 m) {
  u128 r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1) r = mulmod128(r, b, m);
    b = mulmod128(b, b, m);
    e >>= 1;
  }
  return r;
}

inline const std::vector<u64>& small_primes() {
  static const std::vector<u64> primes = [] {
    constexpr u64 limit = 1000;
    std::vector<bool> sieve(limit + 1, true);
    std::vector<u64> out;
    for (u64 i = 2; i <= limit; ++i) {
      if (!sieve[i]) continue;
      out.push_back(i);
      for (u64 j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    return out;
  }();
  return primes;
}

inline bool miller_rabin64(u64 n) {
  const Montgomery64 mg(n);
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  const u64 one = mg.to(1);
  const u64 minus_one = mg.to(n - 1);
  // Deterministic for every n < 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    u64 am = a % n;
    if (am == 0) continue;
    u64 x = mg.to(am);
    u64 r = one;
    for (u64 e = d; e != 0; e >>= 1) {
      if (e & 1) r = mg.mul(r, x);
      x = mg.mul(x, x);
    }
    if (r == one || r == minus_one) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      r = mg.mul(r, r);
      if (r == minus_one) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline bool miller_rabin128(u128 n) {
  u128 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Strong probable-prime test with 40 bases drawn from a generator seeded by n.
  std::mt19937_64 rng(static_cast<u64>(n) ^ static_cast<u64>(n >> 64) ^ 0x9e3779b97f4a7c15ULL);
  for (int round = 0; round < 40; ++round) {
    u128 a = (static_cast<u128>(rng()) << 64 | rng()) % (n - 3) + 2;
    u128 x = powmod128(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod128(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace detail

inline bool is_prime(u128 n) {
  if (n < 2) return false;
  for (u64 p : detail::small_primes()) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 1000 * 1000) return true;
  if ((n >> 64) == 0) return detail::miller_rabin64(static_cast<u64>(n));
  return detail::miller_rabin128(n);
}

struct Factorization {
  u128 target = 1;
  std::vector<std::pair<u128, int>> factors;  // ascending primes

  u128 recompose() const {
    u128 v = 1;
    for (auto [p, e] : factors)
      for (int i = 0; i < e; ++i) v *= p;
    return v;
  }

  // Space-separated "p^e" list, the cache file encoding.
  std::string encode() const {
    std::string s;
    for (auto [p, e] : factors) {
      if (!s.empty()) s += ' ';
      s += to_string(p);
      s += '^';
      s += std::to_string(e);
    }
    return s;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

// Pollard rho with Brent cycle detection and batched gcd, odd composite n < 2^64.
inline u64 rho_brent64(u64 n) {
  if (n % 2 == 0) return 2;
  const Montgomery64 mg(n);
  for (u64 c0 = 1;; ++c0) {
    const u64 c = mg.to(c0);
    auto f = [&](u64 x) { return mg.add(mg.mul(x, x), c); };
    u64 y = mg.to(2), x = y, ys = y, q = mg.to(1), g = 1;
    constexpr u64 batch = 128;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mg.mul(q, x > y ? x - y : y - x);
        }
        g = std::gcd(mg.from(q), n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? mg.from(x - ys) : mg.from(ys - x), n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
}

inline u128 rho_brent128(u128 n) {
  if (n % 2 == 0) return 2;
  for (u128 c = 1;; ++c) {
    auto f = [&](u128 x) {
      u128 v = mulmod128(x, x, n) + c;
      return v >= n ? v - n : v;
    };
    u128 y = 2, x = y, ys = y, q = 1, g = 1;
    constexpr u64 batch = 64;
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += batch) {
        ys = y;
        for (u64 i = 0; i < std::min(batch, r - k); ++i) {
          y = f(y);
          q = mulmod128(q, x > y ? x - y : y - x, n);
        }
        g = gcd128(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd128(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
}

inline void factor_rec(u128 n, std::vector<u128>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u128 d = (n >> 64) == 0 ? rho_brent64(static_cast<u64>(n)) : rho_brent128(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace detail

/// Complete factorization of 1 <= n < 2^128 (n = 1 gives an empty list).
inline Factorization factorize(u128 n) {
  if (n == 0) throw error(errc::invalid_argument, "factorize requires n >= 1");
  Factorization fz;
  fz.target = n;
  std::vector<u128> primes;
  for (u64 p : detail::small_primes()) {
    if (static_cast<u128>(p) * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  detail::factor_rec(n, primes);
  std::sort(primes.begin(), primes.end());
  for (u128 p : primes) {
    if (!fz.factors.empty() && fz.factors.back().first == p)
      ++fz.factors.back().second;
    else
      fz.factors.emplace_back(p, 1);
  }
  return fz;
}

struct U128Hash {
  std::size_t operator()(u128 v) const noexcept {
    return std::hash<u64>{}(static_cast<u64>(v) ^ (static_cast<u64>(v >> 64) * 0x9e3779b97f4a7c15ULL));
  }
};

// Memoized factorization. With a backing file the cache is loaded on
// construction and new entries are appended as `n,p1^e1 p2^e2 ...` lines.
class FactorCache {
 public:
  FactorCache() = default;

  explicit FactorCache(std::filesystem::path file) : file_(std::move(file)) {
    std::ifstream in(*file_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      Factorization fz;
      fz.target = parse_u128(line.substr(0, comma));
      std::istringstream parts(line.substr(comma + 1));
      std::string tok;
      while (parts >> tok) {
        auto caret = tok.find('^');
        u128 p = parse_u128(tok.substr(0, caret));
        int e = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
        fz.factors.emplace_back(p, e);
      }
      // Entries that do not recompose (a truncated final line, say) are ignored.
      if (fz.recompose() == fz.target) map_.emplace(fz.target, std::move(fz));
    }
  }

  FactorCache(const FactorCache&) = delete;
  FactorCache& operator=(const FactorCache&) = delete;

  ~FactorCache() {
    try {
      flush();
    } catch (...) {
    }
  }

  Factorization get(u128 n) {
    {
      std::lock_guard lock(mu_);
      if (auto it = map_.find(n); it != map_.end()) return it->second;
    }
    Factorization fz = factorize(n);
    std::lock_guard lock(mu_);
    auto [it, inserted] = map_.emplace(n, fz);
    if (inserted && file_) pending_.push_back(n);
    return it->second;
  }

  std::size_t size() const {
    std::lock_guard lock(mu_);
    return map_.size();
  }

  void flush() {
    std::lock_guard lock(mu_);
    if (!file_ || pending_.empty()) return;
    std::sort(pending_.begin(), pending_.end());
    std::ofstream out(*file_, std::ios::app);
    for (u128 n : pending_) out << to_string(n) << ',' << map_.at(n).encode() << '\n';
    pending_.clear();
  }

 private:
  mutable std::mutex mu_;
  std::unordered_map<u128, Factorization, U128Hash> map_;
  std::optional<std::filesystem::path> file_;
  std::vector<u128> pending_;
};

// ---------------------------------------------------------------------------
// Polynomials over Z/pZ and roots modulo prime powers.
// Integer polynomials are passed in descending order c_d, ..., c_0.
// ---------------------------------------------------------------------------

namespace detail {

using PolyP = std::vector<u64>;  // ascending coefficients mod p

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline u64 reduce_signed(i128 c, u64 m) {
  i128 r = c % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

inline PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod64(a[i], b[j], p)) % p;
  const std::size_t df = f.size() - 1;
  const u64 lead_inv = invmod64(f.back(), p);
  for (std::size_t k = r.size(); k-- > df;) {
    u64 coef = mulmod64(r[k], lead_inv, p);
    if (coef == 0) continue;
    for (std::size_t j = 0; j <= df; ++j) r[k - df + j] = (r[k - df + j] + p - mulmod64(coef, f[j], p)) % p;
  }
  r.resize(std::min(r.size(), df));
  trim(r);
  return r;
}

inline PolyP poly_mod(PolyP a, const PolyP& f, u64 p) { return poly_mulmod(a, PolyP{1}, f, p); }

inline PolyP poly_powmod(PolyP base, u64 e, const PolyP& f, u64 p) {
  PolyP r{1};
  base = poly_mod(base, f, p);
  while (e != 0) {
    if (e & 1) r = poly_mulmod(r, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return r;
}

inline PolyP poly_gcd(PolyP a, PolyP b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = poly_mod(a, b, p);
    std::swap(a, b);
  }
  if (!a.empty()) {
    u64 inv = invmod64(a.back(), p);
    for (auto& c : a) c = mulmod64(c, inv, p);
  }
  return a;
}

inline PolyP poly_divexact(PolyP a, const PolyP& b, u64 p) {
  const std::size_t db = b.size() - 1;
  PolyP q(a.size() - db, 0);
  u64 inv = invmod64(b.back(), p);
  for (std::size_t k = a.size(); k-- > db;) {
    u64 coef = mulmod64(a[k], inv, p);
    q[k - db] = coef;
    for (std::size_t j = 0; j <= db; ++j) a[k - db + j] = (a[k - db + j] + p - mulmod64(coef, b[j], p)) % p;
  }
  return q;
}

// Roots of a squarefree product of distinct linear factors (Cantor-Zassenhaus).
inline void split_linear(const PolyP& f, u64 p, std::vector<u64>& roots) {
  const std::size_t d = f.size() - 1;
  if (d == 0) return;
  if (d == 1) {
    roots.push_back(mulmod64(p - f[0], invmod64(f[1], p), p));
    return;
  }
  for (u64 a = 1;; ++a) {
    PolyP h = poly_powmod(PolyP{a % p, 1}, (p - 1) / 2, f, p);
    if (h.empty()) h = {p - 1};
    else h[0] = (h[0] + p - 1) % p;
    trim(h);
    PolyP g = poly_gcd(f, h, p);
    if (g.size() > 1 && g.size() < f.size()) {
      split_linear(g, p, roots);
      split_linear(poly_divexact(f, g, p), p, roots);
      return;
    }
  }
}

inline u64 eval_mod(const std::vector<i64>& desc, u64 x, u64 m) {
  u64 acc = 0;
  for (i64 c : desc) acc = static_cast<u64>((static_cast<u128>(acc) * x + reduce_signed(c, m)) % m);
  return acc;
}

inline std::vector<i64> derivative_desc(const std::vector<i64>& desc) {
  std::vector<i64> d;
  const std::size_t deg = desc.size() - 1;
  for (std::size_t i = 0; i < deg; ++i) d.push_back(desc[i] * static_cast<i64>(deg - i));
  return d;
}

}  // namespace detail

/// Roots of P modulo p (P in descending coefficient order), sorted.
inline std::vector<u64> poly_roots_mod_prime(const std::vector<i64>& desc, u64 p) {
  detail::PolyP f;
  for (auto it = desc.rbegin(); it != desc.rend(); ++it) f.push_back(detail::reduce_signed(*it, p));
  detail::trim(f);
  if (f.empty()) throw error(errc::precondition_violated, "polynomial vanishes identically mod p");
  std::vector<u64> roots;
  if (f.size() == 1) return roots;
  if (p < 50000) {
    for (u64 x = 0; x < p; ++x)
      if (detail::eval_mod(desc, x, p) == 0) roots.push_back(x);
    return roots;
  }
  // gcd with x^p - x isolates the product of the distinct linear factors.
  detail::PolyP xp = detail::poly_powmod({0, 1}, p, f, p);
  xp.resize(std::max<std::size_t>(xp.size(), 2), 0);
  xp[1] = (xp[1] + p - 1) % p;
  detail::trim(xp);
  detail::PolyP g = xp.empty() ? f : detail::poly_gcd(f, xp, p);
  if (g.size() > 1) {
    if (g[0] == 0) {
      // x itself divides: peel off the zero root before splitting
      roots.push_back(0);
      g = detail::poly_divexact(g, {0, 1}, p);
    }
    detail::split_linear(g, p, roots);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Hensel lift of a simple root r mod p to the unique root mod p^v.
inline u64 hensel_lift(const std::vector<i64>& desc, u64 p, u64 r, int v) {
  if (v <= 1) return r % p;
  const auto deriv = detail::derivative_desc(desc);
  const u64 dr = detail::eval_mod(deriv, r, p);
  if (dr == 0) throw error(errc::non_simple_root, "root " + std::to_string(r) + " mod " + std::to_string(p) + " is not simple");
  const u64 dinv = invmod64(dr, p);
  u64 pk = p;
  for (int k = 1; k < v; ++k) {
    if (pk > (u64{1} << 62) / p) throw error(errc::overflow, "prime power exceeds 62 bits");
    const u64 pk1 = pk * p;
    const u64 val = detail::eval_mod(desc, r, pk1);  // divisible by p^k
    const u64 t = mulmod64(p - (val / pk) % p, dinv, p) % p;
    r = (r + static_cast<u64>(static_cast<u128>(t) * pk % pk1)) % pk1;
    pk = pk1;
  }
  return r;
}

/// All x in [0, p^v) with P(x) = 0 mod p^v, assuming every root mod p is simple
/// whenever v > 1 (NonSimpleRoot otherwise).
inline std::vector<u64> poly_roots_mod_prime_power(const std::vector<i64>& desc, u64 p, int v) {
  if (v < 1) throw error(errc::invalid_argument, "exponent must be >= 1");
  if (!is_prime(p)) throw error(errc::precondition_violated, std::to_string(p) + " is not prime");
  std::vector<u64> out;
  for (u64 r : poly_roots_mod_prime(desc, p)) out.push_back(hensel_lift(desc, p, r, v));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hzeta
