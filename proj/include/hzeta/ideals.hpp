#pragma once

// Degree-1 prime ideals of Q(alpha) seen through integer factorization of
// norms: N((n+alpha)a) = |minpoly(-n)|, with a the denominator ideal.

#include <compare>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/arith.hpp"
#include "hzeta/cyclotomic.hpp"
#include "hzeta/precision.hpp"

namespace hzeta {

inline constexpr int kMaxAlgebraicDegree = 4;

namespace detail {

using QPoly = std::vector<Rational>;  // descending

inline QPoly to_qpoly(const std::vector<i64>& desc) {
  QPoly p;
  for (i64 c : desc) p.emplace_back(c);
  return p;
}

inline void strip(QPoly& p) {
  std::size_t k = 0;
  while (k + 1 < p.size() && p[k] == 0) ++k;
  p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k));
}

inline Rational eval(const QPoly& p, const Rational& x) {
  Rational acc = 0;
  for (const auto& c : p) acc = acc * x + c;
  return acc;
}

inline QPoly derivative(const QPoly& p) {
  QPoly d;
  const std::size_t deg = p.size() - 1;
  for (std::size_t i = 0; i < deg; ++i) d.push_back(p[i] * static_cast<long long>(deg - i));
  if (d.empty()) d.push_back(0);
  return d;
}

/// Remainder of a / b (both descending, b nonzero).
inline QPoly poly_rem(QPoly a, const QPoly& b) {
  strip(a);
  while (a.size() >= b.size() && !(a.size() == 1 && a[0] == 0)) {
    Rational k = a[0] / b[0];
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= k * b[i];
    a.erase(a.begin());
    strip(a);
    if (a.empty()) a.push_back(0);
  }
  return a;
}

inline bool is_zero_poly(const QPoly& p) {
  for (const auto& c : p)
    if (c != 0) return false;
  return true;
}

inline std::vector<QPoly> sturm_chain(const QPoly& p) {
  std::vector<QPoly> chain{p, derivative(p)};
  while (!is_zero_poly(chain.back()) && chain.back().size() > 1) {
    QPoly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (is_zero_poly(r)) break;
    for (auto& c : r) c = -c;
    chain.push_back(r);
  }
  return chain;
}

inline int sign_changes(const std::vector<QPoly>& chain, const Rational& x) {
  int changes = 0, prev = 0;
  for (const auto& p : chain) {
    Rational v = eval(p, x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

inline std::vector<u64> positive_divisors(u128 n) {
  std::vector<u64> divs{1};
  for (auto [p, e] : factorize(n).factors) {
    const std::size_t base = divs.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= static_cast<u64>(p);
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  return divs;
}

inline u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

/// Determinant by fraction-free elimination over Q.
inline Rational determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational k = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= k * m[c][j];
    }
  }
  return det;
}

inline Rational resultant(const QPoly& a, const QPoly& b) {
  const std::size_t m = a.size() - 1, n = b.size() - 1, N = m + n;
  std::vector<std::vector<Rational>> S(N, std::vector<Rational>(N, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= m; ++j) S[i][i + j] = a[j];
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n; ++j) S[n + i][i + j] = b[j];
  return determinant(std::move(S));
}

inline bool has_rational_root(const QPoly& p, i64 c0, i64 cd) {
  if (c0 == 0) return true;
  for (u64 num : positive_divisors(abs128(c0)))
    for (u64 den : positive_divisors(abs128(cd)))
      for (int sgn : {1, -1})
        if (eval(p, Rational(sgn * static_cast<long long>(num), static_cast<long long>(den))) == 0) return true;
  return false;
}

/// Kronecker's method restricted to quadratic factors of a quartic.
inline bool has_quadratic_factor(const QPoly& p) {
  const i64 v0 = static_cast<i64>(eval(p, 0));
  const i64 v1 = static_cast<i64>(eval(p, 1));
  const i64 vm = static_cast<i64>(eval(p, -1));
  const auto d0 = positive_divisors(abs128(v0)), d1 = positive_divisors(abs128(v1)), dm = positive_divisors(abs128(vm));
  if (static_cast<double>(d0.size()) * d1.size() * dm.size() > 2e6)
    throw error(errc::invalid_argument, "minimal polynomial coefficients too large for the irreducibility test");
  for (u64 a0 : d0)
    for (u64 a1 : d1)
      for (u64 am : dm)
        for (int s1 : {1, -1})
          for (int sm : {1, -1}) {
            const i64 h0 = static_cast<i64>(a0), h1 = s1 * static_cast<i64>(a1), hm = sm * static_cast<i64>(am);
            if ((h1 + hm) % 2 != 0) continue;
            const i64 a = (h1 + hm) / 2 - h0, b = (h1 - hm) / 2;
            if (a == 0) continue;
            if (is_zero_poly(poly_rem(p, QPoly{Rational(a), Rational(b), Rational(h0)}))) return true;
          }
  return false;
}

template <class R>
R eval_real(const std::vector<i64>& desc, const R& x) {
  R acc = 0;
  for (i64 c : desc) acc = acc * x + R(c);
  return acc;
}

}  // namespace detail

/// Algebraic irrational alpha in (0, 1): integer minimal polynomial (descending)
/// plus an isolating interval, and the period q whose primes are excluded.
class AlgebraicAlpha {
 public:
  AlgebraicAlpha() = default;

  AlgebraicAlpha(std::vector<i64> minpoly, Rational lo, Rational hi, u64 q_context = 1)
      : minpoly_(std::move(minpoly)), lo_(std::move(lo)), hi_(std::move(hi)), q_(q_context) {
    validate();
    compute_value();
  }

  const std::vector<i64>& minpoly() const { return minpoly_; }
  int degree() const { return static_cast<int>(minpoly_.size()) - 1; }
  i64 leading() const { return minpoly_.front(); }
  const BigInt& discriminant() const { return disc_; }
  const Rational& lower() const { return lo_; }
  const Rational& upper() const { return hi_; }
  u64 q_context() const { return q_; }
  double value() const { return value_; }
  const Real50& value50() const { return value50_; }

  template <class R>
  R value_as() const {
    if constexpr (std::is_same_v<R, double>) return value_;
    else return R(value50_);
  }

  /// Q(x) = minpoly(-x), whose roots mod p are the classes n with p | norm(n).
  std::vector<i64> shifted_poly() const {
    std::vector<i64> q = minpoly_;
    const int d = degree();
    for (int j = 0; j <= d; ++j)
      if ((d - j) % 2 == 1) q[static_cast<std::size_t>(j)] = -q[static_cast<std::size_t>(j)];
    return q;
  }

  /// p is admissible when p is prime and p does not divide c_d * disc * q.
  bool admissible(u64 p) const {
    if (!is_prime(p)) return false;
    if (static_cast<u64>(std::llabs(leading())) % p == 0) return false;
    if (q_ % p == 0) return false;
    BigInt r = disc_ % p;
    return r != 0;
  }

  AlgebraicAlpha with_q(u64 q) const {
    AlgebraicAlpha a = *this;
    a.q_ = q;
    return a;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < minpoly_.size(); ++i) s += (i ? "," : "") + std::to_string(minpoly_[i]);
    return s;
  }

 private:
  void validate() {
    const int d = degree();
    if (d < 2 || d > kMaxAlgebraicDegree)
      throw error(errc::invalid_argument, "minimal polynomial degree must be between 2 and " + std::to_string(kMaxAlgebraicDegree));
    if (leading() <= 0) throw error(errc::invalid_argument, "leading coefficient must be positive");
    for (i64 c : minpoly_)
      if (c == std::numeric_limits<i64>::min()) throw error(errc::invalid_argument, "coefficient out of range");
    BigInt content = 0;
    for (i64 c : minpoly_) content = boost::multiprecision::gcd(content, BigInt(c));
    if (content != 1) throw error(errc::invalid_argument, "minimal polynomial must have content 1");
    if (!(lo_ > 0 && hi_ < 1 && lo_ < hi_)) throw error(errc::invalid_argument, "isolating interval must lie inside (0, 1)");
    const auto p = detail::to_qpoly(minpoly_);
    if (detail::has_rational_root(p, minpoly_.back(), leading()) || (d == 4 && detail::has_quadratic_factor(p)))
      throw error(errc::invalid_argument, "minimal polynomial is reducible over Q");
    if (detail::eval(p, lo_) == 0 || detail::eval(p, hi_) == 0)
      throw error(errc::invalid_argument, "interval endpoint is a root");
    const auto chain = detail::sturm_chain(p);
    if (detail::sign_changes(chain, lo_) - detail::sign_changes(chain, hi_) != 1)
      throw error(errc::invalid_argument, "interval must contain exactly one real root");
    // disc = (-1)^{d(d-1)/2} Res(P, P') / c_d
    Rational res = detail::resultant(p, detail::derivative(p)) / Rational(leading());
    if ((d * (d - 1) / 2) % 2 == 1) res = -res;
    disc_ = boost::multiprecision::numerator(res);
  }

  void compute_value() {
    // bisection keeps the sign change, which is strict for a simple root
    const bool lo_neg = detail::eval(detail::to_qpoly(minpoly_), lo_) < 0;
    auto bisect = [&](auto lo, auto hi, int iters) {
      for (int i = 0; i < iters; ++i) {
        auto mid = (lo + hi) / 2;
        auto v = detail::eval_real(minpoly_, mid);
        if ((v < 0) == lo_neg) lo = mid;
        else hi = mid;
      }
      return (lo + hi) / 2;
    };
    value_ = bisect(static_cast<double>(lo_), static_cast<double>(hi_), 80);
    value50_ = bisect(Real50(lo_), Real50(hi_), 200);
  }

  std::vector<i64> minpoly_;
  Rational lo_, hi_;
  u64 q_ = 1;
  BigInt disc_;
  double value_ = 0;
  Real50 value50_;
};

struct PrimeIdealKey {
  u64 p = 0;
  u64 root = 0;  // n = root mod p exactly when this ideal divides (n + alpha)a

  friend auto operator<=>(const PrimeIdealKey&, const PrimeIdealKey&) = default;
  std::string str() const { return "(" + std::to_string(p) + "," + std::to_string(root) + ")"; }
};

struct IdealFactorizationRecord {
  i64 n = 0;
  u128 norm = 0;
  std::vector<std::pair<PrimeIdealKey, int>> admissible;  // ascending p
  u128 residual = 1;
};

/// |minpoly(-n)| with checked 128-bit arithmetic.
inline u128 norm_value(const AlgebraicAlpha& alpha, i64 n) {
  if (n < 0) throw error(errc::invalid_argument, "norm_value requires n >= 0");
  i128 acc = 0;
  const i128 x = -static_cast<i128>(n);
  for (i64 c : alpha.minpoly()) {
    i128 t;
    if (__builtin_mul_overflow(acc, x, &t) || __builtin_add_overflow(t, static_cast<i128>(c), &acc))
      throw error(errc::overflow, "norm of (n+alpha)a exceeds 2^127 at n=" + std::to_string(n));
  }
  if (acc == 0) throw error(errc::precondition_violated, "minpoly(-n) vanishes; alpha is not irrational");
  return detail::abs128(acc);
}

/// Splits the norm into admissible degree-1 prime ideals and the residual part.
inline IdealFactorizationRecord ideal_factorize(const AlgebraicAlpha& alpha, i64 n, FactorCache* cache = nullptr) {
  IdealFactorizationRecord rec;
  rec.n = n;
  rec.norm = norm_value(alpha, n);
  const Factorization fz = cache ? cache->get(rec.norm) : factorize(rec.norm);
  rec.residual = 1;
  for (auto [p, e] : fz.factors) {
    if ((p >> 64) == 0 && alpha.admissible(static_cast<u64>(p))) {
      const u64 pp = static_cast<u64>(p);
      rec.admissible.push_back({PrimeIdealKey{pp, static_cast<u64>(n) % pp}, e});
    } else {
      for (int i = 0; i < e; ++i) rec.residual *= p;
    }
  }
  return rec;
}

/// Degree-1 prime ideals above an admissible p, one per root of minpoly(-x) mod p.
inline std::vector<PrimeIdealKey> prime_ideals_above(const AlgebraicAlpha& alpha, u64 p) {
  std::vector<PrimeIdealKey> out;
  if (!alpha.admissible(p)) return out;
  for (u64 r : poly_roots_mod_prime(alpha.shifted_poly(), p)) out.push_back({p, r});
  return out;
}

/// The class n must lie in for key^v to divide (n + alpha)a.
inline u64 root_class(const AlgebraicAlpha& alpha, const PrimeIdealKey& key, int v) {
  return hensel_lift(alpha.shifted_poly(), key.p, key.root, v);
}

/// n1 = n2 mod p^v whenever key^v divides both (n1+alpha)a and (n2+alpha)a.
inline bool congruence_check(const AlgebraicAlpha& alpha, const PrimeIdealKey& key, int v, i64 n1, i64 n2) {
  if (v < 1) throw error(errc::invalid_argument, "exponent must be >= 1");
  if (!alpha.admissible(key.p)) throw error(errc::precondition_violated, "prime is not admissible");
  const auto Q = alpha.shifted_poly();
  if (detail::eval_mod(Q, key.root % key.p, key.p) != 0) throw error(errc::precondition_violated, "key root is not a root mod p");
  const u64 rv = root_class(alpha, key, v);
  u64 pv = 1;
  for (int i = 0; i < v; ++i) pv *= key.p;
  auto md = [pv](i64 n) { return static_cast<u64>(((n % static_cast<i64>(pv)) + static_cast<i64>(pv)) % static_cast<i64>(pv)); };
  if (md(n1) != rv || md(n2) != rv)
    throw error(errc::precondition_violated, key.str() + "^" + std::to_string(v) + " does not divide both ideals");
  return md(n1) == md(n2);
}

}  // namespace hzeta
