#pragma once

// Dirichlet characters with exact root-of-unity value tables.

#include <complex>
#include <numbers>
#include <numeric>
#include <vector>

#include "hzeta/arith.hpp"
#include "hzeta/cyclotomic.hpp"

namespace hzeta {

struct DirichletCharacter {
  u64 modulus = 1;
  u64 conductor = 1;
  int order = 1;           // values are e(index / order)
  std::vector<int> index;  // per residue mod modulus; -1 where gcd(m, modulus) > 1

  int index_at(i64 m) const {
    i64 r = m % static_cast<i64>(modulus);
    if (r < 0) r += static_cast<i64>(modulus);
    return index[static_cast<std::size_t>(r)];
  }

  std::complex<double> operator()(i64 m) const {
    int k = index_at(m);
    if (k < 0) return {0.0, 0.0};
    double ang = 2.0 * std::numbers::pi * k / order;
    return {std::cos(ang), std::sin(ang)};
  }

  /// Exact value in Q(zeta_N); N must be a multiple of the character order.
  Cyclo exact(i64 m, int field_order) const {
    int k = index_at(m);
    if (k < 0) return Cyclo(field_order);
    return Cyclo::root_of_unity(field_order, static_cast<long long>(k) * (field_order / order));
  }

  bool is_principal() const { return order == 1; }
  bool is_primitive() const { return conductor == modulus; }

  friend bool operator==(const DirichletCharacter& a, const DirichletCharacter& b) {
    if (a.modulus != b.modulus) return false;
    for (std::size_t m = 0; m < a.index.size(); ++m) {
      int x = a.index[m], y = b.index[m];
      if ((x < 0) != (y < 0)) return false;
      // compare e(x/a.order) with e(y/b.order)
      if (x >= 0 && static_cast<long long>(x) * b.order != static_cast<long long>(y) * a.order) return false;
    }
    return true;
  }
};

namespace detail {

struct CyclicComponent {
  u64 modulus;  // the prime power
  u64 generator;
  u64 order;
  std::vector<int> log;  // discrete log per residue mod modulus, -1 if not in subgroup
};

// (Z/p^e)^* as a product of cyclic groups with explicit discrete log tables.
inline std::vector<CyclicComponent> unit_group_components(u64 p, int e) {
  u64 pe = 1;
  for (int i = 0; i < e; ++i) pe *= p;
  auto table_for = [&](u64 g, u64 ord) {
    CyclicComponent c{pe, g, ord, std::vector<int>(pe, -1)};
    u64 x = 1;
    for (u64 k = 0; k < ord; ++k) {
      c.log[x] = static_cast<int>(k);
      x = x * g % pe;
    }
    return c;
  };
  std::vector<CyclicComponent> out;
  if (p == 2) {
    if (e == 1) return out;
    if (e == 2) {
      out.push_back(table_for(3, 2));
      return out;
    }
    // <-1> x <5>: decompose m = (+-1) * 5^k
    CyclicComponent minus{pe, pe - 1, 2, std::vector<int>(pe, -1)};
    CyclicComponent five{pe, 5, pe / 4, std::vector<int>(pe, -1)};
    u64 x = 1;
    for (u64 k = 0; k < pe / 4; ++k) {
      minus.log[x] = 0;
      minus.log[pe - x] = 1;
      five.log[x] = static_cast<int>(k);
      five.log[pe - x] = static_cast<int>(k);
      x = x * 5 % pe;
    }
    out.push_back(std::move(minus));
    out.push_back(std::move(five));
    return out;
  }
  const u64 ord = pe / p * (p - 1);
  for (u64 g = 2; g < pe; ++g) {
    if (g % p == 0) continue;
    // g generates mod p^e iff it generates mod p and g^{p-1} != 1 mod p^2
    bool gen = true;
    u64 m1 = p - 1, t = m1;
    for (u64 q = 2; q * q <= t; ++q) {
      if (t % q) continue;
      if (powmod64(g, m1 / q, p) == 1) gen = false;
      while (t % q == 0) t /= q;
    }
    if (t > 1 && powmod64(g, m1 / t, p) == 1) gen = false;
    if (gen && e > 1 && powmod64(g, p - 1, p * p) == 1) gen = false;
    if (gen) {
      out.push_back(table_for(g, ord));
      return out;
    }
  }
  return out;
}

inline u64 find_conductor(const DirichletCharacter& chi) {
  const u64 k = chi.modulus;
  for (u64 d = 1; d <= k; ++d) {
    if (k % d) continue;
    bool trivial = true;
    for (u64 m = 1; m < k && trivial; m += d)
      if (std::gcd(m, k) == 1 && chi.index[m] != 0) trivial = false;
    if (trivial) return d;
  }
  return k;
}

}  // namespace detail

/// The full character group mod k, principal character first.
inline std::vector<DirichletCharacter> characters_mod(u64 k) {
  if (k == 0) throw error(errc::invalid_argument, "modulus must be positive");
  std::vector<detail::CyclicComponent> comps;
  for (auto [p, e] : factorize(k).factors) {
    auto c = detail::unit_group_components(static_cast<u64>(p), e);
    comps.insert(comps.end(), c.begin(), c.end());
  }
  u64 exponent = 1;
  for (const auto& c : comps) exponent = std::lcm(exponent, c.order);

  // per residue: exponent-normalized log vector
  std::vector<std::vector<int>> logs(k);
  for (u64 m = 0; m < k; ++m) {
    if (std::gcd(m, k) != 1 && k != 1) continue;
    for (const auto& c : comps) logs[m].push_back(c.log[m % c.modulus]);
  }

  std::vector<DirichletCharacter> out;
  std::vector<u64> expo(comps.size(), 0);
  while (true) {
    DirichletCharacter chi;
    chi.modulus = k;
    chi.index.assign(k, -1);
    std::vector<u64> raw(k, 0);
    u64 g = exponent;
    for (u64 m = 0; m < k; ++m) {
      if (k != 1 && std::gcd(m, k) != 1) continue;
      u64 acc = 0;
      for (std::size_t i = 0; i < comps.size(); ++i)
        acc = (acc + expo[i] * static_cast<u64>(logs[m][i]) * (exponent / comps[i].order)) % exponent;
      raw[m] = acc;
      g = std::gcd(g, acc);
    }
    // reduce to the character's own order
    u64 own = exponent / std::gcd(g, exponent);
    if (own == 0) own = 1;
    chi.order = static_cast<int>(own);
    for (u64 m = 0; m < k; ++m) {
      if (k != 1 && std::gcd(m, k) != 1) continue;
      chi.index[m] = static_cast<int>(raw[m] / (exponent / own));
    }
    chi.conductor = detail::find_conductor(chi);
    out.push_back(std::move(chi));

    std::size_t i = 0;
    while (i < comps.size()) {
      if (++expo[i] < comps[i].order) break;
      expo[i] = 0;
      ++i;
    }
    if (i == comps.size()) break;
  }
  return out;
}

/// Characters mod k whose conductor is k.
inline std::vector<DirichletCharacter> primitive_characters(u64 k) {
  std::vector<DirichletCharacter> out;
  for (auto& chi : characters_mod(k))
    if (chi.is_primitive()) out.push_back(std::move(chi));
  return out;
}

/// The primitive character inducing chi.
inline DirichletCharacter primitive_part(const DirichletCharacter& chi) {
  if (chi.is_primitive()) return chi;
  for (auto& cand : primitive_characters(chi.conductor)) {
    bool match = true;
    for (u64 m = 1; m < chi.modulus && match; ++m) {
      if (std::gcd(m, chi.modulus) != 1) continue;
      int a = chi.index[m], b = cand.index_at(static_cast<i64>(m));
      if (static_cast<long long>(a) * cand.order != static_cast<long long>(b) * chi.order) match = false;
    }
    if (match) return cand;
  }
  throw error(errc::precondition_violated, "no inducing primitive character found");
}

inline u64 euler_phi(u64 k) {
  u64 r = k;
  for (auto [p, e] : factorize(k).factors) r = r / static_cast<u64>(p) * (static_cast<u64>(p) - 1);
  return r;
}

}  // namespace hzeta
