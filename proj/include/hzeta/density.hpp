#pragma once

// Private prime ideals in short windows (N, N+M] and the smooth set, counted
// directly. A prime ideal (p, r) of n is private when no other m in [0, N+M]
// lies in the class r mod p, which for p > n means p > N+M-n.

#include <algorithm>
#include <optional>
#include <vector>

#include "hzeta/ideals.hpp"
#include "hzeta/parallel.hpp"

namespace hzeta {

struct WindowSpec {
  u64 N = 0;
  Rational theta{1, 1000000};
  u64 q = 1;
  u64 b = 0;

  u64 M() const {
    Rational m = theta * Rational(N);
    return static_cast<u64>(boost::multiprecision::numerator(m) / boost::multiprecision::denominator(m));
  }
  u64 end() const { return N + M(); }

  void validate() const {
    if (q == 0 || b >= q) throw error(errc::invalid_argument, "window class must satisfy 0 <= b < q");
    if (!(theta > 0)) throw error(errc::invalid_argument, "theta must be positive");
    if (N <= q) throw error(errc::invalid_argument, "window start must exceed q");
    if (M() < 1) throw error(errc::invalid_argument, "window length floor(theta*N) is zero");
  }
};

struct EligibleEntry {
  u64 n = 0;
  PrimeIdealKey key;  // the chosen private ideal (largest admissible p)
  int exponent = 1;
};

struct DensityReport {
  WindowSpec window;
  u64 M = 0;
  u64 class_size = 0;  // integers n = b mod q in (N, N+M]
  std::vector<EligibleEntry> eligible;
  std::vector<u64> ineligible;
  std::vector<u64> smooth;
  std::size_t count_A = 0;
  double density_floor = 0.54;
  double threshold = 0;  // density_floor * M / q
  bool passed = false;
  double fraction = 0;   // q * count_A / M, compared against density_floor
  double rho = 0;        // q * |smooth| / M
};

/// Independent privacy check: walks every m = root mod p in [0, limit] and,
/// when `full_rescan`, tests minpoly(-m) mod p for each m in [0, limit].
inline bool verify_private(const AlgebraicAlpha& alpha, u64 n, const PrimeIdealKey& key, u64 limit, bool full_rescan) {
  const auto Q = alpha.shifted_poly();
  if (n % key.p != key.root || detail::eval_mod(Q, n % key.p, key.p) != 0) return false;
  for (u64 m = key.root; m <= limit; m += key.p)
    if (m != n) return false;
  if (full_rescan) {
    for (u64 m = 0; m <= limit; ++m) {
      if (m == n) continue;
      if (m % key.p == key.root && detail::eval_mod(Q, m % key.p, key.p) == 0) return false;
    }
  }
  return true;
}

inline DensityReport private_prime_scan(const AlgebraicAlpha& alpha, const WindowSpec& w, FactorCache* cache = nullptr,
                                        double density_floor = 0.54) {
  w.validate();
  const AlgebraicAlpha a = alpha.q_context() == w.q ? alpha : alpha.with_q(w.q);
  DensityReport rep;
  rep.window = w;
  rep.M = w.M();
  rep.density_floor = density_floor;
  const u64 end = w.end();
  u64 first = w.N + 1;
  first += (w.b + w.q - first % w.q) % w.q;
  if (first > end) throw error(errc::empty_window, "no n = b mod q in the window");
  for (u64 n = first; n <= end; n += w.q) {
    ++rep.class_size;
    const auto rec = ideal_factorize(a, static_cast<i64>(n), cache);
    std::optional<EligibleEntry> best;
    bool smooth = true;
    for (const auto& [key, e] : rec.admissible) {
      if (key.p > n && key.p > end - n) best = EligibleEntry{n, key, e};  // ascending p: keeps the largest
      u128 pe = 1;
      for (int i = 0; i < e && pe < rep.M; ++i) pe *= key.p;
      if (pe >= rep.M) smooth = false;
    }
    if (best) rep.eligible.push_back(*best);
    else rep.ineligible.push_back(n);
    if (smooth) rep.smooth.push_back(n);
  }
  rep.count_A = rep.eligible.size();
  const double Md = static_cast<double>(rep.M), qd = static_cast<double>(w.q);
  rep.threshold = density_floor * Md / qd;
  rep.passed = static_cast<double>(rep.count_A) >= rep.threshold;
  rep.fraction = qd * static_cast<double>(rep.count_A) / Md;
  rep.rho = qd * static_cast<double>(rep.smooth.size()) / Md;
  return rep;
}

/// The set S(N, q, b): window members whose admissible prime powers all stay below M.
inline std::vector<u64> smooth_set(const AlgebraicAlpha& alpha, const WindowSpec& w, FactorCache* cache = nullptr) {
  return private_prime_scan(alpha, w, cache).smooth;
}

struct SweepReport {
  std::vector<DensityReport> windows;  // ordered by (N, b)
  double mean_fraction = 0;
  std::size_t below_floor = 0;
  bool aggregate_passed = false;
};

inline SweepReport density_sweep(const AlgebraicAlpha& alpha, std::vector<u64> N_list, const Rational& theta, u64 q,
                                 FactorCache* cache = nullptr, unsigned threads = 1, double density_floor = 0.54,
                                 std::optional<u64> only_b = std::nullopt) {
  if (N_list.empty()) throw error(errc::invalid_argument, "N list is empty");
  std::sort(N_list.begin(), N_list.end());
  std::vector<WindowSpec> specs;
  for (u64 N : N_list)
    for (u64 b = 0; b < q; ++b)
      if (!only_b || *only_b == b) specs.push_back({N, theta, q, b});
  const AlgebraicAlpha a = alpha.with_q(q);
  SweepReport out;
  out.windows.resize(specs.size());
  parallel_for(specs.size(), threads, [&](std::size_t i) { out.windows[i] = private_prime_scan(a, specs[i], cache, density_floor); });
  double total = 0;
  for (const auto& r : out.windows) {
    total += r.fraction;
    if (!r.passed) ++out.below_floor;
  }
  out.mean_fraction = total / static_cast<double>(out.windows.size());
  out.aggregate_passed = out.mean_fraction >= density_floor;
  return out;
}

}  // namespace hzeta
