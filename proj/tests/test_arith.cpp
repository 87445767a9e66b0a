#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hzeta/characters.hpp"
#include "oracles.hpp"

using namespace hzeta;

namespace {

std::vector<std::pair<u64, int>> small(const Factorization& f) {
  std::vector<std::pair<u64, int>> out;
  for (auto [p, e] : f.factors) out.emplace_back(static_cast<u64>(p), e);
  return out;
}

}  // namespace

TEST(Factorize, SpecValues) {
  EXPECT_TRUE(factorize(1).factors.empty());
  EXPECT_EQ(small(factorize(9998)), (std::vector<std::pair<u64, int>>{{2, 1}, {4999, 1}}));
  EXPECT_EQ(small(factorize(10199)), (std::vector<std::pair<u64, int>>{{7, 1}, {31, 1}, {47, 1}}));
}

TEST(Factorize, AgreesWithTrialDivision) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 3000; ++i) {
    const u64 n = 2 + rng() % 100000000ULL;
    const auto tf = oracle::trial_factor(n);
    std::vector<std::pair<u64, int>> expect(tf.begin(), tf.end());
    EXPECT_EQ(small(factorize(n)), expect) << n;
  }
}

TEST(Factorize, RecomposesRandom64Bit) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100000; ++i) {
    const u64 n = rng() | 1;
    const auto f = factorize(n);
    ASSERT_EQ(f.recompose(), u128(n)) << n;
    for (auto [p, e] : f.factors) ASSERT_TRUE(is_prime(p));
  }
}

TEST(Factorize, Handles128BitSemiprime) {
  const u128 p = 18446744073709551557ULL;  // largest prime below 2^64
  const u128 q = 4294967291ULL;
  const auto f = factorize(p * q);
  ASSERT_EQ(f.factors.size(), 2u);
  EXPECT_EQ(f.factors[0].first, q);
  EXPECT_EQ(f.factors[1].first, p);
}

TEST(Primality, MatchesTrialDivision) {
  for (u64 n = 0; n < 20000; ++n) ASSERT_EQ(is_prime(n), oracle::trial_prime(n)) << n;
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(Parsing, U128RoundTrip) {
  const u128 v = (u128(1) << 120) + 12345;
  EXPECT_EQ(parse_u128(to_string(v)), v);
  EXPECT_EQ(to_string(u128(0)), "0");
}

TEST(RootsModP, SpecValues) {
  const std::vector<i64> Q = {1, -2, -1};
  EXPECT_EQ(poly_roots_mod_prime_power(Q, 7, 1), (std::vector<u64>{4, 5}));
  EXPECT_TRUE(poly_roots_mod_prime_power(Q, 5, 1).empty());
  EXPECT_EQ(poly_roots_mod_prime_power(Q, 7, 2), (std::vector<u64>{11, 40}));
}

TEST(RootsModP, ExhaustiveCheck) {
  const std::vector<std::vector<i64>> polys = {{1, -2, -1}, {1, 1, -1}, {2, 0, -3, 1}, {1, 0, -4, 0, 1}};
  for (const auto& P : polys) {
    for (u64 p : {3ULL, 7ULL, 11ULL, 13ULL, 23ULL, 97ULL, 101ULL}) {
      if (detail::eval_mod({P.front()}, 0, p) == 0) continue;
      for (int v = 1; v <= 3; ++v) {
        u64 pv = 1;
        for (int i = 0; i < v; ++i) pv *= p;
        std::vector<u64> brute;
        for (u64 x = 0; x < pv; ++x)
          if (detail::eval_mod(P, x, pv) == 0) brute.push_back(x);
        std::vector<u64> got;
        try {
          got = poly_roots_mod_prime_power(P, p, v);
        } catch (const error& e) {
          ASSERT_EQ(e.kind(), errc::non_simple_root);
          continue;
        }
        EXPECT_EQ(got, brute) << "p=" << p << " v=" << v;
        EXPECT_LE(poly_roots_mod_prime(P, p).size(), P.size() - 1);
      }
    }
  }
}

TEST(RootsModP, LargePrimeUsesGcdSplitting) {
  const std::vector<i64> Q = {1, -2, -1};
  const u64 p = 1000000007ULL;
  for (u64 r : poly_roots_mod_prime(Q, p)) EXPECT_EQ(detail::eval_mod(Q, r, p), 0u);
  EXPECT_EQ(poly_roots_mod_prime(Q, p).size(), 2u);  // 2 is a square mod p (p = 7 mod 8)
}

TEST(RootsModP, RejectsComposite) {
  EXPECT_THROW(poly_roots_mod_prime_power({1, -2, -1}, 15, 1), error);
}

TEST(Characters, SpecCounts) {
  EXPECT_EQ(characters_mod(1).size(), 1u);
  auto c3 = characters_mod(3);
  ASSERT_EQ(c3.size(), 2u);
  int nontrivial_conductor = 0;
  for (const auto& c : c3)
    if (c.conductor != 1) nontrivial_conductor = static_cast<int>(c.conductor);
  EXPECT_EQ(nontrivial_conductor, 3);
  auto c6 = characters_mod(6);
  ASSERT_EQ(c6.size(), 2u);
  for (const auto& c : c6) EXPECT_TRUE(c.conductor == 1 || c.conductor == 3);
}

TEST(Characters, Orthogonality) {
  for (u64 k : {1, 4, 5, 8, 12, 15, 21}) {
    auto chars = characters_mod(k);
    EXPECT_EQ(chars.size(), euler_phi(k));
    for (std::size_t i = 0; i < chars.size(); ++i)
      for (std::size_t j = 0; j < chars.size(); ++j) {
        std::complex<double> s = 0;
        for (u64 m = 0; m < k; ++m) s += chars[i](static_cast<i64>(m)) * std::conj(chars[j](static_cast<i64>(m)));
        const double expect = i == j ? static_cast<double>(euler_phi(k)) : 0.0;
        EXPECT_NEAR(s.real(), expect, 1e-12);
        EXPECT_NEAR(s.imag(), 0.0, 1e-12);
      }
  }
}

TEST(FactorCache, PersistsAndReloads) {
  const auto path = std::filesystem::temp_directory_path() / "hzeta_cache_test.csv";
  std::filesystem::remove(path);
  {
    FactorCache c(path);
    EXPECT_EQ(c.get(10199), factorize(10199));
    c.get(9998);
  }
  {
    std::ofstream out(path, std::ios::app);
    out << "12,2^2 5^1\n";  // does not recompose; must be ignored
  }
  FactorCache c(path);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.get(12), factorize(12));
  std::filesystem::remove(path);
}
