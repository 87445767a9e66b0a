#include <gtest/gtest.h>

#include <random>

#include "hzeta/structure.hpp"

using namespace hzeta;
using cd = std::complex<double>;

namespace {

PeriodicFunction rational_values(const std::vector<int>& v) {
  std::vector<Cyclo> c;
  for (int x : v) c.push_back(Cyclo(1, Rational(x)));
  return PeriodicFunction(c);
}

/// Coefficients of P(s) L(s, chi) over one period L*k, built by direct convolution.
PeriodicFunction pl_coefficients(const std::map<u64, int>& P, const DirichletCharacter& chi) {
  u64 L = 1;
  for (const auto& [n, c] : P) L = std::lcm(L, n);
  const u64 V = L * chi.modulus;
  const int field = chi.order;
  std::vector<Cyclo> g(V, Cyclo(field));
  for (u64 m = 1; m <= V; ++m)
    for (const auto& [n, c] : P)
      if (m % n == 0) g[m % V] += chi.exact(static_cast<i64>(m / n), field) * Rational(c);
  return PeriodicFunction(g, true);
}

}  // namespace

TEST(Lift, SpecValues) {
  auto l = lift_rational(rational_values({1}), RationalShift::parse("1/3"));
  EXPECT_EQ(l.coeffs.period(), 3u);
  EXPECT_TRUE(l.coeffs.exact(0).is_zero());
  EXPECT_EQ(l.coeffs.exact(1), Cyclo(1, 1));
  EXPECT_TRUE(l.coeffs.exact(2).is_zero());

  auto l2 = lift_rational(rational_values({1, 2}), RationalShift::parse("1/2"));
  EXPECT_EQ(l2.coeffs.period(), 4u);
  EXPECT_EQ(l2.coeffs.exact(1), Cyclo(1, 1));
  EXPECT_EQ(l2.coeffs.exact(3), Cyclo(1, Rational(2)));
  EXPECT_TRUE(l2.coeffs.exact(0).is_zero() && l2.coeffs.exact(2).is_zero());

  auto l3 = lift_rational(rational_values({1}), RationalShift::parse("1/2"));
  EXPECT_EQ(l3.coeffs.period(), 2u);
  EXPECT_EQ(l3.coeffs.exact(1), Cyclo(1, 1));
}

TEST(Lift, RejectsBadShifts) {
  EXPECT_THROW(RationalShift::parse("0"), error);
  EXPECT_THROW(RationalShift::parse("3/2"), error);
  EXPECT_THROW(RationalShift(2, 4), error);
  EXPECT_NO_THROW(RationalShift::parse("1"));
}

TEST(Decompose, ThirdShift) {
  auto g = lift_rational(rational_values({1}), RationalShift::parse("1/3")).coeffs;
  auto d = decompose(g);
  EXPECT_TRUE(d.verified);
  ASSERT_EQ(d.terms.size(), 2u);
  EXPECT_EQ(d.terms[0].chi.conductor, 1u);
  EXPECT_EQ(d.terms[1].chi.conductor, 3u);
  // principal part: (1/2)(1 - 3^-s) zeta(s)
  EXPECT_EQ(d.terms[0].poly.coeffs().at(1), Cyclo(1, Rational(1, 2)));
  EXPECT_EQ(d.terms[0].poly.coeffs().at(3), Cyclo(1, Rational(-1, 2)));
  EXPECT_EQ(d.terms[1].poly.coeffs().size(), 1u);
  EXPECT_EQ(d.terms[1].poly.coeffs().at(1), Cyclo(1, Rational(1, 2)));
}

TEST(Decompose, CharacterValues) {
  const auto chi = primitive_characters(4).at(0);
  std::vector<Cyclo> v;
  for (i64 m = 0; m < 4; ++m) v.push_back(chi.exact(m, 2));
  auto d = decompose(PeriodicFunction(v));
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_EQ(d.terms[0].chi.modulus, 4u);
  ASSERT_EQ(d.terms[0].poly.coeffs().size(), 1u);
  EXPECT_EQ(d.terms[0].poly.coeffs().at(1), Cyclo(1, 1));
}

TEST(Decompose, AlternatingSigns) {
  auto g = lift_rational(rational_values({1, -1}), RationalShift::parse("1")).coeffs;
  auto d = decompose(g);
  ASSERT_EQ(d.terms.size(), 1u);
  EXPECT_EQ(d.terms[0].chi.conductor, 1u);
  EXPECT_EQ(d.terms[0].poly.coeffs().at(1), Cyclo(1, 1));
  EXPECT_EQ(d.terms[0].poly.coeffs().at(2), Cyclo(1, Rational(-2)));
}

TEST(Decompose, EvaluatorMatchesFEval) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> sd(1.6, 3), td(-15, 15);
  for (const auto& [text, shift] : std::vector<std::pair<std::string, std::string>>{
           {"1", "1/3"}, {"1,2", "1/2"}, {"1,-1,i", "2/5"}, {"1,0,-1,0", "1"}, {"e(1/3),1", "3/4"}}) {
    const auto f = PeriodicFunction::parse(text);
    const auto rs = RationalShift::parse(shift);
    const auto dec = decompose(lift_rational(f, rs).coeffs);
    auto F = decomposition_evaluator(dec, rs.b, 1e-9);
    for (int k = 0; k < 10; ++k) {
      const cd s(sd(rng), td(rng));
      EXPECT_LT(std::abs(F(s) - f_eval<double>(s, f, rs.value(), 1e-9).value), 1e-8) << text << " " << shift << " " << s;
    }
  }
}

TEST(DetectPL, SpecExamples) {
  auto third = detect_pl_form(lift_rational(rational_values({1}), RationalShift::parse("1/3")).coeffs);
  EXPECT_EQ(third.verdict, PLVerdict::NotPL);
  EXPECT_EQ(third.proof_kind, PLProof::ResidueObstruction);
  EXPECT_EQ(third.residue_h, 1u);
  EXPECT_EQ(third.residue_r, 3u);

  // alpha = 1/2, f(n) = chi_4(2n+1): F = 2^s L(s, chi_4)
  const auto chi4 = primitive_characters(4).at(0);
  std::vector<Cyclo> f;
  for (i64 n = 0; n < 2; ++n) f.push_back(chi4.exact(2 * n + 1, 2));
  auto half = detect_pl_form(lift_rational(PeriodicFunction(f), RationalShift::parse("1/2")).coeffs);
  ASSERT_EQ(half.verdict, PLVerdict::IsPL);
  EXPECT_EQ(half.character->modulus, 4u);
  ASSERT_EQ(half.polynomial.coeffs().size(), 1u);
  EXPECT_EQ(half.polynomial.coeffs().at(1), Cyclo(1, 1));

  auto two = detect_pl_form(lift_rational(rational_values({1, -2}), RationalShift::parse("1")).coeffs);
  ASSERT_EQ(two.verdict, PLVerdict::IsPL);
  EXPECT_EQ(two.character->conductor, 1u);
  EXPECT_EQ(two.polynomial.coeffs().size(), 2u);
  EXPECT_EQ(two.polynomial.coeffs().at(2), Cyclo(1, Rational(-3)));
}

TEST(DetectPL, RoundTripOnRandomProducts) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> coef(-3, 3);
  const std::vector<u64> supports = {1, 2, 3, 4, 6};
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::map<u64, int> P;
    P[1] = 1;
    for (u64 n : supports)
      if (n > 1 && rng() % 2) P[n] = coef(rng);
    std::erase_if(P, [](const auto& kv) { return kv.second == 0; });
    const u64 k = std::vector<u64>{1, 3, 4, 5}[rng() % 4];
    const auto chars = primitive_characters(k);
    const auto& chi = chars[rng() % chars.size()];
    const auto g = pl_coefficients(P, chi);
    if (detail::residue_obstruction(g)) continue;  // only possible for degenerate P
    const auto cert = detect_pl_form(g);
    ASSERT_EQ(cert.verdict, PLVerdict::IsPL) << trial;
    for (u64 m = 1; m <= cert.verification_period; ++m)
      ASSERT_EQ(detail::convolve_at(cert.polynomial, *cert.character, m, cert.polynomial.field_order()), g.exact(static_cast<i64>(m)));
    ++checked;
  }
  EXPECT_GT(checked, 20);
}

TEST(DetectPL, ObstructionSoundOnSingleClassSupport) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> coef(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    const u64 r = std::vector<u64>{3, 4, 5, 6, 8}[rng() % 5];
    const u64 mult = 1 + rng() % 3;
    const u64 P = r * mult;
    u64 h;
    do h = 1 + rng() % (r - 1);
    while (std::gcd(h, r) != 1);
    std::vector<Cyclo> g(P, Cyclo(1));
    bool any = false;
    for (u64 m = 0; m < P; ++m)
      if (m % r == h) {
        int c = coef(rng);
        if (!any && c == 0) c = 1;
        g[m] = Cyclo(1, Rational(c));
        any = any || c != 0;
      }
    const auto cert = detect_pl_form(PeriodicFunction(g));
    EXPECT_NE(cert.verdict, PLVerdict::IsPL) << "r=" << r << " h=" << h;
  }
}

TEST(DetectPL, CapBelowPeriodIsUnknown) {
  // Two genuinely different characters mixed: not of P*L form.
  const auto a = primitive_characters(5);
  std::vector<Cyclo> g(5, Cyclo(4));
  for (i64 m = 0; m < 5; ++m) g[static_cast<std::size_t>(m)] = a[0].exact(m, 4) + a[1].exact(m, 4) * Rational(2);
  const auto mixed = PeriodicFunction(g);
  EXPECT_EQ(detect_pl_form(mixed, 2).verdict, PLVerdict::Unknown);
  EXPECT_EQ(detect_pl_form(mixed).verdict, PLVerdict::NotPL);
}

TEST(Verdict, SpecExamples) {
  auto a = nonvanishing_verdict(rational_values({1}), RationalShift::parse("1/3"));
  EXPECT_EQ(a.verdict, kInfinitelyManyZeros);
  EXPECT_EQ(a.certificate->proof_kind, PLProof::ResidueObstruction);

  auto b = nonvanishing_verdict(rational_values({1, -1}), RationalShift::parse("1"));
  EXPECT_EQ(b.verdict, kNoZerosFound);
  EXPECT_EQ(b.certificate->verdict, PLVerdict::IsPL);
  EXPECT_TRUE(b.p_zeros.empty());

  auto c = nonvanishing_verdict(rational_values({1, -2}), RationalShift::parse("1"));
  EXPECT_EQ(c.verdict, kZerosFromP);
  ASSERT_FALSE(c.p_zeros.empty());
  for (const auto& z : c.p_zeros) EXPECT_NEAR(z.z.real(), std::log2(3.0), 1e-8);
}

TEST(Verdict, AlgebraicAndUntyped) {
  const AlgebraicAlpha sqrt2({1, 2, -1}, Rational(2, 5), Rational(1, 2));
  EXPECT_EQ(nonvanishing_verdict(rational_values({1}), sqrt2).verdict, kInfinitelyManyZeros);
  try {
    nonvanishing_verdict(rational_values({1}), UntypedFloat{0.5});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.kind(), errc::unsupported_alpha);
  }
}
