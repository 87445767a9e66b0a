#pragma once

// Rational shifts: F(s, f, a/b) = b^s sum_{m>=1} g(m) m^{-s} with g periodic
// of period bq. The lifted series is split into Dirichlet L-functions, and
// tested for the shape P(s) L(s, chi) with P a Dirichlet polynomial.

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hzeta/characters.hpp"
#include "hzeta/dirichlet.hpp"
#include "hzeta/ideals.hpp"
#include "hzeta/periodic.hpp"
#include "hzeta/zeros.hpp"

namespace hzeta {

struct RationalShift {
  u64 a = 1, b = 1;

  RationalShift() = default;
  RationalShift(u64 a_, u64 b_) : a(a_), b(b_) {
    if (b == 0 || a == 0 || std::gcd(a, b) != 1 || (a >= b && !(a == 1 && b == 1)))
      throw error(errc::invalid_argument, "alpha = a/b needs gcd(a,b) = 1 and 0 < a/b <= 1");
  }

  /// Parses "a/b" or an integer "1".
  static RationalShift parse(std::string_view s) {
    Rational r = parse_rational(s);
    if (r <= 0 || r > 1) throw error(errc::invalid_argument, "alpha must lie in (0, 1]");
    return {static_cast<u64>(boost::multiprecision::numerator(r)), static_cast<u64>(boost::multiprecision::denominator(r))};
  }

  double value() const { return static_cast<double>(a) / static_cast<double>(b); }
  std::string str() const { return std::to_string(a) + "/" + std::to_string(b); }
};

struct LiftedSeries {
  PeriodicFunction coeffs;  // g(m), period b*q; g(0 mod bq) is g at m = bq
  u64 b = 1;
  u64 support_class = 1;  // a mod b
};

/// g(bn + a) = f(n), zero off the class a mod b.
inline LiftedSeries lift_rational(const PeriodicFunction& f, const RationalShift& shift) {
  const u64 q = f.period(), P = shift.b * q;
  std::vector<Cyclo> g(P, Cyclo(f.field_order()));
  for (u64 n = 0; n < q; ++n) g[(shift.b * n + shift.a) % P] = f.exact(static_cast<i64>(n));
  return {PeriodicFunction(std::move(g)), shift.b, shift.a % shift.b};
}

struct DecompositionTerm {
  DirichletCharacter chi;  // primitive
  DirichletPolynomial poly;
};

struct DecompositionResult {
  u64 period = 1;
  std::vector<DecompositionTerm> terms;  // ordered by (conductor, character index)
  u64 verification_period = 0;
  bool verified = false;
};

namespace detail {

inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      out.push_back(d);
      if (d * d != n) out.push_back(n / d);
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n).factors) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline u64 lcm_checked(u64 a, u64 b) {
  u64 g = std::gcd(a, b);
  u128 v = static_cast<u128>(a / g) * b;
  if (v > (u128{1} << 40)) throw error(errc::overflow, "verification period too large");
  return static_cast<u64>(v);
}

/// Coefficient at m of P(s) L(s, chi): sum_{n | m, n in supp} a(n) chi(m/n).
inline Cyclo convolve_at(const DirichletPolynomial& P, const DirichletCharacter& chi, u64 m, int field) {
  Cyclo acc(field);
  for (const auto& [n, c] : P.coeffs()) {
    if (n > m) break;
    if (m % n != 0) continue;
    int k = chi.index_at(static_cast<i64>(m / n));
    if (k < 0) continue;
    acc += c.embed(field) * Cyclo::root_of_unity(field, static_cast<long long>(k) * (field / chi.order));
  }
  return acc;
}

}  // namespace detail

/// Writes sum g(m) m^{-s} as sum_chi P_chi(s) L(s, chi) over primitive chi.
/// For d | P and Q = P/d, the terms with gcd(m, P) = d give
/// d^{-s} sum_{chi mod Q} c_chi L(s, chi) with c_chi = (1/phi(Q)) sum_u g(du) conj chi(u),
/// and L(s, chi mod Q) = L(s, chi*) prod_{p | Q} (1 - chi*(p) p^{-s}).
inline DecompositionResult decompose(const PeriodicFunction& g) {
  const u64 P = g.period();
  DecompositionResult out;
  out.period = P;
  std::vector<DecompositionTerm> terms;
  for (u64 d : detail::divisors(P)) {
    const u64 Q = P / d;
    const auto chars = characters_mod(Q);
    std::vector<u64> units;
    for (u64 u = 0; u < Q; ++u)
      if (std::gcd(u, Q) == 1) units.push_back(u);
    std::vector<u64> rad_divs;
    for (u64 e : detail::divisors(Q))
      if (detail::mobius(e) != 0) rad_divs.push_back(e);
    for (const auto& chi : chars) {
      const int field = std::lcm(g.field_order(), chi.order);
      Cyclo c(field);
      for (u64 u : units) {
        const Cyclo& gv = g.exact(static_cast<i64>(d * u % P));
        if (gv.is_zero()) continue;
        c += gv.embed(field) * chi.exact(static_cast<i64>(u), field).conj();
      }
      if (c.is_zero()) continue;
      c /= Rational(static_cast<long long>(units.size()));
      const DirichletCharacter prim = primitive_part(chi);
      auto it = std::find_if(terms.begin(), terms.end(), [&](const DecompositionTerm& t) { return t.chi == prim; });
      if (it == terms.end()) {
        terms.push_back({prim, DirichletPolynomial(field)});
        it = terms.end() - 1;
      }
      for (u64 e : rad_divs) {
        const int k = prim.index_at(static_cast<i64>(e));
        if (k < 0) continue;
        Cyclo term = c * prim.exact(static_cast<i64>(e), field);
        if (detail::mobius(e) < 0) term = -term;
        it->poly.add(d * e, term);
      }
    }
  }
  std::erase_if(terms, [](const DecompositionTerm& t) { return t.poly.empty(); });
  std::sort(terms.begin(), terms.end(), [](const DecompositionTerm& x, const DecompositionTerm& y) {
    if (x.chi.conductor != y.chi.conductor) return x.chi.conductor < y.chi.conductor;
    return x.chi.index < y.chi.index;
  });
  out.terms = std::move(terms);

  // exact check over a common period of g and every P_chi * L(chi) coefficient sequence
  u64 V = P;
  int field = g.field_order();
  for (const auto& t : out.terms) {
    u64 L = 1;
    for (const auto& [n, c] : t.poly.coeffs()) L = detail::lcm_checked(L, n);
    V = detail::lcm_checked(V, detail::lcm_checked(L, t.chi.modulus));
    field = std::lcm(field, std::lcm(t.poly.field_order(), t.chi.order));
  }
  out.verification_period = V;
  out.verified = true;
  for (u64 m = 1; m <= V && out.verified; ++m) {
    Cyclo acc(field);
    for (const auto& t : out.terms) acc += detail::convolve_at(t.poly, t.chi, m, field);
    if (!(acc == g.exact(static_cast<i64>(m)))) out.verified = false;
  }
  if (!out.verified) throw error(errc::precondition_violated, "L-function decomposition failed exact verification");
  return out;
}

enum class PLVerdict { IsPL, NotPL, Unknown };
enum class PLProof { ResidueObstruction, DeconvolutionCertificate, SearchExhausted };

inline const char* to_string(PLVerdict v) {
  switch (v) {
    case PLVerdict::IsPL: return "IsPL";
    case PLVerdict::NotPL: return "NotPL";
    default: return "Unknown";
  }
}
inline const char* to_string(PLProof p) {
  switch (p) {
    case PLProof::ResidueObstruction: return "ResidueObstruction";
    case PLProof::DeconvolutionCertificate: return "DeconvolutionCertificate";
    default: return "SearchExhausted";
  }
}

struct PLCertificate {
  PLVerdict verdict = PLVerdict::Unknown;
  PLProof proof_kind = PLProof::SearchExhausted;
  DirichletPolynomial polynomial;            // a(n) on the support N
  std::optional<DirichletCharacter> character;
  u64 residue_h = 0, residue_r = 0;         // obstruction class h mod r
  u64 verification_period = 0;              // k * lcm(N), joined with the coefficient period
  u64 conductors_searched = 0;              // largest conductor tried
  std::size_t characters_tried = 0;
};

namespace detail {

/// Smallest r > 2 dividing P with the support inside one class h mod r, gcd(h, r) = 1.
inline std::optional<std::pair<u64, u64>> residue_obstruction(const PeriodicFunction& g) {
  const u64 P = g.period();
  std::vector<u64> support;
  for (u64 m = 1; m <= P; ++m)
    if (!g.exact(static_cast<i64>(m)).is_zero()) support.push_back(m);
  for (u64 r : divisors(P)) {
    if (r <= 2) continue;
    const u64 h = support.front() % r;
    if (std::gcd(h, r) != 1) continue;
    if (std::all_of(support.begin(), support.end(), [&](u64 m) { return m % r == h; })) return std::make_pair(h, r);
  }
  return std::nullopt;
}

/// Tries g = a * chi with a finitely supported: numeric deconvolution a = g * (mu chi),
/// then exact coefficients on the numeric support and exact reconvolution.
inline std::optional<PLCertificate> try_character(const PeriodicFunction& g, const DirichletCharacter& chi) {
  const u64 P = g.period();
  const u64 X = 4 * chi.modulus * P * P;
  std::vector<int> mu(X + 1, 1);
  {
    // linear sieve for the Moebius function up to X
    std::vector<u64> primes;
    std::vector<char> comp(X + 1, 0);
    for (u64 i = 2; i <= X; ++i) {
      if (!comp[i]) {
        primes.push_back(i);
        mu[i] = -1;
      }
      for (u64 p : primes) {
        if (i * p > X) break;
        comp[i * p] = 1;
        if (i % p == 0) {
          mu[i * p] = 0;
          break;
        }
        mu[i * p] = -mu[i];
      }
    }
  }
  std::vector<std::complex<double>> a(X + 1, 0.0);
  for (u64 n = 1; n <= X; ++n) {
    const auto gn = g(static_cast<i64>(n));
    if (gn == std::complex<double>(0, 0)) continue;
    for (u64 k = 1; n * k <= X; ++k) {
      if (mu[k] == 0) continue;
      a[n * k] += gn * chi(static_cast<i64>(k)) * static_cast<double>(mu[k]);
    }
  }
  constexpr double kZero = 1e-9;
  for (u64 m = X / 2 + 1; m <= X; ++m)
    if (std::abs(a[m]) > kZero) return std::nullopt;
  std::vector<u64> support;
  for (u64 m = 1; m <= X / 2; ++m)
    if (std::abs(a[m]) > kZero) support.push_back(m);
  if (support.empty()) return std::nullopt;

  const int field = std::lcm(g.field_order(), chi.order);
  DirichletPolynomial poly(field);
  for (u64 m : support) {
    Cyclo acc(field);
    for (u64 n : divisors(m)) {
      const u64 k = m / n;
      if (mu[k] == 0 || chi.index_at(static_cast<i64>(k)) < 0) continue;
      const Cyclo& gn = g.exact(static_cast<i64>(n));
      if (gn.is_zero()) continue;
      Cyclo t = gn.embed(field) * chi.exact(static_cast<i64>(k), field);
      if (mu[k] < 0) t = -t;
      acc += t;
    }
    poly.add(m, acc);
  }
  u64 L = 1;
  for (const auto& [n, c] : poly.coeffs()) L = lcm_checked(L, n);
  const u64 V = lcm_checked(P, lcm_checked(L, chi.modulus));
  for (u64 m = 1; m <= V; ++m)
    if (!(convolve_at(poly, chi, m, poly.field_order()) == g.exact(static_cast<i64>(m)))) return std::nullopt;
  PLCertificate cert;
  cert.verdict = PLVerdict::IsPL;
  cert.proof_kind = PLProof::DeconvolutionCertificate;
  cert.polynomial = std::move(poly);
  cert.character = chi;
  cert.verification_period = V;
  return cert;
}

}  // namespace detail

/// Decides whether sum g(m) m^{-s} equals P(s) L(s, chi). `max_conductor` = 0 means the period.
inline PLCertificate detect_pl_form(const PeriodicFunction& g, u64 max_conductor = 0) {
  const u64 P = g.period();
  const u64 cap = max_conductor == 0 ? P : max_conductor;
  PLCertificate cert;
  if (auto obs = detail::residue_obstruction(g)) {
    cert.verdict = PLVerdict::NotPL;
    cert.proof_kind = PLProof::ResidueObstruction;
    cert.residue_h = obs->first;
    cert.residue_r = obs->second;
    return cert;
  }
  std::size_t tried = 0;
  for (u64 k = 1; k <= cap; ++k) {
    for (const auto& chi : primitive_characters(k)) {
      ++tried;
      if (auto c = detail::try_character(g, chi)) {
        c->conductors_searched = k;
        c->characters_tried = tried;
        return *c;
      }
    }
  }
  cert.verdict = cap >= P ? PLVerdict::NotPL : PLVerdict::Unknown;
  cert.proof_kind = PLProof::SearchExhausted;
  cert.conductors_searched = cap;
  cert.characters_tried = tried;
  return cert;
}

// ---------------------------------------------------------------------------
// Evaluators for zero location
// ---------------------------------------------------------------------------

/// F(s) = b^s sum_chi P_chi(s) L(s, chi).
inline ComplexFunction decomposition_evaluator(const DecompositionResult& dec, u64 b, double tol = 1e-8) {
  struct Term {
    DirichletCharacter chi;
    std::vector<std::pair<double, std::complex<double>>> poly;
  };
  std::vector<Term> terms;
  for (const auto& t : dec.terms) {
    Term tt{t.chi, {}};
    for (const auto& [n, c] : t.poly.coeffs()) tt.poly.emplace_back(static_cast<double>(n), c.to_complex());
    terms.push_back(std::move(tt));
  }
  const double bd = static_cast<double>(b);
  return [terms = std::move(terms), bd, tol](std::complex<double> s) {
    std::complex<double> acc = 0;
    for (const auto& t : terms) {
      std::complex<double> p = 0;
      for (const auto& [n, c] : t.poly) p += c * detail::pow_neg(n, s);
      acc += p * dirichlet_l(s, t.chi, tol).value;
    }
    return acc / detail::pow_neg(bd, s);
  };
}

/// Per-class Euler-Maclaurin evaluation of F(s, f, alpha).
inline ComplexFunction f_evaluator(const PeriodicFunction& f, double alpha, double tol = 1e-8) {
  return [f, alpha, tol](std::complex<double> s) { return f_eval<double>(s, f, alpha, tol).value; };
}

inline ComplexFunction polynomial_evaluator(const DirichletPolynomial& P) {
  return [P](std::complex<double> s) { return P(s); };
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

struct UntypedFloat {
  double value = 0;
};

using AlphaParameter = std::variant<RationalShift, AlgebraicAlpha, UntypedFloat>;

inline double alpha_value(const AlphaParameter& a) {
  if (auto r = std::get_if<RationalShift>(&a)) return r->value();
  if (auto g = std::get_if<AlgebraicAlpha>(&a)) return g->value();
  return std::get<UntypedFloat>(a).value;
}

inline const char* kInfinitelyManyZeros = "infinitely many zeros in sigma>1";
inline const char* kZerosFromP = "zeros exist (from P)";
inline const char* kNoZerosFound = "no zeros found; consistent with zero-free form";
inline const char* kUndetermined = "undetermined";

struct VerdictOptions {
  double t_max = 30;            // zero scan height for P
  u64 max_conductor = 0;        // 0: the coefficient period
  unsigned threads = 1;
};

struct VerdictReport {
  std::string verdict;
  std::vector<std::string> evidence;
  std::optional<PLCertificate> certificate;
  std::optional<Rectangle> p_scan_region;
  std::vector<RefinedZero> p_zeros;
};

namespace detail {

/// sigma beyond which the leading term of P dominates the rest (so P has no zeros there).
inline double dominance_abscissa(const DirichletPolynomial& P) {
  const auto& co = P.coeffs();
  const double n1 = static_cast<double>(co.begin()->first);
  const double a1 = std::abs(co.begin()->second.to_complex());
  auto rest = [&](double sigma) {
    double s = 0;
    for (auto it = std::next(co.begin()); it != co.end(); ++it)
      s += std::abs(it->second.to_complex()) * std::pow(static_cast<double>(it->first) / n1, -sigma);
    return s;
  };
  double sigma = 1;
  while (rest(sigma) >= a1) sigma *= 2;
  return sigma;
}

}  // namespace detail

inline VerdictReport nonvanishing_verdict(const PeriodicFunction& f, const AlphaParameter& alpha, const VerdictOptions& opt = {}) {
  VerdictReport rep;
  if (std::holds_alternative<UntypedFloat>(alpha))
    throw error(errc::unsupported_alpha, "alpha given as an untyped float; pass a/b or minpoly+interval");
  if (auto alg = std::get_if<AlgebraicAlpha>(&alpha)) {
    rep.verdict = kInfinitelyManyZeros;
    rep.evidence.push_back("alpha algebraic irrational of degree " + std::to_string(alg->degree()) + " (minpoly " +
                           alg->str() + ", irreducible, unique root in the isolating interval)");
    rep.evidence.push_back("theorem: F(s,f,alpha) has infinitely many zeros with sigma>1 for algebraic irrational alpha");
    return rep;
  }
  const auto& shift = std::get<RationalShift>(alpha);
  const LiftedSeries lifted = lift_rational(f, shift);
  rep.evidence.push_back("lifted series: F = " + std::to_string(shift.b) + "^s sum g(m) m^-s, g of period " +
                         std::to_string(lifted.coeffs.period()) + " supported on m = " + std::to_string(lifted.support_class) +
                         " mod " + std::to_string(shift.b));
  auto cert = detect_pl_form(lifted.coeffs, opt.max_conductor);
  rep.certificate = cert;
  if (cert.verdict == PLVerdict::NotPL) {
    rep.verdict = kInfinitelyManyZeros;
    if (cert.proof_kind == PLProof::ResidueObstruction)
      rep.evidence.push_back("support lies in the class " + std::to_string(cert.residue_h) + " mod " +
                             std::to_string(cert.residue_r) + " with r > 2, so the series is not of the form P(s)L(s,chi)");
    else
      rep.evidence.push_back("no primitive character of conductor <= " + std::to_string(cert.conductors_searched) +
                             " gives a finite deconvolution");
    rep.evidence.push_back("not of the form P(s)L(s,chi): infinitely many zeros with sigma>1");
    return rep;
  }
  if (cert.verdict == PLVerdict::Unknown) {
    rep.verdict = kUndetermined;
    rep.evidence.push_back("conductor search capped at " + std::to_string(cert.conductors_searched) +
                           " below the coefficient period");
    return rep;
  }
  rep.evidence.push_back("F = " + std::to_string(shift.b) + "^s * P(s) * L(s, chi mod " + std::to_string(cert.character->modulus) +
                         "), P(s) = " + cert.polynomial.str() + ", certificate verified over " +
                         std::to_string(cert.verification_period) + " coefficients");
  if (shift.b > 2) {
    // cannot happen: the residue obstruction always fires for b > 2
    rep.verdict = kInfinitelyManyZeros;
    return rep;
  }
  // L(s, chi) has no zeros in sigma > 1, so zeros of F there are zeros of P.
  const double sigma_hi = detail::dominance_abscissa(cert.polynomial);
  if (sigma_hi <= 1.001) {
    rep.verdict = kNoZerosFound;
    rep.evidence.push_back("leading coefficient of P dominates for sigma > 1");
    return rep;
  }
  Rectangle region{1.001, sigma_hi, 0, opt.t_max};
  ZeroSearchOptions zo;
  zo.threads = opt.threads;
  const int ns = std::max(1, static_cast<int>(std::ceil(region.width() / 0.25)));
  const int nt = std::max(1, static_cast<int>(std::ceil(region.height() / 2)));
  auto res = zero_search(polynomial_evaluator(cert.polynomial), region, ns, nt, zo);
  rep.p_scan_region = res.region;
  for (const auto& z : res.zeros)
    if (z.converged) rep.p_zeros.push_back(z);
  if (rep.p_zeros.empty()) {
    rep.verdict = kNoZerosFound;
    rep.evidence.push_back("P has no zeros in the scanned rectangle; beyond sigma = " + std::to_string(sigma_hi) +
                           " its leading term dominates");
  } else {
    rep.verdict = kZerosFromP;
    rep.evidence.push_back(std::to_string(rep.p_zeros.size()) + " zeros of P located in the scanned rectangle");
  }
  return rep;
}

}  // namespace hzeta
