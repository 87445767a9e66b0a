#pragma once

// Hurwitz zeta and generalized Hurwitz zeta evaluation by Euler-Maclaurin
// summation with a rigorous truncation bound.
//
// For a = x + N (N terms summed directly) and M correction terms,
//
//   zeta(s, x) = sum_{k<N} (x+k)^{-s} + a^{1-s}/(s-1) + a^{-s}/2
//              + sum_{k=1}^{M} B_{2k}/(2k)! (s)_{2k-1} a^{-s-2k+1} + R_M,
//
//   |R_M| <= 4 |(s)_{2M}| / (2 pi)^{2M} * a^{-sigma-2M+1} / (sigma+2M-1)
//
// valid whenever sigma + 2M - 1 > 0. The bound follows from the periodic
// Bernoulli function estimate |B~_{2M}(u)| <= 4 (2M)!/(2 pi)^{2M} and one
// integration of the remainder integral. The shift N is chosen so that
// a >= max(10, |t|, digits/2) and M grows adaptively up to 30; if the
// bound is still too large the shift is doubled.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <type_traits>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "hzeta/errors.hpp"
#include "hzeta/periodic.hpp"
#include "hzeta/precision.hpp"

namespace hzeta {

struct ComplexPoint {
  double sigma = 0;
  double t = 0;
  std::complex<double> z() const { return {sigma, t}; }
};

template <class R>
struct EvalResultT {
  std::complex<R> value;
  R abs_error_bound = R(0);
  bool pole_flag = false;
};
using EvalResult = EvalResultT<double>;

template <class R>
struct RealBound {
  R value = R(0);
  R abs_error_bound = R(0);
};

inline constexpr double kPoleTolerance = 1e-12;
inline constexpr int kMaxCorrectionOrder = 30;

namespace detail {

template <class R>
struct is_complex : std::false_type {};
template <class R>
struct is_complex<std::complex<R>> : std::true_type {};

template <class R>
R real_part(const R& v) {
  return v;
}
template <class R>
R real_part(const std::complex<R>& v) {
  return v.real();
}
template <class R>
R imag_part(const R&) {
  return R(0);
}
template <class R>
R imag_part(const std::complex<R>& v) {
  return v.imag();
}
template <class R>
R magnitude(const R& v) {
  using std::abs;
  return abs(v);
}
template <class R>
R magnitude(const std::complex<R>& v) {
  using std::sqrt;
  return sqrt(v.real() * v.real() + v.imag() * v.imag());
}

// a^{-s} for real a > 0
template <class R>
R pow_neg(const R& a, const R& s) {
  using std::exp;
  using std::log;
  return exp(-s * log(a));
}
template <class R>
std::complex<R> pow_neg(const R& a, const std::complex<R>& s) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  R la = log(a);
  R mod = exp(-s.real() * la);
  R ang = -s.imag() * la;
  return {mod * cos(ang), mod * sin(ang)};
}

// B_{2k} / (2k)!, k = 0..kMaxCorrectionOrder
template <class R>
const std::vector<R>& bernoulli_scaled() {
  static const std::vector<R> table = [] {
    std::vector<R> t;
    R fact = R(1);
    for (int k = 0; k <= kMaxCorrectionOrder; ++k) {
      if (k > 0) fact *= R(2 * k - 1) * R(2 * k);
      t.push_back(boost::math::bernoulli_b2n<R>(k) / fact);
    }
    return t;
  }();
  return table;
}

template <class R>
R eps_of() {
  return std::numeric_limits<R>::epsilon();
}

template <class R, class S>
struct EmResult {
  S value;
  R bound;
};

// Euler-Maclaurin for sum_{k>=0} (x+k)^{-s}, any x > 0, s != 1.
template <class R, class S>
EmResult<R, S> hurwitz_em(const S& s, const R& x, const R& tol) {
  using std::ceil;
  using std::floor;
  using std::pow;
  const R sigma = real_part(s);
  const R t = imag_part(s);
  const auto& bern = bernoulli_scaled<R>();
  const R two_pi = R(2) * boost::math::constants::pi<R>();
  const R threshold = std::max({R(10), ceil(magnitude(t)), R((digits_of<R>() + 1) / 2)});

  i64 shift = 0;
  if (x < threshold) shift = static_cast<i64>(ceil(threshold - x));
  const R trunc_target = tol / 2;

  for (int attempt = 0; attempt < 12; ++attempt) {
    S direct = S(0);
    R mag = R(0);
    for (i64 k = 0; k < shift; ++k) {
      S term = pow_neg(R(x + R(k)), s);
      direct += term;
      mag += magnitude(term);
    }
    const R a = x + R(shift);
    const S as = pow_neg(a, s);
    const S one = S(1);
    S acc = direct + as * a / (s - one) + as / R(2);
    mag += magnitude(as * a / (s - one)) + magnitude(as);

    S poch = s;           // (s)_{2k-1}
    S apow = as / a;      // a^{-s-2k+1}
    const R a2 = a * a;
    R trunc = std::numeric_limits<R>::infinity();
    int used = 0;
    for (int k = 1; k <= kMaxCorrectionOrder; ++k) {
      S term = poch * apow * bern[k];
      acc += term;
      mag += magnitude(term);
      used = k;
      S poch2k = poch * (s + R(2 * k - 1));  // (s)_{2k}
      const R denom = sigma + R(2 * k - 1);
      if (denom > 0) {
        R b = R(4) * magnitude(poch2k) / pow(two_pi, 2 * k) * magnitude(apow) / denom;
        trunc = b;
        // run on to working precision when that is cheaper than the request
        if (trunc < trunc_target && trunc < eps_of<R>() * magnitude(acc)) break;
      }
      poch = poch2k * (s + R(2 * k));
      apow /= a2;
    }
    if (trunc < trunc_target || attempt == 11) {
      // each power carries a relative error of about eps * |s log(x+k)|
      using std::log;
      const R roundoff = eps_of<R>() * (R(8 + used) + magnitude(s) * log(a)) * mag;
      return {acc, trunc + roundoff};
    }
    shift = 2 * shift + 16;
  }
  return {S(0), std::numeric_limits<R>::infinity()};
}

// Constant term of the Laurent expansion of zeta(s, x) at s = 1 (equals -psi(x)).
template <class R>
EmResult<R, R> hurwitz_finite_part_at_one(const R& x, const R& tol) {
  using std::abs;
  using std::ceil;
  using std::log;
  using std::pow;
  const auto& bern = bernoulli_scaled<R>();
  const R two_pi = R(2) * boost::math::constants::pi<R>();
  const R threshold = std::max(R(10), R((digits_of<R>() + 1) / 2));
  i64 shift = x < threshold ? static_cast<i64>(ceil(threshold - x)) : 0;
  for (int attempt = 0; attempt < 12; ++attempt) {
    R acc = R(0), mag = R(0);
    for (i64 k = 0; k < shift; ++k) {
      acc += R(1) / (x + R(k));
      mag += R(1) / (x + R(k));
    }
    const R a = x + R(shift);
    acc += -log(a) + R(1) / (R(2) * a);
    mag += abs(log(a)) + R(1) / a;
    R fact = R(1);  // (2k-1)!
    R apow = R(1) / (a * a);
    R trunc = std::numeric_limits<R>::infinity();
    for (int k = 1; k <= kMaxCorrectionOrder; ++k) {
      if (k > 1) fact *= R(2 * k - 2) * R(2 * k - 1);
      R term = bern[k] * fact * apow;
      acc += term;
      mag += abs(term);
      trunc = R(4) * fact * R(2 * k) / pow(two_pi, 2 * k) * apow / R(2 * k);
      if (trunc < tol / 2 && trunc < eps_of<R>() * abs(acc)) break;
      apow /= a * a;
    }
    if (trunc < tol / 2 || attempt == 11) return {acc, trunc + eps_of<R>() * (R(40) + log(a)) * mag};
    shift = 2 * shift + 16;
  }
  return {R(0), std::numeric_limits<R>::infinity()};
}

}  // namespace detail

/// zeta(s, x) for x in (0, 1]. Throws PoleAtOne at s = 1 exactly; within
/// kPoleTolerance of 1 the two-term Laurent value is returned with pole_flag.
template <class R>
EvalResultT<R> hurwitz_zeta(const std::complex<R>& s, const R& x, const R& tol) {
  if (!(x > 0 && x <= 1)) throw error(errc::invalid_argument, "hurwitz_zeta requires x in (0, 1]");
  const std::complex<R> d = s - std::complex<R>(R(1), R(0));
  if (d.real() == 0 && d.imag() == 0) throw error(errc::pole_at_one, "zeta(s, x) has a pole at s = 1");
  if (detail::magnitude(d) < R(kPoleTolerance)) {
    auto fp = detail::hurwitz_finite_part_at_one(x, tol);
    EvalResultT<R> r;
    r.value = std::complex<R>(R(1), R(0)) / d + std::complex<R>(fp.value, R(0));
    r.abs_error_bound = std::numeric_limits<R>::infinity();
    r.pole_flag = true;
    return r;
  }
  auto em = detail::hurwitz_em(s, x, tol);
  if (!(em.bound < tol)) throw error(errc::precision_exhausted, "Euler-Maclaurin bound above tolerance");
  return {em.value, em.bound, false};
}

inline EvalResult hurwitz_zeta(ComplexPoint s, double x, const PrecisionProfile& prof = {}) {
  return hurwitz_zeta<double>(s.z(), x, prof.target_tolerance);
}

/// Real-argument zeta(sigma, x) for any x > 0 (tails start anywhere).
template <class R>
RealBound<R> hurwitz_zeta_real(const R& sigma, const R& x, const R& tol) {
  if (!(x > 0)) throw error(errc::invalid_argument, "hurwitz_zeta_real requires x > 0");
  if (sigma == 1) throw error(errc::pole_at_one, "zeta(s, x) has a pole at s = 1");
  auto em = detail::hurwitz_em<R, R>(sigma, x, tol);
  return {em.value, em.bound};
}

/// F(s, f, alpha) = sum_{n>=0} f(n) (n+alpha)^{-s}, through the class split
/// F = q^{-s} sum_r f(r) zeta(s, (r+alpha)/q).
template <class R>
EvalResultT<R> f_eval(const std::complex<R>& s, const PeriodicFunction& f, const R& alpha, const R& tol) {
  if (!(alpha > 0 && alpha <= 1)) throw error(errc::invalid_argument, "alpha must lie in (0, 1]");
  const std::size_t q = f.period();
  const R qr = R(static_cast<i64>(q));
  const std::complex<R> d = s - std::complex<R>(R(1), R(0));
  const bool near_pole = detail::magnitude(d) < R(kPoleTolerance);
  const bool residue_vanishes = f.exact_sum().is_zero();

  R fmax = R(0);
  for (std::size_t r = 0; r < q; ++r) fmax = std::max(fmax, detail::magnitude(f.value<R>(static_cast<i64>(r))));
  const std::complex<R> qpow = detail::pow_neg(qr, s);
  const R qpow_mag = detail::magnitude(qpow);
  const R class_tol = tol / (R(2) * qr * fmax * std::max(R(1), qpow_mag));

  if (near_pole) {
    if (!residue_vanishes) {
      if (d.real() == 0 && d.imag() == 0) throw error(errc::pole_at_one, "F(s, f, alpha) has a pole at s = 1");
      EvalResultT<R> r;
      std::complex<R> acc(R(0), R(0));
      for (std::size_t k = 0; k < q; ++k) {
        auto fp = detail::hurwitz_finite_part_at_one((R(static_cast<i64>(k)) + alpha) / qr, class_tol);
        acc += f.value<R>(static_cast<i64>(k)) * (std::complex<R>(R(1), R(0)) / d + std::complex<R>(fp.value, R(0)));
      }
      r.value = acc / qr;
      r.abs_error_bound = std::numeric_limits<R>::infinity();
      r.pole_flag = true;
      return r;
    }
    // Removable singularity: F(1) = -(1/q) sum_r f(r) psi((r+alpha)/q).
    std::complex<R> acc(R(0), R(0));
    R bound = R(0);
    for (std::size_t k = 0; k < q; ++k) {
      auto fp = detail::hurwitz_finite_part_at_one((R(static_cast<i64>(k)) + alpha) / qr, class_tol);
      acc += f.value<R>(static_cast<i64>(k)) * fp.value;
      bound += detail::magnitude(f.value<R>(static_cast<i64>(k))) * fp.bound;
    }
    EvalResultT<R> r;
    r.value = acc / qr;
    // first-order Taylor error: |s-1| times a crude derivative scale
    r.abs_error_bound = bound / qr + detail::magnitude(d) * R(10) * qr * fmax;
    return r;
  }

  std::complex<R> acc(R(0), R(0));
  R bound = R(0);
  for (std::size_t k = 0; k < q; ++k) {
    const auto fk = f.value<R>(static_cast<i64>(k));
    if (fk == std::complex<R>(R(0), R(0))) continue;
    auto em = detail::hurwitz_em(s, (R(static_cast<i64>(k)) + alpha) / qr, class_tol);
    acc += fk * em.value;
    bound += detail::magnitude(fk) * em.bound;
  }
  EvalResultT<R> r;
  r.value = qpow * acc;
  r.abs_error_bound = qpow_mag * bound + detail::eps_of<R>() * R(8) * detail::magnitude(r.value);
  if (!(r.abs_error_bound < tol)) throw error(errc::precision_exhausted, "F evaluation bound above tolerance");
  return r;
}

inline EvalResult f_eval(ComplexPoint s, const PeriodicFunction& f, double alpha, const PrecisionProfile& prof = {}) {
  return f_eval<double>(s.z(), f, alpha, prof.target_tolerance);
}

/// sum_{n > N, n = b mod q} (n + alpha)^{-sigma}
template <class R>
RealBound<R> class_tail(i64 b, i64 q, const R& alpha, const R& sigma, i64 N, const R& tol) {
  using std::pow;
  if (!(sigma > 1)) throw error(errc::diverges_at_one, "tail diverges for sigma <= 1");
  i64 first = N + 1;
  i64 rem = ((first - b) % q + q) % q;
  if (rem != 0) first += q - rem;
  const R qr = R(q);
  auto z = hurwitz_zeta_real((sigma), (R(first) + alpha) / qr, tol * pow(qr, sigma));
  R scale = detail::pow_neg(qr, sigma);
  return {scale * z.value, scale * z.abs_error_bound};
}

/// sum_{0 <= n <= N, n = b mod q} (n + alpha)^{-sigma}, as a difference of two tails.
template <class R>
RealBound<R> class_head(i64 b, i64 q, const R& alpha, const R& sigma, i64 N, const R& tol) {
  auto all = class_tail(b, q, alpha, sigma, -1, tol / 2);
  auto rest = class_tail(b, q, alpha, sigma, N, tol / 2);
  return {all.value - rest.value, all.abs_error_bound + rest.abs_error_bound};
}

/// sum_{n > N} |f(n)| (n + alpha)^{-sigma}
template <class R>
RealBound<R> abs_tail(const PeriodicFunction& f, const R& alpha, const R& sigma, i64 N, const R& tol) {
  if (!(sigma > 1)) throw error(errc::diverges_at_one, "abs_tail requires sigma > 1");
  const i64 q = static_cast<i64>(f.period());
  RealBound<R> out;
  R fsum = R(0);
  for (i64 b = 0; b < q; ++b) fsum += detail::magnitude(f.value<R>(b));
  for (i64 b = 0; b < q; ++b) {
    const R fb = detail::magnitude(f.value<R>(b));
    if (fb == 0) continue;
    auto t = class_tail(b, q, alpha, sigma, N, tol / fsum);
    out.value += fb * t.value;
    out.abs_error_bound += fb * t.abs_error_bound;
  }
  return out;
}

inline double abs_tail(const PeriodicFunction& f, double alpha, double sigma, i64 N, const PrecisionProfile& prof = {}) {
  return abs_tail<double>(f, alpha, sigma, N, prof.target_tolerance).value;
}

}  // namespace hzeta
