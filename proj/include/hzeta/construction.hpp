#pragma once

// Inductive choice of a unimodular completely multiplicative phi on prime
// ideals so that sum f(n) phi(n) (n+alpha)^{-sigma} stays below a fixed
// fraction of the tail at every stage N_j. Windows (N_j, N_j + M_j] are split
// per class b mod q into A(b) (n owns a private prime ideal p_n, whose phase
// is free) and B(b) (every phase already determined); the free phases are
// aimed at the running class sum with a Bohr solve.

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hzeta/bohr.hpp"
#include "hzeta/density.hpp"
#include "hzeta/ideals.hpp"
#include "hzeta/parallel.hpp"
#include "hzeta/periodic.hpp"
#include "hzeta/precision.hpp"
#include "hzeta/zeta.hpp"

namespace hzeta {

struct ConstructionProfile {
  std::string name = "desk";
  Rational theta{1, 20};
  double density_floor = 0.54;
  Rational contraction{1, 100};
  int min_A_size = 5;
  u64 N1 = 4000;
  double delta = 0.5;
  int digits = 50;

  static ConstructionProfile desk(u64 q) {
    ConstructionProfile p;
    p.N1 = 4000 * q;
    return p;
  }

  static ConstructionProfile canonical(u64 q) {
    ConstructionProfile p;
    p.name = "canonical";
    p.theta = Rational(1, 1000000);
    p.N1 = 10000000 * q;
    return p;
  }

  u64 window(u64 N) const {
    Rational m = theta * Rational(N);
    return static_cast<u64>(boost::multiprecision::numerator(m) / boost::multiprecision::denominator(m));
  }

  /// (floor/(1-floor)) (1/(1+theta))^{1+delta} > (1+c)/(1-c): the window ratio
  /// S3/S2 then clears the contraction requirement for any sigma < 1 + delta.
  bool consistent() const {
    const double c = static_cast<double>(contraction), th = static_cast<double>(theta);
    const double lhs = density_floor / (1 - density_floor) * std::pow(1 / (1 + th), 1 + delta);
    return lhs > (1 + c) / (1 - c);
  }

  void validate() const {
    if (!(theta > 0) || !(contraction > 0 && contraction < 1) || min_A_size < 1 || !(delta > 0 && delta < 1) || N1 < 1)
      throw error(errc::invalid_argument, "construction profile out of range");
    if (digits < 30) throw error(errc::invalid_argument, "construction needs at least 30 digits");
    if (!consistent()) throw error(errc::invalid_argument, "profile fails the window-ratio consistency inequality");
  }
};

namespace detail {

template <class R>
R cabs(const std::complex<R>& z) {
  using std::sqrt;
  return sqrt(z.real() * z.real() + z.imag() * z.imag());
}

template <class R>
R carg(const std::complex<R>& z) {
  using std::atan2;
  return atan2(z.imag(), z.real());
}

template <class R>
std::complex<R> expi(const R& t) {
  using std::cos, std::sin;
  return {cos(t), sin(t)};
}

template <class R>
std::complex<R> cpow_int(std::complex<R> z, int e) {
  std::complex<R> r(R(1), R(0));
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

}  // namespace detail

/// Write-once phases on admissible prime ideals. Keys never stored read as 1:
/// these are the primes fixed to 1 at n <= N1.
template <class R>
class PhiAssignment {
 public:
  struct Entry {
    std::complex<R> phase;
    int stage = 0;
    int case_kind = 0;  // 2: private prime of an A-element, 3: remaining prime fixed to 1
  };

  void set(const PrimeIdealKey& key, const std::complex<R>& phase, int stage, int case_kind) {
    const R m = detail::cabs(phase);
    using std::abs;
    if (abs(m - R(1)) > R(1e-14)) throw error(errc::precondition_violated, "phase is not unimodular at " + key.str());
    auto [it, inserted] = map_.emplace(key, Entry{phase / m, stage, case_kind});
    if (!inserted) throw error(errc::precondition_violated, "phase of " + key.str() + " assigned twice");
  }

  bool contains(const PrimeIdealKey& key) const { return map_.count(key) != 0; }

  std::complex<R> get(const PrimeIdealKey& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? std::complex<R>(R(1), R(0)) : it->second.phase;
  }

  const std::map<PrimeIdealKey, Entry>& entries() const { return map_; }
  std::size_t size() const { return map_.size(); }

  /// phi((n+alpha)a) from its admissible factorization; residual primes give 1.
  std::complex<R> of(const IdealFactorizationRecord& rec) const {
    std::complex<R> v(R(1), R(0));
    for (const auto& [key, e] : rec.admissible) v *= detail::cpow_int(get(key), e);
    return v;
  }

 private:
  std::map<PrimeIdealKey, Entry> map_;
};

template <class R>
struct SigmaCertificate {
  R sigma;
  R contraction;
  std::vector<R> head;  // per class: |f(b)| sum_{n<=N1, n=b} (n+alpha)^{-sigma}
  std::vector<R> tail;  // per class: |f(b)| sum_{n>N1, n=b} (n+alpha)^{-sigma}
  std::vector<R> bound; // per class: combined error bound of head and tail
  bool holds = false;
  int bisection_steps = 0;
};

namespace detail {

template <class R>
R eval_tolerance(int digits) {
  using std::pow;
  return pow(R(10), -(digits - 8));
}

template <class R>
bool sigma_condition(const PeriodicFunction& f, const R& alpha, const R& sigma, u64 N1, const R& c, int digits,
                     SigmaCertificate<R>* out) {
  const i64 q = static_cast<i64>(f.period());
  const R tol = eval_tolerance<R>(digits);
  bool ok = true;
  if (out) {
    out->head.assign(static_cast<std::size_t>(q), R(0));
    out->tail.assign(static_cast<std::size_t>(q), R(0));
    out->bound.assign(static_cast<std::size_t>(q), R(0));
  }
  for (i64 b = 0; b < q; ++b) {
    const R fb = cabs(f.value<R>(b));
    if (fb == 0) continue;
    auto h = class_head<R>(b, q, alpha, sigma, static_cast<i64>(N1), tol);
    auto t = class_tail<R>(b, q, alpha, sigma, static_cast<i64>(N1), tol);
    const R head = fb * h.value, tail = fb * t.value, err = fb * (h.abs_error_bound + c * t.abs_error_bound);
    if (!(head + err < c * tail)) ok = false;
    if (out) {
      out->head[static_cast<std::size_t>(b)] = head;
      out->tail[static_cast<std::size_t>(b)] = tail;
      out->bound[static_cast<std::size_t>(b)] = err;
    }
  }
  return ok;
}

}  // namespace detail

/// A sigma in (1, 1+delta) with, for every class b where f(b) != 0,
/// |f(b)| sum_{n<=N1} (n+alpha)^{-sigma} < c |f(b)| sum_{n>N1} (n+alpha)^{-sigma}.
/// Summing over classes gives the condition on the full series.
template <class R>
SigmaCertificate<R> select_sigma(const PeriodicFunction& f, const R& alpha, const ConstructionProfile& prof) {
  const R c = R(prof.contraction);
  const R one(1);
  R good = 0, bad = one + R(prof.delta);
  bool have_good = false;
  // the condition holds as sigma -> 1+, since the tails diverge there
  for (int k = 1; k <= 200 && !have_good; ++k) {
    using std::pow;
    const R s = one + R(prof.delta) * pow(R(2), -k);
    if (detail::sigma_condition<R>(f, alpha, s, prof.N1, c, prof.digits, nullptr)) {
      good = s;
      have_good = true;
    } else {
      bad = s;
    }
  }
  if (!have_good) throw error(errc::precision_exhausted, "no sigma separated the head/tail inequality");
  SigmaCertificate<R> cert;
  int steps = 0;
  if (bad > good) {
    for (; steps < 60; ++steps) {
      const R mid = (good + bad) / 2;
      if (detail::sigma_condition<R>(f, alpha, mid, prof.N1, c, prof.digits, nullptr)) good = mid;
      else bad = mid;
    }
  }
  cert.sigma = good;
  cert.contraction = c;
  cert.bisection_steps = steps;
  cert.holds = detail::sigma_condition<R>(f, alpha, good, prof.N1, c, prof.digits, &cert);
  if (!cert.holds) throw error(errc::precision_exhausted, "sigma certificate failed on re-evaluation");
  return cert;
}

template <class R>
struct ClassStageReport {
  u64 b = 0;
  std::size_t size_A = 0, size_B = 0;
  R S1, S2, S3, S4;
  std::complex<R> Lambda, target, achieved;
  R after_abs;       // |sum_{n <= N_{j+1}, n = b} f phi w|
  R bound;           // max(0, |Lambda| - S3)
  R bohr_residual;   // |achieved - target|
  bool target_clamped = false;
  bool bound_ok = false;       // after_abs <= bound + tolerance
  bool ratio_ok = false;       // S3/S2 > (1+c)/(1-c)
  bool inequality_ok = false;  // S3 - S2 > c (S3 + S2)
  bool induction_ok = false;   // after_abs < c S4
};

template <class R>
struct StageReport {
  int j = 0;
  u64 N_j = 0, M_j = 0, N_next = 0;
  std::vector<ClassStageReport<R>> classes;
  std::size_t case2 = 0, case3 = 0;
  R total_abs;   // |sum_{n <= N_{j+1}} f phi w|
  R total_rhs;   // c sum_b S4_b
  bool induction_ok = false;
  bool all_ok = false;
};

template <class R>
struct StageState {
  int j = 1;
  u64 N = 0;
  R sigma;
  std::vector<std::complex<R>> class_sum;  // sum_{n <= N, n = b mod q} f(n) phi(n) (n+alpha)^{-sigma}
};

namespace detail {

template <class R>
R weight(u64 n, const R& alpha, const R& sigma) {
  using std::exp, std::log;
  return exp(-sigma * log(R(n) + alpha));
}

}  // namespace detail

/// One induction step: phases for every prime ideal first seen in (N_j, N_{j+1}].
template <class R>
StageReport<R> stage_advance(StageState<R>& st, const AlgebraicAlpha& alpha, const PeriodicFunction& f,
                             const ConstructionProfile& prof, PhiAssignment<R>& phi, FactorCache* cache = nullptr,
                             unsigned threads = 1) {
  using std::abs;
  const u64 q = f.period();
  const R a = alpha.value_as<R>();
  const R c = R(prof.contraction);
  const R tol = detail::eval_tolerance<R>(prof.digits);
  const R check_tol = [&] {
    using std::pow;
    return pow(R(10), -(prof.digits / 2));
  }();

  StageReport<R> rep;
  rep.j = st.j;
  rep.N_j = st.N;
  rep.M_j = prof.window(st.N);
  if (rep.M_j == 0) throw error(errc::empty_window, "window length is zero at N=" + std::to_string(st.N));
  rep.N_next = st.N + rep.M_j;
  const u64 lo = st.N, hi = rep.N_next;

  std::vector<IdealFactorizationRecord> recs(hi - lo);
  parallel_for(recs.size(), threads, [&](std::size_t i) { recs[i] = ideal_factorize(alpha, static_cast<i64>(lo + 1 + i), cache); });

  // private prime ideal per n (largest admissible p with p > max(n, N_{j+1} - n))
  std::vector<std::optional<std::pair<PrimeIdealKey, int>>> priv(recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const u64 n = lo + 1 + i;
    for (const auto& [key, e] : recs[i].admissible)
      if (key.p > n && key.p > hi - n) priv[i] = std::make_pair(key, e);
  }
  for (u64 b = 0; b < q; ++b) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < recs.size(); ++i)
      if ((lo + 1 + i) % q == b && priv[i]) ++count;
    if (count < static_cast<std::size_t>(prof.min_A_size))
      throw error(errc::thin_class, "stage " + std::to_string(st.j) + ": |A(" + std::to_string(b) + ")| = " +
                                        std::to_string(count) + " < " + std::to_string(prof.min_A_size) + " in (" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }

  // case 1 keys (root <= N_j) are already determined; everything else except
  // the private ideals is case 3 and fixed to 1 now
  for (std::size_t i = 0; i < recs.size(); ++i) {
    for (const auto& [key, e] : recs[i].admissible) {
      if (key.root <= lo) {
        if (key.root > prof.N1 && !phi.contains(key))
          throw error(errc::precondition_violated, "prime ideal " + key.str() + " from an earlier stage has no phase");
        continue;
      }
      if (priv[i] && priv[i]->first == key) continue;
      if (!phi.contains(key)) {
        phi.set(key, {R(1), R(0)}, st.j, 3);
        ++rep.case3;
      }
    }
  }

  R total_rhs = 0;
  std::complex<R> total(R(0), R(0));
  for (u64 b = 0; b < q; ++b) {
    ClassStageReport<R> cr;
    cr.b = b;
    const std::complex<R> fb = f.value<R>(static_cast<i64>(b));
    const R fabs = detail::cabs(fb);
    std::vector<std::size_t> A, B;
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if ((lo + 1 + i) % q != b) continue;
      (priv[i] ? A : B).push_back(i);
    }
    cr.size_A = A.size();
    cr.size_B = B.size();

    std::complex<R> sumB(R(0), R(0));
    R wB = 0, wA = 0;
    for (std::size_t i : B) {
      const R w = detail::weight(lo + 1 + i, a, st.sigma);
      sumB += phi.of(recs[i]) * w;
      wB += w;
    }
    std::vector<R> wAn;
    for (std::size_t i : A) {
      wAn.push_back(detail::weight(lo + 1 + i, a, st.sigma));
      wA += wAn.back();
    }
    cr.S1 = detail::cabs(st.class_sum[b]);
    cr.S2 = fabs * wB;
    cr.S3 = fabs * wA;
    auto t4 = class_tail<R>(static_cast<i64>(b), static_cast<i64>(q), a, st.sigma, static_cast<i64>(hi), tol);
    cr.S4 = fabs * t4.value;
    cr.Lambda = st.class_sum[b] + fb * sumB;
    const R lam = detail::cabs(cr.Lambda);
    if (lam <= cr.S3) cr.target = -cr.Lambda;
    else cr.target = -cr.Lambda * (cr.S3 / lam);

    // c_n: the phase of n without its private ideal
    std::vector<std::complex<R>> cn;
    for (std::size_t i : A) {
      std::complex<R> v(R(1), R(0));
      for (const auto& [key, e] : recs[i].admissible)
        if (!(key == priv[i]->first)) v *= detail::cpow_int(phi.get(key), e);
      cn.push_back(v);
    }

    if (fabs == 0) {
      for (std::size_t k = 0; k < A.size(); ++k) phi.set(priv[A[k]]->first, {R(1), R(0)}, st.j, 2);
      cr.achieved = std::complex<R>(R(0), R(0));
      cr.target = std::complex<R>(R(0), R(0));
    } else {
      std::vector<R> radii;
      for (const auto& w : wAn) radii.push_back(fabs * w);
      BohrTarget<R> z{cr.target.real(), cr.target.imag()};
      const auto ann = bohr_annulus(radii);
      const R zabs = detail::cabs(cr.target);
      if (zabs < ann.inner) {
        // nearest reachable point on the inner circle
        const R ang = zabs > 0 ? detail::carg(cr.target) : R(0);
        z = {ann.inner * detail::expi(ang).real(), ann.inner * detail::expi(ang).imag()};
        cr.target = std::complex<R>(z.re, z.im);
        cr.target_clamped = true;
      }
      const auto theta = bohr_solve<R>(radii, z);
      const R argf = detail::carg(fb);
      for (std::size_t k = 0; k < A.size(); ++k) {
        const auto& [key, e] = *priv[A[k]];
        const R psi = theta[k] - argf - detail::carg(cn[k]);
        phi.set(key, detail::expi<R>(psi / R(e)), st.j, 2);
      }
      std::complex<R> ach(R(0), R(0));
      for (std::size_t k = 0; k < A.size(); ++k) ach += fb * phi.of(recs[A[k]]) * wAn[k];
      cr.achieved = ach;
    }
    rep.case2 += A.size();
    cr.bohr_residual = detail::cabs(cr.achieved - cr.target);
    st.class_sum[b] = cr.Lambda + cr.achieved;
    cr.after_abs = detail::cabs(st.class_sum[b]);
    cr.bound = lam > cr.S3 ? lam - cr.S3 : R(0);
    if (cr.target_clamped) cr.bound = detail::cabs(cr.Lambda + cr.target);
    cr.bound_ok = cr.after_abs <= cr.bound + check_tol;
    const R ratio_need = (R(1) + c) / (R(1) - c);
    cr.ratio_ok = cr.S2 == 0 ? cr.S3 > 0 || fabs == 0 : cr.S3 / cr.S2 > ratio_need;
    cr.inequality_ok = cr.S3 - cr.S2 > c * (cr.S3 + cr.S2) || fabs == 0;
    cr.induction_ok = cr.after_abs < c * cr.S4 || (fabs == 0 && cr.after_abs == 0);
    total += st.class_sum[b];
    total_rhs += c * cr.S4;
    rep.classes.push_back(cr);
  }
  rep.total_abs = detail::cabs(total);
  rep.total_rhs = total_rhs;
  rep.induction_ok = rep.total_abs < rep.total_rhs;
  rep.all_ok = rep.induction_ok;
  for (const auto& cr : rep.classes) rep.all_ok = rep.all_ok && cr.bound_ok && cr.induction_ok && cr.inequality_ok && cr.ratio_ok;
  st.N = hi;
  ++st.j;
  return rep;
}

template <class R>
struct ConstructionReport {
  ConstructionProfile profile;
  SigmaCertificate<R> sigma;
  std::vector<StageReport<R>> stages;
  PhiAssignment<R> phi;
  u64 N_final = 0;
  std::complex<R> final_sum;   // incremental sum_{n <= N_final} f phi w
  R final_rhs;                 // c * sum_{n > N_final} |f(n)| (n+alpha)^{-sigma}
  bool envelope_ok = false;
  std::optional<std::string> halted;  // diagnostic when a stage could not run
  bool all_ok = false;
};

/// The sum over n <= N recomputed from the phase log alone: direct summation
/// over every n, fresh factorizations, no Euler-Maclaurin.
template <class R>
std::complex<R> recompute_partial_sum(const AlgebraicAlpha& alpha, const PeriodicFunction& f, const R& sigma,
                                      const PhiAssignment<R>& phi, u64 N, unsigned threads = 1) {
  const R a = alpha.value_as<R>();
  std::vector<std::complex<R>> part(threads == 0 ? 1 : threads, std::complex<R>(R(0), R(0)));
  const std::size_t chunks = part.size();
  parallel_for(chunks, threads, [&](std::size_t t) {
    std::complex<R> acc(R(0), R(0));
    for (u64 n = t; n <= N; n += chunks) {
      const auto rec = ideal_factorize(alpha, static_cast<i64>(n));
      acc += f.value<R>(static_cast<i64>(n)) * phi.of(rec) * detail::weight(n, a, sigma);
    }
    part[t] = acc;
  });
  std::complex<R> total(R(0), R(0));
  for (const auto& p : part) total += p;
  return total;
}

template <class R>
ConstructionReport<R> run_construction(const PeriodicFunction& f, const AlgebraicAlpha& alpha_in,
                                       const ConstructionProfile& prof, int stages, FactorCache* cache = nullptr,
                                       unsigned threads = 1) {
  if (stages < 1) throw error(errc::invalid_argument, "need at least one stage");
  prof.validate();
  const u64 q = f.period();
  const AlgebraicAlpha alpha = alpha_in.with_q(q);
  const R a = alpha.value_as<R>();
  ConstructionReport<R> rep;
  rep.profile = prof;
  rep.sigma = select_sigma<R>(f, a, prof);

  StageState<R> st;
  st.N = prof.N1;
  st.sigma = rep.sigma.sigma;
  const R tol = detail::eval_tolerance<R>(prof.digits);
  for (u64 b = 0; b < q; ++b) {
    auto h = class_head<R>(static_cast<i64>(b), static_cast<i64>(q), a, st.sigma, static_cast<i64>(prof.N1), tol);
    st.class_sum.push_back(f.value<R>(static_cast<i64>(b)) * h.value);
  }
  try {
    for (int j = 0; j < stages; ++j) rep.stages.push_back(stage_advance(st, alpha, f, prof, rep.phi, cache, threads));
  } catch (const error& e) {
    if (e.kind() != errc::thin_class && e.kind() != errc::empty_window) throw;
    rep.halted = e.what();
  }
  rep.N_final = st.N;
  rep.final_sum = std::complex<R>(R(0), R(0));
  for (const auto& s : st.class_sum) rep.final_sum += s;
  rep.final_rhs = rep.sigma.contraction * abs_tail<R>(f, a, st.sigma, static_cast<i64>(st.N), tol).value;
  rep.envelope_ok = detail::cabs(rep.final_sum) < rep.final_rhs;
  rep.all_ok = !rep.halted && rep.envelope_ok && rep.sigma.holds;
  for (const auto& s : rep.stages) rep.all_ok = rep.all_ok && s.all_ok;
  return rep;
}

struct CanonicalStageCheck {
  u64 N1 = 0, M1 = 0;
  std::vector<DensityReport> classes;
  int required = 5;
  bool passed = false;
};

/// The first canonical window (N1, N1 + M1]: |A(b)| measured against the minimum.
inline CanonicalStageCheck canonical_stage_check(const AlgebraicAlpha& alpha, u64 q, FactorCache* cache = nullptr) {
  const auto prof = ConstructionProfile::canonical(q);
  CanonicalStageCheck out;
  out.N1 = prof.N1;
  out.M1 = prof.window(prof.N1);
  out.required = prof.min_A_size;
  out.passed = true;
  for (u64 b = 0; b < q; ++b) {
    out.classes.push_back(private_prime_scan(alpha.with_q(q), {prof.N1, prof.theta, q, b}, cache, prof.density_floor));
    if (out.classes.back().count_A < static_cast<std::size_t>(prof.min_A_size)) out.passed = false;
  }
  return out;
}

}  // namespace hzeta
