// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only if all pass.
// Every reference value comes from an oracle that does not call the code under test.

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>
#include <chrono>
#include <cstdio>
#include <numbers>
#include <random>

#include "hzeta/hzeta.hpp"
#include "oracles.hpp"

using namespace hzeta;
using cd = std::complex<double>;

namespace {

constexpr u64 kSeed = 20240917;
unsigned g_threads = 4;  // criterion 7 re-runs with a single thread

// Criterion 1
constexpr double kZeta2Tol = 1e-12;
constexpr double kZeta3HalfTol = 1e-10;
constexpr double kZeta0Tol = 1e-10;
constexpr double kSplitTol = 1e-9;
constexpr double kBudget1 = 10;
// Criterion 2
constexpr double kBudget2 = 30;
// Criterion 3
constexpr i64 kIdealRange = 10000;
constexpr u64 kRootLawPrimeCap = 100;
constexpr double kBudget3 = 60;
// Criterion 4
constexpr double kDensityFloor = 0.54;
constexpr int kSweepWindows = 20;
constexpr double kBudget4 = 600;
// Criterion 5
constexpr int kDeskStages = 10;
constexpr double kRecomputeTol = 1e-20;
constexpr double kUnimodularTol = 1e-14;
constexpr double kBudget5 = 900;
// Criterion 6
constexpr double kZeroSigmaTol = 1e-6;
constexpr double kZeroTTol = 1e-5;
constexpr int kBohrInstances = 1000;
constexpr double kBohrRelTol = 1e-10;
constexpr double kBudget6 = 300;

struct Outcome {
  bool pass = true;
  std::string detail;
  json report;  // deterministic content only; compared by criterion 7

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += "FAILED " + what;
    }
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string fmt(double v, const char* f = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const AlgebraicAlpha& sqrt2m1() {
  static const AlgebraicAlpha a({1, 2, -1}, Rational(2, 5), Rational(1, 2));
  return a;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const double pi = std::numbers::pi;
  const double e2 = std::abs(hurwitz_zeta<double>({2, 0}, 1.0, 1e-13).value.real() - pi * pi / 6);
  o.require(e2 < kZeta2Tol, "zeta(2,1)");
  const double e3 = std::abs(hurwitz_zeta<double>({3, 0}, 0.5, 1e-11).value.real() - 7 * boost::math::zeta(3.0));
  o.require(e3 < kZeta3HalfTol, "zeta(3,1/2)");
  double e0 = 0;
  for (int i = 1; i <= 9; ++i) {
    const double x = i / 10.0;
    e0 = std::max(e0, std::abs(hurwitz_zeta<double>({0, 0}, x, 1e-11).value.real() - (0.5 - x)));
  }
  o.require(e0 < kZeta0Tol, "zeta(0,x)");

  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> qd(1, 6), cv(-3, 3);
  std::uniform_real_distribution<double> ad(0.05, 1), sd(1.51, 3.5), td(-30, 30);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int q = qd(rng);
    std::string text;
    std::vector<cd> vals;
    for (int r = 0; r < q; ++r) {
      int a = cv(rng), b = cv(rng);
      if (r == 0 && a == 0 && b == 0) a = 1;
      text += (r ? "," : "") + std::to_string(a) + (b >= 0 ? "+" : "") + std::to_string(b) + "i";
      vals.emplace_back(a, b);
    }
    const auto f = PeriodicFunction::parse(text);
    const double alpha = ad(rng);
    for (int k = 0; k < 5; ++k) {
      const cd s(sd(rng), td(rng));
      worst = std::max(worst, std::abs(f_eval<double>(s, f, alpha, kSplitTol).value - oracle::series(s, vals, alpha)));
    }
  }
  o.require(worst < kSplitTol, "split consistency");
  o.note("zeta(2) err " + fmt(e2) + ", zeta(3,1/2) err " + fmt(e3) + ", zeta(0,x) err " + fmt(e0) +
         ", split worst " + fmt(worst) + " over 100 points");
  return o;
}

// ---------------------------------------------------------------------------

/// sum_{n | m} a(n) chi(m/n), written out independently of the library's convolution.
Cyclo reconvolve(const DirichletPolynomial& P, const DirichletCharacter& chi, u64 m, int field) {
  Cyclo acc(field);
  for (const auto& [n, c] : P.coeffs()) {
    if (m % n != 0) continue;
    const u64 k = (m / n) % chi.modulus;
    const int idx = chi.index[k];
    if (idx < 0) continue;
    acc += c.embed(field) * Cyclo::root_of_unity(field, static_cast<long long>(idx) * (field / chi.order));
  }
  return acc;
}

bool certificate_exact(const PLCertificate& c, const PeriodicFunction& g) {
  if (c.verdict != PLVerdict::IsPL) return false;
  const int field = std::lcm(std::lcm(c.polynomial.field_order(), c.character->order), g.field_order());
  u64 V = g.period() * c.character->modulus;
  for (const auto& [n, a] : c.polynomial.coeffs()) V = std::lcm(V, n * c.character->modulus);
  for (u64 m = 1; m <= V; ++m)
    if (!(reconvolve(c.polynomial, *c.character, m, field) == g.exact(static_cast<i64>(m)).embed(field))) return false;
  return true;
}

Outcome criterion2() {
  Outcome o;
  auto one = [](std::vector<long long> v) {
    std::vector<Cyclo> c;
    for (auto x : v) c.push_back(Cyclo(1, Rational(x)));
    return PeriodicFunction(c);
  };

  const auto g3 = lift_rational(one({1}), RationalShift(1, 3)).coeffs;
  const auto c3 = detect_pl_form(g3);
  o.require(c3.verdict == PLVerdict::NotPL && c3.proof_kind == PLProof::ResidueObstruction, "alpha=1/3 NotPL");
  const auto v3 = nonvanishing_verdict(one({1}), RationalShift(1, 3));
  o.require(v3.verdict == kInfinitelyManyZeros, "alpha=1/3 verdict");

  const auto g1 = lift_rational(one({1, -1}), RationalShift(1, 1)).coeffs;
  const auto c1 = detect_pl_form(g1);
  DirichletPolynomial expect1(1);
  expect1.add(1, Cyclo(1, 1));
  expect1.add(2, Cyclo(1, -2));
  o.require(c1.verdict == PLVerdict::IsPL && c1.character->conductor == 1 && c1.polynomial == expect1 &&
                c1.polynomial.str() == "(1) + (-2)*2^-s",
            "(-1)^n gives P = 1 - 2^{1-s}");
  o.require(certificate_exact(c1, g1), "(-1)^n reconvolution");

  const auto chi4 = primitive_characters(4).at(0);
  std::vector<Cyclo> f4;
  for (i64 n = 0; n < 2; ++n) f4.push_back(chi4.exact(2 * n + 1, 2));
  const auto lift4 = lift_rational(PeriodicFunction(f4), RationalShift(1, 2));
  const auto c4 = detect_pl_form(lift4.coeffs);
  o.require(c4.verdict == PLVerdict::IsPL && c4.character->modulus == 4 && c4.polynomial.coeffs().size() == 1 &&
                c4.polynomial.coeffs().begin()->first == 1 && c4.polynomial.coeffs().begin()->second == Cyclo(1, 1) &&
                lift4.b == 2,
            "chi_4 at alpha=1/2 gives 2^s L(s,chi_4)");
  o.require(certificate_exact(c4, lift4.coeffs), "chi_4 reconvolution");

  o.report = json{{"third", to_json(c3)}, {"alternating", to_json(c1)}, {"chi4", to_json(c4)}, {"verdict_third", v3.verdict}};
  o.note("1/3: " + std::string(to_string(c3.proof_kind)) + " (class " + std::to_string(c3.residue_h) + " mod " +
         std::to_string(c3.residue_r) + "); (-1)^n: P = " + c1.polynomial.str() + "; chi_4: F = 2^s L(s, chi mod 4); reconvolution exact");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  const auto& a = sqrt2m1();
  std::vector<IdealFactorizationRecord> recs(kIdealRange + 1);
  parallel_for(recs.size(), g_threads, [&](std::size_t n) { recs[n] = ideal_factorize(a, static_cast<i64>(n)); });

  std::size_t bad_norm = 0;
  for (i64 n = 0; n <= kIdealRange; ++n) {
    const auto& r = recs[static_cast<std::size_t>(n)];
    u128 prod = r.residual;
    for (const auto& [k, e] : r.admissible)
      for (int i = 0; i < e; ++i) prod *= k.p;
    if (prod != u128(oracle::norm_sqrt2(n))) ++bad_norm;
  }
  o.require(bad_norm == 0, "norm recomposition (" + std::to_string(bad_norm) + " bad)");

  std::size_t law_checks = 0, law_bad = 0, primes = 0;
  for (u64 p = 3; p <= kRootLawPrimeCap; ++p) {
    if (!oracle::trial_prime(p) || !a.admissible(p)) continue;
    for (u64 r : oracle::roots_sqrt2(p)) {
      ++primes;
      u64 pv = p;
      for (int v = 1; pv <= static_cast<u64>(kIdealRange); ++v, pv *= p) {
        const u64 rv = root_class(a, {p, r}, v);
        for (i64 n = 0; n <= kIdealRange; ++n) {
          int e = 0;
          for (const auto& [k, ee] : recs[static_cast<std::size_t>(n)].admissible)
            if (k.p == p && k.root == r) e = ee;
          // oracle side: p^v | norm and n = r mod p, straight from the integer
          const u64 norm = oracle::norm_sqrt2(n);
          const bool divides = norm % pv == 0 && static_cast<u64>(n) % p == r;
          law_bad += (e >= v) != divides || (e >= v) != (static_cast<u64>(n) % pv == rv);
          ++law_checks;
        }
      }
    }
  }
  o.require(law_bad == 0, "root-class law (" + std::to_string(law_bad) + " bad)");

  std::size_t inert = 0, inert_bad = 0;
  for (u64 p = 3; p <= kRootLawPrimeCap; ++p) {
    if (!oracle::trial_prime(p) || !oracle::roots_sqrt2(p).empty()) continue;
    ++inert;
    for (i64 n = 0; n <= kIdealRange; ++n) inert_bad += oracle::norm_sqrt2(n) % p == 0;
    for (const auto& r : recs)
      for (const auto& [k, e] : r.admissible) inert_bad += k.p == p;
  }
  o.require(inert_bad == 0, "inert primes");

  o.report = json{{"law_checks", law_checks}, {"prime_ideals", primes}, {"inert_primes", inert}};
  o.note("n <= " + std::to_string(kIdealRange) + " recomposed exactly; " + std::to_string(law_checks) + " root-class checks over " +
         std::to_string(primes) + " prime ideals; " + std::to_string(inert) + " inert primes never divide");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  std::vector<u64> Ns;
  for (int i = 0; i < kSweepWindows; ++i)
    Ns.push_back(static_cast<u64>(std::llround(1e7 * std::pow(100.0, i / double(kSweepWindows - 1)))));
  const Rational theta(1, 1000000);
  FactorCache cache;
  json windows = json::array();
  double total = 0;
  std::size_t count = 0, eligible = 0, unsound = 0;
  std::vector<std::string> flagged;
  for (u64 q : {1, 2, 3}) {
    const auto sw = density_sweep(sqrt2m1(), Ns, theta, q, &cache, g_threads, kDensityFloor);
    for (const auto& w : sw.windows) {
      const u64 end = w.window.end();
      for (const auto& e : w.eligible) {
        ++eligible;
        // soundness from scratch: p prime, p | norm(n), n = root mod p, and n is the only
        // m in [0, end] on that class, i.e. n < p and n + p > end
        using boost::multiprecision::cpp_int;
        const cpp_int norm = cpp_int(e.n) * e.n - 2 * cpp_int(e.n) - 1;
        bool ok = boost::multiprecision::miller_rabin_test(cpp_int(e.key.p), 25) && norm % e.key.p == 0 &&
                  e.n == e.key.root && e.n + e.key.p > end && q % e.key.p != 0;
        unsound += !ok;
      }
      total += w.fraction;
      ++count;
      if (!w.passed) flagged.push_back("N=" + std::to_string(w.window.N) + " q=" + std::to_string(q) + " b=" + std::to_string(w.window.b));
      windows.push_back(json{{"q", q}, {"N", w.window.N}, {"b", w.window.b}, {"M", w.M}, {"count_A", w.count_A}, {"fraction", w.fraction}});
    }
  }
  const double mean = total / static_cast<double>(count);
  o.require(unsound == 0, std::to_string(unsound) + " unsound eligible entries");
  o.require(mean >= kDensityFloor, "aggregate mean fraction");
  o.report = json{{"windows", windows}, {"mean", mean}, {"flagged", flagged}};
  o.note(std::to_string(count) + " windows, " + std::to_string(eligible) + " eligible n re-verified; mean fraction " + fmt(mean, "%.4f") +
         " (floor 0.54); " + std::to_string(flagged.size()) + " windows below floor" +
         (flagged.empty() ? "" : " (flagged: " + flagged.front() + (flagged.size() > 1 ? ", ..." : "") + ")"));
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  const auto f = PeriodicFunction::parse("1");
  FactorCache cache;
  const auto prof = ConstructionProfile::desk(1);
  const auto rep = run_construction<Real50>(f, sqrt2m1(), prof, kDeskStages, &cache, g_threads);
  o.require(rep.sigma.holds, "sigma certificate");
  o.require(!rep.halted, "construction halted: " + rep.halted.value_or(""));
  o.require(rep.stages.size() == static_cast<std::size_t>(kDeskStages), "stage count");

  // Sigma certificate re-checked with a direct head sum and the oracle tail.
  double head = 0, tail = 0;
  {
    const double s = static_cast<double>(rep.sigma.sigma), a = sqrt2m1().value();
    for (u64 n = 0; n <= prof.N1; ++n) head += std::pow(n + a, -s);
    tail = oracle::hurwitz({s, 0}, double(prof.N1) + 1 + a).real();
    o.require(head < 0.01 * tail * (1 + 1e-9), "sigma certificate against direct sums");
  }

  std::size_t assigned = 0, bad_stage = 0;
  json stages = json::array();
  for (const auto& s : rep.stages) {
    bool ok = s.all_ok && s.total_abs < s.total_rhs;
    for (const auto& c : s.classes) ok = ok && c.bound_ok && c.induction_ok;
    bad_stage += !ok;
    assigned += s.case2 + s.case3;
    stages.push_back(json{{"j", s.j}, {"N_next", s.N_next}, {"total_abs", decimal(s.total_abs, 25)}, {"total_rhs", decimal(s.total_rhs, 25)}});
  }
  o.require(bad_stage == 0, std::to_string(bad_stage) + " stages failed the induction or per-class bound");
  o.require(assigned == rep.phi.size(), "write-once bookkeeping");
  Real50 worst_unit = 0;
  for (const auto& [k, e] : rep.phi.entries()) worst_unit = std::max(worst_unit, abs(detail::cabs(e.phase) - 1));
  o.require(worst_unit < Real50(kUnimodularTol), "unimodularity");

  // From-scratch recomputation: plain loop, fresh factorizations, phases from the log.
  const auto a = sqrt2m1();
  const Real50 alpha = a.value50();
  std::complex<Real50> direct(Real50(0), Real50(0));
  for (u64 n = 0; n <= rep.N_final; ++n) {
    std::complex<Real50> ph(Real50(1), Real50(0));
    const u64 norm = oracle::norm_sqrt2(static_cast<i64>(n));
    for (const auto& [p, e] : oracle::trial_factor(norm)) {
      if (p == 2) continue;
      for (int i = 0; i < e; ++i) ph *= rep.phi.get({p, n % p});
    }
    direct += ph * boost::multiprecision::pow(Real50(n) + alpha, -rep.sigma.sigma);
  }
  const Real50 diff = detail::cabs(direct - rep.final_sum);
  o.require(diff < Real50(kRecomputeTol), "recomputation");

  const auto canon = canonical_stage_check(sqrt2m1(), 1, &cache);
  const std::size_t A0 = canon.classes.at(0).count_A;
  o.require(canon.passed, "canonical first window |A(0)| >= 5");

  o.report = json{{"sigma", decimal(rep.sigma.sigma, 30)}, {"stages", stages}, {"phi", rep.phi.size()},
                  {"final_sum_abs", decimal(detail::cabs(rep.final_sum), 30)}, {"canonical_A0", A0}};
  o.note("sigma = " + decimal(rep.sigma.sigma, 10) + " (head/tail " + fmt(head / tail) + "); " + std::to_string(rep.stages.size()) + " stages certified, N " +
         std::to_string(prof.N1) + " -> " + std::to_string(rep.N_final) + "; " + std::to_string(rep.phi.size()) +
         " phases write-once, max ||phi|-1| " + fmt(static_cast<double>(worst_unit)) + "; recompute diff " +
         fmt(static_cast<double>(diff)) + "; canonical |A(0)| = " + std::to_string(A0) + " of " + std::to_string(canon.M1) + " (need 5)");
  return o;
}

// ---------------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  const auto F = f_evaluator(PeriodicFunction::parse("1,-2"), 1.0);
  ZeroSearchOptions zo;
  zo.threads = g_threads;
  const auto res = zero_search(F, {1.3, 1.9, 0, 30}, 4, 16, zo);
  o.require(res.zeros.size() == 4, "expected 4 zeros, found " + std::to_string(res.zeros.size()));
  double ds = 0, dt = 0;
  for (std::size_t k = 0; k < res.zeros.size() && k < 4; ++k) {
    ds = std::max(ds, std::abs(res.zeros[k].z.real() - std::log2(3.0)));
    dt = std::max(dt, std::abs(res.zeros[k].z.imag() - 2 * std::numbers::pi * double(k) / std::log(2.0)));
  }
  o.require(ds < kZeroSigmaTol && dt < kZeroTTol, "zero locations");

  const auto zeta = f_evaluator(PeriodicFunction::parse("1"), 1.0);
  const int wz = winding_number(zeta, {1.2, 2, 0, 30}).winding;
  o.require(wz == 0, "zeta winding");

  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> rad(0.01, 10), u(0, 1), ang(0, 2 * std::numbers::pi);
  double worst = 0;
  std::size_t rejected = 0, infeasible = 0;
  for (int i = 0; i < kBohrInstances; ++i) {
    const int k = 2 + static_cast<int>(rng() % 11);
    std::vector<double> r(static_cast<std::size_t>(k));
    double sum = 0, mx = 0;
    for (auto& x : r) {
      x = rad(rng);
      sum += x;
      mx = std::max(mx, x);
    }
    const double inner = std::max(0.0, 2 * mx - sum);
    const double rho = inner + (sum - inner) * u(rng), phi = ang(rng);
    const double zr = rho * std::cos(phi), zi = rho * std::sin(phi);
    const auto th = bohr_solve<double>(r, {zr, zi});
    long double re = -zr, im = -zi;
    for (std::size_t j = 0; j < r.size(); ++j) {
      re += r[j] * std::cos(static_cast<long double>(th[j]));
      im += r[j] * std::sin(static_cast<long double>(th[j]));
    }
    worst = std::max(worst, static_cast<double>(std::hypot(re, im)) / sum);
    // an infeasible target for the same radii
    const double bad = rng() % 2 && inner > 1e-6 * sum ? inner * 0.9 * u(rng) : sum * (1.001 + u(rng));
    ++infeasible;
    try {
      bohr_solve<double>(r, {bad * std::cos(phi), bad * std::sin(phi)});
    } catch (const error& e) {
      rejected += e.kind() == errc::unreachable;
    }
  }
  o.require(worst < kBohrRelTol, "Bohr residual");
  o.require(rejected == infeasible, "infeasible targets rejected");

  json zs = json::array();
  for (const auto& z : res.zeros) zs.push_back(json{{"sigma", z.z.real()}, {"t", z.z.imag()}});
  o.report = json{{"zeros", zs}, {"zeta_winding", wz}, {"bohr_worst", worst}, {"bohr_rejected", rejected}};
  o.note(std::to_string(res.zeros.size()) + " zeros, max |dsigma| " + fmt(ds) + ", max |dt| " + fmt(dt) + "; zeta winding " +
         std::to_string(wz) + "; Bohr worst relative residual " + fmt(worst) + " over " + std::to_string(kBohrInstances) +
         " instances, " + std::to_string(rejected) + "/" + std::to_string(infeasible) + " infeasible rejected");
  return o;
}

// ---------------------------------------------------------------------------

using Clock = std::chrono::steady_clock;

struct Timed {
  Outcome outcome;
  double seconds = 0;
};

Timed timed(Outcome (*fn)()) {
  const auto t0 = Clock::now();
  Timed t;
  try {
    t.outcome = fn();
  } catch (const std::exception& e) {
    t.outcome.pass = false;
    t.outcome.detail = std::string("exception: ") + e.what();
  }
  t.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return t;
}

bool line(int id, const char* name, Timed t, double budget) {
  const bool in_time = t.seconds < budget;
  const bool ok = t.outcome.pass && in_time;
  std::printf("criterion %d %-28s %s  [%.2f s / %.0f s budget] %s%s\n", id, name, ok ? "PASS" : "FAIL", t.seconds, budget,
              t.outcome.detail.c_str(), in_time ? "" : "; FAILED runtime budget");
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  using Fn = Outcome (*)();
  struct Entry {
    const char* name;
    Fn fn;
    double budget;
  };
  const Entry entries[] = {
      {"evaluation identities", criterion1, kBudget1}, {"structure decisions", criterion2, kBudget2},
      {"ideal arithmetic", criterion3, kBudget3},      {"density at canonical scale", criterion4, kBudget4},
      {"construction contraction", criterion5, kBudget5}, {"zero location", criterion6, kBudget6},
  };
  bool all = true;
  std::vector<json> first;
  for (int i = 0; i < 6; ++i) {
    auto t = timed(entries[i].fn);
    all = line(i + 1, entries[i].name, t, entries[i].budget) && all;
    first.push_back(t.outcome.report);
  }

  // Criterion 7: criteria 2-6 again, same seed, one thread; reports must match exactly.
  const auto t0 = Clock::now();
  g_threads = 1;
  Outcome det;
  std::vector<int> differing;
  for (int i = 1; i < 6; ++i) {
    auto again = timed(entries[i].fn);
    if (again.outcome.report.dump() != first[static_cast<std::size_t>(i)].dump()) differing.push_back(i + 1);
  }
  det.require(differing.empty(), "reports differ for criteria " + json(differing).dump());
  det.note("criteria 2-6 re-run single-threaded with seed " + std::to_string(kSeed) + ": reports " + (differing.empty() ? "byte-identical" : "differ"));
  Timed t7{det, std::chrono::duration<double>(Clock::now() - t0).count()};
  all = line(7, "determinism", t7, kBudget2 + kBudget3 + kBudget4 + kBudget5 + kBudget6) && all;

  std::printf("%s\n", all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
