#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_N): elements are rational
// coefficient vectors in the power basis 1, z, ..., z^{phi(N)-1}, z = e(1/N).

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "hzeta/errors.hpp"

namespace hzeta {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace detail {

struct CycloTables {
  int order = 1;
  int degree = 1;
  // reduced[k] = x^k mod Phi_N for 0 <= k < 2N, as integer coefficient rows
  std::vector<std::vector<BigInt>> reduced;
};

inline std::vector<BigInt> cyclotomic_poly(int n) {
  // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, ascending coefficients
  std::vector<BigInt> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    const auto den = cyclotomic_poly(d);  // monic
    const int dd = static_cast<int>(den.size()) - 1;
    const int dn = static_cast<int>(num.size()) - 1;
    std::vector<BigInt> q(dn - dd + 1, 0);
    for (int k = dn; k >= dd; --k) {
      BigInt c = num[k];
      q[k - dd] = c;
      for (int j = 0; j <= dd; ++j) num[k - dd + j] -= c * den[j];
    }
    num = std::move(q);
  }
  return num;
}

inline const CycloTables& cyclo_tables(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycloTables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[order];
  if (!slot) {
    auto t = std::make_unique<CycloTables>();
    t->order = order;
    auto phi = cyclotomic_poly(order);
    t->degree = static_cast<int>(phi.size()) - 1;
    const int d = t->degree;
    std::vector<BigInt> cur(d, 0);
    if (d > 0) cur[0] = 1;
    for (int k = 0; k < 2 * order; ++k) {
      t->reduced.push_back(cur);
      // multiply by x and reduce with the monic Phi_N
      BigInt top = d > 0 ? cur[d - 1] : BigInt(0);
      for (int j = d - 1; j > 0; --j) cur[j] = cur[j - 1] - top * phi[j];
      if (d > 0) cur[0] = -top * phi[0];
    }
    slot = std::move(t);
  }
  return *slot;
}

}  // namespace detail

class Cyclo {
 public:
  Cyclo() : Cyclo(1) {}
  explicit Cyclo(int order) : t_(&detail::cyclo_tables(order)), order_(order), c_(t_->degree, Rational(0)) {}
  Cyclo(int order, const Rational& r) : Cyclo(order) { c_[0] = r; }

  /// e(k/N) as an element of Q(zeta_N).
  static Cyclo root_of_unity(int order, long long k) {
    const auto& t = detail::cyclo_tables(order);
    long long kk = ((k % order) + order) % order;
    Cyclo z(order);
    for (int j = 0; j < t.degree; ++j) z.c_[j] = Rational(t.reduced[kk][j]);
    return z;
  }

  int order() const { return order_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (x != 0) return false;
    return true;
  }

  bool is_rational() const {
    for (std::size_t j = 1; j < c_.size(); ++j)
      if (c_[j] != 0) return false;
    return true;
  }

  /// Image in Q(zeta_M) for a multiple M of the current order.
  Cyclo embed(int M) const {
    if (M == order_) return *this;
    if (M % order_ != 0) throw error(errc::invalid_argument, "embedding requires a multiple of the field order");
    const int step = M / order_;
    const auto& t = detail::cyclo_tables(M);
    Cyclo out(M);
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      const auto& row = t.reduced[j * step];
      for (int k = 0; k < t.degree; ++k)
        if (row[k] != 0) out.c_[k] += c_[j] * Rational(row[k]);
    }
    return out;
  }

  Cyclo conj() const {
    const auto& t = *t_;
    Cyclo out(order_);
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      const auto& row = t.reduced[(order_ - static_cast<int>(j)) % order_];
      for (int k = 0; k < t.degree; ++k)
        if (row[k] != 0) out.c_[k] += c_[j] * Rational(row[k]);
    }
    return out;
  }

  Cyclo& operator+=(const Cyclo& o) {
    check(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
    return *this;
  }
  Cyclo& operator-=(const Cyclo& o) {
    check(o);
    for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
    return *this;
  }
  Cyclo& operator*=(const Rational& r) {
    for (auto& x : c_) x *= r;
    return *this;
  }
  Cyclo& operator/=(const Rational& r) {
    for (auto& x : c_) x /= r;
    return *this;
  }

  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }
  friend Cyclo operator-(Cyclo a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Cyclo operator*(Cyclo a, const Rational& r) { return a *= r; }

  friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
    a.check(b);
    const auto& t = *a.t_;
    Cyclo out(a.order_);
    std::vector<Rational> prod(a.c_.size() + b.c_.size(), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
    }
    for (std::size_t k = 0; k < prod.size(); ++k) {
      if (prod[k] == 0) continue;
      const auto& row = t.reduced[k];
      for (int m = 0; m < t.degree; ++m)
        if (row[m] != 0) out.c_[m] += prod[k] * Rational(row[m]);
    }
    return out;
  }

  friend bool operator==(const Cyclo& a, const Cyclo& b) {
    if (a.order_ == b.order_) return a.c_ == b.c_;
    int M = std::lcm(a.order_, b.order_);
    return a.embed(M).c_ == b.embed(M).c_;
  }

  template <class R>
  std::complex<R> to_complex() const {
    using std::cos;
    using std::sin;
    std::complex<R> acc(R(0), R(0));
    const R two_pi = R(2) * boost::math::constants::pi<R>();
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      R val = R(boost::multiprecision::numerator(c_[j])) / R(boost::multiprecision::denominator(c_[j]));
      if (j == 0) {
        acc += std::complex<R>(val, R(0));
      } else {
        R ang = two_pi * R(static_cast<int>(j)) / R(order_);
        acc += std::complex<R>(val * cos(ang), val * sin(ang));
      }
    }
    return acc;
  }

  std::complex<double> to_complex() const { return to_complex<double>(); }

  /// Human-readable exact form: "a+bi" in Q(i), otherwise a sum of c*e(k/N).
  std::string str() const {
    auto rat = [](const Rational& r) { return r.str(); };
    if (is_rational()) return rat(c_[0]);
    if (order_ == 4) {
      std::string s = c_[0] != 0 ? rat(c_[0]) : "";
      const Rational& im = c_[1];
      if (!s.empty() && im > 0) s += "+";
      if (im == 1) s += "i";
      else if (im == -1) s += "-i";
      else s += rat(im) + "i";
      return s;
    }
    std::string s;
    for (std::size_t j = 0; j < c_.size(); ++j) {
      if (c_[j] == 0) continue;
      if (!s.empty() && c_[j] > 0) s += "+";
      if (j == 0) {
        s += rat(c_[j]);
        continue;
      }
      int g = std::gcd(static_cast<int>(j), order_);
      std::string unit = "e(" + std::to_string(j / g) + "/" + std::to_string(order_ / g) + ")";
      if (c_[j] == 1) s += unit;
      else if (c_[j] == -1) s += "-" + unit;
      else s += rat(c_[j]) + "*" + unit;
    }
    return s;
  }

 private:
  void check(const Cyclo& o) const {
    if (o.order_ != order_) throw error(errc::invalid_argument, "cyclotomic field mismatch");
  }

  const detail::CycloTables* t_;
  int order_;
  std::vector<Rational> c_;
};

}  // namespace hzeta
