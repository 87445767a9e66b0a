#pragma once

#include <complex>
#include <map>
#include <string>

#include "hzeta/characters.hpp"
#include "hzeta/cyclotomic.hpp"
#include "hzeta/zeta.hpp"

namespace hzeta {

/// Finite Dirichlet polynomial sum_{n in support} a(n) n^{-s} with exact coefficients.
class DirichletPolynomial {
 public:
  DirichletPolynomial() = default;
  explicit DirichletPolynomial(int field_order) : field_order_(field_order) {}

  int field_order() const { return field_order_; }
  const std::map<u64, Cyclo>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  void add(u64 n, const Cyclo& c) {
    if (n == 0) throw error(errc::invalid_argument, "Dirichlet polynomial support starts at 1");
    Cyclo v = c.embed(std::lcm(field_order_, c.order()));
    if (v.order() != field_order_) rebase(v.order());
    auto it = coeffs_.find(n);
    if (it == coeffs_.end()) {
      if (!v.is_zero()) coeffs_.emplace(n, v.embed(field_order_));
    } else {
      it->second += v.embed(field_order_);
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }

  void rebase(int order) {
    int M = std::lcm(field_order_, order);
    for (auto& [n, c] : coeffs_) c = c.embed(M);
    field_order_ = M;
  }

  std::complex<double> operator()(std::complex<double> s) const {
    std::complex<double> acc = 0;
    for (const auto& [n, c] : coeffs_) acc += c.to_complex() * detail::pow_neg(static_cast<double>(n), s);
    return acc;
  }

  /// "a(1) + a(2)*2^-s + ..." with exact coefficients.
  std::string str() const {
    std::string s;
    for (const auto& [n, c] : coeffs_) {
      if (!s.empty()) s += " + ";
      s += "(" + c.str() + ")";
      if (n != 1) s += "*" + std::to_string(n) + "^-s";
    }
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const DirichletPolynomial& a, const DirichletPolynomial& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    for (const auto& [n, c] : a.coeffs_) {
      auto it = b.coeffs_.find(n);
      if (it == b.coeffs_.end() || !(it->second == c)) return false;
    }
    return true;
  }

 private:
  int field_order_ = 1;
  std::map<u64, Cyclo> coeffs_;
};

/// L(s, chi) = k^{-s} sum_{r=1}^{k} chi(r) zeta(s, r/k).
inline EvalResult dirichlet_l(std::complex<double> s, const DirichletCharacter& chi, double tol = 1e-10) {
  const u64 k = chi.modulus;
  std::complex<double> acc = 0;
  double bound = 0;
  for (u64 r = 1; r <= k; ++r) {
    auto c = chi(static_cast<i64>(r));
    if (c == std::complex<double>(0, 0)) continue;
    auto z = hurwitz_zeta<double>(s, static_cast<double>(r) / static_cast<double>(k), tol / static_cast<double>(k));
    acc += c * z.value;
    bound += z.abs_error_bound;
  }
  auto kp = detail::pow_neg(static_cast<double>(k), s);
  return {kp * acc, std::abs(kp) * bound, false};
}

}  // namespace hzeta
