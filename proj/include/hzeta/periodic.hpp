#pragma once

#include <cctype>
#include <complex>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "hzeta/arith.hpp"
#include "hzeta/cyclotomic.hpp"

namespace hzeta {

/// Exact decimal or fraction literal ("3", "-1/2", "0.125", "2.5e-3") as a rational.
inline Rational parse_rational(std::string_view s) {
  auto bad = [&] { return error(errc::invalid_argument, "bad numeric literal '" + std::string(s) + "'"); };
  if (s.empty()) throw bad();
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    Rational den = parse_rational(s.substr(slash + 1));
    if (den == 0) throw bad();
    return num / den;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  BigInt mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mant = mant * 10 + (c - '0');
      digits = true;
      if (dot) ++scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw bad();
  int exp10 = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    std::string rest(s.substr(i + 1));
    if (rest.empty()) throw bad();
    std::size_t used = 0;
    exp10 = std::stoi(rest, &used);
    if (used != rest.size()) throw bad();
  }
  exp10 -= scale;
  Rational r(mant);
  BigInt p10 = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(exp10)));
  if (exp10 >= 0) r *= Rational(p10);
  else r /= Rational(p10);
  return neg ? Rational(-r) : r;
}

namespace detail {

struct ParsedTerm {
  Rational coef;
  long long num = 0;  // unit e(num/den); den = 1 means a plain rational
  long long den = 1;
};

// value := term (('+'|'-') term)* ; term := [rational]['*'](i | e(a/b))?
inline std::vector<ParsedTerm> parse_value_terms(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  auto bad = [&] { return error(errc::invalid_argument, "bad coefficient '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  std::vector<ParsedTerm> terms;
  std::size_t i = 0;
  while (i < s.size()) {
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
    std::size_t start = i;
    // numeric part: digits, '.', '/', exponent
    while (i < s.size()) {
      char c = s[i];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/') {
        ++i;
      } else if ((c == 'e' || c == 'E') && i > start && i + 1 < s.size() &&
                 (std::isdigit(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '-' || s[i + 1] == '+') &&
                 s[i + 1] != '(') {
        i += 2;
      } else {
        break;
      }
    }
    ParsedTerm t;
    t.coef = i > start ? parse_rational(s.substr(start, i - start)) : Rational(1);
    if (i < s.size() && s[i] == '*') ++i;
    if (i < s.size() && s[i] == 'i') {
      t.num = 1;
      t.den = 4;
      ++i;
    } else if (i + 1 < s.size() && s[i] == 'e' && s[i + 1] == '(') {
      auto close = s.find(')', i);
      if (close == std::string::npos) throw bad();
      std::string inner = s.substr(i + 2, close - i - 2);
      auto slash = inner.find('/');
      if (slash == std::string::npos) throw bad();
      t.num = std::stoll(inner.substr(0, slash));
      t.den = std::stoll(inner.substr(slash + 1));
      if (t.den <= 0) throw bad();
      i = close + 1;
    } else if (i == start) {
      throw bad();
    }
    if (neg) t.coef = -t.coef;
    terms.push_back(t);
    if (i < s.size() && s[i] != '+' && s[i] != '-') throw bad();
  }
  return terms;
}

}  // namespace detail

/// Periodic coefficients f(n), n mod q, with exact cyclotomic values.
class PeriodicFunction {
 public:
  PeriodicFunction() = default;

  /// Values must share one cyclotomic field; the zero function is rejected.
  explicit PeriodicFunction(std::vector<Cyclo> values, bool allow_zero = false) : values_(std::move(values)) {
    if (values_.empty()) throw error(errc::invalid_argument, "period must be >= 1");
    int N = 1;
    for (const auto& v : values_) N = std::lcm(N, v.order());
    for (auto& v : values_) v = v.embed(N);
    field_order_ = N;
    bool nonzero = false;
    for (const auto& v : values_) {
      numeric_.push_back(v.to_complex());
      nonzero = nonzero || !v.is_zero();
    }
    if (!nonzero && !allow_zero) throw error(errc::invalid_argument, "coefficient function is identically zero");
  }

  /// Parses a comma-separated value list. A single value with q > 1 is repeated.
  static PeriodicFunction parse(std::string_view csv, std::size_t q = 0) {
    std::vector<std::vector<detail::ParsedTerm>> parsed;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
      auto comma = csv.find(',', pos);
      if (comma == std::string_view::npos) comma = csv.size();
      parsed.push_back(detail::parse_value_terms(csv.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    int N = 1;
    for (const auto& terms : parsed)
      for (const auto& t : terms) N = std::lcm<long long>(N, t.den);
    std::vector<Cyclo> vals;
    for (const auto& terms : parsed) {
      Cyclo v(N);
      for (const auto& t : terms) v += Cyclo::root_of_unity(N, t.num * (N / t.den)) * t.coef;
      vals.push_back(std::move(v));
    }
    if (q != 0 && vals.size() != q) {
      if (vals.size() != 1) {
        throw error(errc::invalid_argument, "got " + std::to_string(vals.size()) + " values for period " + std::to_string(q));
      }
      vals.assign(q, vals.front());
    }
    return PeriodicFunction(std::move(vals));
  }

  std::size_t period() const { return values_.size(); }
  int field_order() const { return field_order_; }

  std::size_t slot(i64 n) const {
    i64 q = static_cast<i64>(values_.size());
    i64 r = n % q;
    return static_cast<std::size_t>(r < 0 ? r + q : r);
  }

  const Cyclo& exact(i64 n) const { return values_[slot(n)]; }
  std::complex<double> operator()(i64 n) const { return numeric_[slot(n)]; }

  template <class R>
  std::complex<R> value(i64 n) const {
    if constexpr (std::is_same_v<R, double>) return numeric_[slot(n)];
    else return values_[slot(n)].template to_complex<R>();
  }

  const std::vector<Cyclo>& values() const { return values_; }

  Cyclo exact_sum() const {
    Cyclo s(field_order_);
    for (const auto& v : values_) s += v;
    return s;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (i) s += ",";
      s += values_[i].str();
    }
    return s;
  }

 private:
  std::vector<Cyclo> values_;
  std::vector<std::complex<double>> numeric_;
  int field_order_ = 1;
};

}  // namespace hzeta
