#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace hzeta {

/// 50 significant decimal digits; used for the construction inequalities.
using Real50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>, boost::multiprecision::et_off>;

struct PrecisionProfile {
  int working_digits = 15;
  double target_tolerance = 1e-10;
};

template <class R>
constexpr int digits_of() {
  return std::numeric_limits<R>::digits10;
}

}  // namespace hzeta
