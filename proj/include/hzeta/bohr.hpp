#pragma once

// Phases theta_i with sum r_i e^{i theta_i} = z. The reachable set of such sums
// is the closed annulus max(0, 2 max r - sum r) <= |z| <= sum r.
//
// Links are placed longest first. Each link is turned so the remaining
// distance d lands in the middle of the interval reachable by the links still
// to come, intersected with what the current link allows (law of cosines).
// The final two links close by the triangle formula.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hzeta/errors.hpp"

namespace hzeta {

template <class R>
struct BohrTarget {
  R re = 0, im = 0;
};

template <class R>
struct BohrAnnulus {
  R inner = 0, outer = 0;
};

template <class R>
BohrAnnulus<R> bohr_annulus(const std::vector<R>& radii) {
  R sum = 0, mx = 0;
  for (const auto& r : radii) {
    sum += r;
    if (r > mx) mx = r;
  }
  R in = R(2) * mx - sum;
  if (in < 0) in = 0;
  return {in, sum};
}

/// Phases in [0, 2 pi), in the order of `radii`.
template <class R>
std::vector<R> bohr_solve(const std::vector<R>& radii, BohrTarget<R> z) {
  using std::abs, std::acos, std::atan2, std::cos, std::sin, std::sqrt;
  const std::size_t k = radii.size();
  if (k == 0) throw error(errc::invalid_argument, "no radii");
  for (const auto& r : radii)
    if (!(r > 0)) throw error(errc::invalid_argument, "radii must be positive");
  const auto ann = bohr_annulus(radii);
  const R slack = R(1e-12) * ann.outer;
  const R zabs = sqrt(z.re * z.re + z.im * z.im);
  if (zabs > ann.outer + slack || zabs < ann.inner - slack)
    throw error(errc::unreachable, "target outside the reachable annulus");

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
  std::vector<R> suffix(k + 1, R(0));
  for (std::size_t i = k; i-- > 0;) suffix[i] = suffix[i + 1] + radii[order[i]];

  const R pi = acos(R(-1));
  std::vector<R> theta(k, R(0));
  R wr = z.re, wi = z.im;  // remaining target
  auto clamp1 = [](R c) { return c > 1 ? R(1) : (c < -1 ? R(-1) : c); };
  auto place = [&](std::size_t idx, R ang) {
    theta[idx] = ang;
    wr -= radii[idx] * cos(ang);
    wi -= radii[idx] * sin(ang);
  };

  if (k == 1) {
    place(order[0], atan2(z.im, z.re));
  } else {
    for (std::size_t i = 0; i + 2 < k; ++i) {
      const R r = radii[order[i]];
      const R w = sqrt(wr * wr + wi * wi);
      R in = R(2) * radii[order[i + 1]] - suffix[i + 1];
      if (in < 0) in = 0;
      const R out = suffix[i + 1];
      const R lo = std::max(in, abs(w - r)), hi = std::min(out, w + r);
      const R d = hi >= lo ? (lo + hi) / 2 : (lo < out ? lo : hi);
      R ang = atan2(wi, wr);
      if (w > 0) ang += acos(clamp1((w * w + r * r - d * d) / (R(2) * w * r)));
      place(order[i], ang);
    }
    const std::size_t i1 = order[k - 2], i2 = order[k - 1];
    const R r1 = radii[i1], r2 = radii[i2];
    const R w = sqrt(wr * wr + wi * wi);
    R ang = atan2(wi, wr);
    if (w > 0) ang += acos(clamp1((w * w + r1 * r1 - r2 * r2) / (R(2) * w * r1)));
    place(i1, ang);
    place(i2, atan2(wi, wr));
  }
  for (auto& t : theta) {
    while (t < 0) t += 2 * pi;
    while (t >= 2 * pi) t -= 2 * pi;
  }
  return theta;
}

/// |sum r_i e^{i theta_i} - z|
template <class R>
R bohr_residual(const std::vector<R>& radii, const std::vector<R>& theta, BohrTarget<R> z) {
  using std::cos, std::sin, std::sqrt;
  R re = -z.re, im = -z.im;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    re += radii[i] * cos(theta[i]);
    im += radii[i] * sin(theta[i]);
  }
  return sqrt(re * re + im * im);
}

}  // namespace hzeta
