#pragma once

// Zero counting by the argument principle on rectangle boundaries, and a grid
// search that isolates and refines zeros found inside.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "hzeta/errors.hpp"
#include "hzeta/parallel.hpp"

namespace hzeta {

using ComplexFunction = std::function<std::complex<double>(std::complex<double>)>;

struct Rectangle {
  double sigma_min = 0, sigma_max = 0, t_min = 0, t_max = 0;

  double width() const { return sigma_max - sigma_min; }
  double height() const { return t_max - t_min; }
  double diameter() const { return std::hypot(width(), height()); }
  std::complex<double> center() const { return {(sigma_min + sigma_max) / 2, (t_min + t_max) / 2}; }
  bool contains(std::complex<double> z, double margin = 0) const {
    return z.real() >= sigma_min - margin && z.real() <= sigma_max + margin && z.imag() >= t_min - margin &&
           z.imag() <= t_max + margin;
  }
  void validate() const {
    if (!(sigma_max > sigma_min && t_max > t_min) || !std::isfinite(diameter()))
      throw error(errc::invalid_argument, "rectangle must have positive finite area");
  }
};

struct RefinedZero {
  std::complex<double> z;
  double residual = 0;
  int multiplicity = 1;
  bool converged = false;
};

struct WindingResult {
  Rectangle rect;
  int winding = 0;
  double min_boundary_modulus = 0;
  std::size_t samples = 0;
  std::vector<RefinedZero> refined_zeros;
};

struct WindingOptions {
  double eps_min = 1e-12;  // relative to the boundary maximum of |F|
  int max_depth = 20;      // subdivision levels per edge segment
  double samples_per_unit = 8;
  int min_samples_per_edge = 16;
};

namespace detail {

struct BoundaryTrack {
  const ComplexFunction* F;
  const WindingOptions* opt;
  std::size_t samples = 0;
  double min_mod = std::numeric_limits<double>::infinity();
  double max_mod = 0;

  std::complex<double> eval(std::complex<double> z) {
    auto v = (*F)(z);
    ++samples;
    double m = std::abs(v);
    if (!std::isfinite(m)) throw error(errc::precondition_violated, "series not evaluatable on boundary");
    min_mod = std::min(min_mod, m);
    max_mod = std::max(max_mod, m);
    if (m == 0) throw error(errc::boundary_too_close_to_zero, "F vanishes on the boundary");
    return v;
  }

  double segment(std::complex<double> z0, std::complex<double> f0, std::complex<double> z1, std::complex<double> f1,
                 int depth) {
    double d = std::arg(f1 / f0);
    if (std::abs(d) < std::numbers::pi / 4) return d;
    if (depth >= opt->max_depth) {
      if (std::abs(d) < std::numbers::pi / 2) return d;
      throw error(errc::boundary_too_close_to_zero, "argument jump persists after maximal subdivision");
    }
    auto zm = 0.5 * (z0 + z1);
    auto fm = eval(zm);
    return segment(z0, f0, zm, fm, depth + 1) + segment(zm, fm, z1, f1, depth + 1);
  }

  double edge(std::complex<double> a, std::complex<double> b) {
    const int n = std::max(opt->min_samples_per_edge, static_cast<int>(std::ceil(std::abs(b - a) * opt->samples_per_unit)));
    double total = 0;
    auto z0 = a;
    auto f0 = eval(a);
    for (int i = 1; i <= n; ++i) {
      auto z1 = a + (b - a) * (static_cast<double>(i) / n);
      auto f1 = eval(z1);
      total += segment(z0, f0, z1, f1, 0);
      z0 = z1;
      f0 = f1;
    }
    return total;
  }
};

}  // namespace detail

/// Number of zeros of F inside `rect` from the boundary argument change.
inline WindingResult winding_number(const ComplexFunction& F, const Rectangle& rect, const WindingOptions& opt = {}) {
  rect.validate();
  detail::BoundaryTrack tr{&F, &opt};
  const std::complex<double> c00(rect.sigma_min, rect.t_min), c10(rect.sigma_max, rect.t_min),
      c11(rect.sigma_max, rect.t_max), c01(rect.sigma_min, rect.t_max);
  double total = tr.edge(c00, c10) + tr.edge(c10, c11) + tr.edge(c11, c01) + tr.edge(c01, c00);
  if (tr.min_mod < opt.eps_min * tr.max_mod)
    throw error(errc::boundary_too_close_to_zero, "|F| on the boundary fell below eps_min relative to its maximum");
  const double turns = total / (2 * std::numbers::pi);
  const double w = std::round(turns);
  if (std::abs(total - 2 * std::numbers::pi * w) > 1e-6)
    throw error(errc::precision_exhausted, "boundary argument change is not a multiple of 2 pi");
  WindingResult r;
  r.rect = rect;
  r.winding = static_cast<int>(w);
  r.min_boundary_modulus = tr.min_mod;
  r.samples = tr.samples;
  return r;
}

struct ZeroSearchOptions {
  unsigned threads = 1;
  WindingOptions winding;
  double refine_size = 1e-2;     // isolate winding-1 cells down to this diameter before iterating
  double residual_tol = 1e-8;
  bool require_right_half = true;  // sigma_min > 1
  int max_attempts = 4;
};

struct ZeroSearchResult {
  Rectangle region;       // region actually scanned (possibly nudged outward)
  int attempts = 1;
  std::vector<WindingResult> cells;
  std::vector<RefinedZero> zeros;  // deduplicated, sorted by (t, sigma)
};

namespace detail {

inline RefinedZero secant_refine(const ComplexFunction& F, const Rectangle& cell, int multiplicity) {
  std::complex<double> z0 = cell.center();
  std::complex<double> z1 = z0 + std::complex<double>(1e-3, 1e-3) * cell.diameter();
  auto f0 = F(z0), f1 = F(z1);
  for (int it = 0; it < 80; ++it) {
    if (f1 == f0 || f1 == std::complex<double>(0, 0)) break;
    auto z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
    if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag())) break;
    z0 = z1;
    f0 = f1;
    z1 = z2;
    f1 = F(z1);
    if (std::abs(z1 - z0) < 1e-15 * std::max(1.0, std::abs(z1))) break;
  }
  RefinedZero rz;
  rz.z = z1;
  rz.residual = std::abs(f1);
  rz.multiplicity = multiplicity;
  rz.converged = true;
  return rz;
}

inline void isolate(const ComplexFunction& F, const Rectangle& cell, int winding, const ZeroSearchOptions& opt,
                    int depth, std::vector<RefinedZero>& out) {
  if (winding <= 0) return;
  if ((winding == 1 && cell.diameter() <= opt.refine_size) || cell.diameter() < 1e-9 || depth > 60) {
    auto rz = secant_refine(F, cell, winding);
    rz.converged = rz.residual < opt.residual_tol && cell.contains(rz.z, 1e-9);
    out.push_back(rz);
    return;
  }
  const bool split_sigma = cell.width() >= cell.height();
  for (double frac : {0.5, 0.531, 0.469, 0.587, 0.413}) {
    Rectangle a = cell, b = cell;
    if (split_sigma) {
      double m = cell.sigma_min + frac * cell.width();
      a.sigma_max = m;
      b.sigma_min = m;
    } else {
      double m = cell.t_min + frac * cell.height();
      a.t_max = m;
      b.t_min = m;
    }
    try {
      auto wa = winding_number(F, a, opt.winding);
      auto wb = winding_number(F, b, opt.winding);
      if (wa.winding + wb.winding != winding) continue;
      isolate(F, a, wa.winding, opt, depth + 1, out);
      isolate(F, b, wb.winding, opt, depth + 1, out);
      return;
    } catch (const error& e) {
      if (e.kind() != errc::boundary_too_close_to_zero) throw;
    }
  }
  // no clean split found: iterate from the cell itself
  auto rz = secant_refine(F, cell, winding);
  rz.converged = rz.residual < opt.residual_tol && cell.contains(rz.z, 1e-9);
  out.push_back(rz);
}

}  // namespace detail

/// Scans `region` on an n_sigma x n_t grid, then isolates and refines zeros.
/// A zero lying on a grid line makes the boundary check fail; the grid is then
/// nudged (outer edges outward, interior lines sideways) and rescanned.
inline ZeroSearchResult zero_search(const ComplexFunction& F, const Rectangle& region, int n_sigma, int n_t,
                                    const ZeroSearchOptions& opt = {}) {
  region.validate();
  if (opt.require_right_half && !(region.sigma_min > 1))
    throw error(errc::invalid_argument, "zero search region must satisfy sigma_min > 1");
  if (n_sigma < 1 || n_t < 1) throw error(errc::invalid_argument, "grid dimensions must be positive");

  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    const double cw = region.width() / n_sigma, ch = region.height() / n_t;
    const double nudge = attempt * 1e-3 * std::min(cw, ch);
    Rectangle used = region;
    used.sigma_max += nudge;
    used.t_min -= nudge;
    used.t_max += nudge;
    if (opt.require_right_half) used.sigma_min = std::max(region.sigma_min - nudge, 0.5 * (1 + region.sigma_min));
    else used.sigma_min -= nudge;

    auto line = [&](double lo, double hi, int k, int n) {
      if (k == 0) return lo;
      if (k == n) return hi;
      return lo + (hi - lo) * k / n + 0.37 * nudge;
    };
    std::vector<Rectangle> rects;
    for (int j = 0; j < n_t; ++j)
      for (int i = 0; i < n_sigma; ++i)
        rects.push_back({line(used.sigma_min, used.sigma_max, i, n_sigma), line(used.sigma_min, used.sigma_max, i + 1, n_sigma),
                         line(used.t_min, used.t_max, j, n_t), line(used.t_min, used.t_max, j + 1, n_t)});

    ZeroSearchResult res;
    res.region = used;
    res.attempts = attempt + 1;
    res.cells.resize(rects.size());
    try {
      parallel_for(rects.size(), opt.threads, [&](std::size_t i) {
        res.cells[i] = winding_number(F, rects[i], opt.winding);
        std::vector<RefinedZero> found;
        detail::isolate(F, rects[i], res.cells[i].winding, opt, 0, found);
        res.cells[i].refined_zeros = std::move(found);
      });
    } catch (const error& e) {
      if (e.kind() == errc::boundary_too_close_to_zero && attempt + 1 < opt.max_attempts) continue;
      throw;
    }
    for (const auto& c : res.cells)
      for (const auto& z : c.refined_zeros) {
        bool dup = false;
        for (const auto& y : res.zeros)
          if (std::abs(y.z - z.z) < 1e-7) dup = true;
        if (!dup) res.zeros.push_back(z);
      }
    std::sort(res.zeros.begin(), res.zeros.end(), [](const RefinedZero& a, const RefinedZero& b) {
      if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
      return a.z.real() < b.z.real();
    });
    return res;
  }
  throw error(errc::boundary_too_close_to_zero, "zero search grid could not avoid zeros on cell boundaries");
}

}  // namespace hzeta
