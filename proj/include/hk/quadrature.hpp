#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature for scalar and
// vector-valued integrands. Vector integrands use Eigen::VectorXd and the
// max-norm for error control.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hk/errors.hpp"

namespace hk::quad {

struct Options {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_depth = 30;
};

template <class T> struct Result {
  T value;
  double error = 0.0;
  int evaluations = 0;
};

inline double norm_inf(double v) { return std::abs(v); }
inline double norm_inf(const Eigen::VectorXd &v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

namespace detail {

// Kronrod abscissae (descending, last is the centre) and weights; the Gauss
// 7-point rule uses the odd-indexed abscissae.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T> struct Segment {
  double a, b;
  int depth;
  T value;
  double error;
  double magnitude; // integral of |f|, for the round-off floor
};

template <class F, class T>
Segment<T> gk15(F &f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T fc = f(c);
  T kron = fc * kWgk[7];
  T gauss = fc * kWg[3];
  double mag = kWgk[7] * norm_inf(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    T fl = f(c - dx), fr = f(c + dx);
    mag += kWgk[j] * (norm_inf(fl) + norm_inf(fr));
    T fsum = fl + fr;
    kron = kron + fsum * kWgk[j];
    if (j % 2 == 1)
      gauss = gauss + fsum * kWg[j / 2];
  }
  kron = kron * h;
  gauss = gauss * h;
  const double err = norm_inf(T(kron - gauss));
  return {a, b, depth, std::move(kron), err, mag * std::abs(h)};
}

} // namespace detail

//! Integrate f over [a, b]. Throws ConvergenceError when the worst segment
//! reaches `max_depth` bisections without meeting the tolerance.
template <class F>
auto integrate(F &&f, double a, double b, const Options &opt = {})
    -> Result<std::decay_t<std::invoke_result_t<F &, double>>> {
  using T = std::decay_t<std::invoke_result_t<F &, double>>;
  if (!(b > a)) {
    T zero = f(0.5 * (a + b)) * 0.0;
    return {zero, 0.0, 1};
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double rel = std::max(opt.rel_tol, 50.0 * eps);

  std::vector<detail::Segment<T>> segs;
  segs.push_back(detail::gk15<F, T>(f, a, b, 0));
  int evals = 15;

  for (;;) {
    T total = segs.front().value * 0.0;
    double err = 0.0, mag = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total = total + segs[i].value;
      err += segs[i].error;
      mag += segs[i].magnitude;
      if (segs[i].error > segs[worst].error)
        worst = i;
    }
    // Below 50 eps * int |f| the estimate is round-off; cancelling
    // integrands would otherwise be bisected to max_depth everywhere.
    const double target = std::max(
        {opt.abs_tol, rel * norm_inf(total), 50.0 * eps * mag});
    if (err <= target || err == 0.0)
      return {std::move(total), err, evals};
    if (segs[worst].depth >= opt.max_depth)
      throw ConvergenceError("adaptive quadrature on [" + std::to_string(a) +
                             ", " + std::to_string(b) +
                             "] exhausted depth; error estimate " +
                             std::to_string(err));
    const auto w = segs[worst];
    const double mid = 0.5 * (w.a + w.b);
    segs[worst] = detail::gk15<F, T>(f, w.a, mid, w.depth + 1);
    segs.push_back(detail::gk15<F, T>(f, mid, w.b, w.depth + 1));
    evals += 30;
  }
}

//! Integrate f over [a, +inf) with the map t -> a + (u/(1-u))^2, which also
//! absorbs an inverse square-root singularity at the lower endpoint.
template <class F>
auto integrate_semi_infinite(F &&f, double a, const Options &opt = {}) {
  auto mapped = [&f, a](double u) {
    using T = std::decay_t<std::invoke_result_t<F &, double>>;
    // Gauss-Kronrod nodes are interior, so u < 1 and the map is finite.
    const double r = u / (1.0 - u);
    const double jac = 2.0 * r / ((1.0 - u) * (1.0 - u));
    return T(f(a + r * r) * jac);
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

} // namespace hk::quad
