#include "hk/resolvent.hpp"

#include <cmath>
#include <numbers>

#include "hk/errors.hpp"
#include "hk/quadrature.hpp"

namespace hk {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) { return std::tgamma(n + 1.0); }

// int d^dq/(2pi)^d F(q^2) = S_d/(2pi)^d int_0^inf q^{d-1} F(q^2) dq, divided
// by the free value (4 pi s)^{-d/2} at s = 1.
template <class F> double radial(F &&fn, int d, const quad::Options &opt) {
  const double area = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
  const double measure = area / std::pow(2.0 * kPi, d);
  const double value = quad::integrate_semi_infinite(
                           [&](double q) {
                             return std::pow(q, d - 1) * fn(q * q);
                           },
                           0.0, opt)
                           .value;
  return measure * value * std::pow(4.0 * kPi, 0.5 * d);
}

} // namespace

void Contour::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ConfigError("contour radius must be positive");
  if (nodes < 16 || nodes % 2 != 0)
    throw ConfigError("contour needs an even number of nodes >= 16");
}

bool Contour::encloses(std::complex<double> z) const {
  return std::abs(z - center) < radius;
}

double contour_resolvent_power(double x, double s, int n, const Contour &c) {
  c.validate();
  if (n < 1)
    throw DomainError("resolvent power must be >= 1");
  if (!c.encloses(x))
    throw PoleOutsideContour("pole at " + std::to_string(x) +
                             " is not inside the contour");
  // Largest |e^{-s theta}| on the circle.
  if (-s * (c.center.real() - c.radius) > 700.0)
    throw Overflow("e^{-s theta} overflows on the contour");

  // theta = c + r e^{i phi}, (i/2pi) dtheta = -(r/N) e^{i phi} per node.
  std::complex<double> acc = 0.0;
  for (int k = 0; k < c.nodes; ++k) {
    const double phi = 2.0 * kPi * k / c.nodes;
    const std::complex<double> w = c.radius * std::polar(1.0, phi);
    const std::complex<double> theta = c.center + w;
    acc += -w * std::exp(-s * theta) / std::pow(x - theta, n);
  }
  return acc.real() / c.nodes;
}

double contour_exp(double x, double s, const Contour &c) {
  return contour_resolvent_power(x, s, 1, c);
}

double residue_resolvent_power(double theta_star, double s, int n) {
  if (n < 1)
    throw DomainError("resolvent power must be >= 1");
  return std::pow(s, n - 1) * std::exp(-s * theta_star) / factorial(n - 1);
}

OmegaResolventParts omega_resolvent_parts(double x, int d, double rel_tol) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("omega_via_resolvent needs x > 0");
  if (d < 2)
    throw DomainError("transverse projection needs d >= 2");
  const double s = 1.0, p2 = x;
  quad::Options opt;
  opt.rel_tol = rel_tol;

  OmegaResolventParts r;
  // Sunset: vertices (2q + (1 - 2 xi) p) after the shift, three resolvents
  // with the pole at q^2 + p^2 xi (1 - xi). The factor 2 is the symmetry
  // weight of the diagram.
  auto sunset = [&](bool longitudinal) {
    return quad::integrate(
               [&](double xi) {
                 const double m2 = p2 * xi * (1.0 - xi);
                 const double shift = (1.0 - 2.0 * xi) * (1.0 - 2.0 * xi) * p2;
                 return radial(
                     [&](double q2) {
                       const double vv =
                           4.0 * q2 / d + (longitudinal ? shift : 0.0);
                       return 2.0 * vv *
                              residue_resolvent_power(q2 + m2, s, 3);
                     },
                     d, opt);
               },
               0.0, 1.0, opt)
        .value;
  };
  r.sunset_T = sunset(false);
  r.sunset_L = sunset(true);
  // Tadpole: seagull vertex 2 delta, two resolvents with the pole at q^2.
  const double tadpole = -radial(
      [&](double q2) { return 2.0 * residue_resolvent_power(q2, s, 2); }, d,
      opt);
  r.tadpole_T = tadpole;
  r.tadpole_L = tadpole;
  // Transverse ansatz coefficient: -4 s^2 p^2 f_Omega.
  r.f_omega = (r.sunset_T + r.tadpole_T) / (-4.0 * s * s * p2);
  return r;
}

double omega_via_resolvent(double x, int d) {
  return omega_resolvent_parts(x, d).f_omega;
}

} // namespace hk
