#pragma once

// Resolvent representation of the proper-time exponential and the
// residue-based computation of f_Omega from the two connection diagrams.

#include <complex>

namespace hk {

//! Positively oriented circle in the complex theta plane.
struct Contour {
  std::complex<double> center = 0.0;
  double radius = 1.0;
  int nodes = 64;

  //! ConfigError unless radius > 0 and nodes >= 16 and even.
  void validate() const;
  bool encloses(std::complex<double> z) const;
};

//! (i/2pi) oint dtheta e^{-s theta} / (x - theta)^n by the trapezoid rule on
//! the circle; equals s^{n-1} e^{-s x} / (n-1)!. PoleOutsideContour when x is
//! not strictly inside, Overflow when e^{-s theta} is not representable on
//! the contour.
double contour_resolvent_power(double x, double s, int n, const Contour &c);

//! n = 1: e^{-s x}.
double contour_exp(double x, double s, const Contour &c);

//! Closed-form residue of the same integrand, s^{n-1} e^{-s theta*} / (n-1)!.
double residue_resolvent_power(double theta_star, double s, int n);

//! Transverse and longitudinal parts of the sunset (three resolvents) and
//! tadpole (two resolvents) diagrams of the connection two-point function,
//! normalized by (4 pi s)^{-d/2}, at s = 1 and p^2 = x.
struct OmegaResolventParts {
  double sunset_T = 0, tadpole_T = 0;
  double sunset_L = 0, tadpole_L = 0;
  double f_omega = 0;
};

//! DomainError unless x > 0 and d >= 2.
OmegaResolventParts omega_resolvent_parts(double x, int d = 4,
                                          double rel_tol = 1e-13);

//! f_Omega(x) from the resolvent diagrams.
double omega_via_resolvent(double x, int d = 4);

} // namespace hk
