#pragma once

// Second-order heat-kernel trace and first-order kernel diagonal for an
// endomorphism U and an abelian connection A_mu = i theta_mu on a flat
// periodic box, plus Laplace-transformed functional traces.
//
// Field convention: U(x) = sum_n U~(n) e^{i p_n x}, p_n = 2 pi n / L, with no
// 1/V factor; likewise for each theta_mu. Both act as multiples of the
// identity on a bundle of dimension `bundle_dim`.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hk/form_factors.hpp"
#include "json.hpp"

namespace hk {

struct FieldMode {
  std::vector<int> n;
  std::complex<double> amp;
};

struct ConnectionMode {
  int mu = 0;
  std::vector<int> n;
  std::complex<double> amp;
};

struct FieldData {
  int d = 1;
  double L = 1.0;
  int bundle_dim = 1;
  std::vector<FieldMode> u_modes;
  std::vector<ConnectionMode> a_modes;

  //! ConfigError on bad shapes, duplicate modes or broken reality pairs.
  void validate() const;

  static FieldData from_json(const nlohmann::json &j);
  static FieldData load(const std::string &path);
  nlohmann::json to_json() const;

  //! Every amplitude multiplied by eps.
  FieldData scaled(double eps) const;

  Eigen::VectorXd momentum(const std::vector<int> &n) const;
  double volume() const;
  //! Real-space samples.
  double u_at(const Eigen::VectorXd &x) const;
  double theta_at(int mu, const Eigen::VectorXd &x) const;
};

struct TraceExpansionResult {
  double s = 0;
  double order0 = 0, order1 = 0, order2_U = 0, order2_Omega = 0;
  // Curvature terms vanish identically on a flat box.
  double order2_Ric = 0, order2_R = 0, order2_RU = 0;
  double total = 0;
};

//! Second-order non-local expansion of Tr e^{-s Delta}.
TraceExpansionResult tr_heat_kernel(const FieldData &fields, double s,
                                    const EvalConfig &cfg = {});

//! tr K^s(x, x) to first order in U.
double coincidence_kernel(const FieldData &fields, double s,
                          const Eigen::VectorXd &x, const EvalConfig &cfg = {});

struct SpectralFunction {
  enum class Family { HeatKernel, MassiveResolvent, Custom };
  Family family = Family::Custom;
  double t = 0.0;       // HeatKernel
  double mass2 = 0.0;   // MassiveResolvent
  std::function<double(double)> inverse_laplace; // h~(s)
  double s_min = 0.0;
  double s_max = INFINITY;
  double rel_tol = 1e-10;

  static SpectralFunction heat_kernel(double t);
  static SpectralFunction massive_resolvent(double m2);
  static SpectralFunction custom(std::function<double(double)> h,
                                 double s_min = 0.0,
                                 double s_max = INFINITY);
};

//! int ds h~(s) Tr e^{-s Delta} with the second-order trace. Throws
//! DivergentIntegral when an open endpoint does not decay.
double laplace_trace(const FieldData &fields, const SpectralFunction &h,
                     const EvalConfig &cfg = {});

} // namespace hk
