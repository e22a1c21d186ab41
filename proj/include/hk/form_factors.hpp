#pragma once

// Second-order heat-kernel form factors.
//
// Every form factor here is an algebraic combination of the basic form factor
//
//     f(x) = \int_0^1 d\xi exp(-x \xi (1 - \xi)),   x >= 0,
//
// of the shape A(1/x) f(x) + B(1/x) with polynomials A, B in 1/x (the
// "primitive" kinds), or a fixed rational linear combination of primitives
// (the Weyl-basis and BV-basis kinds). Series coefficients are derived from
// that representation in exact rational arithmetic.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace hk {

using Rational = boost::multiprecision::cpp_rational;

enum class FormFactorTag {
  Basic,
  Ric,
  R,
  RU,
  U,
  Omega,
  R2d,
  C,
  Rbis,
  BV1,
  BV2,
  BV3,
  BV4,
  BV5,
  GU,
  GR
};

struct FormFactorKind {
  FormFactorTag tag = FormFactorTag::Basic;
  int d = 0; // only meaningful for C and Rbis

  static FormFactorKind of(FormFactorTag t) { return {t, 0}; }
  static FormFactorKind weyl_c(int d) { return {FormFactorTag::C, d}; }
  static FormFactorKind weyl_rbis(int d) { return {FormFactorTag::Rbis, d}; }

  bool needs_dimension() const {
    return tag == FormFactorTag::C || tag == FormFactorTag::Rbis;
  }
  //! Throws DomainError for C/Rbis with d < 4.
  void validate() const;

  //! Lower-case CLI name: basic, ric, r, ru, u, omega, r2d, c<d>, rbis<d>,
  //! bv1..bv5, gu, gr.
  std::string name() const;
  static FormFactorKind parse(std::string_view name);

  friend bool operator==(const FormFactorKind &, const FormFactorKind &) =
      default;
};

struct EvalConfig {
  double small_x_cut = 0.5;
  double large_x_cut = 150.0;
  int series_order = 20;
  double quad_rel_tol = 1e-14;
  int quad_max_depth = 30;

  static constexpr int kMaxSeriesOrder = 40;

  //! Throws ConfigError when an invariant is violated.
  void validate() const;
  //! Defaults, with `HK_QUAD_TOL` overriding quad_rel_tol when set.
  static EvalConfig from_env();
};

enum class SeriesKind { SmallX, LargeX };

//! SmallX: coefficients of x^0, x^1, ...
//! LargeX: coefficients of x^{leading_power}, x^{leading_power-1}, ...
struct SeriesExpansion {
  SeriesKind kind = SeriesKind::SmallX;
  std::vector<Rational> coefficients;
  int leading_power = 0;

  std::vector<double> as_double() const;
  //! Partial sum of the stored coefficients at x.
  double evaluate(double x) const;
};

//! The local constants g_0, g_{U,0}, g_{R,0} of the trace expansion.
struct Constants {
  double g0 = 1.0;
  double gU0 = -1.0;
  double gR0 = 1.0 / 6.0;
};

namespace form_factors {

//! Basic form factor f(x) with relative error <= cfg.quad_rel_tol.
double basic_f(double x, const EvalConfig &cfg = {});

//! Any form factor at x >= 0.
double eval(FormFactorKind kind, double x, const EvalConfig &cfg = {});

//! SmallX (Taylor) or LargeX (asymptotic) series with `order` coefficients.
//! Throws UnsupportedOrder beyond EvalConfig::kMaxSeriesOrder.
SeriesExpansion series(FormFactorKind kind, SeriesKind which, int order);

//! Coefficient of x^n in the Taylor series of f: (-1)^n n!/(2n+1)!.
Rational basic_taylor_coefficient(int n);
//! Coefficient of x^{-(k+1)} in the asymptotic series of f: 2 (2k)!/k!.
Rational basic_asymptotic_coefficient(int k);

//! The representation A(u) f + B(u), u = 1/x, for primitive kinds, or
//! nullopt for composite kinds.
struct PrimitiveForm {
  std::vector<Rational> a; // coefficients of u^0, u^1, ...
  std::vector<Rational> b;
};
std::optional<PrimitiveForm> primitive_form(FormFactorTag tag);

//! Composite kinds as rational combinations of primitives; empty for
//! primitive kinds.
struct Term {
  Rational weight;
  FormFactorTag tag;
};
std::vector<Term> composite_terms(FormFactorKind kind);

} // namespace form_factors
} // namespace hk
