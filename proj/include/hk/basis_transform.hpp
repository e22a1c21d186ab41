#pragma once

// Linear changes of basis between second-order form-factor sets.
//
//   RicR  : {Ric, R, RU, U, Omega}
//   Weyl  : {C, Rbis, RU, U, Omega}        (dimension dependent, d >= 4)
//   BV    : {f1, f2, f3, f4, f5}
//
// Sets hold callables, so maps compose without sampling.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hk/form_factors.hpp"

namespace hk {

using FormFactorFn = std::function<double(double)>;

enum class Basis { RicR, Weyl, BV };

std::string basis_name(Basis b);
Basis parse_basis(const std::string &name);

struct FormFactorSet {
  Basis basis = Basis::RicR;
  int d = 0; // Weyl only
  std::map<std::string, FormFactorFn> entries;

  static const std::vector<std::string> &slot_names(Basis b);

  //! Throws ConfigError when a slot is missing or unknown, DomainError for a
  //! Weyl set with d < 4.
  void validate() const;
  double operator()(const std::string &slot, double x) const;
};

namespace basis {

//! The closed-form set in the requested basis.
FormFactorSet standard_set(Basis b, int d = 0, const EvalConfig &cfg = {});

//! Absorbs a Riemann-squared form factor into the Ricci and scalar ones:
//! returns (fRic + 4 fRiem, fR - fRiem).
std::pair<FormFactorFn, FormFactorFn> riemann_reduce(FormFactorFn f_riem,
                                                     FormFactorFn f_ric,
                                                     FormFactorFn f_r);

FormFactorSet to_weyl(const FormFactorSet &ricr, int d);
FormFactorSet from_weyl(const FormFactorSet &weyl);
FormFactorSet to_bv(const FormFactorSet &ricr);
FormFactorSet from_bv(const FormFactorSet &bv);

//! Convert between any two bases (d needed when either side is Weyl).
FormFactorSet convert(const FormFactorSet &set, Basis target, int d = 0);

} // namespace basis
} // namespace hk
