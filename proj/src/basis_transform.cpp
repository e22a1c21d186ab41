#include "hk/basis_transform.hpp"

#include "hk/errors.hpp"

namespace hk {

namespace {

// Weighted sum of slots of `src`, captured by value.
FormFactorFn combo(const FormFactorSet &src,
                   std::vector<std::pair<double, std::string>> terms) {
  std::vector<std::pair<double, FormFactorFn>> fns;
  for (auto &[w, slot] : terms)
    fns.emplace_back(w, src.entries.at(slot));
  return [fns = std::move(fns)](double x) {
    double acc = 0.0;
    for (const auto &[w, f] : fns)
      acc += w * f(x);
    return acc;
  };
}

void require(const FormFactorSet &s, Basis b) {
  if (s.basis != b)
    throw ConfigError("expected a " + basis_name(b) + " set, got " +
                      basis_name(s.basis));
  s.validate();
}

void check_weyl_dim(int d) {
  if (d < 4)
    throw DomainError("Weyl basis requires d >= 4, got " + std::to_string(d));
}

} // namespace

std::string basis_name(Basis b) {
  switch (b) {
  case Basis::RicR:
    return "ricr";
  case Basis::Weyl:
    return "weyl";
  case Basis::BV:
    return "bv";
  }
  return "?";
}

Basis parse_basis(const std::string &name) {
  if (name == "ricr")
    return Basis::RicR;
  if (name == "weyl")
    return Basis::Weyl;
  if (name == "bv")
    return Basis::BV;
  throw ConfigError("unknown basis '" + name + "'");
}

const std::vector<std::string> &FormFactorSet::slot_names(Basis b) {
  static const std::vector<std::string> ricr = {"Ric", "R", "RU", "U", "Omega"};
  static const std::vector<std::string> weyl = {"C", "Rbis", "RU", "U",
                                                "Omega"};
  static const std::vector<std::string> bv = {"f1", "f2", "f3", "f4", "f5"};
  switch (b) {
  case Basis::RicR:
    return ricr;
  case Basis::Weyl:
    return weyl;
  default:
    return bv;
  }
}

void FormFactorSet::validate() const {
  if (basis == Basis::Weyl)
    check_weyl_dim(d);
  const auto &names = slot_names(basis);
  for (const auto &n : names) {
    auto it = entries.find(n);
    if (it == entries.end() || !it->second)
      throw ConfigError("form factor set is missing slot " + n);
  }
  if (entries.size() != names.size())
    throw ConfigError("form factor set has unexpected slots");
}

double FormFactorSet::operator()(const std::string &slot, double x) const {
  auto it = entries.find(slot);
  if (it == entries.end())
    throw ConfigError("no slot " + slot + " in " + basis_name(basis) + " set");
  return it->second(x);
}

namespace basis {

FormFactorSet standard_set(Basis b, int d, const EvalConfig &cfg) {
  using T = FormFactorTag;
  auto fn = [cfg](FormFactorKind k) -> FormFactorFn {
    return [k, cfg](double x) { return form_factors::eval(k, x, cfg); };
  };
  FormFactorSet s;
  s.basis = b;
  switch (b) {
  case Basis::RicR:
    s.entries = {{"Ric", fn(FormFactorKind::of(T::Ric))},
                 {"R", fn(FormFactorKind::of(T::R))},
                 {"RU", fn(FormFactorKind::of(T::RU))},
                 {"U", fn(FormFactorKind::of(T::U))},
                 {"Omega", fn(FormFactorKind::of(T::Omega))}};
    break;
  case Basis::Weyl:
    check_weyl_dim(d);
    s.d = d;
    s.entries = {{"C", fn(FormFactorKind::weyl_c(d))},
                 {"Rbis", fn(FormFactorKind::weyl_rbis(d))},
                 {"RU", fn(FormFactorKind::of(T::RU))},
                 {"U", fn(FormFactorKind::of(T::U))},
                 {"Omega", fn(FormFactorKind::of(T::Omega))}};
    break;
  case Basis::BV:
    s.entries = {{"f1", fn(FormFactorKind::of(T::BV1))},
                 {"f2", fn(FormFactorKind::of(T::BV2))},
                 {"f3", fn(FormFactorKind::of(T::BV3))},
                 {"f4", fn(FormFactorKind::of(T::BV4))},
                 {"f5", fn(FormFactorKind::of(T::BV5))}};
    break;
  }
  return s;
}

std::pair<FormFactorFn, FormFactorFn> riemann_reduce(FormFactorFn f_riem,
                                                     FormFactorFn f_ric,
                                                     FormFactorFn f_r) {
  FormFactorFn ric = [f_riem, f_ric](double x) {
    return f_ric(x) + 4.0 * f_riem(x);
  };
  FormFactorFn r = [f_riem, f_r](double x) { return f_r(x) - f_riem(x); };
  return {std::move(ric), std::move(r)};
}

FormFactorSet to_weyl(const FormFactorSet &ricr, int d) {
  require(ricr, Basis::RicR);
  check_weyl_dim(d);
  const double c = double(d - 2) / (4.0 * (d - 3));
  const double b = double(d) / (4.0 * (d - 1));
  FormFactorSet w;
  w.basis = Basis::Weyl;
  w.d = d;
  w.entries = {{"C", combo(ricr, {{c, "Ric"}})},
               {"Rbis", combo(ricr, {{b, "Ric"}, {1.0, "R"}})},
               {"RU", ricr.entries.at("RU")},
               {"U", ricr.entries.at("U")},
               {"Omega", ricr.entries.at("Omega")}};
  return w;
}

FormFactorSet from_weyl(const FormFactorSet &weyl) {
  require(weyl, Basis::Weyl);
  const int d = weyl.d;
  const double ric_per_c = 4.0 * (d - 3) / double(d - 2);
  const double b = double(d) / (4.0 * (d - 1));
  FormFactorSet s;
  s.basis = Basis::RicR;
  s.entries = {{"Ric", combo(weyl, {{ric_per_c, "C"}})},
               {"R", combo(weyl, {{1.0, "Rbis"}, {-b * ric_per_c, "C"}})},
               {"RU", weyl.entries.at("RU")},
               {"U", weyl.entries.at("U")},
               {"Omega", weyl.entries.at("Omega")}};
  return s;
}

FormFactorSet to_bv(const FormFactorSet &ricr) {
  require(ricr, Basis::RicR);
  FormFactorSet s;
  s.basis = Basis::BV;
  s.entries = {
      {"f1", ricr.entries.at("Ric")},
      {"f2", combo(ricr, {{1.0, "R"}, {1.0 / 36.0, "U"}, {1.0 / 6.0, "RU"}})},
      {"f3", combo(ricr, {{-1.0 / 3.0, "U"}, {-1.0, "RU"}})},
      {"f4", ricr.entries.at("U")},
      {"f5", ricr.entries.at("Omega")}};
  return s;
}

FormFactorSet from_bv(const FormFactorSet &bv) {
  require(bv, Basis::BV);
  // RU = -f3 - f4/3, hence R = f2 - f4/36 - RU/6 = f2 + f3/6 + f4/36.
  FormFactorSet s;
  s.basis = Basis::RicR;
  s.entries = {
      {"Ric", bv.entries.at("f1")},
      {"R", combo(bv, {{1.0, "f2"}, {1.0 / 6.0, "f3"}, {1.0 / 36.0, "f4"}})},
      {"RU", combo(bv, {{-1.0, "f3"}, {-1.0 / 3.0, "f4"}})},
      {"U", bv.entries.at("f4")},
      {"Omega", bv.entries.at("f5")}};
  return s;
}

FormFactorSet convert(const FormFactorSet &set, Basis target, int d) {
  if (set.basis == target && (target != Basis::Weyl || set.d == d))
    return set;
  FormFactorSet ricr = set;
  if (set.basis == Basis::Weyl)
    ricr = from_weyl(set);
  else if (set.basis == Basis::BV)
    ricr = from_bv(set);
  switch (target) {
  case Basis::RicR:
    return ricr;
  case Basis::Weyl:
    return to_weyl(ricr, d);
  default:
    return to_bv(ricr);
  }
}

} // namespace basis
} // namespace hk
