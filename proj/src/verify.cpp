#include "hk/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "hk/basis_transform.hpp"
#include "hk/diagram_engine.hpp"
#include "hk/errors.hpp"
#include "hk/form_factors.hpp"
#include "hk/lattice_oracle.hpp"
#include "hk/projector_algebra.hpp"
#include "hk/resolvent.hpp"
#include "hk/trace_evaluator.hpp"

namespace hk::verify {

namespace {

constexpr double kPi = std::numbers::pi;

std::string with_d(const std::string &name, int d) {
  return name + " (d=" + std::to_string(d) + ")";
}

double max_abs(const SymPairTensor &t) {
  return t.matrix().cwiseAbs().maxCoeff();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i)
    xs[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
  return xs;
}

double ff(FormFactorTag t, double x) {
  return form_factors::eval(FormFactorKind::of(t), x);
}

// ---------------------------------------------------------------------------

Report projectors(const Options &opt) {
  Report r{"projectors", {}};
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> u(-3, 3);
  auto random_momentum = [&](int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i)
      v(i) = n01(rng);
    return Momentum(v);
  };
  using N = ProjectorName;
  const std::vector<int> dims =
      opt.dims.empty() ? std::vector<int>{3, 4, 6} : opt.dims;
  for (int d : dims) {
    if (d < 2)
      throw ConfigError("projector suite needs d >= 2");
    const auto p = random_momentum(d);
    auto P = [&](N n) { return tensor_projector(n, p); };

    double idem = 0;
    for (N n : {N::P2, N::P1, N::S, N::sigma})
      idem = std::max(idem, max_abs(P(n).compose(P(n)) - P(n)));
    r.add(with_d("idempotence", d), idem, 1e-12);
    const auto mix = P(N::Ssigma) + P(N::sigmaS);
    r.add(with_d("mixed relation", d),
          max_abs(mix.compose(mix) - P(N::S) - P(N::sigma)), 1e-12);
    r.add(with_d("completeness", d),
          max_abs(P(N::P2) + P(N::P1) + P(N::S) + P(N::sigma) -
                  SymPairTensor::identity(d)),
          1e-12);
    const N idem_set[] = {N::P2, N::P1, N::S, N::sigma};
    double orth = std::abs(P(N::Ssigma).inner(P(N::sigmaS)));
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        orth = std::max(orth, std::abs(P(idem_set[i]).inner(P(idem_set[j]))));
    r.add(with_d("orthogonality", d), orth, 1e-12);
    const double tr_err = std::max(
        {std::abs(P(N::P2).trace() - (d + 1) * (d - 2) / 2.0),
         std::abs(P(N::P1).trace() - (d - 1)), std::abs(P(N::S).trace() - 1),
         std::abs(P(N::sigma).trace() - 1)});
    r.add(with_d("traces", d), tr_err, 1e-12);

    if (d == 2) {
      const auto c = decompose(SymPairTensor::identity(2), p);
      r.add("P2 slot structurally absent (d=2)",
            c.c2 ? 1.0 : max_abs(P(N::P2)), 1e-14);
    }
    double rt = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto q = random_momentum(d);
      ProjectorCoefficients in;
      for (auto n : kAllProjectors)
        if (d > 2 || n != N::P2)
          in.set(n, u(rng));
      const auto out = decompose(recompose(in, q), q);
      for (auto n : kAllProjectors)
        if (d > 2 || n != N::P2)
          rt = std::max(rt, std::abs(out.get(n) - in.get(n)));
      rt = std::max(rt, out.residual_norm);
    }
    r.add(with_d("100 decompose round trips", d), rt, 1e-12);
  }
  return r;
}

Report diagrams(const Options &opt) {
  Report r{"diagrams", {}};
  const std::vector<int> dims =
      opt.dims.empty() ? std::vector<int>{4} : opt.dims;
  const auto xs = log_grid(1e-2, 1e2, opt.x_points);
  using C = DiagramChannel;
  for (int d : dims) {
    if (d < 3)
      throw ConfigError("diagram suite needs d >= 3");
    double eu = 0, eo = 0, eru = 0, eric = 0, er = 0, egu = 0, egr = 0;
    double pl = 0, ah = 0;
    for (double x : xs) {
      eu = std::max(eu, std::abs(extract_form_factors(C::TrUU, x, d).at("f_U") -
                                 ff(FormFactorTag::U, x)));
      eo = std::max(eo, std::abs(extract_form_factors(C::TrAA, x, d)
                                     .at("f_Omega") -
                                 ff(FormFactorTag::Omega, x)));
      eru = std::max(eru, std::abs(extract_form_factors(C::TrhU, x, d)
                                       .at("f_RU") -
                                   ff(FormFactorTag::RU, x)));
      const auto hh = extract_form_factors(C::Trhh, x, d);
      eric = std::max(eric, std::abs(hh.at("f_Ric") - ff(FormFactorTag::Ric, x)));
      er = std::max(er, std::abs(hh.at("f_R") - ff(FormFactorTag::R, x)));
      egu = std::max(egu, std::abs(extract_form_factors(C::K_U, x, d)
                                       .at("g_U") +
                                   form_factors::basic_f(x)));
      const auto p = Momentum::along_last_axis(d, std::sqrt(x));
      pl = std::max(pl, std::abs(*npoint(C::TrAA, 1.0, p, d).pl_coeff));
      ah = std::max(ah, npoint(C::TrAh, 1.0, p, d).tensor->cwiseAbs().maxCoeff());
      egr = std::max(egr, std::abs(extract_form_factors(C::K_h, x, d).at("g_R") -
                                   ff(FormFactorTag::GR, x)));
    }
    r.add(with_d("f_U extraction", d), eu, 1e-8);
    r.add(with_d("f_Omega extraction", d), eo, 1e-8);
    r.add(with_d("f_RU extraction", d), eru, 1e-8);
    r.add(with_d("f_Ric extraction", d), eric, 1e-8);
    r.add(with_d("f_R extraction", d), er, 1e-8);
    r.add(with_d("g_U = -f", d), egu, 1e-8);
    r.add(with_d("g_R extraction", d), egr, 1e-8);
    r.add(with_d("g_R(0) = 1/6", d), std::abs(extract_gR0(d) - 1.0 / 6.0), 1e-8);
    r.add(with_d("TrAA longitudinal coefficient", d), pl, 1e-10);
    r.add(with_d("TrAh channel", d), ah, 1e-12);
  }
  return r;
}

Report resolvent(const Options &) {
  Report r{"resolvent", {}};
  r.add("contour_exp x=1 s=1",
        std::abs(contour_exp(1, 1, {1.0, 2.0, 64}) - std::exp(-1.0)), 1e-12);
  r.add("contour_exp x=0 s=0",
        std::abs(contour_exp(0, 0, {0.0, 1.0, 16}) - 1.0), 1e-12);
  r.add("contour_exp x=5 s=0.3",
        std::abs(contour_exp(5, 0.3, {5.0, 1.0, 64}) - std::exp(-1.5)), 1e-12);
  r.add("contour size independence",
        std::abs(contour_exp(1.3, 0.8, {1.0, 2.0, 128}) -
                 contour_exp(1.3, 0.8, {1.0, 1.0, 64})),
        1e-10);
  double lon = 0;
  for (double x : {0.1, 1.0, 10.0, 100.0}) {
    const auto parts = omega_resolvent_parts(x);
    r.add("f_Omega via resolvent at x=" + nlohmann::json(x).dump(),
          std::abs(parts.f_omega - ff(FormFactorTag::Omega, x)), 1e-6);
    lon = std::max(lon, std::abs(parts.sunset_L + parts.tadpole_L));
  }
  r.add("longitudinal cancellation", lon, 1e-8);
  r.add("x -> 0 limit 1/12", std::abs(omega_via_resolvent(1e-6) - 1.0 / 12),
        1e-6);
  return r;
}

Report bases(const Options &opt) {
  Report r{"bases", {}};
  const std::vector<int> dims =
      opt.dims.empty() ? std::vector<int>{4, 6} : opt.dims;
  const auto xs = log_grid(1e-3, 1e3, 25);
  for (int d : dims) {
    const auto ricr = basis::standard_set(Basis::RicR, d);
    double weyl = 0, bv = 0;
    const auto w = basis::from_weyl(basis::to_weyl(ricr, d));
    const auto b = basis::from_bv(basis::to_bv(ricr));
    for (const auto &slot : FormFactorSet::slot_names(Basis::RicR))
      for (double x : xs) {
        const double ref = ricr(slot, x);
        weyl = std::max(weyl, std::abs(w(slot, x) - ref));
        bv = std::max(bv, std::abs(b(slot, x) - ref));
      }
    r.add(with_d("Weyl round trip", d), weyl, 1e-14);
    r.add(with_d("BV round trip", d), bv, 1e-14);
  }
  double r2d = 0;
  for (double x : xs)
    r2d = std::max(r2d, std::abs(ff(FormFactorTag::R2d, x) -
                                 ff(FormFactorTag::R, x) -
                                 ff(FormFactorTag::Ric, x) / 2));
  r.add("f_R2d = f_R + f_Ric/2", r2d, 1e-12);
  return r;
}

Report lattice(const Options &opt) {
  if (opt.fields_path.empty())
    throw ConfigError("verify lattice needs --fields");
  const auto fields = FieldData::load(opt.fields_path);
  if (!opt.dims.empty() && (opt.dims.size() != 1 || opt.dims[0] != fields.d))
    throw ConfigError("--d does not match the field file");
  LatticeSpec spec{fields.d, opt.n_sites ? opt.n_sites : (fields.d == 1 ? 512 : 48),
                   fields.L};
  spec.validate();

  std::vector<double> ss = opt.s_values;
  if (ss.empty()) {
    // Smallest non-zero momentum carried by the fields.
    double p2 = INFINITY;
    for (const auto &m : fields.u_modes) {
      const double q = fields.momentum(m.n).squaredNorm();
      if (q > 0)
        p2 = std::min(p2, q);
    }
    for (const auto &m : fields.a_modes) {
      const double q = fields.momentum(m.n).squaredNorm();
      if (q > 0)
        p2 = std::min(p2, q);
    }
    if (std::isinf(p2))
      throw ConfigError("field file carries no non-zero mode");
    for (double x : {0.25, 1.0, 4.0})
      ss.push_back(x / p2);
  }

  Report r{"lattice", {}};
  const double tol = fields.d == 1 ? 0.01 : 0.03;
  for (double s : ss) {
    const double eps =
        opt.eps ? *opt.eps : (fields.d == 1 ? 0.02 / s : 0.02 / std::sqrt(s));
    const auto t = tr_heat_kernel(fields.scaled(eps), s);
    const double pred = std::pow(4 * kPi * s, -0.5 * fields.d) *
                        (t.order2_U + t.order2_Omega);
    const std::string name =
        "eps^2 isolation at s=" + nlohmann::json(s).dump();
    if (!spec.in_window(s)) {
      r.add_out_of_window(name, NAN, tol);
      continue;
    }
    const double iso = isolate_second_order(spec, fields, s, eps);
    r.add(name, pred == 0.0 ? std::abs(iso) : std::abs(iso / pred - 1), tol);
  }
  return r;
}

} // namespace

std::string status_name(Status s) {
  switch (s) {
  case Status::Pass:
    return "pass";
  case Status::Fail:
    return "fail";
  case Status::OutOfWindow:
    return "out_of_window";
  }
  return "fail";
}

bool Report::pass() const {
  for (const auto &c : checks)
    if (c.status == Status::Fail)
      return false;
  return true;
}

void Report::add(std::string name, double measured, double tolerance) {
  checks.push_back({std::move(name),
                    measured <= tolerance ? Status::Pass : Status::Fail,
                    measured, tolerance});
}

void Report::add_out_of_window(std::string name, double measured,
                               double tolerance) {
  checks.push_back({std::move(name), Status::OutOfWindow, measured, tolerance});
}

nlohmann::ordered_json Report::to_json() const {
  using oj = nlohmann::ordered_json;
  oj j;
  j["suite"] = suite;
  j["checks"] = oj::array();
  for (const auto &c : checks) {
    oj e;
    e["name"] = c.name;
    e["status"] = status_name(c.status);
    e["measured"] = std::isfinite(c.measured) ? oj(c.measured) : oj(nullptr);
    e["tolerance"] = c.tolerance;
    j["checks"].push_back(std::move(e));
  }
  j["pass"] = pass();
  return j;
}

const std::vector<std::string> &suite_names() {
  static const std::vector<std::string> names = {
      "projectors", "diagrams", "resolvent", "bases", "lattice"};
  return names;
}

Report run(const std::string &suite, const Options &opt) {
  if (suite == "projectors")
    return projectors(opt);
  if (suite == "diagrams")
    return diagrams(opt);
  if (suite == "resolvent")
    return resolvent(opt);
  if (suite == "bases")
    return bases(opt);
  if (suite == "lattice")
    return lattice(opt);
  throw ConfigError("unknown verification suite '" + suite + "'");
}

} // namespace hk::verify
