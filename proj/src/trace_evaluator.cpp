#include "hk/trace_evaluator.hpp"

#include <fstream>
#include <map>
#include <numbers>

#include "hk/errors.hpp"
#include "hk/quadrature.hpp"

namespace hk {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<int> negated(const std::vector<int> &n) {
  std::vector<int> m(n.size());
  for (std::size_t i = 0; i < n.size(); ++i)
    m[i] = -n[i];
  return m;
}

bool is_zero(const std::vector<int> &n) {
  for (int v : n)
    if (v != 0)
      return false;
  return true;
}

std::string show(const std::vector<int> &n) {
  std::string s = "[";
  for (std::size_t i = 0; i < n.size(); ++i)
    s += (i ? "," : "") + std::to_string(n[i]);
  return s + "]";
}

// Checks one family of modes keyed by (component, n).
template <class Key>
void check_reality(const std::map<Key, std::complex<double>> &modes,
                   const std::function<Key(const Key &)> &partner,
                   const std::string &what) {
  for (const auto &[k, amp] : modes) {
    auto it = modes.find(partner(k));
    const double tol = 1e-12 * std::max(1.0, std::abs(amp));
    if (it == modes.end()) {
      if (std::abs(amp) == 0.0)
        continue;
      throw ConfigError(what + ": mode has no conjugate partner");
    }
    if (std::abs(it->second - std::conj(amp)) > tol)
      throw ConfigError(what + ": reality condition violated");
  }
}

double pref(double s, int d) { return std::pow(4.0 * kPi * s, -0.5 * d); }

} // namespace

// ---------------------------------------------------------------------------
// FieldData

void FieldData::validate() const {
  if (d < 1 || d > 3)
    throw ConfigError("field dimension must be 1, 2 or 3");
  if (!(L > 0.0))
    throw ConfigError("box length must be positive");
  if (bundle_dim < 1)
    throw ConfigError("bundle_dim must be >= 1");

  std::map<std::vector<int>, std::complex<double>> u;
  for (const auto &m : u_modes) {
    if (static_cast<int>(m.n.size()) != d)
      throw ConfigError("u mode " + show(m.n) + " has wrong dimension");
    if (!u.emplace(m.n, m.amp).second)
      throw ConfigError("duplicate u mode " + show(m.n));
  }
  check_reality<std::vector<int>>(
      u, [](const std::vector<int> &n) { return negated(n); }, "u_modes");

  using AKey = std::pair<int, std::vector<int>>;
  std::map<AKey, std::complex<double>> a;
  for (const auto &m : a_modes) {
    if (m.mu < 0 || m.mu >= d)
      throw ConfigError("a mode component out of range");
    if (static_cast<int>(m.n.size()) != d)
      throw ConfigError("a mode " + show(m.n) + " has wrong dimension");
    if (!a.emplace(AKey{m.mu, m.n}, m.amp).second)
      throw ConfigError("duplicate a mode " + show(m.n));
  }
  check_reality<AKey>(
      a, [](const AKey &k) { return AKey{k.first, negated(k.second)}; },
      "a_modes");
}

FieldData FieldData::from_json(const nlohmann::json &j) {
  FieldData f;
  try {
    f.d = j.at("d").get<int>();
    f.L = j.at("L").get<double>();
    f.bundle_dim = j.value("bundle_dim", 1);
    for (const auto &m : j.value("u_modes", nlohmann::json::array()))
      f.u_modes.push_back({m.at("n").get<std::vector<int>>(),
                           {m.value("re", 0.0), m.value("im", 0.0)}});
    for (const auto &m : j.value("a_modes", nlohmann::json::array()))
      f.a_modes.push_back({m.at("mu").get<int>(),
                           m.at("n").get<std::vector<int>>(),
                           {m.value("re", 0.0), m.value("im", 0.0)}});
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("malformed field data: ") + e.what());
  }
  f.validate();
  return f;
}

FieldData FieldData::load(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open field file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json FieldData::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["L"] = L;
  j["bundle_dim"] = bundle_dim;
  j["u_modes"] = nlohmann::json::array();
  for (const auto &m : u_modes)
    j["u_modes"].push_back(
        {{"n", m.n}, {"re", m.amp.real()}, {"im", m.amp.imag()}});
  j["a_modes"] = nlohmann::json::array();
  for (const auto &m : a_modes)
    j["a_modes"].push_back({{"mu", m.mu},
                            {"n", m.n},
                            {"re", m.amp.real()},
                            {"im", m.amp.imag()}});
  return j;
}

FieldData FieldData::scaled(double eps) const {
  FieldData f = *this;
  for (auto &m : f.u_modes)
    m.amp *= eps;
  for (auto &m : f.a_modes)
    m.amp *= eps;
  return f;
}

Eigen::VectorXd FieldData::momentum(const std::vector<int> &n) const {
  Eigen::VectorXd p(n.size());
  for (std::size_t i = 0; i < n.size(); ++i)
    p(i) = 2.0 * kPi * n[i] / L;
  return p;
}

double FieldData::volume() const { return std::pow(L, d); }

double FieldData::u_at(const Eigen::VectorXd &x) const {
  std::complex<double> acc = 0.0;
  for (const auto &m : u_modes)
    acc += m.amp * std::exp(std::complex<double>(0.0, momentum(m.n).dot(x)));
  return acc.real();
}

double FieldData::theta_at(int mu, const Eigen::VectorXd &x) const {
  std::complex<double> acc = 0.0;
  for (const auto &m : a_modes)
    if (m.mu == mu)
      acc += m.amp * std::exp(std::complex<double>(0.0, momentum(m.n).dot(x)));
  return acc.real();
}

// ---------------------------------------------------------------------------

TraceExpansionResult tr_heat_kernel(const FieldData &fields, double s,
                                    const EvalConfig &cfg) {
  if (!(s > 0.0))
    throw DomainError("proper time must be positive");
  const double V = fields.volume();
  const double N = fields.bundle_dim;
  const int d = fields.d;
  const auto fu = FormFactorKind::of(FormFactorTag::U);
  const auto fo = FormFactorKind::of(FormFactorTag::Omega);

  TraceExpansionResult r;
  r.s = s;
  r.order0 = N * V;

  double u0 = 0.0, sum_u = 0.0;
  for (const auto &m : fields.u_modes) {
    if (is_zero(m.n))
      u0 += m.amp.real();
    const double p2 = fields.momentum(m.n).squaredNorm();
    sum_u += std::norm(m.amp) * form_factors::eval(fu, s * p2, cfg);
  }
  r.order1 = u0 == 0.0 ? 0.0 : -s * N * V * u0;
  r.order2_U = s * s * V * N * sum_u;

  // Gather theta~_mu(n) per momentum; a std::map keeps the order fixed.
  std::map<std::vector<int>, Eigen::VectorXcd> theta;
  for (const auto &m : fields.a_modes) {
    auto [it, fresh] = theta.try_emplace(m.n, Eigen::VectorXcd::Zero(d));
    it->second(m.mu) += m.amp;
  }
  double sum_o = 0.0;
  for (const auto &[n, th] : theta) {
    const Eigen::VectorXd p = fields.momentum(n);
    const double p2 = p.squaredNorm();
    // |p_mu th_nu - p_nu th_mu|^2 / 2 summed over mu, nu.
    const double transverse = p2 * th.squaredNorm() -
                              std::norm(p.cast<std::complex<double>>().dot(th));
    if (transverse == 0.0)
      continue;
    sum_o += form_factors::eval(fo, s * p2, cfg) * transverse;
  }
  // Omega~(p) = -(p_mu th_nu - p_nu th_mu) for A = i theta, so the bundle
  // trace of Omega(-p) Omega(p) is negative.
  r.order2_Omega = sum_o == 0.0 ? 0.0 : -2.0 * s * s * V * N * sum_o;

  r.total = pref(s, d) * (r.order0 + r.order1 + r.order2_U + r.order2_Omega);
  return r;
}

double coincidence_kernel(const FieldData &fields, double s,
                          const Eigen::VectorXd &x, const EvalConfig &cfg) {
  if (!(s > 0.0))
    throw DomainError("proper time must be positive");
  if (x.size() != fields.d)
    throw DimensionMismatch("position has wrong dimension");
  const auto gu = FormFactorKind::of(FormFactorTag::GU);
  std::complex<double> acc = 0.0;
  for (const auto &m : fields.u_modes) {
    const Eigen::VectorXd p = fields.momentum(m.n);
    acc += form_factors::eval(gu, s * p.squaredNorm(), cfg) * m.amp *
           std::exp(std::complex<double>(0.0, p.dot(x)));
  }
  return pref(s, fields.d) * fields.bundle_dim * (1.0 + s * acc.real());
}

// ---------------------------------------------------------------------------

SpectralFunction SpectralFunction::heat_kernel(double t) {
  if (!(t > 0.0))
    throw DomainError("heat-kernel time must be positive");
  SpectralFunction h;
  h.family = Family::HeatKernel;
  h.t = t;
  return h;
}

SpectralFunction SpectralFunction::massive_resolvent(double m2) {
  if (!(m2 > 0.0))
    throw DomainError("resolvent mass squared must be positive");
  SpectralFunction h;
  h.family = Family::MassiveResolvent;
  h.mass2 = m2;
  h.inverse_laplace = [m2](double s) { return std::exp(-s * m2); };
  return h;
}

SpectralFunction SpectralFunction::custom(std::function<double(double)> fn,
                                          double s_min, double s_max) {
  SpectralFunction h;
  h.family = Family::Custom;
  h.inverse_laplace = std::move(fn);
  h.s_min = s_min;
  h.s_max = s_max;
  return h;
}

double laplace_trace(const FieldData &fields, const SpectralFunction &h,
                     const EvalConfig &cfg) {
  fields.validate();
  if (h.family == SpectralFunction::Family::HeatKernel)
    return tr_heat_kernel(fields, h.t, cfg).total;
  if (!h.inverse_laplace)
    throw ConfigError("spectral function has no inverse Laplace transform");
  if (!(h.s_min >= 0.0) || !(h.s_max > h.s_min))
    throw ConfigError("invalid s-integration bounds");

  auto g = [&](double s) {
    if (s <= 0.0)
      return 0.0;
    const double w = h.inverse_laplace(s);
    return w == 0.0 ? 0.0 : w * tr_heat_kernel(fields, s, cfg).total;
  };
  // An open endpoint converges only if s |g(s)| decays towards it.
  auto decays = [&](double near, double far) {
    const double a = std::abs(near * g(near));
    return a == 0.0 || a < std::abs(far * g(far));
  };
  if (h.s_min == 0.0 && !decays(1e-10, 1e-8))
    throw DivergentIntegral("integrand does not decay at s -> 0");
  if (std::isinf(h.s_max) && !decays(1e8, 1e6))
    throw DivergentIntegral("integrand does not decay at s -> infinity");

  quad::Options opt;
  opt.rel_tol = h.rel_tol;
  if (std::isinf(h.s_max))
    return quad::integrate_semi_infinite(g, h.s_min, opt).value;
  return quad::integrate(g, h.s_min, h.s_max, opt).value;
}

} // namespace hk
