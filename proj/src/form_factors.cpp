#include "hk/form_factors.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "hk/errors.hpp"
#include "hk/quadrature.hpp"

namespace hk {

namespace {

// Coefficients kept per primitive kind; A has degree <= 2 in u, so this many
// basic coefficients always cover kMaxSeriesOrder requested terms.
constexpr int kTableSize = EvalConfig::kMaxSeriesOrder + 4;

// Below this x, kinds whose closed form divides by powers of x are summed
// from their own Taylor series; the series converges like an entire function
// and at x = 2 forty terms are far below double round-off.
constexpr double kRemovableCut = 2.0;

struct NamedTag {
  FormFactorTag tag;
  const char *name;
};

constexpr std::array<NamedTag, 14> kFixedNames = {{
    {FormFactorTag::Basic, "basic"},
    {FormFactorTag::Ric, "ric"},
    {FormFactorTag::R, "r"},
    {FormFactorTag::RU, "ru"},
    {FormFactorTag::U, "u"},
    {FormFactorTag::Omega, "omega"},
    {FormFactorTag::R2d, "r2d"},
    {FormFactorTag::BV1, "bv1"},
    {FormFactorTag::BV2, "bv2"},
    {FormFactorTag::BV3, "bv3"},
    {FormFactorTag::BV4, "bv4"},
    {FormFactorTag::BV5, "bv5"},
    {FormFactorTag::GU, "gu"},
    {FormFactorTag::GR, "gr"},
}};

Rational factorial(int n) {
  Rational r = 1;
  for (int k = 2; k <= n; ++k)
    r *= k;
  return r;
}

Rational q(long num, long den = 1) { return Rational(num, den); }

bool is_primitive(FormFactorTag t) {
  switch (t) {
  case FormFactorTag::Basic:
  case FormFactorTag::Ric:
  case FormFactorTag::R:
  case FormFactorTag::RU:
  case FormFactorTag::U:
  case FormFactorTag::Omega:
  case FormFactorTag::R2d:
  case FormFactorTag::GU:
  case FormFactorTag::GR:
    return true;
  default:
    return false;
  }
}

// Exact and double-precision expansion tables for one primitive kind.
struct PrimitiveTable {
  form_factors::PrimitiveForm form;
  std::vector<Rational> small;  // coefficient of x^k, k = 0..
  std::vector<Rational> large;  // coefficient of u^m, m = 0..
  std::vector<double> small_d;
  std::vector<double> large_d;
  bool removable = false; // closed form divides by x
};

PrimitiveTable build_table(FormFactorTag tag) {
  PrimitiveTable t;
  t.form = *form_factors::primitive_form(tag);
  const auto &A = t.form.a;
  const auto &B = t.form.b;
  t.removable = A.size() > 1 || !B.empty();

  const int degree = static_cast<int>(std::max(A.size(), B.size()));
  // Negative powers of x must cancel identically.
  for (int k = -degree; k < 0; ++k) {
    Rational c = 0;
    for (int j = 0; j < static_cast<int>(A.size()); ++j)
      if (k + j >= 0)
        c += A[j] * form_factors::basic_taylor_coefficient(k + j);
    if (-k < static_cast<int>(B.size()))
      c += B[-k];
    if (c != 0)
      throw std::logic_error("form factor table: uncancelled pole");
  }
  for (int k = 0; k < kTableSize; ++k) {
    Rational c = 0;
    for (int j = 0; j < static_cast<int>(A.size()); ++j)
      c += A[j] * form_factors::basic_taylor_coefficient(k + j);
    if (k == 0 && !B.empty())
      c += B[0];
    t.small.push_back(c);
  }
  for (int m = 0; m < kTableSize; ++m) {
    Rational c = 0;
    for (int j = 0; j < static_cast<int>(A.size()); ++j)
      if (m - j - 1 >= 0)
        c += A[j] * form_factors::basic_asymptotic_coefficient(m - j - 1);
    if (m < static_cast<int>(B.size()))
      c += B[m];
    t.large.push_back(c);
  }
  for (const auto &c : t.small)
    t.small_d.push_back(static_cast<double>(c));
  for (const auto &c : t.large)
    t.large_d.push_back(static_cast<double>(c));
  return t;
}

const PrimitiveTable &table(FormFactorTag tag) {
  static const auto tables = [] {
    std::array<PrimitiveTable, 16> all;
    for (int i = 0; i < 16; ++i) {
      const auto t = static_cast<FormFactorTag>(i);
      if (is_primitive(t))
        all[i] = build_table(t);
    }
    return all;
  }();
  return tables[static_cast<int>(tag)];
}

double horner(const std::vector<double> &c, int n, double x) {
  double acc = 0.0;
  for (int k = n - 1; k >= 0; --k)
    acc = acc * x + c[k];
  return acc;
}

// Asymptotic sum in u = 1/x, stopped before the terms start to grow.
double asymptotic_sum(const std::vector<double> &c, double x) {
  const double u = 1.0 / x;
  double sum = 0.0, upow = 1.0, last = INFINITY;
  for (double cm : c) {
    const double term = cm * upow;
    const double mag = std::abs(term);
    if (mag != 0.0) {
      if (mag > last)
        break;
      last = mag;
    }
    sum += term;
    upow *= u;
  }
  return sum;
}

double quadrature_f(double x, const EvalConfig &cfg) {
  quad::Options opt;
  opt.rel_tol = cfg.quad_rel_tol;
  opt.max_depth = cfg.quad_max_depth;
  // The integrand is symmetric about 1/2.
  auto r = quad::integrate(
      [x](double xi) { return std::exp(-x * xi * (1.0 - xi)); }, 0.0, 0.5, opt);
  return 2.0 * r.value;
}

double eval_primitive(FormFactorTag tag, double x, const EvalConfig &cfg) {
  const auto &t = table(tag);
  if (tag == FormFactorTag::Basic) {
    if (x < cfg.small_x_cut)
      return horner(t.small_d, cfg.series_order, x);
    if (x > cfg.large_x_cut)
      return asymptotic_sum(t.large_d, x);
    return quadrature_f(x, cfg);
  }
  if (t.removable) {
    if (x < std::max(cfg.small_x_cut, kRemovableCut))
      return horner(t.small_d, kTableSize, x);
  } else if (x < cfg.small_x_cut) {
    return horner(t.small_d, cfg.series_order, x);
  }
  if (x > cfg.large_x_cut)
    return asymptotic_sum(t.large_d, x);
  const double f = quadrature_f(x, cfg);
  const double u = 1.0 / x;
  double a = 0.0, b = 0.0;
  for (int j = static_cast<int>(t.form.a.size()) - 1; j >= 0; --j)
    a = a * u + static_cast<double>(t.form.a[j]);
  for (int j = static_cast<int>(t.form.b.size()) - 1; j >= 0; --j)
    b = b * u + static_cast<double>(t.form.b[j]);
  return a * f + b;
}

void check_order(int order) {
  if (order < 0)
    throw DomainError("series order must be non-negative");
  if (order > EvalConfig::kMaxSeriesOrder)
    throw UnsupportedOrder("series order " + std::to_string(order) +
                           " exceeds cap " +
                           std::to_string(EvalConfig::kMaxSeriesOrder));
}

} // namespace

// ---------------------------------------------------------------------------
// FormFactorKind

void FormFactorKind::validate() const {
  if (needs_dimension() && d < 4)
    throw DomainError(name() + " requires dimension d >= 4, got " +
                      std::to_string(d));
}

std::string FormFactorKind::name() const {
  if (tag == FormFactorTag::C)
    return "c" + std::to_string(d);
  if (tag == FormFactorTag::Rbis)
    return "rbis" + std::to_string(d);
  for (const auto &n : kFixedNames)
    if (n.tag == tag)
      return n.name;
  return "?";
}

FormFactorKind FormFactorKind::parse(std::string_view name) {
  for (const auto &n : kFixedNames)
    if (name == n.name)
      return of(n.tag);
  auto with_dim = [&](std::string_view prefix,
                      FormFactorTag t) -> std::optional<FormFactorKind> {
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix)
      return std::nullopt;
    int d = 0;
    const auto rest = name.substr(prefix.size());
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), d);
    if (ec != std::errc() || p != rest.data() + rest.size())
      return std::nullopt;
    FormFactorKind k{t, d};
    k.validate();
    return k;
  };
  if (auto k = with_dim("rbis", FormFactorTag::Rbis))
    return *k;
  if (auto k = with_dim("c", FormFactorTag::C))
    return *k;
  throw ConfigError("unknown form factor kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// EvalConfig

void EvalConfig::validate() const {
  if (!(small_x_cut >= 0.0))
    throw ConfigError("small_x_cut must be >= 0");
  if (!(large_x_cut > small_x_cut))
    throw ConfigError("large_x_cut must exceed small_x_cut");
  if (series_order < 2 || series_order > kMaxSeriesOrder)
    throw ConfigError("series_order must lie in [2, " +
                      std::to_string(kMaxSeriesOrder) + "]");
  if (!(quad_rel_tol > 0.0 && quad_rel_tol <= 1e-6))
    throw ConfigError("quad_rel_tol must lie in (0, 1e-6]");
  if (quad_max_depth < 1)
    throw ConfigError("quad_max_depth must be positive");
}

EvalConfig EvalConfig::from_env() {
  EvalConfig cfg;
  if (const char *v = std::getenv("HK_QUAD_TOL"); v && *v) {
    char *end = nullptr;
    errno = 0;
    const double tol = std::strtod(v, &end);
    if (errno != 0 || end == v || *end != '\0')
      throw ConfigError(std::string("HK_QUAD_TOL is not a number: ") + v);
    cfg.quad_rel_tol = tol;
  }
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------
// SeriesExpansion

std::vector<double> SeriesExpansion::as_double() const {
  std::vector<double> out;
  out.reserve(coefficients.size());
  for (const auto &c : coefficients)
    out.push_back(static_cast<double>(c));
  return out;
}

double SeriesExpansion::evaluate(double x) const {
  const auto c = as_double();
  if (kind == SeriesKind::SmallX)
    return horner(c, static_cast<int>(c.size()), x);
  double acc = 0.0;
  const double u = 1.0 / x;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    acc = acc * u + c[k];
  return acc * std::pow(x, leading_power);
}

// ---------------------------------------------------------------------------
// form_factors

namespace form_factors {

Rational basic_taylor_coefficient(int n) {
  Rational r = factorial(n) / factorial(2 * n + 1);
  return n % 2 ? Rational(-r) : r;
}

Rational basic_asymptotic_coefficient(int k) {
  return 2 * factorial(2 * k) / factorial(k);
}

std::optional<PrimitiveForm> primitive_form(FormFactorTag tag) {
  switch (tag) {
  case FormFactorTag::Basic:
    return PrimitiveForm{{q(1)}, {}};
  case FormFactorTag::Ric:
    return PrimitiveForm{{0, 0, q(1)}, {0, q(1, 6), q(-1)}};
  case FormFactorTag::R:
    return PrimitiveForm{{q(1, 32), q(1, 8), q(-1, 8)},
                         {0, q(-7, 48), q(1, 8)}};
  case FormFactorTag::RU:
    return PrimitiveForm{{q(-1, 4), q(-1, 2)}, {0, q(1, 2)}};
  case FormFactorTag::U:
    return PrimitiveForm{{q(1, 2)}, {}};
  case FormFactorTag::Omega:
    return PrimitiveForm{{0, q(-1, 2)}, {0, q(1, 2)}};
  case FormFactorTag::R2d:
    return PrimitiveForm{{q(1, 32), q(1, 8), q(3, 8)},
                         {0, q(-1, 16), q(-3, 8)}};
  case FormFactorTag::GU:
    return PrimitiveForm{{q(-1)}, {}};
  case FormFactorTag::GR:
    return PrimitiveForm{{q(1, 4), q(1, 2)}, {0, q(-1, 2)}};
  default:
    return std::nullopt;
  }
}

std::vector<Term> composite_terms(FormFactorKind kind) {
  using T = FormFactorTag;
  switch (kind.tag) {
  case T::C:
    kind.validate();
    return {{Rational(kind.d - 2, 4 * (kind.d - 3)), T::Ric}};
  case T::Rbis:
    kind.validate();
    return {{Rational(kind.d, 4 * (kind.d - 1)), T::Ric}, {q(1), T::R}};
  case T::BV1:
    return {{q(1), T::Ric}};
  case T::BV2:
    return {{q(1), T::R}, {q(1, 36), T::U}, {q(1, 6), T::RU}};
  case T::BV3:
    return {{q(-1, 3), T::U}, {q(-1), T::RU}};
  case T::BV4:
    return {{q(1), T::U}};
  case T::BV5:
    return {{q(1), T::Omega}};
  default:
    return {};
  }
}

double basic_f(double x, const EvalConfig &cfg) {
  return eval(FormFactorKind::of(FormFactorTag::Basic), x, cfg);
}

double eval(FormFactorKind kind, double x, const EvalConfig &cfg) {
  if (!(x >= 0.0))
    throw DomainError("form factor argument must be >= 0, got " +
                      std::to_string(x));
  kind.validate();
  if (is_primitive(kind.tag))
    return eval_primitive(kind.tag, x, cfg);
  double acc = 0.0;
  for (const auto &t : composite_terms(kind))
    acc += static_cast<double>(t.weight) * eval_primitive(t.tag, x, cfg);
  return acc;
}

SeriesExpansion series(FormFactorKind kind, SeriesKind which, int order) {
  check_order(order);
  kind.validate();
  std::vector<Term> terms = composite_terms(kind);
  if (terms.empty())
    terms.push_back({q(1), kind.tag});

  std::vector<Rational> combined(kTableSize, Rational(0));
  for (const auto &t : terms) {
    const auto &tab = table(t.tag);
    const auto &src = which == SeriesKind::SmallX ? tab.small : tab.large;
    for (int k = 0; k < kTableSize; ++k)
      combined[k] += t.weight * src[k];
  }

  SeriesExpansion out;
  out.kind = which;
  if (which == SeriesKind::SmallX) {
    out.leading_power = 0;
    out.coefficients.assign(combined.begin(), combined.begin() + order);
    return out;
  }
  // LargeX: skip vanishing leading powers of u.
  int first = 0;
  while (first < kTableSize && combined[first] == 0)
    ++first;
  if (first + order > kTableSize)
    throw UnsupportedOrder("large-x series exhausted for " + kind.name());
  out.leading_power = -first;
  out.coefficients.assign(combined.begin() + first,
                          combined.begin() + first + order);
  return out;
}

} // namespace form_factors
} // namespace hk
