#include "hk/lattice_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <lapacke.h>

#include "hk/errors.hpp"

namespace hk {

namespace {

using cd = std::complex<double>;

struct Spectrum {
  std::vector<double> values;
  Eigen::MatrixXcd vectors; // empty unless requested
};

Spectrum diagonalize(const Eigen::MatrixXcd &m, bool vectors) {
  const lapack_int n = static_cast<lapack_int>(m.rows());
  Spectrum sp;
  sp.values.resize(n);
  const char jobz = vectors ? 'V' : 'N';
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::MatrixXd a = m.real();
    const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'U', n,
                                           a.data(), n, sp.values.data());
    if (info != 0)
      throw EigensolveFailure("dsyevd returned " + std::to_string(info));
    if (vectors)
      sp.vectors = a.cast<cd>();
    return sp;
  }
  Eigen::MatrixXcd a = m;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, jobz, 'U', n,
      reinterpret_cast<lapack_complex_double *>(a.data()), n,
      sp.values.data());
  if (info != 0)
    throw EigensolveFailure("zheevd returned " + std::to_string(info));
  if (vectors)
    sp.vectors = std::move(a);
  return sp;
}

Eigen::VectorXd site_position(const LatticeSpec &spec, int idx) {
  Eigen::VectorXd x(spec.d);
  for (int mu = 0; mu < spec.d; ++mu) {
    x(mu) = spec.spacing() * (idx % spec.n_sites);
    idx /= spec.n_sites;
  }
  return x;
}

int neighbour(const LatticeSpec &spec, int idx, int mu) {
  int stride = 1;
  for (int k = 0; k < mu; ++k)
    stride *= spec.n_sites;
  const int coord = (idx / stride) % spec.n_sites;
  return coord + 1 == spec.n_sites ? idx - coord * stride : idx + stride;
}

} // namespace

int LatticeSpec::dimension() const {
  int n = 1;
  for (int i = 0; i < d; ++i)
    n *= n_sites;
  return n;
}

void LatticeSpec::validate() const {
  if (d < 1 || d > 2)
    throw ConfigError("lattice dimension must be 1 or 2");
  if (n_sites < 2)
    throw ConfigError("lattice needs at least two sites per side");
  if (!(L > 0.0))
    throw ConfigError("lattice box length must be positive");
  if (std::pow(double(n_sites), d) > kMaxDimension)
    throw ConfigError("lattice matrix exceeds the dense budget of " +
                      std::to_string(kMaxDimension));
}

bool LatticeSpec::in_window(double s) const {
  const double a = spacing();
  return s >= 10.0 * a * a && s <= L * L / 40.0;
}

nlohmann::ordered_json OracleResult::to_json() const {
  nlohmann::ordered_json j = {
      {"trace", trace}, {"eig_min", eig_min}, {"eig_max", eig_max}, {"n", n}};
  if (diagonal)
    j["diagonal"] = *diagonal;
  return j;
}

Eigen::MatrixXcd build_operator(const LatticeSpec &spec,
                                const FieldData &fields) {
  spec.validate();
  if (fields.d != spec.d)
    throw DimensionMismatch("field and lattice dimensions differ");
  if (std::abs(fields.L - spec.L) > 1e-12 * spec.L)
    throw DimensionMismatch("field and lattice box lengths differ");
  const int n = spec.dimension();
  const double a = spec.spacing();
  const double inv_a2 = 1.0 / (a * a);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd x = site_position(spec, j);
    m(j, j) += 2.0 * spec.d * inv_a2 + fields.u_at(x);
    for (int mu = 0; mu < spec.d; ++mu) {
      Eigen::VectorXd mid = x;
      mid(mu) += 0.5 * a;
      const double th = fields.a_modes.empty() ? 0.0 : fields.theta_at(mu, mid);
      const cd link = th == 0.0 ? cd(1.0) : std::exp(cd(0.0, a * th));
      const int k = neighbour(spec, j, mu);
      m(j, k) -= link * inv_a2;
      m(k, j) -= std::conj(link) * inv_a2;
    }
  }
  return m;
}

std::vector<double> lattice_eigenvalues(const LatticeSpec &spec,
                                        const FieldData &fields) {
  return diagonalize(build_operator(spec, fields), false).values;
}

double stable_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end(),
            [](double a, double b) { return std::abs(a) > std::abs(b); });
  // Neumaier's variant of compensated summation.
  double sum = 0.0, comp = 0.0;
  for (double t : terms) {
    const double next = sum + t;
    if (std::abs(sum) >= std::abs(t))
      comp += (sum - next) + t;
    else
      comp += (t - next) + sum;
    sum = next;
  }
  return sum + comp;
}

OracleResult exact_trace(const LatticeSpec &spec, const FieldData &fields,
                         double s, bool with_diagonal) {
  if (!(s > 0.0))
    throw DomainError("proper time must be positive");
  const auto sp = diagonalize(build_operator(spec, fields), with_diagonal);
  OracleResult r;
  r.n = static_cast<int>(sp.values.size());
  r.eig_min = sp.values.front();
  r.eig_max = sp.values.back();
  std::vector<double> w(sp.values.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = std::exp(-s * sp.values[i]);
  r.trace = stable_sum(w);
  if (with_diagonal) {
    const double cell = std::pow(spec.spacing(), spec.d);
    std::vector<double> diag(r.n);
    for (int j = 0; j < r.n; ++j) {
      std::vector<double> terms(r.n);
      for (int k = 0; k < r.n; ++k)
        terms[k] = w[k] * std::norm(sp.vectors(j, k));
      diag[j] = stable_sum(std::move(terms)) / cell;
    }
    r.diagonal = std::move(diag);
  }
  return r;
}

double isolate_second_order(const LatticeSpec &spec, const FieldData &fields,
                            double s, double eps) {
  const double tp = exact_trace(spec, fields.scaled(eps), s).trace;
  const double tm = exact_trace(spec, fields.scaled(-eps), s).trace;
  const double t0 = exact_trace(spec, fields.scaled(0.0), s).trace;
  return stable_sum({tp, tm, -2.0 * t0}) / 2.0;
}

double exact_resolvent_trace(const LatticeSpec &spec, const FieldData &fields,
                             double m2) {
  const auto ev = lattice_eigenvalues(spec, fields);
  std::vector<double> terms;
  terms.reserve(ev.size());
  for (double l : ev) {
    if (!(l + m2 > 0.0))
      throw DomainError("resolvent pole on the spectrum");
    terms.push_back(1.0 / (l + m2));
  }
  return stable_sum(std::move(terms));
}

} // namespace hk
