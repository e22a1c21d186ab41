#include "hk/projector_algebra.hpp"

#include <cmath>

#include "hk/errors.hpp"

namespace hk {

Momentum Momentum::along_last_axis(int d, double norm) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
  c(d - 1) = norm;
  return Momentum(c);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
vector_projectors(const Momentum &p) {
  const double p2 = p.norm2();
  if (!(p2 > 0.0))
    throw DomainError("projectors need a nonzero momentum");
  const int d = p.d();
  Eigen::MatrixXd pl = p.components * p.components.transpose() / p2;
  Eigen::MatrixXd pt = Eigen::MatrixXd::Identity(d, d) - pl;
  return {pt, pl};
}

// ---------------------------------------------------------------------------

SymPairTensor::SymPairTensor(int d)
    : d_(d), m_(Eigen::MatrixXd::Zero(d * d, d * d)) {}

SymPairTensor SymPairTensor::from_function(
    int d, const std::function<double(int, int, int, int)> &f) {
  SymPairTensor t(d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          t(m, n, a, b) = f(m, n, a, b);
  return t;
}

SymPairTensor SymPairTensor::outer(const Eigen::MatrixXd &a,
                                   const Eigen::MatrixXd &b) {
  const int d = static_cast<int>(a.rows());
  if (b.rows() != d || a.cols() != d || b.cols() != d)
    throw DimensionMismatch("outer product of mismatched matrices");
  SymPairTensor t(d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be)
          t(m, n, al, be) = a(m, n) * b(al, be);
  return t;
}

SymPairTensor SymPairTensor::identity(int d) {
  return from_function(d, [](int m, int n, int a, int b) {
    return 0.5 * ((m == a && n == b) + (m == b && n == a));
  });
}

SymPairTensor SymPairTensor::compose(const SymPairTensor &o) const {
  if (o.d_ != d_)
    throw DimensionMismatch("compose: dimensions differ");
  SymPairTensor r(d_);
  r.m_ = m_ * o.m_;
  return r;
}

double SymPairTensor::trace() const {
  // Pair-metric trace: contract mu-alpha and nu-beta, symmetrised.
  double acc = 0.0;
  for (int m = 0; m < d_; ++m)
    for (int n = 0; n < d_; ++n)
      acc += 0.5 * ((*this)(m, n, m, n) + (*this)(m, n, n, m));
  return acc;
}

double SymPairTensor::inner(const SymPairTensor &o) const {
  if (o.d_ != d_)
    throw DimensionMismatch("inner: dimensions differ");
  return m_.cwiseProduct(o.m_).sum();
}

double SymPairTensor::pair_asymmetry() const {
  double worst = 0.0;
  for (int m = 0; m < d_; ++m)
    for (int n = 0; n < d_; ++n)
      for (int a = 0; a < d_; ++a)
        for (int b = 0; b < d_; ++b) {
          const double v = (*this)(m, n, a, b);
          worst = std::max(worst, std::abs(v - (*this)(n, m, a, b)));
          worst = std::max(worst, std::abs(v - (*this)(m, n, b, a)));
        }
  return worst;
}

SymPairTensor SymPairTensor::symmetrized() const {
  return from_function(d_, [this](int m, int n, int a, int b) {
    const auto &t = *this;
    return 0.25 * (t(m, n, a, b) + t(n, m, a, b) + t(m, n, b, a) +
                   t(n, m, b, a));
  });
}

SymPairTensor SymPairTensor::rotated(const Eigen::MatrixXd &r) const {
  // R acts on each index; on the flattened pair index that is R (x) R.
  Eigen::MatrixXd rr(d_ * d_, d_ * d_);
  for (int m = 0; m < d_; ++m)
    for (int n = 0; n < d_; ++n)
      for (int mp = 0; mp < d_; ++mp)
        for (int np = 0; np < d_; ++np)
          rr(m * d_ + n, mp * d_ + np) = r(m, mp) * r(n, np);
  SymPairTensor out(d_);
  out.m_ = rr * m_ * rr.transpose();
  return out;
}

SymPairTensor SymPairTensor::operator+(const SymPairTensor &o) const {
  SymPairTensor r(*this);
  r += o;
  return r;
}

SymPairTensor SymPairTensor::operator-(const SymPairTensor &o) const {
  return *this + o * -1.0;
}

SymPairTensor SymPairTensor::operator*(double s) const {
  SymPairTensor r(*this);
  r.m_ *= s;
  return r;
}

SymPairTensor &SymPairTensor::operator+=(const SymPairTensor &o) {
  if (o.d_ != d_)
    throw DimensionMismatch("sum: dimensions differ");
  m_ += o.m_;
  return *this;
}

// ---------------------------------------------------------------------------

std::string projector_label(ProjectorName n) {
  switch (n) {
  case ProjectorName::P2:
    return "P2";
  case ProjectorName::P1:
    return "P1";
  case ProjectorName::S:
    return "PS";
  case ProjectorName::Ssigma:
    return "PSsigma";
  case ProjectorName::sigmaS:
    return "PsigmaS";
  case ProjectorName::sigma:
    return "Psigma";
  }
  return "?";
}

SymPairTensor tensor_projector(ProjectorName name, const Momentum &p) {
  const int d = p.d();
  if (d < 2)
    throw DomainError("tensor projectors need d >= 2");
  const auto [pt, pl] = vector_projectors(p);
  const double inv = 1.0 / (d - 1);
  const double isq = 1.0 / std::sqrt(double(d - 1));
  switch (name) {
  case ProjectorName::P2:
    return SymPairTensor::from_function(d, [&](int m, int n, int a, int b) {
      return 0.5 * (pt(m, a) * pt(n, b) + pt(m, b) * pt(n, a)) -
             inv * pt(m, n) * pt(a, b);
    });
  case ProjectorName::P1:
    return SymPairTensor::from_function(d, [&](int m, int n, int a, int b) {
      return 0.5 * (pt(m, a) * pl(n, b) + pt(m, b) * pl(n, a) +
                    pt(n, a) * pl(m, b) + pt(n, b) * pl(m, a));
    });
  case ProjectorName::S:
    return SymPairTensor::outer(pt, pt) * inv;
  case ProjectorName::Ssigma:
    return SymPairTensor::outer(pt, pl) * isq;
  case ProjectorName::sigmaS:
    return SymPairTensor::outer(pl, pt) * isq;
  case ProjectorName::sigma:
    return SymPairTensor::outer(pl, pl);
  }
  throw DomainError("unknown projector");
}

double ProjectorCoefficients::get(ProjectorName n) const {
  switch (n) {
  case ProjectorName::P2:
    if (!c2)
      throw SingularGram("P2 slot is absent at d = 2");
    return *c2;
  case ProjectorName::P1:
    return c1;
  case ProjectorName::S:
    return cS;
  case ProjectorName::Ssigma:
    return cSsigma;
  case ProjectorName::sigmaS:
    return csigmaS;
  case ProjectorName::sigma:
    return csigma;
  }
  return 0.0;
}

void ProjectorCoefficients::set(ProjectorName n, double v) {
  switch (n) {
  case ProjectorName::P2:
    c2 = v;
    break;
  case ProjectorName::P1:
    c1 = v;
    break;
  case ProjectorName::S:
    cS = v;
    break;
  case ProjectorName::Ssigma:
    cSsigma = v;
    break;
  case ProjectorName::sigmaS:
    csigmaS = v;
    break;
  case ProjectorName::sigma:
    csigma = v;
    break;
  }
}

ProjectorCoefficients decompose(const SymPairTensor &t, const Momentum &p,
                                bool require_p2) {
  const int d = p.d();
  if (t.d() != d)
    throw DimensionMismatch("decompose: tensor and momentum dimensions differ");
  if (d == 2 && require_p2)
    throw SingularGram("P2 vanishes identically at d = 2");
  const double scale = std::max(1.0, t.frobenius_norm());
  if (t.pair_asymmetry() > 1e-12 * scale)
    throw DomainError("decompose: tensor is not pair symmetric");

  std::vector<ProjectorName> basis;
  std::vector<SymPairTensor> ps;
  for (auto n : kAllProjectors) {
    if (n == ProjectorName::P2 && d == 2)
      continue;
    basis.push_back(n);
    ps.push_back(tensor_projector(n, p));
  }
  const int k = static_cast<int>(basis.size());
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (int i = 0; i < k; ++i) {
    rhs(i) = ps[i].inner(t);
    for (int j = 0; j < k; ++j)
      gram(i, j) = ps[i].inner(ps[j]);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (lu.rank() < k)
    throw SingularGram("projector Gram matrix is singular");
  const Eigen::VectorXd c = lu.solve(rhs);

  ProjectorCoefficients out;
  SymPairTensor rest = t;
  for (int i = 0; i < k; ++i) {
    out.set(basis[i], c(i));
    rest = rest - ps[i] * c(i);
  }
  out.residual_norm = rest.frobenius_norm();
  return out;
}

SymPairTensor recompose(const ProjectorCoefficients &c, const Momentum &p) {
  SymPairTensor t(p.d());
  for (auto n : kAllProjectors) {
    if (n == ProjectorName::P2 && !c.c2)
      continue;
    t += tensor_projector(n, p) * c.get(n);
  }
  return t;
}

VectorCoefficients decompose_vector(const Eigen::MatrixXd &m,
                                    const Momentum &p) {
  const auto [pt, pl] = vector_projectors(p);
  if (m.rows() != p.d() || m.cols() != p.d())
    throw DimensionMismatch("decompose_vector: shape mismatch");
  VectorCoefficients v;
  v.pt = m.cwiseProduct(pt).sum() / pt.trace();
  v.pl = m.cwiseProduct(pl).sum();
  v.residual_norm = (m - v.pt * pt - v.pl * pl).norm();
  return v;
}

} // namespace hk
