#include "hk/diagram_engine.hpp"

#include <cmath>
#include <functional>

#include "hk/errors.hpp"
#include "hk/quadrature.hpp"

namespace hk {

namespace {

int ipow(int d, int r) {
  int n = 1;
  for (int i = 0; i < r; ++i)
    n *= d;
  return n;
}

Eigen::VectorXd zeros(int d) { return Eigen::VectorXd::Zero(d); }

AffineMomentum leg(double c, Eigen::VectorXd v) { return {c, std::move(v)}; }

void require_positive_s(double s) {
  if (!(s > 0.0))
    throw DomainError("proper time must be positive, got " + std::to_string(s));
}

// ---------------------------------------------------------------------------
// Vertex builders

LoopPolynomial vertex_h1(const VertexKinematics &kin, int d) {
  LoopPolynomial v(d, 2);
  const double a = kin.k1.q_coeff, b = kin.k2.q_coeff;
  const Eigen::VectorXd &vv = kin.k1.shift, &ww = kin.k2.shift;
  const Eigen::VectorXd sum_shift = vv + ww;
  const double sum_c = a + b;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const int I = m * d + n;
      // k1^(m k2^n)
      v.c0(I) += 0.5 * (vv(m) * ww(n) + vv(n) * ww(m));
      v.c1(I, m) += 0.5 * a * ww(n);
      v.c1(I, n) += 0.5 * a * ww(m);
      v.c1(I, n) += 0.5 * b * vv(m);
      v.c1(I, m) += 0.5 * b * vv(n);
      v.c2(I, m * d + n) += 0.5 * a * b;
      v.c2(I, n * d + m) += 0.5 * a * b;
      if (m == n) {
        // -(k1 + k2)^2 / 4
        v.c0(I) -= 0.25 * sum_shift.squaredNorm();
        for (int k = 0; k < d; ++k) {
          v.c1(I, k) -= 0.5 * sum_c * sum_shift(k);
          v.c2(I, k * d + k) -= 0.25 * sum_c * sum_c;
        }
      }
    }
  return v;
}

bool is_tadpole_configuration(const VertexKinematics &kin) {
  if (kin.externals.size() != 2)
    return false;
  const auto &e0 = kin.externals[0], &e1 = kin.externals[1];
  if (e0.size() != e1.size() || (e0 + e1).norm() > 1e-12 * (1.0 + e0.norm()))
    return false;
  return kin.k1.q_coeff == 1.0 && kin.k2.q_coeff == -1.0 &&
         kin.k1.shift.norm() == 0.0 && kin.k2.shift.norm() == 0.0;
}

LoopPolynomial vertex_h2(const VertexKinematics &kin, int d, H2Convention c) {
  if (!is_tadpole_configuration(kin))
    throw UnsupportedKinematics(
        "two-graviton vertex is only available for externals (p, -p) and "
        "legs (q, -q)");
  const double p2 = kin.externals[0].squaredNorm();
  const double pot = c == H2Convention::Eighth ? 0.125 : 0.25;
  LoopPolynomial v(d, 4);
  const int d2 = d * d;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int al = 0; al < d; ++al)
        for (int be = 0; be < d; ++be) {
          const int I = (m * d + n) * d2 + al * d + be;
          if (m == n && al == be)
            v.c0(I) = pot * p2;
          // 2 q^(m delta^n)(al q^be): weight 1/2 per index ordering, split
          // symmetrically over the loop indices (k, l).
          auto add = [&](int k, int x, int l, int y) {
            if (x != y)
              return;
            v.c2(I, k * d + l) += 0.25;
            v.c2(I, l * d + k) += 0.25;
          };
          add(m, n, be, al);
          add(n, m, be, al);
          add(m, n, al, be);
          add(n, m, al, be);
        }
  return v;
}

LoopPolynomial vertex_ah(const VertexKinematics &kin, int d) {
  // -(k1 - k2)^(mu delta^nu) lambda, indices (lambda, mu, nu).
  LoopPolynomial v(d, 3);
  const double c = kin.k1.q_coeff - kin.k2.q_coeff;
  const Eigen::VectorXd w = kin.k1.shift - kin.k2.shift;
  for (int la = 0; la < d; ++la)
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const int I = (la * d + m) * d + n;
        if (n == la) {
          v.c0(I) -= 0.5 * w(m);
          v.c1(I, m) -= 0.5 * c;
        }
        if (m == la) {
          v.c0(I) -= 0.5 * w(n);
          v.c1(I, n) -= 0.5 * c;
        }
      }
  return v;
}

// ---------------------------------------------------------------------------
// Diagram assembly

Eigen::VectorXd flatten(const Eigen::MatrixXd &m) {
  Eigen::VectorXd v(m.size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      v(i * m.cols() + j) = m(i, j);
  return v;
}

// int_0^1 dxi e^{-x xi(1-xi)} g(xi), with an absolute floor so that
// integrals which cancel to zero still terminate.
Eigen::VectorXd parametric(const std::function<Eigen::VectorXd(double)> &g,
                           double x, double rel_tol) {
  auto integrand = [&](double xi) -> Eigen::VectorXd {
    return g(xi) * std::exp(-x * xi * (1.0 - xi));
  };
  double scale = 0.0;
  for (double xi : {0.0, 0.5, 1.0})
    scale = std::max(scale, quad::norm_inf(integrand(xi)));
  quad::Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = 1e-3 * rel_tol * scale / std::max(1.0, x);
  return quad::integrate(integrand, 0.0, 1.0, opt).value;
}

VertexKinematics sunset_leg_a(const Eigen::VectorXd &p, double xi) {
  return {leg(1.0, -xi * p), leg(-1.0, -(1.0 - xi) * p), {p}};
}

VertexKinematics sunset_leg_b(const Eigen::VectorXd &p, double xi) {
  return {leg(1.0, (1.0 - xi) * p), leg(-1.0, xi * p), {Eigen::VectorXd(-p)}};
}

VertexKinematics tadpole_legs(const Eigen::VectorXd &p) {
  const int d = static_cast<int>(p.size());
  return {leg(1.0, zeros(d)), leg(-1.0, zeros(d)), {p, Eigen::VectorXd(-p)}};
}

Eigen::VectorXd sunset(VertexKind ka, VertexKind kb, double s,
                       const Eigen::VectorXd &p, const DiagramOptions &opt) {
  const double x = s * p.squaredNorm();
  auto g = [&](double xi) -> Eigen::VectorXd {
    const auto a = vertex(ka, sunset_leg_a(p, xi), opt.h2);
    const auto b = vertex(kb, sunset_leg_b(p, xi), opt.h2);
    return flatten(gaussian_average(a, b, s));
  };
  return s * s * parametric(g, x, opt.rel_tol);
}

Eigen::VectorXd tadpole(VertexKind k, double s, const Eigen::VectorXd &p,
                        const DiagramOptions &opt) {
  return -s * gaussian_average(vertex(k, tadpole_legs(p), opt.h2), s);
}

// First-order kernel diagram at coincident points.
Eigen::VectorXd kernel_one_point(VertexKind k, double s,
                                 const Eigen::VectorXd &p,
                                 const DiagramOptions &opt) {
  const double x = s * p.squaredNorm();
  auto g = [&](double xi) -> Eigen::VectorXd {
    return gaussian_average(vertex(k, sunset_leg_a(p, xi), opt.h2), s);
  };
  return -s * parametric(g, x, opt.rel_tol);
}

Eigen::MatrixXd as_matrix(const Eigen::VectorXd &v, int d) {
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      m(i, j) = v(i * d + j);
  return m;
}

SymPairTensor as_pair_tensor(const Eigen::VectorXd &v, int d) {
  const int d2 = d * d;
  return SymPairTensor::from_function(d, [&](int m, int n, int a, int b) {
    return v((m * d + n) * d2 + a * d + b);
  });
}

void fill_vector_split(DiagramResult &r, const Eigen::MatrixXd &m,
                       const Momentum &p) {
  const auto v = decompose_vector(m, p);
  r.pt_coeff = v.pt;
  r.pl_coeff = v.pl;
  r.residual = v.residual_norm;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd &a,
                              const Eigen::VectorXd &b, const char *what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-14);
  if (a.size() == 0 || lu.rank() < a.cols())
    throw SingularSystem(std::string(what) +
                         ": extraction system is degenerate");
  return lu.solve(b);
}

} // namespace

// ---------------------------------------------------------------------------
// Propagator chains

double propagator_chain(const ChainSpec &spec, double rel_tol) {
  require_positive_s(spec.s);
  const int n = static_cast<int>(spec.momenta.size());
  if (n < 1)
    throw DomainError("propagator chain needs at least one momentum");
  if (n > 4)
    throw UnsupportedArity("propagator chains are supported up to n = 4");
  std::vector<double> P;
  for (const auto &p : spec.momenta) {
    if (spec.d > 0 && p.size() != spec.d)
      throw DimensionMismatch("chain momentum has wrong dimension");
    P.push_back(spec.s * p.squaredNorm());
  }
  if (n == 1)
    return std::exp(-P[0]);
  if (n == 2) {
    // int_0^1 dt e^{-(1-t)P1 - t P2} = e^{-P2} (1 - e^{-delta}) / delta.
    const double delta = P[0] - P[1];
    if (delta == 0.0)
      return std::exp(-P[1]);
    return std::exp(-P[1]) * (-std::expm1(-delta)) / delta;
  }
  quad::Options opt;
  opt.rel_tol = rel_tol;
  // t-ordered integrals: level j integrates t_j over [0, t_{j-1}], t_0 = 1.
  std::function<double(int, double, double)> level =
      [&](int j, double t_prev, double expo) -> double {
    if (j == n)
      return std::exp(-(expo + t_prev * P[n - 1]));
    auto inner = [&](double t) {
      return level(j + 1, t, expo + (t_prev - t) * P[j - 1]);
    };
    return quad::integrate(inner, 0.0, t_prev, opt).value;
  };
  return level(1, 1.0, 0.0);
}

// ---------------------------------------------------------------------------
// Loop polynomials and Gaussian moments

LoopPolynomial::LoopPolynomial(int d_, int rank_)
    : d(d_), rank(rank_), c0(Eigen::VectorXd::Zero(ipow(d_, rank_))),
      c1(Eigen::MatrixXd::Zero(ipow(d_, rank_), d_)),
      c2(Eigen::MatrixXd::Zero(ipow(d_, rank_), d_ * d_)) {}

Eigen::VectorXd LoopPolynomial::evaluate(const Eigen::VectorXd &q) const {
  Eigen::VectorXd qq(d * d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      qq(k * d + l) = q(k) * q(l);
  return c0 + c1 * q + c2 * qq;
}

Eigen::VectorXd LoopPolynomial::trace_c2() const {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(c0.size());
  for (int k = 0; k < d; ++k)
    t += c2.col(k * d + k);
  return t;
}

LoopPolynomial vertex(VertexKind kind, const VertexKinematics &kin,
                      H2Convention h2) {
  const int d = static_cast<int>(kin.k1.shift.size());
  if (kin.k2.shift.size() != d)
    throw DimensionMismatch("vertex legs have different dimensions");
  for (const auto &e : kin.externals)
    if (e.size() != d)
      throw DimensionMismatch("external momentum has wrong dimension");
  switch (kind) {
  case VertexKind::U1: {
    LoopPolynomial v(d, 0);
    v.c0(0) = 1.0;
    return v;
  }
  case VertexKind::U2:
    return LoopPolynomial(d, 0);
  case VertexKind::A1: {
    LoopPolynomial v(d, 1);
    v.c0 = kin.k1.shift - kin.k2.shift;
    v.c1 = (kin.k1.q_coeff - kin.k2.q_coeff) * Eigen::MatrixXd::Identity(d, d);
    return v;
  }
  case VertexKind::A2: {
    LoopPolynomial v(d, 2);
    for (int m = 0; m < d; ++m)
      v.c0(m * d + m) = 2.0;
    return v;
  }
  case VertexKind::h1:
    return vertex_h1(kin, d);
  case VertexKind::h2:
    return vertex_h2(kin, d, h2);
  case VertexKind::Uh:
    return LoopPolynomial(d, 2);
  case VertexKind::Ah:
    return vertex_ah(kin, d);
  }
  throw DomainError("unknown vertex kind");
}

Eigen::VectorXd gaussian_moment(int rank, double s, int d) {
  require_positive_s(s);
  if (rank < 0)
    throw DomainError("negative moment rank");
  if (rank > 4)
    throw UnsupportedRank("Gaussian moments are supported up to rank 4");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(ipow(d, rank));
  switch (rank) {
  case 0:
    m(0) = 1.0;
    break;
  case 2:
    for (int i = 0; i < d; ++i)
      m(i * d + i) = 1.0 / (2.0 * s);
    break;
  case 4:
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          for (int l = 0; l < d; ++l)
            m(((i * d + j) * d + k) * d + l) =
                ((i == j && k == l) + (i == k && j == l) + (i == l && j == k)) /
                (4.0 * s * s);
    break;
  default:
    break; // odd ranks vanish
  }
  return m;
}

Eigen::VectorXd gaussian_average(const LoopPolynomial &v, double s) {
  require_positive_s(s);
  return v.c0 + v.trace_c2() / (2.0 * s);
}

Eigen::MatrixXd gaussian_average(const LoopPolynomial &a,
                                 const LoopPolynomial &b, double s) {
  require_positive_s(s);
  if (a.d != b.d)
    throw DimensionMismatch("gaussian_average: dimensions differ");
  const Eigen::VectorXd ta = a.trace_c2(), tb = b.trace_c2();
  Eigen::MatrixXd m = a.c0 * b.c0.transpose();
  m += (a.c1 * b.c1.transpose() + ta * b.c0.transpose() +
        a.c0 * tb.transpose()) /
       (2.0 * s);
  m += (ta * tb.transpose() + 2.0 * a.c2 * b.c2.transpose()) / (4.0 * s * s);
  return m;
}

// ---------------------------------------------------------------------------
// Channels

std::string channel_name(DiagramChannel c) {
  switch (c) {
  case DiagramChannel::Tr0:
    return "Tr0";
  case DiagramChannel::TrU:
    return "TrU";
  case DiagramChannel::Trh:
    return "Trh";
  case DiagramChannel::TrUU:
    return "TrUU";
  case DiagramChannel::TrAA:
    return "TrAA";
  case DiagramChannel::Trhh:
    return "Trhh";
  case DiagramChannel::TrhU:
    return "TrhU";
  case DiagramChannel::TrAh:
    return "TrAh";
  case DiagramChannel::K_U:
    return "K_U";
  case DiagramChannel::K_h:
    return "K_h";
  }
  return "?";
}

DiagramChannel parse_channel(const std::string &name) {
  for (int i = 0; i <= static_cast<int>(DiagramChannel::K_h); ++i) {
    const auto c = static_cast<DiagramChannel>(i);
    if (channel_name(c) == name)
      return c;
  }
  throw ConfigError("unknown diagram channel '" + name + "'");
}

bool is_two_point(DiagramChannel c) {
  switch (c) {
  case DiagramChannel::TrUU:
  case DiagramChannel::TrAA:
  case DiagramChannel::Trhh:
  case DiagramChannel::TrhU:
  case DiagramChannel::TrAh:
    return true;
  default:
    return false;
  }
}

bool needs_momentum(DiagramChannel c) {
  return is_two_point(c) || c == DiagramChannel::K_U ||
         c == DiagramChannel::K_h;
}

DiagramResult npoint(DiagramChannel channel, double s, const Momentum &p,
                     int d, const DiagramOptions &opt) {
  require_positive_s(s);
  if (needs_momentum(channel)) {
    if (p.d() == 0)
      throw DomainError(channel_name(channel) + " needs an external momentum");
    d = p.d();
  } else if (p.d() > 0) {
    d = p.d();
  }
  if (d < 1)
    throw DomainError("dimension must be positive");

  DiagramResult r;
  r.channel = channel;
  const Eigen::VectorXd pv = p.d() > 0 ? p.components : zeros(d);
  r.x = s * pv.squaredNorm();

  using V = VertexKind;
  switch (channel) {
  case DiagramChannel::Tr0:
    r.scalar = gaussian_moment(0, s, d)(0);
    break;
  case DiagramChannel::TrU:
    r.scalar = tadpole(V::U1, s, zeros(d), opt)(0);
    break;
  case DiagramChannel::Trh: {
    // Momentum conservation sets the graviton momentum to zero.
    const auto m = as_matrix(tadpole(V::h1, s, zeros(d), opt), d);
    r.scalar = m.trace() / d;
    r.residual = (m - *r.scalar * Eigen::MatrixXd::Identity(d, d)).norm();
    break;
  }
  case DiagramChannel::TrUU:
    r.scalar = (sunset(V::U1, V::U1, s, pv, opt) + tadpole(V::U2, s, pv, opt))(0);
    break;
  case DiagramChannel::TrAA:
    fill_vector_split(
        r,
        as_matrix(sunset(V::A1, V::A1, s, pv, opt) + tadpole(V::A2, s, pv, opt),
                  d),
        p);
    break;
  case DiagramChannel::TrhU:
    fill_vector_split(
        r,
        as_matrix(sunset(V::h1, V::U1, s, pv, opt) + tadpole(V::Uh, s, pv, opt),
                  d),
        p);
    break;
  case DiagramChannel::Trhh: {
    const auto t = as_pair_tensor(
        sunset(V::h1, V::h1, s, pv, opt) + tadpole(V::h2, s, pv, opt), d);
    r.projector_coeffs = decompose(t, p);
    r.residual = r.projector_coeffs->residual_norm;
    break;
  }
  case DiagramChannel::TrAh:
    r.tensor = sunset(V::A1, V::h1, s, pv, opt) + tadpole(V::Ah, s, pv, opt);
    break;
  case DiagramChannel::K_U:
    r.scalar = kernel_one_point(V::U1, s, pv, opt)(0);
    break;
  case DiagramChannel::K_h:
    fill_vector_split(r, as_matrix(kernel_one_point(V::h1, s, pv, opt), d), p);
    break;
  }
  return r;
}

CoincidenceFactors CoincidenceFactors::standard(const EvalConfig &cfg) {
  return {[cfg](double x) {
            return form_factors::eval(FormFactorKind::of(FormFactorTag::GU), x,
                                      cfg);
          },
          [cfg](double x) {
            return form_factors::eval(FormFactorKind::of(FormFactorTag::GR), x,
                                      cfg);
          }};
}

DiagramResult ansatz_npoint(DiagramChannel channel, double s,
                            const Momentum &p, int d, const Constants &k,
                            const FormFactorSet &ffs,
                            const CoincidenceFactors &gs) {
  require_positive_s(s);
  if (needs_momentum(channel) && p.d() == 0)
    throw DomainError(channel_name(channel) + " needs an external momentum");
  if (p.d() > 0)
    d = p.d();
  const FormFactorSet set =
      ffs.basis == Basis::RicR ? ffs : basis::convert(ffs, Basis::RicR, ffs.d);
  DiagramResult r;
  r.channel = channel;
  const double x = p.d() > 0 ? s * p.norm2() : 0.0;
  r.x = x;
  switch (channel) {
  case DiagramChannel::Tr0:
    r.scalar = k.g0;
    break;
  case DiagramChannel::TrU:
    r.scalar = s * k.gU0;
    break;
  case DiagramChannel::Trh:
    r.scalar = k.g0 / 2.0;
    break;
  case DiagramChannel::TrUU:
    r.scalar = 2.0 * s * s * set("U", x);
    break;
  case DiagramChannel::TrAA:
    r.pt_coeff = -4.0 * s * x * set("Omega", x);
    r.pl_coeff = 0.0;
    break;
  case DiagramChannel::TrhU:
    r.pl_coeff = k.gU0 * s / 2.0;
    r.pt_coeff = k.gU0 * s / 2.0 + s * x * set("RU", x);
    break;
  case DiagramChannel::Trhh: {
    ProjectorCoefficients c;
    const double x2 = x * x;
    const double f_ric = set("Ric", x), f_r = set("R", x);
    if (d > 2)
      c.c2 = -k.g0 / 2.0 - k.gR0 * x / 2.0 + x2 * f_ric / 2.0;
    c.cS = (d - 3) * k.g0 / 4.0 + (d - 2) * k.gR0 * x / 2.0 +
           d / 2.0 * x2 * f_ric + 2.0 * (d - 1) * x2 * f_r;
    c.c1 = -k.g0 / 2.0;
    c.csigma = -k.g0 / 4.0;
    c.cSsigma = c.csigmaS = std::sqrt(d - 1.0) * k.g0 / 4.0;
    r.projector_coeffs = c;
    break;
  }
  case DiagramChannel::TrAh:
    r.tensor = Eigen::VectorXd::Zero(ipow(d, 3));
    break;
  case DiagramChannel::K_U:
    r.scalar = s * gs.g_U(x);
    break;
  case DiagramChannel::K_h:
    r.pt_coeff = k.g0 / 2.0 + x * gs.g_R(x);
    r.pl_coeff = k.g0 / 2.0;
    break;
  }
  return r;
}

double extract_gR0(int d, const DiagramOptions &opt) {
  // g_R(x) = (PT - g0/2)/x with g0 = 2 PL; cubic Richardson in x.
  auto g_r = [&](double x) {
    const auto r = npoint(DiagramChannel::K_h, 1.0,
                          Momentum::along_last_axis(d, std::sqrt(x)), d, opt);
    return (*r.pt_coeff - *r.pl_coeff) / x;
  };
  const double h = 1e-3;
  return (64.0 * g_r(h) - 56.0 * g_r(2 * h) + 14.0 * g_r(4 * h) -
          g_r(8 * h)) /
         21.0;
}

std::map<std::string, double> extract_form_factors(DiagramChannel channel,
                                                   double x, int d,
                                                   const DiagramOptions &opt) {
  if (!(x >= 0.0))
    throw DomainError("extraction needs x >= 0");
  const double s = 1.0;
  const Momentum p = Momentum::along_last_axis(d, std::sqrt(x));
  const std::string name = channel_name(channel);
  std::map<std::string, double> out;

  auto need_nonzero_x = [&]() {
    if (x == 0.0)
      throw SingularSystem(name + ": extraction system is degenerate at x = 0");
  };

  switch (channel) {
  case DiagramChannel::Tr0:
    out["g0"] = *npoint(channel, s, {}, d, opt).scalar;
    break;
  case DiagramChannel::TrU:
    out["gU0"] = *npoint(channel, s, {}, d, opt).scalar / s;
    break;
  case DiagramChannel::Trh:
    out["g0"] = 2.0 * *npoint(channel, s, {}, d, opt).scalar;
    break;
  case DiagramChannel::TrUU: {
    need_nonzero_x();
    out["f_U"] = *npoint(channel, s, p, d, opt).scalar / (2.0 * s * s);
    break;
  }
  case DiagramChannel::TrAA: {
    need_nonzero_x();
    const auto r = npoint(channel, s, p, d, opt);
    out["f_Omega"] = *r.pt_coeff / (-4.0 * s * x);
    break;
  }
  case DiagramChannel::TrhU: {
    need_nonzero_x();
    const auto r = npoint(channel, s, p, d, opt);
    Eigen::MatrixXd a(2, 2);
    a << s / 2.0, 0.0, s / 2.0, s * x;
    Eigen::VectorXd b(2);
    b << *r.pl_coeff, *r.pt_coeff;
    const auto sol = solve_checked(a, b, "TrhU");
    out["gU0"] = sol(0);
    out["f_RU"] = sol(1);
    break;
  }
  case DiagramChannel::Trhh: {
    need_nonzero_x();
    if (d < 3)
      throw SingularSystem("Trhh: P2 row absent at d = 2, system is "
                           "underdetermined");
    const auto r = npoint(channel, s, p, d, opt);
    const auto &c = *r.projector_coeffs;
    const double g0 = -2.0 * c.c1;
    const double gR0 = extract_gR0(d, opt);
    const double x2 = x * x;
    Eigen::MatrixXd a(2, 2);
    a << x2 / 2.0, 0.0, d / 2.0 * x2, 2.0 * (d - 1) * x2;
    Eigen::VectorXd b(2);
    b << *c.c2 + g0 / 2.0 + gR0 * x / 2.0,
        c.cS - (d - 3) * g0 / 4.0 - (d - 2) * gR0 * x / 2.0;
    const auto sol = solve_checked(a, b, "Trhh");
    out["g0"] = g0;
    out["gR0"] = gR0;
    out["f_Ric"] = sol(0);
    out["f_R"] = sol(1);
    break;
  }
  case DiagramChannel::K_U: {
    const auto r = npoint(channel, s, p, d, opt);
    out["g_U"] = *r.scalar / s;
    break;
  }
  case DiagramChannel::K_h: {
    need_nonzero_x();
    const auto r = npoint(channel, s, p, d, opt);
    const double g0 = 2.0 * *r.pl_coeff;
    out["g0"] = g0;
    out["g_R"] = (*r.pt_coeff - g0 / 2.0) / x;
    out["gR0"] = extract_gR0(d, opt);
    break;
  }
  case DiagramChannel::TrAh:
    throw ConfigError("TrAh determines no form factor");
  }
  return out;
}

ProjectorCoefficients trhh_reference(double x, int d) {
  const double f = form_factors::basic_f(x);
  ProjectorCoefficients c;
  if (d > 2)
    c.c2 = -1.0 + f / 2.0;
  c.c1 = -0.5;
  c.cS = -1.0 - (d - 1) / 8.0 * x +
         (4.0 * (d + 1) + 4.0 * (d - 1) * x + (d - 1) * x * x) * f / 16.0;
  c.cSsigma = c.csigmaS = std::sqrt(d - 1.0) / 4.0;
  c.csigma = -0.25;
  return c;
}

} // namespace hk
