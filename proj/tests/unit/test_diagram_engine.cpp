#include "doctest.h"

#include <cmath>
#include <random>

#include "hk/diagram_engine.hpp"
#include "hk/errors.hpp"

using namespace hk;
namespace ff = hk::form_factors;

namespace {

Momentum random_momentum(int d, double norm, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i)
    v(i) = n01(rng);
  return Momentum(v * (norm / v.norm()));
}

std::vector<double> grid20() {
  std::vector<double> g;
  for (int i = 0; i < 20; ++i)
    g.push_back(1e-2 * std::pow(1e4, i / 19.0));
  return g;
}

double fkind(FormFactorTag t, double x) {
  return ff::eval(FormFactorKind::of(t), x);
}

} // namespace

TEST_CASE("propagator chains") {
  Eigen::VectorXd p1(3), p2(3), p3(3), p4(3);
  p1 << 0.3, -1.0, 0.2;
  p2 << 1.1, 0.4, -0.5;
  p3 << -0.2, 0.0, 0.9;
  p4 << 0.7, 0.7, 0.1;
  const double s = 0.8;
  CHECK(propagator_chain({s, {p1}, 3}) == doctest::Approx(std::exp(-s * p1.squaredNorm())).epsilon(1e-15));
  CHECK(propagator_chain({s, {p1, p1}, 3}) == doctest::Approx(std::exp(-s * p1.squaredNorm())).epsilon(1e-15));
  const double a = s * p1.squaredNorm(), b = s * p2.squaredNorm();
  CHECK(propagator_chain({s, {p1, p2}, 3}) ==
        doctest::Approx((std::exp(-b) - std::exp(-a)) / (a - b)).epsilon(1e-14));
  // n = 3 against iterated divided differences of e^{-t}: for distinct
  // exponents the ordered integral is the second divided difference.
  const double c = s * p3.squaredNorm();
  auto e = [](double t) { return std::exp(-t); };
  const double dd = ((e(a) - e(b)) / (a - b) - (e(b) - e(c)) / (b - c)) / (a - c);
  CHECK(propagator_chain({s, {p1, p2, p3}, 3}) == doctest::Approx(dd).epsilon(1e-11));
  const double dl = s * p4.squaredNorm();
  const double dd2 = ((e(b) - e(c)) / (b - c) - (e(c) - e(dl)) / (c - dl)) / (b - dl);
  const double dd3 = (dd - dd2) / (a - dl);
  CHECK(propagator_chain({s, {p1, p2, p3, p4}, 3}) == doctest::Approx(-dd3).epsilon(1e-10));
  CHECK_THROWS_AS(propagator_chain({s, {p1, p1, p1, p1, p1}, 3}), UnsupportedArity);
  CHECK_THROWS_AS(propagator_chain({-1.0, {p1}, 3}), DomainError);
}

TEST_CASE("vertices") {
  const int d = 4;
  Eigen::VectorXd k = Eigen::VectorXd::LinSpaced(d, 0.5, 2.0);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
  VertexKinematics same{{0.0, k}, {0.0, k}, {Eigen::VectorXd(-2 * k)}};
  CHECK(vertex(VertexKind::A1, same).evaluate(z).norm() == 0.0);
  CHECK(vertex(VertexKind::U2, same).evaluate(z).norm() == 0.0);
  CHECK(vertex(VertexKind::Uh, same).evaluate(z).norm() == 0.0);
  CHECK(vertex(VertexKind::U1, same).evaluate(z)(0) == 1.0);

  VertexKinematics opposite{{0.0, k}, {0.0, Eigen::VectorXd(-k)}, {z}};
  const auto h = vertex(VertexKind::h1, opposite).evaluate(z);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      CHECK(h(m * d + n) == doctest::Approx(-k(m) * k(n)));

  // Polynomial form agrees with direct substitution at a random q.
  Eigen::VectorXd q = Eigen::VectorXd::LinSpaced(d, -1.0, 0.7);
  Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(d, 0.3, -0.4);
  const double xi = 0.3;
  VertexKinematics kin{{1.0, -xi * p}, {-1.0, -(1 - xi) * p}, {p}};
  const Eigen::VectorXd k1 = q - xi * p, k2 = -q - (1 - xi) * p;
  const auto hv = vertex(VertexKind::h1, kin).evaluate(q);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const double expect = 0.5 * (k1(m) * k2(n) + k1(n) * k2(m)) -
                            (m == n) * 0.25 * (k1 + k2).squaredNorm();
      CHECK(hv(m * d + n) == doctest::Approx(expect).epsilon(1e-14));
    }
  const auto av = vertex(VertexKind::A1, kin).evaluate(q);
  CHECK((av - (k1 - k2)).norm() < 1e-14);

  VertexKinematics tad{{1.0, z}, {-1.0, z}, {p, Eigen::VectorXd(-p)}};
  const auto h2d = vertex(VertexKind::h2, tad, H2Convention::Eighth).evaluate(q);
  const auto h2p = vertex(VertexKind::h2, tad, H2Convention::Quarter).evaluate(q);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          const int I = ((m * d + n) * d + a) * d + b;
          // 2 q^(m delta^n)(a q^b) with the explicit four-term average.
          const double kin_term =
              0.5 * (q(m) * (n == a) * q(b) + q(n) * (m == a) * q(b) +
                     q(m) * (n == b) * q(a) + q(n) * (m == b) * q(a));
          const double dd = (m == n) * (a == b) * p.squaredNorm();
          CHECK(h2d(I) == doctest::Approx(kin_term + dd / 8).epsilon(1e-14));
          CHECK(h2p(I) == doctest::Approx(kin_term + dd / 4).epsilon(1e-14));
        }
  CHECK_THROWS_AS(vertex(VertexKind::h2, kin), UnsupportedKinematics);
}

TEST_CASE("Gaussian moments and averages") {
  const double s = 0.6;
  for (int d : {2, 3, 5}) {
    CHECK(gaussian_moment(0, s, d)(0) == 1.0);
    CHECK(gaussian_moment(1, s, d).norm() == 0.0);
    CHECK(gaussian_moment(3, s, d).norm() == 0.0);
    const auto m2 = gaussian_moment(2, s, d);
    double tr = 0;
    for (int i = 0; i < d; ++i)
      tr += m2(i * d + i);
    CHECK(tr == doctest::Approx(d / (2 * s)));
    // <q^2 q^2> = d(d+2)/(4 s^2).
    const auto m4 = gaussian_moment(4, s, d);
    double t4 = 0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        t4 += m4(((i * d + i) * d + j) * d + j);
    CHECK(t4 == doctest::Approx(d * (d + 2) / (4 * s * s)));
  }
  CHECK_THROWS_AS(gaussian_moment(5, s, 3), UnsupportedRank);

  // Closed-form product average against explicit moment contraction.
  const int d = 3;
  std::mt19937 rng(3);
  std::normal_distribution<double> n01;
  auto random_poly = [&](int rank) {
    LoopPolynomial v(d, rank);
    for (int i = 0; i < v.size(); ++i) {
      v.c0(i) = n01(rng);
      for (int k = 0; k < d; ++k) {
        v.c1(i, k) = n01(rng);
        for (int l = 0; l <= k; ++l)
          v.c2(i, k * d + l) = v.c2(i, l * d + k) = n01(rng);
      }
    }
    return v;
  };
  const auto a = random_poly(1), b = random_poly(2);
  const auto m2 = gaussian_moment(2, s, d), m4 = gaussian_moment(4, s, d);
  const auto avg = gaussian_average(a, b, s);
  for (int I = 0; I < a.size(); ++I)
    for (int J = 0; J < b.size(); ++J) {
      double e = a.c0(I) * b.c0(J);
      for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
          const double w2 = m2(k * d + l);
          e += a.c1(I, k) * b.c1(J, l) * w2;
          e += a.c2(I, k * d + l) * b.c0(J) * w2 + a.c0(I) * b.c2(J, k * d + l) * w2;
          for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n)
              e += a.c2(I, k * d + l) * b.c2(J, m * d + n) * m4(((k * d + l) * d + m) * d + n);
        }
      CHECK(avg(I, J) == doctest::Approx(e).epsilon(1e-13));
    }
}

TEST_CASE("one-point and scalar channels") {
  const double s = 0.7;
  CHECK(*npoint(DiagramChannel::Tr0, s, {}, 4).scalar == 1.0);
  CHECK(*npoint(DiagramChannel::TrU, s, {}, 4).scalar == doctest::Approx(-s));
  const auto trh = npoint(DiagramChannel::Trh, s, {}, 4);
  CHECK(*trh.scalar == doctest::Approx(0.5));
  CHECK(trh.residual < 1e-14);
  for (int d : {3, 4, 6}) {
    const auto p = random_momentum(d, 1.7, 11 + d);
    const double x = s * p.norm2();
    const double f = ff::basic_f(x);
    CHECK(*npoint(DiagramChannel::TrUU, s, p, d).scalar == doctest::Approx(s * s * f).epsilon(1e-12));
    CHECK(*npoint(DiagramChannel::K_U, s, p, d).scalar == doctest::Approx(-s * f).epsilon(1e-12));
    const auto aa = npoint(DiagramChannel::TrAA, s, p, d);
    CHECK(*aa.pt_coeff == doctest::Approx(-2 * s * (1 - f)).epsilon(1e-12));
    CHECK(std::abs(*aa.pl_coeff) <= 1e-10);
    CHECK(aa.residual < 1e-12);
    const auto hu = npoint(DiagramChannel::TrhU, s, p, d);
    CHECK(*hu.pl_coeff == doctest::Approx(-s / 2).epsilon(1e-12));
    CHECK(*hu.pt_coeff == doctest::Approx(-0.25 * (2 * s + s * s * p.norm2()) * f).epsilon(1e-12));
    const auto kh = npoint(DiagramChannel::K_h, s, p, d);
    CHECK(*kh.pt_coeff == doctest::Approx((0.5 + x / 4) * f).epsilon(1e-12));
    CHECK(*kh.pl_coeff == doctest::Approx(0.5).epsilon(1e-12));
    const auto ah = npoint(DiagramChannel::TrAh, s, p, d);
    CHECK(ah.tensor->cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("graviton two-point function and the quarter vertex normalization") {
  for (int d : {3, 4, 6}) {
    for (double s : {0.3, 1.0, 2.5}) {
      const auto p = random_momentum(d, 1.3, 5 * d);
      const double x = s * p.norm2();
      const auto got = *npoint(DiagramChannel::Trhh, s, p, d).projector_coeffs;
      const auto ref = trhh_reference(x, d);
      CHECK(got.residual_norm < 1e-11);
      for (auto n : kAllProjectors)
        CHECK(got.get(n) == doctest::Approx(ref.get(n)).epsilon(1e-11));
      // The p^2/4 normalization shifts the delta-delta structure by x/8.
      DiagramOptions quarter;
      quarter.h2 = H2Convention::Quarter;
      const auto alt = *npoint(DiagramChannel::Trhh, s, p, d, quarter).projector_coeffs;
      const double r = std::sqrt(d - 1.0);
      CHECK(alt.cS - ref.cS == doctest::Approx(-(d - 1) * x / 8));
      CHECK(alt.cSsigma - ref.cSsigma == doctest::Approx(-r * x / 8));
      CHECK(alt.csigma - ref.csigma == doctest::Approx(-x / 8));
      CHECK(*alt.c2 == doctest::Approx(*ref.c2));
    }
  }
}

TEST_CASE("projector split of the hU tensor") {
  const int d = 4;
  const double s = 0.9;
  const auto p = random_momentum(d, 1.1, 99);
  const auto hu = npoint(DiagramChannel::TrhU, s, p, d);
  const auto [pt, pl] = vector_projectors(p);
  const Eigen::MatrixXd m = *hu.pt_coeff * pt + *hu.pl_coeff * pl;
  const auto back = decompose_vector(m, p);
  CHECK(back.pt == doctest::Approx(*hu.pt_coeff));
  CHECK(back.pl == doctest::Approx(*hu.pl_coeff));
}

TEST_CASE("rotation invariance of channel coefficients") {
  const int d = 4;
  const auto p = random_momentum(d, 1.5, 4);
  const auto a = *npoint(DiagramChannel::Trhh, 1.0, p, d).projector_coeffs;
  const auto b = *npoint(DiagramChannel::Trhh, 1.0, Momentum::along_last_axis(d, std::sqrt(p.norm2())), d).projector_coeffs;
  for (auto n : kAllProjectors)
    CHECK(a.get(n) == doctest::Approx(b.get(n)).epsilon(1e-12));
}

TEST_CASE("ansatz equals diagrams with closed-form factors") {
  const auto set = basis::standard_set(Basis::RicR);
  const Constants k;
  for (int d : {3, 4, 6})
    for (double x : {0.05, 1.0, 30.0}) {
      const double s = 0.8;
      const auto p = Momentum::along_last_axis(d, std::sqrt(x / s));
      for (auto ch : {DiagramChannel::TrUU, DiagramChannel::K_U}) {
        CHECK(*npoint(ch, s, p, d).scalar == doctest::Approx(*ansatz_npoint(ch, s, p, d, k, set).scalar).epsilon(1e-11));
      }
      for (auto ch : {DiagramChannel::TrAA, DiagramChannel::TrhU, DiagramChannel::K_h}) {
        const auto a = npoint(ch, s, p, d), b = ansatz_npoint(ch, s, p, d, k, set);
        CHECK(*a.pt_coeff == doctest::Approx(*b.pt_coeff).epsilon(1e-10));
        CHECK(*a.pl_coeff - *b.pl_coeff == doctest::Approx(0.0).epsilon(1e-10));
      }
      const auto a = *npoint(DiagramChannel::Trhh, s, p, d).projector_coeffs;
      const auto b = *ansatz_npoint(DiagramChannel::Trhh, s, p, d, k, set).projector_coeffs;
      for (auto n : kAllProjectors)
        CHECK(a.get(n) == doctest::Approx(b.get(n)).epsilon(1e-9));
    }
  // Weyl and BV inputs are converted before use.
  const auto w = basis::standard_set(Basis::Weyl, 5);
  const auto p = Momentum::along_last_axis(5, 1.0);
  CHECK(*ansatz_npoint(DiagramChannel::TrUU, 1.0, p, 5, k, w).scalar ==
        doctest::Approx(*ansatz_npoint(DiagramChannel::TrUU, 1.0, p, 5, k, set).scalar));
}

TEST_CASE("extraction reproduces the closed forms") {
  const double tol = 1e-8;
  for (double x : grid20()) {
    CAPTURE(x);
    for (int d : {3, 4, 6}) {
      CAPTURE(d);
      CHECK(extract_form_factors(DiagramChannel::TrUU, x, d).at("f_U") ==
            doctest::Approx(fkind(FormFactorTag::U, x)).epsilon(tol));
      CHECK(extract_form_factors(DiagramChannel::TrAA, x, d).at("f_Omega") ==
            doctest::Approx(fkind(FormFactorTag::Omega, x)).epsilon(tol));
      const auto hu = extract_form_factors(DiagramChannel::TrhU, x, d);
      CHECK(hu.at("f_RU") == doctest::Approx(fkind(FormFactorTag::RU, x)).epsilon(tol));
      CHECK(hu.at("gU0") == doctest::Approx(-1.0).epsilon(tol));
      CHECK(extract_form_factors(DiagramChannel::K_U, x, d).at("g_U") ==
            doctest::Approx(-ff::basic_f(x)).epsilon(tol));
      const auto kh = extract_form_factors(DiagramChannel::K_h, x, d);
      CHECK(kh.at("g_R") == doctest::Approx(fkind(FormFactorTag::GR, x)).epsilon(tol));
      CHECK(kh.at("gR0") == doctest::Approx(1.0 / 6).epsilon(tol));
    }
    for (int d : {4, 6}) {
      const auto hh = extract_form_factors(DiagramChannel::Trhh, x, d);
      CHECK(std::abs(hh.at("f_Ric") - fkind(FormFactorTag::Ric, x)) <= tol * std::abs(fkind(FormFactorTag::Ric, x)));
      CHECK(std::abs(hh.at("f_R") - fkind(FormFactorTag::R, x)) <= tol * std::abs(fkind(FormFactorTag::R, x)));
      CHECK(hh.at("g0") == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("extraction errors") {
  CHECK_THROWS_AS(extract_form_factors(DiagramChannel::Trhh, 0.0, 4), SingularSystem);
  CHECK_THROWS_AS(extract_form_factors(DiagramChannel::TrhU, 0.0, 4), SingularSystem);
  CHECK_THROWS_AS(extract_form_factors(DiagramChannel::Trhh, 1.0, 2), SingularSystem);
  CHECK_THROWS_AS(extract_form_factors(DiagramChannel::TrUU, -1.0, 4), DomainError);
  CHECK(extract_form_factors(DiagramChannel::Tr0, 0.0, 4).at("g0") == 1.0);
  CHECK(extract_form_factors(DiagramChannel::TrU, 0.0, 4).at("gU0") == doctest::Approx(-1.0));
  CHECK(parse_channel("K_h") == DiagramChannel::K_h);
  CHECK_THROWS_AS(parse_channel("nope"), ConfigError);
}
