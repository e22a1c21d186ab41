#pragma once

// Momentum-space diagrammatics for the heat-kernel trace and the
// coincidence-limit kernel up to second order in the background fields.
//
// Conventions
//   * Every result is normalized: the factor (4 pi s)^{-d/2} and the bundle
//     traces (tr 1, tr T^a, tr T^(a T^b)) are divided out.
//   * Loop momenta enter vertices through affine legs k = c q + v. After the
//     shift that completes the square, Gaussian moments in q are done
//     analytically and only the Feynman-parameter integral is numerical.
//   * Sunset diagrams carry weight s^2 int_0^1 dxi e^{-x xi(1-xi)} <V_a V_b>,
//     tadpoles -s <V>, with x = s p^2.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hk/basis_transform.hpp"
#include "hk/form_factors.hpp"
#include "hk/projector_algebra.hpp"

namespace hk {

// ---------------------------------------------------------------------------
// Propagator chains

struct ChainSpec {
  double s = 1.0;
  std::vector<Eigen::VectorXd> momenta; // p_1 .. p_n
  int d = 0;
};

//! Ordered parametric integral of the chain of n flat propagators:
//! int_0^1 dt_1 int_0^{t_1} dt_2 ... e^{-s(1-t_1)p_1^2} ... e^{-s t_{n-1} p_n^2}.
//! Closed form for n <= 2, nested adaptive quadrature for n = 3, 4.
double propagator_chain(const ChainSpec &spec, double rel_tol = 1e-12);

// ---------------------------------------------------------------------------
// Vertices as polynomials in the loop momentum

//! k = q_coeff * q + shift.
struct AffineMomentum {
  double q_coeff = 0.0;
  Eigen::VectorXd shift;
};

struct VertexKinematics {
  AffineMomentum k1, k2;               // phi legs, all momenta incoming
  std::vector<Eigen::VectorXd> externals;
};

enum class VertexKind { U1, U2, A1, A2, h1, h2, Uh, Ah };

//! How the potential term of the two-graviton vertex is normalized.
//! `Eighth` (p^2/8) reproduces the closed-form graviton two-point function;
//! `Quarter` (p^2/4) is an alternative kept for diagnostics only.
enum class H2Convention { Eighth, Quarter };

//! Tensor-valued polynomial of degree <= 2 in q:
//!   V^I(q) = c0^I + c1^I_k q_k + c2^I_{kl} q_k q_l,
//! where I runs over the d^rank external index combinations (row-major).
struct LoopPolynomial {
  int d = 0;
  int rank = 0;
  Eigen::VectorXd c0;  // d^rank
  Eigen::MatrixXd c1;  // d^rank x d
  Eigen::MatrixXd c2;  // d^rank x d^2, symmetric in (k, l)

  LoopPolynomial() = default;
  LoopPolynomial(int d, int rank);
  int size() const { return static_cast<int>(c0.size()); }
  Eigen::VectorXd evaluate(const Eigen::VectorXd &q) const;
  //! c2 contracted over (k, l).
  Eigen::VectorXd trace_c2() const;
};

//! Throws UnsupportedKinematics for h2 outside the configuration with
//! externals (p, -p) and phi legs (q, -q).
LoopPolynomial vertex(VertexKind kind, const VertexKinematics &kin,
                      H2Convention h2 = H2Convention::Eighth);

//! Normalized Gaussian moment <q^{mu_1} ... q^{mu_r}> with weight e^{-s q^2},
//! flattened row-major. UnsupportedRank for r > 4.
Eigen::VectorXd gaussian_moment(int rank, double s, int d);

//! <V> for a single polynomial.
Eigen::VectorXd gaussian_average(const LoopPolynomial &v, double s);
//! <V_a^I V_b^J>, a d^{rank_a} x d^{rank_b} matrix.
Eigen::MatrixXd gaussian_average(const LoopPolynomial &a,
                                 const LoopPolynomial &b, double s);

// ---------------------------------------------------------------------------
// Channels

enum class DiagramChannel {
  Tr0,
  TrU,
  Trh,
  TrUU,
  TrAA,
  Trhh,
  TrhU,
  TrAh,
  K_U,
  K_h
};

std::string channel_name(DiagramChannel c);
DiagramChannel parse_channel(const std::string &name);
bool is_two_point(DiagramChannel c);
bool needs_momentum(DiagramChannel c);

struct DiagramResult {
  DiagramChannel channel = DiagramChannel::Tr0;
  double x = 0.0;
  // Tr0, TrU, TrUU, K_U: the value. Trh: the coefficient of delta^{mu nu}.
  std::optional<double> scalar;
  // TrAA, TrhU, K_h.
  std::optional<double> pt_coeff, pl_coeff;
  // Trhh.
  std::optional<ProjectorCoefficients> projector_coeffs;
  // TrAh: raw rank-3 components T^{lambda, mu nu}.
  std::optional<Eigen::VectorXd> tensor;
  // Frobenius norm of what the projector split could not absorb.
  double residual = 0.0;
};

struct DiagramOptions {
  H2Convention h2 = H2Convention::Eighth;
  double rel_tol = 1e-13;
};

//! Assemble the diagrams of a channel. p may be empty for Tr0, TrU, Trh,
//! in which case `d` fixes the dimension.
DiagramResult npoint(DiagramChannel channel, double s, const Momentum &p,
                     int d, const DiagramOptions &opt = {});

//! Coincidence-limit form factors used by the K_* ansatz.
struct CoincidenceFactors {
  FormFactorFn g_U, g_R;
  static CoincidenceFactors standard(const EvalConfig &cfg = {});
};

//! The same channel computed from the general second-order ansatz for the
//! trace (or, for K_*, the first-order ansatz for the kernel diagonal).
DiagramResult ansatz_npoint(DiagramChannel channel, double s,
                            const Momentum &p, int d,
                            const Constants &constants,
                            const FormFactorSet &ffs,
                            const CoincidenceFactors &gs =
                                CoincidenceFactors::standard());

//! Equates npoint with the ansatz and solves for the unknowns at x = s p^2
//! (computed with s = 1). Keys: f_U, f_Omega, f_Ric, f_R, f_RU, g_U, g_R,
//! g0, gU0, gR0 as determined by the channel. SingularSystem when the
//! system degenerates (x = 0 for Trhh and TrhU); DomainError if x < 0.
std::map<std::string, double> extract_form_factors(DiagramChannel channel,
                                                   double x, int d,
                                                   const DiagramOptions &opt = {});

//! g_{R,0} from K_h by Richardson extrapolation of g_R(x) to x = 0.
double extract_gR0(int d, const DiagramOptions &opt = {});

//! Closed-form graviton two-point coefficients
//! (diagnostic reference for the vertex normalization).
ProjectorCoefficients trhh_reference(double x, int d);

} // namespace hk
