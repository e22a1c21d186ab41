#pragma once

// Transverse/longitudinal projectors and the six spin projectors acting on
// symmetric rank-2 tensors, with decomposition of pair-symmetric rank-4
// tensors on that basis.

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace hk {

struct Momentum {
  Eigen::VectorXd components;

  Momentum() = default;
  explicit Momentum(Eigen::VectorXd c) : components(std::move(c)) {}
  //! (0, ..., 0, |p|): the canonical axis choice.
  static Momentum along_last_axis(int d, double norm);

  int d() const { return static_cast<int>(components.size()); }
  double norm2() const { return components.squaredNorm(); }
  double operator()(int i) const { return components(i); }
};

//! (P_T, P_L) = (delta - p p / p^2, p p / p^2). DomainError on p = 0.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> vector_projectors(const Momentum &p);

//! Rank-4 tensor T^{mu nu, alpha beta}, stored as a d^2 x d^2 matrix with
//! row index mu*d+nu and column index alpha*d+beta. Composition contracts
//! the inner pair with the flat metric.
class SymPairTensor {
public:
  SymPairTensor() = default;
  explicit SymPairTensor(int d);

  static SymPairTensor from_function(
      int d, const std::function<double(int, int, int, int)> &f);
  //! A^{mu nu} B^{alpha beta}.
  static SymPairTensor outer(const Eigen::MatrixXd &a, const Eigen::MatrixXd &b);
  //! (delta^{mu alpha} delta^{nu beta} + delta^{mu beta} delta^{nu alpha})/2.
  static SymPairTensor identity(int d);

  int d() const { return d_; }
  double operator()(int m, int n, int a, int b) const {
    return m_(m * d_ + n, a * d_ + b);
  }
  double &operator()(int m, int n, int a, int b) {
    return m_(m * d_ + n, a * d_ + b);
  }
  const Eigen::MatrixXd &matrix() const { return m_; }

  SymPairTensor compose(const SymPairTensor &o) const;
  double trace() const;
  //! Full contraction T_{mn,ab} S_{mn,ab}.
  double inner(const SymPairTensor &o) const;
  double frobenius_norm() const { return m_.norm(); }
  //! max |T - T^{swapped}| over both pair swaps.
  double pair_asymmetry() const;
  //! Symmetrise in mu<->nu and alpha<->beta.
  SymPairTensor symmetrized() const;
  //! R^{m m'} R^{n n'} R^{a a'} R^{b b'} T^{m'n'a'b'}.
  SymPairTensor rotated(const Eigen::MatrixXd &r) const;

  SymPairTensor operator+(const SymPairTensor &o) const;
  SymPairTensor operator-(const SymPairTensor &o) const;
  SymPairTensor operator*(double s) const;
  SymPairTensor &operator+=(const SymPairTensor &o);

private:
  int d_ = 0;
  Eigen::MatrixXd m_;
};

enum class ProjectorName { P2, P1, S, Ssigma, sigmaS, sigma };

inline constexpr std::array<ProjectorName, 6> kAllProjectors = {
    ProjectorName::P2, ProjectorName::P1, ProjectorName::S,
    ProjectorName::Ssigma, ProjectorName::sigmaS, ProjectorName::sigma};

std::string projector_label(ProjectorName n);

//! DomainError on zero momentum or d < 2.
SymPairTensor tensor_projector(ProjectorName name, const Momentum &p);

struct ProjectorCoefficients {
  std::optional<double> c2; // absent at d = 2
  double c1 = 0, cS = 0, cSsigma = 0, csigmaS = 0, csigma = 0;
  double residual_norm = 0;

  //! Coefficient by name; c2 throws SingularGram when absent.
  double get(ProjectorName n) const;
  void set(ProjectorName n, double v);
};

//! Least-squares projection of T onto the span of the six projectors under
//! the flat pair metric. At d = 2 the P_2 slot is dropped; requesting it
//! there throws SingularGram. DomainError if T is not pair symmetric.
ProjectorCoefficients decompose(const SymPairTensor &t, const Momentum &p,
                                bool require_p2 = false);

//! Reassemble sum_i c_i P_i.
SymPairTensor recompose(const ProjectorCoefficients &c, const Momentum &p);

struct VectorCoefficients {
  double pt = 0, pl = 0;
  double residual_norm = 0;
};

//! M = pt P_T + pl P_L + remainder, for a rank-2 tensor.
VectorCoefficients decompose_vector(const Eigen::MatrixXd &m, const Momentum &p);

} // namespace hk
