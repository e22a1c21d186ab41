#pragma once

// Brute-force spectral reference: the gauge-covariant lattice Laplacian plus
// potential on a periodic grid, diagonalized densely.

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hk/trace_evaluator.hpp"
#include "json.hpp"

namespace hk {

struct LatticeSpec {
  int d = 1;
  int n_sites = 64; // per side
  double L = 1.0;

  static constexpr int kMaxDimension = 8192;

  double spacing() const { return L / n_sites; }
  int dimension() const;
  //! ConfigError on d outside {1, 2}, N < 2, L <= 0 or a matrix above the
  //! dense budget.
  void validate() const;
  //! The s-range 10 a^2 <= s <= L^2 / 40 where continuum predictions apply.
  bool in_window(double s) const;
};

struct OracleResult {
  double trace = 0.0;
  // Kernel density K(x_j, x_j), i.e. the matrix diagonal over a^d.
  std::optional<std::vector<double>> diagonal;
  double eig_min = 0.0, eig_max = 0.0;
  int n = 0;

  nlohmann::ordered_json to_json() const;
};

//! Hermitian matrix of -D^2 + U with link phases e^{i a theta_mu} sampled at
//! link midpoints. DimensionMismatch if fields.d != spec.d or the boxes
//! differ.
Eigen::MatrixXcd build_operator(const LatticeSpec &spec,
                                const FieldData &fields);

//! Ascending eigenvalues (and optionally eigenvectors as columns).
std::vector<double> lattice_eigenvalues(const LatticeSpec &spec,
                                        const FieldData &fields);

//! sum_n e^{-s lambda_n}, optionally with the kernel diagonal.
OracleResult exact_trace(const LatticeSpec &spec, const FieldData &fields,
                         double s, bool with_diagonal = false);

//! [T(eps) + T(-eps) - 2 T(0)] / 2 with all amplitudes scaled by eps.
double isolate_second_order(const LatticeSpec &spec, const FieldData &fields,
                            double s, double eps);

//! sum_n 1 / (lambda_n + m2).
double exact_resolvent_trace(const LatticeSpec &spec, const FieldData &fields,
                             double m2);

//! Compensated sum after sorting by descending magnitude.
double stable_sum(std::vector<double> terms);

} // namespace hk
