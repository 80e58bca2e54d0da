#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sfs/system.hpp"

namespace sfs {

using Complex = std::complex<double>;

/// A MultiChannelSystem evaluated at one parameter point.
struct NumericSystem {
  std::vector<Channel> channels;
  RationalMatrix A;
  std::vector<RationalMatrix> B_blocks;
  std::vector<RationalMatrix> C_blocks;

  std::size_t n() const { return A.rows(); }
  std::size_t k() const { return channels.size(); }

  /// Evaluates every block at `pt` (exact).
  static NumericSystem at(const MultiChannelSystem& sys, const RationalPoint& pt);
  /// Stacked B (n x m) and C (l x n) in double precision.
  Eigen::MatrixXd stacked_B() const;
  Eigen::MatrixXd stacked_C() const;
  /// B_S and C of the complement, in double precision.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> split(const ChannelSubset& s) const;
};

Eigen::MatrixXd to_double(const RationalMatrix& m);

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr double kDefaultClusterRadius = 1e-6;

/// Singular values above tol * sigma_max * max(rows, cols) count toward the rank.
std::size_t numeric_rank(const Eigen::MatrixXcd& m, double tol = kDefaultRankTol);

/// True iff rank [lambda I - A, B_S; C_compl, 0] < n.
bool pencil_rank_deficient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b_s, const Eigen::MatrixXd& c_compl,
                           Complex lambda, double tol = kDefaultRankTol);

/// Eigenvalues of a balanced copy of `a`, sorted by (real, imag).
std::vector<Complex> eigenvalues(const Eigen::MatrixXd& a);

/// Groups values lying within `radius` of each other (transitively) and
/// returns one mean per group, sorted by (real, imag).
std::vector<Complex> cluster(const std::vector<Complex>& values, double radius = kDefaultClusterRadius);

struct FixedEigenvalue {
  Complex value;
  std::vector<ChannelSubset> witnesses;  // every subset whose pencil drops rank
};

struct FixedSpectrumResult {
  std::vector<FixedEigenvalue> eigenvalues;
  double tol = kDefaultRankTol;
  double cluster_radius = kDefaultClusterRadius;
};

/// Fixed spectrum via the bordered-pencil subset test at every eigenvalue of A.
FixedSpectrumResult fixed_spectrum(const NumericSystem& sys, double tol = kDefaultRankTol,
                                   double cluster_radius = kDefaultClusterRadius);

/// Intersects the spectra of A + B F_j C over `samples` random block-diagonal
/// F_j (plus F = 0). A test oracle: it can only over-approximate the fixed
/// spectrum, and does so with vanishing probability.
std::vector<Complex> random_feedback_oracle(const NumericSystem& sys, std::size_t samples, std::uint64_t seed,
                                            double tol = kDefaultClusterRadius);

/// Two sorted value lists match one-to-one within `tol`.
bool same_spectrum(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol = kDefaultClusterRadius);

}  // namespace sfs
