#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sfs/polymatrix.hpp"

namespace sfs {

/// Widths of one feedback channel: m_i inputs, l_i outputs.
struct Channel {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  friend bool operator==(const Channel&, const Channel&) = default;
};

/// Sorted set of 0-based channel indices. Printed 1-based.
class ChannelSubset {
 public:
  ChannelSubset() = default;
  /// Throws std::invalid_argument unless members are strictly increasing and < k.
  ChannelSubset(std::vector<std::size_t> members, std::size_t k);

  static ChannelSubset all(std::size_t k);

  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(std::size_t channel) const;
  ChannelSubset complement(std::size_t k) const;
  std::string to_string() const;

  friend bool operator==(const ChannelSubset&, const ChannelSubset&) = default;
  friend auto operator<=>(const ChannelSubset&, const ChannelSubset&) = default;

 private:
  std::vector<std::size_t> members_;
};

/// All 2^k subsets, by increasing cardinality then lexicographically.
std::vector<ChannelSubset> all_subsets(std::size_t k);

/// k-channel system dx/dt = A x + sum B_i u_i, y_i = C_i x with polynomial
/// entries over a shared parameter vector of length q.
class MultiChannelSystem {
 public:
  /// Validates block shapes and the shared parameter space; throws
  /// std::invalid_argument on any inconsistency (including n == 0).
  MultiChannelSystem(std::size_t n, std::vector<Channel> channels, ParamMatrix a, std::vector<ParamMatrix> b_blocks,
                     std::vector<ParamMatrix> c_blocks, std::vector<std::string> param_names = {});

  std::size_t n() const { return n_; }
  std::size_t k() const { return channels_.size(); }
  std::size_t q() const { return q_; }
  std::size_t inputs() const;   // m
  std::size_t outputs() const;  // l
  const std::vector<Channel>& channels() const { return channels_; }
  const ParamMatrix& A() const { return a_; }
  const ParamMatrix& B_block(std::size_t i) const { return b_blocks_.at(i); }
  const ParamMatrix& C_block(std::size_t i) const { return c_blocks_.at(i); }
  const std::vector<std::string>& param_names() const { return param_names_; }
  /// Column of the first input of channel i in the stacked B.
  std::size_t input_offset(std::size_t i) const;
  /// Row of the first output of channel i in the stacked C.
  std::size_t output_offset(std::size_t i) const;

 private:
  std::size_t n_;
  std::size_t q_;
  std::vector<Channel> channels_;
  ParamMatrix a_;
  std::vector<ParamMatrix> b_blocks_;
  std::vector<ParamMatrix> c_blocks_;
  std::vector<std::string> param_names_;
};

struct StackedIO {
  ParamMatrix B;  // n x m
  ParamMatrix C;  // l x n
};
StackedIO stack(const MultiChannelSystem& sys);

struct SubsetSplit {
  ParamMatrix B_S;      // n x (sum of m_i, i in S)
  ParamMatrix C_compl;  // (sum of l_j, j not in S) x n
};
SubsetSplit split(const MultiChannelSystem& sys, const ChannelSubset& s);

/// The block matrix [A B; C 0] of size (n+l) x (n+m).
ParamMatrix system_matrix(const MultiChannelSystem& sys);

/// Block-diagonal feedback F = blkdiag(F_1..F_k) with one fresh parameter per
/// entry, numbered row-major within each block, blocks in channel order.
struct FeedbackPattern {
  ParamMatrix F;  // m x l over q~ = sum m_i l_i parameters
  std::size_t param_count = 0;
  std::size_t channel_of_param(std::uint32_t index) const;
  std::vector<std::size_t> first_param;  // per channel
};
FeedbackPattern feedback_pattern(const MultiChannelSystem& sys);

/// One term g * p_param * h of a linear parameterization.
struct RankOneTerm {
  std::uint32_t param = 0;
  std::vector<Rational> g;  // column, length = rows of the decomposed matrix
  std::vector<Rational> h;  // row, length = cols
};

struct LinearParamDecomposition {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t param_count = 0;
  std::vector<RankOneTerm> terms;  // by increasing parameter index; absent parameters dropped
  bool is_binary = false;
  bool is_unitary = false;

  /// Sum of g_r p_r h_r as a ParamMatrix.
  ParamMatrix reconstruct() const;
  const RankOneTerm* term_for(std::uint32_t param) const;
};

struct NotLinear {
  enum class Reason { kNonlinearEntry, kConstantTerm, kRankTwoOrMore };
  Reason reason;
  std::optional<std::uint32_t> param;
  std::string detail;
};
std::string to_string(NotLinear::Reason r);

using LinearityResult = std::variant<LinearParamDecomposition, NotLinear>;

/// Rank-one factorization of every partial derivative of `m`.
///
/// Each entry must be a homogeneous linear form. For each parameter r the
/// constant derivative D_r must have rank <= 1; it is factored as g_r h_r with
/// g_r the first nonzero column of D_r scaled so its first nonzero entry is 1.
LinearityResult decompose_linear(const ParamMatrix& m);

/// decompose_linear applied to [A B; C 0].
LinearityResult detect_linear_parameterization(const MultiChannelSystem& sys);

/// Well-formedness check; construction already enforces it, so this is true
/// for every MultiChannelSystem value.
bool is_polynomially_parameterized(const MultiChannelSystem& sys);

}  // namespace sfs
