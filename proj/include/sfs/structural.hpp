#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sfs/polymatrix.hpp"
#include "sfs/system.hpp"

namespace sfs {

enum class DecisionRoute { kTheorem1, kTheorem2, kTheorem3 };
enum class SfsReason { kGenericRankDeficient, kProperSubspace, kPencilDropAllP };

std::string to_string(DecisionRoute r);
std::string to_string(SfsReason r);

/// Per-subset outcome of the randomized pencil test.
struct SubsetTrace {
  ChannelSubset subset;
  bool discarded = false;
  /// Index of the sample that certified full rank (when discarded).
  std::optional<std::size_t> certificate_sample;
  std::size_t samples_tried = 0;
};

struct VerdictDiagnostics {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  /// Integer parameter points sampled by the pencil route, in draw order.
  std::vector<std::vector<std::int64_t>> sampled_points;
  std::vector<SubsetTrace> subsets;
  /// Free-form notes, e.g. the generic dimensions per subset.
  std::vector<std::string> notes;
  /// How the verdict can be wrong, if at all.
  std::string error_mode;
};

struct StructuralVerdict {
  bool has_sfs = false;
  DecisionRoute route = DecisionRoute::kTheorem1;
  std::optional<ChannelSubset> witness;  // present iff reason is proper-subspace or pencil-drop
  std::optional<SfsReason> reason;       // present iff has_sfs
  VerdictDiagnostics diagnostics;
};

struct GenericDims {
  std::size_t ctrb_dim = 0;   // generic dim of the controllable space of (A, B_S)
  std::size_t unobs_dim = 0;  // generic dim of the unobservable space of (C_{k-S}, A)
};

/// Integer points are drawn uniformly from [-kSampleBound, kSampleBound].
inline constexpr std::int64_t kSampleBound = std::int64_t{1} << 31;

/// One sample of the pencil test for subset S at the integer point `pt`.
///
/// Returns true when rank [lambda I - A, B_S; C_{k-S}, 0] >= n is certified
/// exactly for every eigenvalue lambda of A(pt): the gcd over GF(P) of
/// det(xI - A) and det(xI - A - B_S E - K C_{k-S}) for two random (E, K) is
/// constant. A constant gcd mod P rules out any common complex root over Q.
bool pencil_full_rank_certificate(const MultiChannelSystem& sys, const ChannelSubset& s, const RationalPoint& pt,
                                  std::mt19937_64& rng);

/// Pencil route: some S has the bordered pencil rank-deficient at an
/// eigenvalue of A for every p. "No" answers are exact (certificate found);
/// "yes" answers hold with high probability.
StructuralVerdict theorem1_decide(const MultiChannelSystem& sys, std::size_t trials = kDefaultTrials,
                                  std::uint64_t seed = 0);

/// True iff C_{k-S} A^j B_S vanishes identically for j = 0..n-1.
bool markov_identity(const MultiChannelSystem& sys, const ChannelSubset& s, std::size_t trials = kDefaultTrials,
                     std::uint64_t seed = 0);

GenericDims generic_dims(const MultiChannelSystem& sys, const ChannelSubset& s, std::size_t trials = kDefaultTrials,
                         std::uint64_t seed = 0);

/// A + B F(p~) C over the joint parameter space (p first, then p~).
ParamMatrix closed_loop_pattern(const MultiChannelSystem& sys);

/// Linear-parameterization route: grank(A + B F C) < n, or some S has the
/// controllable space of B_S contained in, and generically smaller than, the
/// unobservable space of C_{k-S}. Throws std::invalid_argument when `decomp`
/// does not describe [A B; C 0] of `sys`.
StructuralVerdict theorem2_decide(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                                  std::size_t trials = kDefaultTrials, std::uint64_t seed = 0);

/// Structural controllability of a linearly parameterized pair: grank [A B] = n
/// and every parameter of the pair appears in [B, AB, ..., A^n B].
/// Throws std::invalid_argument when [A B] is not linearly parameterized.
bool structurally_controllable(const ParamMatrix& a, const ParamMatrix& b, std::size_t trials = kDefaultTrials,
                               std::uint64_t seed = 0);

}  // namespace sfs
