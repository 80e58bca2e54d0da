#include "sfs/structural.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sfs {

std::string to_string(DecisionRoute r) {
  switch (r) {
    case DecisionRoute::kTheorem1: return "theorem1";
    case DecisionRoute::kTheorem2: return "theorem2";
    case DecisionRoute::kTheorem3: return "theorem3";
  }
  return "unknown";
}

std::string to_string(SfsReason r) {
  switch (r) {
    case SfsReason::kGenericRankDeficient: return "generic-rank-deficient";
    case SfsReason::kProperSubspace: return "proper-subspace";
    case SfsReason::kPencilDropAllP: return "pencil-drop-all-p";
  }
  return "unknown";
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

FieldMatrix random_field_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, Fp::kModulus - 1);
  FieldMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Fp(dist(rng));
  return m;
}

FieldPoint to_field_point(const RationalPoint& pt) {
  FieldPoint f;
  f.seed = pt.seed;
  for (const auto& v : pt.values) f.values.push_back(to_field(v));
  return f;
}

}  // namespace

bool pencil_full_rank_certificate(const MultiChannelSystem& sys, const ChannelSubset& s, const RationalPoint& pt,
                                  std::mt19937_64& rng) {
  const auto [b_s, c_compl] = split(sys, s);
  const FieldPoint fpt = to_field_point(pt);
  const FieldMatrix a = eval(sys.A(), fpt);
  FieldPoly common = charpoly(a);
  if (b_s.cols() == 0 && c_compl.rows() == 0) return poly_degree(common) == 0;
  const FieldMatrix b = eval(b_s, fpt);
  const FieldMatrix c = eval(c_compl, fpt);
  for (int rep = 0; rep < 2 && poly_degree(common) > 0; ++rep) {
    const FieldMatrix e = random_field_matrix(b.cols(), sys.n(), rng);
    const FieldMatrix k = random_field_matrix(sys.n(), c.rows(), rng);
    FieldMatrix perturbed = a;
    if (b.cols()) perturbed = perturbed + b * e;
    if (c.rows()) perturbed = perturbed + k * c;
    common = poly_gcd(common, charpoly(perturbed));
  }
  return poly_degree(common) == 0;
}

StructuralVerdict theorem1_decide(const MultiChannelSystem& sys, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("theorem1_decide: trials must be >= 1");
  StructuralVerdict v;
  v.route = DecisionRoute::kTheorem1;
  v.diagnostics.seed = seed;
  v.diagnostics.trials = trials;
  v.diagnostics.error_mode =
      "no-SFS is exact (each discarded subset has an exact full-rank certificate); "
      "SFS may be wrong with probability below 2^-40";
  std::mt19937_64 rng(seed);
  for (const auto& s : all_subsets(sys.k())) {
    SubsetTrace trace{s, false, std::nullopt, 0};
    for (std::size_t t = 0; t < trials && !trace.discarded; ++t) {
      const RationalPoint pt = random_integer_point(sys.q(), rng, kSampleBound, seed);
      std::vector<std::int64_t> coords;
      for (const auto& x : pt.values) coords.push_back(x.get_num().get_si());
      v.diagnostics.sampled_points.push_back(std::move(coords));
      ++trace.samples_tried;
      if (pencil_full_rank_certificate(sys, s, pt, rng)) {
        trace.discarded = true;
        trace.certificate_sample = t;
      }
    }
    if (!trace.discarded && !v.witness) {
      v.has_sfs = true;
      v.witness = s;
      v.reason = SfsReason::kPencilDropAllP;
    }
    v.diagnostics.subsets.push_back(std::move(trace));
  }
  return v;
}

bool markov_identity(const MultiChannelSystem& sys, const ChannelSubset& s, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("markov_identity: trials must be >= 1");
  const auto [b_s, c_compl] = split(sys, s);
  if (b_s.is_zero() || c_compl.is_zero()) return true;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const FieldPoint pt = random_field_point(sys.q(), rng, seed);
    const FieldMatrix a = eval(sys.A(), pt);
    const FieldMatrix c = eval(c_compl, pt);
    FieldMatrix cur = eval(b_s, pt);
    for (std::size_t j = 0; j < sys.n(); ++j) {
      if (j) cur = a * cur;
      if (!(c * cur).is_zero()) return false;
    }
  }
  return true;
}

GenericDims generic_dims(const MultiChannelSystem& sys, const ChannelSubset& s, std::size_t trials,
                         std::uint64_t seed) {
  const auto [b_s, c_compl] = split(sys, s);
  const std::size_t n = sys.n();
  GenericDims d;
  d.ctrb_dim = b_s.cols() ? grank(krylov(sys.A(), b_s, n), trials, derive_seed(seed, 1)) : 0;
  const std::size_t obs_rank =
      c_compl.rows() ? grank(krylov(sys.A().transposed(), c_compl.transposed(), n), trials, derive_seed(seed, 2)) : 0;
  d.unobs_dim = n - obs_rank;
  return d;
}

ParamMatrix closed_loop_pattern(const MultiChannelSystem& sys) {
  const auto [b, c] = stack(sys);
  const FeedbackPattern fp = feedback_pattern(sys);
  const std::size_t joint = sys.q() + fp.param_count;
  const ParamMatrix a = sys.A().embedded(joint);
  if (b.cols() == 0 || c.rows() == 0) return a;
  return a + b.embedded(joint) * fp.F.embedded(joint, static_cast<std::uint32_t>(sys.q())) * c.embedded(joint);
}

StructuralVerdict theorem2_decide(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                                  std::size_t trials, std::uint64_t seed) {
  const ParamMatrix m = system_matrix(sys);
  if (decomp.rows != m.rows() || decomp.cols != m.cols() || decomp.param_count != m.param_count() ||
      decomp.reconstruct() != m)
    throw std::invalid_argument("theorem2_decide: decomposition does not reproduce [A B; C 0]");

  StructuralVerdict v;
  v.route = DecisionRoute::kTheorem2;
  v.diagnostics.seed = seed;
  v.diagnostics.trials = trials;
  v.diagnostics.error_mode =
      "generic ranks are one-sided lower bounds; a rank or identity can be misjudged with probability below 2^-40";

  const std::size_t closed_rank = grank(closed_loop_pattern(sys), trials, derive_seed(seed, 0));
  v.diagnostics.notes.push_back("grank(A+BFC) = " + std::to_string(closed_rank) + ", n = " + std::to_string(sys.n()));
  if (closed_rank < sys.n()) {
    v.has_sfs = true;
    v.reason = SfsReason::kGenericRankDeficient;
    return v;
  }
  const auto subsets = all_subsets(sys.k());
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    const auto& s = subsets[i];
    const bool contained = markov_identity(sys, s, trials, derive_seed(seed, 10 + 2 * i));
    std::ostringstream note;
    note << "S=" << s.to_string() << ": markov_identity=" << (contained ? "true" : "false");
    SubsetTrace trace{s, false, std::nullopt, 0};
    trace.discarded = true;
    if (contained) {
      const GenericDims d = generic_dims(sys, s, trials, derive_seed(seed, 11 + 2 * i));
      note << " ctrb_dim=" << d.ctrb_dim << " unobs_dim=" << d.unobs_dim;
      if (d.ctrb_dim < d.unobs_dim) {
        trace.discarded = false;
        if (!v.witness) {
          v.has_sfs = true;
          v.witness = s;
          v.reason = SfsReason::kProperSubspace;
        }
      }
    }
    v.diagnostics.notes.push_back(note.str());
    v.diagnostics.subsets.push_back(std::move(trace));
  }
  return v;
}

bool structurally_controllable(const ParamMatrix& a, const ParamMatrix& b, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("structurally_controllable: inconsistent shapes");
  const ParamMatrix pair = ParamMatrix::hcat({a, b}, n, a.param_count());
  if (std::holds_alternative<NotLinear>(decompose_linear(pair)))
    throw std::invalid_argument("structurally_controllable: [A B] is not linearly parameterized: " +
                                std::get<NotLinear>(decompose_linear(pair)).detail);
  if (grank(pair, trials, seed) < n) return false;
  // Exact products: an appearing parameter survives every cancellation.
  const auto reached = krylov(a, b, n + 1).parameters();
  const auto used = pair.parameters();
  return std::includes(reached.begin(), reached.end(), used.begin(), used.end());
}

}  // namespace sfs
