#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "sfs/structural.hpp"

using namespace sfs;
using fx::mat;
using fx::p;

namespace {

LinearParamDecomposition decomp(const MultiChannelSystem& sys) {
  return std::get<LinearParamDecomposition>(detect_linear_parameterization(sys));
}

}  // namespace

TEST_CASE("theorem1 on the two-channel example") {
  const auto v = theorem1_decide(fx::two_channel(), 10, 1);
  CHECK_FALSE(v.has_sfs);
  CHECK(v.route == DecisionRoute::kTheorem1);
  CHECK_FALSE(v.witness.has_value());
  CHECK_FALSE(v.reason.has_value());
  REQUIRE(v.diagnostics.subsets.size() == 4);
  for (const auto& t : v.diagnostics.subsets) {
    CHECK(t.discarded);
    CHECK(t.certificate_sample.has_value());
  }
}

TEST_CASE("each subset of the example is full rank at all-ones") {
  std::mt19937_64 rng(2);
  for (const auto& s : all_subsets(2)) CHECK(pencil_full_rank_certificate(fx::two_channel(), s, RationalPoint{{1, 1, 1, 1}}, rng));
}

TEST_CASE("theorem1 without inputs or outputs") {
  const MultiChannelSystem s(2, {}, mat(2, 2, 3, {{0, 0, p(1)}, {0, 1, p(3)}, {1, 1, p(2)}}), {}, {});
  const auto v = theorem1_decide(s);
  CHECK(v.has_sfs);
  REQUIRE(v.witness.has_value());
  CHECK(v.witness->empty());
  CHECK(v.reason == SfsReason::kPencilDropAllP);
}

TEST_CASE("theorem1 scalar loop") {
  const MultiChannelSystem s(1, {{1, 1}}, mat(1, 1, 3, {{0, 0, p(1)}}), {mat(1, 1, 3, {{0, 0, p(2)}})},
                             {mat(1, 1, 3, {{0, 0, p(3)}})});
  CHECK_FALSE(theorem1_decide(s).has_sfs);
  std::mt19937_64 rng(0);
  CHECK(pencil_full_rank_certificate(s, ChannelSubset({0}, 1), RationalPoint{{1, 1, 1}}, rng));
  CHECK(pencil_full_rank_certificate(s, ChannelSubset(), RationalPoint{{1, 1, 1}}, rng));
}

TEST_CASE("theorem1 on the non-linear counterexample") {
  // A = p1 I with c2 = [p1 p1]: the pencil route still applies
  const auto v = theorem1_decide(fx::counterexample());
  CHECK_FALSE(v.has_sfs);
}

TEST_CASE("markov identity") {
  const auto sys = fx::two_channel();
  CHECK(markov_identity(sys, ChannelSubset::all(2)));
  CHECK_FALSE(markov_identity(sys, ChannelSubset({0}, 2)));
  CHECK(split(sys, ChannelSubset({0}, 2)).C_compl * split(sys, ChannelSubset({0}, 2)).B_S ==
        mat(1, 1, 4, {{0, 0, p(1) * p(2)}}));
  CHECK(markov_identity(sys, ChannelSubset()));
}

TEST_CASE("generic dimensions") {
  const auto sys = fx::two_channel();
  CHECK(generic_dims(sys, ChannelSubset()).ctrb_dim == 0);
  CHECK(generic_dims(sys, ChannelSubset::all(2)).unobs_dim == 2);
  CHECK(generic_dims(sys, ChannelSubset::all(2)).ctrb_dim == 2);
  CHECK(generic_dims(sys, ChannelSubset()).unobs_dim == 0);
}

TEST_CASE("theorem2 on the two-channel example") {
  const auto sys = fx::two_channel();
  const auto v = theorem2_decide(sys, decomp(sys));
  CHECK_FALSE(v.has_sfs);
  CHECK(v.route == DecisionRoute::kTheorem2);
  CHECK(grank(closed_loop_pattern(sys)) == 2);
}

TEST_CASE("theorem2 on an unobservable scalar system") {
  const MultiChannelSystem s(1, {{1, 1}}, mat(1, 1, 2, {{0, 0, p(1)}}), {mat(1, 1, 2, {{0, 0, p(2)}})},
                             {ParamMatrix(1, 1, 2)});
  const auto v = theorem2_decide(s, decomp(s));
  CHECK(v.has_sfs);
  CHECK(v.reason == SfsReason::kProperSubspace);
  REQUIRE(v.witness.has_value());
  const auto w = *v.witness;
  CHECK(w.complement(1).size() == 1);
  CHECK(theorem1_decide(s).has_sfs);
}

TEST_CASE("theorem2 rejects a mismatched decomposition") {
  CHECK_THROWS_AS(theorem2_decide(fx::two_channel(), decomp(fx::corpus("unitary_chain.json"))), std::invalid_argument);
}

TEST_CASE("theorem2 shared-color singular A") {
  const auto s = fx::corpus("shared_loop.json");
  const auto v = theorem2_decide(s, decomp(s));
  CHECK(v.has_sfs);
  CHECK(v.reason == SfsReason::kGenericRankDeficient);
  CHECK_FALSE(v.witness.has_value());
}

TEST_CASE("structural controllability") {
  CHECK(structurally_controllable(mat(1, 1, 2, {{0, 0, p(1)}}), mat(1, 1, 2, {{0, 0, p(2)}})));
  CHECK_FALSE(structurally_controllable(mat(1, 1, 1, {{0, 0, p(1)}}), ParamMatrix(1, 1, 1)));
  CHECK(structurally_controllable(mat(2, 2, 2, {{1, 0, p(1)}}), mat(2, 1, 2, {{0, 0, p(2)}})));
  // p1 sits on x2's self-loop, unreachable from the input at x1
  CHECK_FALSE(structurally_controllable(mat(2, 2, 2, {{1, 1, p(1)}}), mat(2, 1, 2, {{0, 0, p(2)}})));
}

TEST_CASE("theorem1 and theorem2 agree on random binary systems") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 60; ++t) {
    gen::BinaryShape shape;
    shape.density = 0.2 + 0.6 * (t % 7) / 6.0;
    const auto sys = gen::random_binary(rng, shape);
    const auto v1 = theorem1_decide(sys, 10, t);
    const auto v2 = theorem2_decide(sys, decomp(sys), 10, t);
    CHECK(v1.has_sfs == v2.has_sfs);
    if (v2.reason == SfsReason::kGenericRankDeficient)
      CHECK(oracle::symbolic_det(oracle::closed_loop(sys)).is_zero());
  }
}

TEST_CASE("verdict fields") {
  CHECK(to_string(DecisionRoute::kTheorem3) == "theorem3");
  CHECK(to_string(SfsReason::kGenericRankDeficient) == "generic-rank-deficient");
  CHECK(to_string(SfsReason::kProperSubspace) == "proper-subspace");
  CHECK(to_string(SfsReason::kPencilDropAllP) == "pencil-drop-all-p");
}
