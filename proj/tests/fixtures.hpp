#pragma once

#include <initializer_list>
#include <string>
#include <tuple>

#include "sfs/io.hpp"
#include "sfs/system.hpp"

namespace fx {

using sfs::ParamMatrix;
using sfs::ParamPoly;

inline ParamPoly p(std::uint32_t one_based) { return ParamPoly::variable(one_based - 1); }

inline ParamMatrix mat(std::size_t rows, std::size_t cols, std::size_t q,
                       std::initializer_list<std::tuple<std::size_t, std::size_t, ParamPoly>> entries) {
  ParamMatrix m(rows, cols, q);
  for (const auto& [i, j, e] : entries) m.set(i, j, e);
  return m;
}

// The two-channel example with p1 and p2 in several places.
inline sfs::MultiChannelSystem two_channel() {
  return sfs::MultiChannelSystem(2, {{1, 1}, {1, 1}}, mat(2, 2, 4, {{0, 0, p(1)}, {0, 1, p(1)}, {1, 1, p(2)}}),
                                 {mat(2, 1, 4, {{1, 0, p(2)}}), mat(2, 1, 4, {{0, 0, p(3)}})},
                                 {mat(1, 2, 4, {{0, 0, p(4)}}), mat(1, 2, 4, {{0, 0, p(1)}, {0, 1, p(1)}})});
}

// Same as two_channel but A = diag(p1, p1): parameters enter entrywise-linearly, yet
// the partial derivative for p1 has rank two.
inline sfs::MultiChannelSystem counterexample() {
  return sfs::MultiChannelSystem(2, {{1, 1}, {1, 1}}, mat(2, 2, 4, {{0, 0, p(1)}, {1, 1, p(1)}}),
                                 {mat(2, 1, 4, {{1, 0, p(2)}}), mat(2, 1, 4, {{0, 0, p(3)}})},
                                 {mat(1, 2, 4, {{0, 0, p(4)}}), mat(1, 2, 4, {{0, 0, p(1)}, {0, 1, p(1)}})});
}

inline sfs::MultiChannelSystem corpus(const std::string& name) {
  return sfs::load_system(std::string(SFS_CORPUS_DIR) + "/" + name);
}

inline const char* const kCorpus[] = {"two_channel.json",           "not_linear.json",    "shared_loop.json",
                                      "classic_fixed_mode.json", "unobservable.json", "no_io.json",
                                      "unitary_chain.json", "state_block.json"};

}  // namespace fx
