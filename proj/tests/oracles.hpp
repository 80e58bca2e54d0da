// Independent reference computations used only by the tests. None of these
// reuse the library's decision code: they expand determinants symbolically,
// search block forms exhaustively, and re-validate cycle subgraphs arc by arc.
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "sfs/graph.hpp"
#include "sfs/polymatrix.hpp"
#include "sfs/system.hpp"

namespace oracle {

using sfs::ParamMatrix;
using sfs::ParamPoly;

// Laplace expansion along the first row, memoized on the column subset.
inline ParamPoly symbolic_det(const ParamMatrix& m, const std::vector<std::size_t>& rows,
                              const std::vector<std::size_t>& cols) {
  const std::size_t r = rows.size();
  std::map<std::pair<std::size_t, unsigned>, ParamPoly> memo;
  std::function<ParamPoly(std::size_t, unsigned)> rec = [&](std::size_t depth, unsigned used) -> ParamPoly {
    if (depth == r) return ParamPoly(sfs::Rational(1));
    auto key = std::make_pair(depth, used);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    ParamPoly acc;
    int sign = 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (used & (1u << c)) continue;
      const ParamPoly& e = m.at(rows[depth], cols[c]);
      if (!e.is_zero()) {
        ParamPoly term = e * rec(depth + 1, used | (1u << c));
        if (sign > 0)
          acc += term;
        else
          acc -= term;
      }
      sign = -sign;
    }
    memo[key] = acc;
    return acc;
  };
  return rec(0, 0);
}

inline ParamPoly symbolic_det(const ParamMatrix& m) {
  std::vector<std::size_t> idx(m.rows());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return symbolic_det(m, idx, idx);
}

inline void for_each_combination(std::size_t n, std::size_t r,
                                 const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> c(r);
  for (std::size_t i = 0; i < r; ++i) c[i] = i;
  if (r > n) return;
  while (true) {
    if (!f(c)) return;
    std::size_t i = r;
    while (i > 0 && c[i - 1] == n - r + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < r; ++j) c[j] = c[j - 1] + 1;
  }
}

// Largest r with a symbolically nonzero r x r minor. Exponential; small inputs only.
inline std::size_t symbolic_rank(const ParamMatrix& m) {
  for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
    bool found = false;
    for_each_combination(m.rows(), r, [&](const std::vector<std::size_t>& rows) {
      for_each_combination(m.cols(), r, [&](const std::vector<std::size_t>& cols) {
        found = !symbolic_det(m, rows, cols).is_zero();
        return !found;
      });
      return !found;
    });
    if (found) return r;
  }
  return 0;
}

// A + B F C with F over fresh parameters, built entrywise from the blocks.
inline ParamMatrix closed_loop(const sfs::MultiChannelSystem& sys) {
  std::size_t qt = 0;
  for (const auto& ch : sys.channels()) qt += ch.inputs * ch.outputs;
  const std::size_t total = sys.q() + qt;
  ParamMatrix out = sys.A().embedded(total);
  std::uint32_t next = static_cast<std::uint32_t>(sys.q());
  for (std::size_t c = 0; c < sys.k(); ++c) {
    const ParamMatrix b = sys.B_block(c).embedded(total);
    const ParamMatrix cc = sys.C_block(c).embedded(total);
    for (std::size_t a = 0; a < sys.channels()[c].inputs; ++a)
      for (std::size_t o = 0; o < sys.channels()[c].outputs; ++o) {
        const ParamPoly f = ParamPoly::variable(next++);
        for (std::size_t i = 0; i < sys.n(); ++i) {
          if (b.at(i, a).is_zero()) continue;
          for (std::size_t j = 0; j < sys.n(); ++j) {
            if (cc.at(o, j).is_zero()) continue;
            out.set(i, j, out.at(i, j) + b.at(i, a) * f * cc.at(o, j));
          }
        }
      }
  }
  return out;
}

// Exhaustive search for S and a state partition (X1, X2 != {}, X3) with
// A block lower triangular, B_S supported on X3 rows, C_{k-S} on X1 columns.
inline bool block_form_exists(const sfs::MultiChannelSystem& sys) {
  const std::size_t n = sys.n();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t s = 0; s < (std::size_t{1} << sys.k()); ++s) {
    std::vector<std::size_t> members;
    for (std::size_t c = 0; c < sys.k(); ++c)
      if (s & (std::size_t{1} << c)) members.push_back(c);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<int> block(n);
      std::size_t x = code;
      bool has_middle = false;
      for (std::size_t i = 0; i < n; ++i) {
        block[i] = static_cast<int>(x % 3);
        x /= 3;
        has_middle |= block[i] == 1;
      }
      if (!has_middle) continue;
      bool ok = true;
      for (const auto& [key, p] : sys.A().entries())
        if (block[key.first] < block[key.second]) ok = false;
      for (std::size_t c = 0; c < sys.k() && ok; ++c) {
        const bool in_s = s & (std::size_t{1} << c);
        if (in_s) {
          for (const auto& [key, p] : sys.B_block(c).entries())
            if (block[key.first] != 2) ok = false;
        } else {
          for (const auto& [key, p] : sys.C_block(c).entries())
            if (block[key.second] != 0) ok = false;
        }
      }
      if (ok) return true;
    }
  }
  return false;
}

// Checks one emitted cycle subgraph against the definition: every cycle is a
// closed walk on graph arcs without repeated vertices, cycles are disjoint,
// all states are covered, and arc colors are pairwise distinct.
inline bool valid_cycle_subgraph(const sfs::SystemGraph& g, const sfs::CycleSubgraph& s) {
  std::set<sfs::Arc> arcs(g.arcs.begin(), g.arcs.end());
  std::set<std::size_t> seen;
  std::multiset<std::uint32_t> colors;
  for (const auto& cyc : s.cycles) {
    if (cyc.empty()) return false;
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const auto& a = cyc[i];
      if (!arcs.count(a)) return false;
      if (cyc[(i + 1) % cyc.size()].from != a.to) return false;
      if (!seen.insert(a.from).second) return false;
      colors.insert(a.color);
    }
  }
  for (std::size_t v = 0; v < g.n; ++v)
    if (!seen.count(v)) return false;
  std::set<std::uint32_t> distinct(colors.begin(), colors.end());
  if (distinct.size() != colors.size()) return false;
  return std::vector<std::uint32_t>(distinct.begin(), distinct.end()) == s.color_set;
}

// Squarefree monomial of a color set (colors are 1-based parameter indices + 1).
inline sfs::Monomial color_monomial(const std::vector<std::uint32_t>& colors) {
  sfs::Monomial m;
  for (auto c : colors) m.emplace_back(c - 1, 1);
  return m;
}

}  // namespace oracle
