#include "sfs/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sfs {

// ------------------------------------------------------------ ChannelSubset

ChannelSubset::ChannelSubset(std::vector<std::size_t> members, std::size_t k) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] >= k) throw std::invalid_argument("ChannelSubset: channel index out of range");
    if (i && members_[i] <= members_[i - 1]) throw std::invalid_argument("ChannelSubset: members not strictly increasing");
  }
}

ChannelSubset ChannelSubset::all(std::size_t k) {
  std::vector<std::size_t> v(k);
  std::iota(v.begin(), v.end(), 0);
  return ChannelSubset(std::move(v), k);
}

bool ChannelSubset::contains(std::size_t channel) const {
  return std::binary_search(members_.begin(), members_.end(), channel);
}

ChannelSubset ChannelSubset::complement(std::size_t k) const {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < k; ++i)
    if (!contains(i)) v.push_back(i);
  return ChannelSubset(std::move(v), k);
}

std::string ChannelSubset::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < members_.size(); ++i) os << (i ? "," : "") << members_[i] + 1;
  os << '}';
  return os.str();
}

std::vector<ChannelSubset> all_subsets(std::size_t k) {
  if (k >= 20) throw std::invalid_argument("all_subsets: too many channels to enumerate");
  std::vector<ChannelSubset> out;
  for (std::size_t size = 0; size <= k; ++size) {
    // Lexicographic combinations of `size` out of k.
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
      out.emplace_back(idx, k);
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == k - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

// ------------------------------------------------------- MultiChannelSystem

MultiChannelSystem::MultiChannelSystem(std::size_t n, std::vector<Channel> channels, ParamMatrix a,
                                       std::vector<ParamMatrix> b_blocks, std::vector<ParamMatrix> c_blocks,
                                       std::vector<std::string> param_names)
    : n_(n),
      q_(a.param_count()),
      channels_(std::move(channels)),
      a_(std::move(a)),
      b_blocks_(std::move(b_blocks)),
      c_blocks_(std::move(c_blocks)),
      param_names_(std::move(param_names)) {
  if (n_ == 0) throw std::invalid_argument("system: state dimension must be positive");
  if (a_.rows() != n_ || a_.cols() != n_) throw std::invalid_argument("system: A must be n x n");
  if (b_blocks_.size() != channels_.size() || c_blocks_.size() != channels_.size())
    throw std::invalid_argument("system: need one B block and one C block per channel");
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    const auto& b = b_blocks_[i];
    const auto& c = c_blocks_[i];
    if (b.rows() != n_ || b.cols() != channels_[i].inputs)
      throw std::invalid_argument("system: B_" + std::to_string(i + 1) + " has wrong shape");
    if (c.rows() != channels_[i].outputs || c.cols() != n_)
      throw std::invalid_argument("system: C_" + std::to_string(i + 1) + " has wrong shape");
    if (b.param_count() != q_ || c.param_count() != q_)
      throw std::invalid_argument("system: channel " + std::to_string(i + 1) + " uses a different parameter space");
  }
  if (!param_names_.empty() && param_names_.size() != q_)
    throw std::invalid_argument("system: parameter name count differs from q");
}

std::size_t MultiChannelSystem::inputs() const {
  std::size_t m = 0;
  for (const auto& c : channels_) m += c.inputs;
  return m;
}

std::size_t MultiChannelSystem::outputs() const {
  std::size_t l = 0;
  for (const auto& c : channels_) l += c.outputs;
  return l;
}

std::size_t MultiChannelSystem::input_offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += channels_.at(j).inputs;
  return off;
}

std::size_t MultiChannelSystem::output_offset(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += channels_.at(j).outputs;
  return off;
}

StackedIO stack(const MultiChannelSystem& sys) {
  std::vector<ParamMatrix> bs, cs;
  for (std::size_t i = 0; i < sys.k(); ++i) {
    bs.push_back(sys.B_block(i));
    cs.push_back(sys.C_block(i));
  }
  return {ParamMatrix::hcat(bs, sys.n(), sys.q()), ParamMatrix::vcat(cs, sys.n(), sys.q())};
}

SubsetSplit split(const MultiChannelSystem& sys, const ChannelSubset& s) {
  std::vector<ParamMatrix> bs, cs;
  for (std::size_t i = 0; i < sys.k(); ++i) {
    if (s.contains(i))
      bs.push_back(sys.B_block(i));
    else
      cs.push_back(sys.C_block(i));
  }
  return {ParamMatrix::hcat(bs, sys.n(), sys.q()), ParamMatrix::vcat(cs, sys.n(), sys.q())};
}

ParamMatrix system_matrix(const MultiChannelSystem& sys) {
  const auto [b, c] = stack(sys);
  const std::size_t n = sys.n();
  ParamMatrix m(n + c.rows(), n + b.cols(), sys.q());
  for (const auto& [key, p] : sys.A().entries()) m.set(key.first, key.second, p);
  for (const auto& [key, p] : b.entries()) m.set(key.first, n + key.second, p);
  for (const auto& [key, p] : c.entries()) m.set(n + key.first, key.second, p);
  return m;
}

std::size_t FeedbackPattern::channel_of_param(std::uint32_t index) const {
  if (index >= param_count) throw std::out_of_range("FeedbackPattern: parameter index out of range");
  auto it = std::upper_bound(first_param.begin(), first_param.end(), index);
  return static_cast<std::size_t>(it - first_param.begin()) - 1;
}

FeedbackPattern feedback_pattern(const MultiChannelSystem& sys) {
  std::size_t count = 0;
  for (const auto& c : sys.channels()) count += c.inputs * c.outputs;
  FeedbackPattern fp;
  fp.param_count = count;
  fp.F = ParamMatrix(sys.inputs(), sys.outputs(), count);
  std::uint32_t next = 0;
  for (std::size_t i = 0; i < sys.k(); ++i) {
    fp.first_param.push_back(next);
    const auto& ch = sys.channels()[i];
    const std::size_t r0 = sys.input_offset(i), c0 = sys.output_offset(i);
    for (std::size_t r = 0; r < ch.inputs; ++r)
      for (std::size_t c = 0; c < ch.outputs; ++c) fp.F.set(r0 + r, c0 + c, ParamPoly::variable(next++));
  }
  return fp;
}

// ---------------------------------------------------- linear parameterization

std::string to_string(NotLinear::Reason r) {
  switch (r) {
    case NotLinear::Reason::kNonlinearEntry: return "nonlinear-entry";
    case NotLinear::Reason::kConstantTerm: return "constant-term";
    case NotLinear::Reason::kRankTwoOrMore: return "derivative-rank-two-or-more";
  }
  return "unknown";
}

ParamMatrix LinearParamDecomposition::reconstruct() const {
  ParamMatrix m(rows, cols, param_count);
  for (const auto& t : terms)
    for (std::size_t i = 0; i < rows; ++i) {
      if (t.g[i] == 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (t.h[j] == 0) continue;
        m.set(i, j, m.at(i, j) + ParamPoly::variable(t.param, t.g[i] * t.h[j]));
      }
    }
  return m;
}

const RankOneTerm* LinearParamDecomposition::term_for(std::uint32_t param) const {
  for (const auto& t : terms)
    if (t.param == param) return &t;
  return nullptr;
}

LinearityResult decompose_linear(const ParamMatrix& m) {
  std::map<std::uint32_t, RationalMatrix> derivative;
  for (const auto& [key, poly] : m.entries()) {
    const std::string where = "entry (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
    for (const auto& [mono, c] : poly.terms()) {
      if (mono.empty())
        return NotLinear{NotLinear::Reason::kConstantTerm, std::nullopt, where + " has a constant term"};
      if (mono.size() != 1 || mono[0].second != 1)
        return NotLinear{NotLinear::Reason::kNonlinearEntry, mono[0].first, where + " has a term of degree > 1"};
      auto [it, fresh] = derivative.try_emplace(mono[0].first, m.rows(), m.cols());
      it->second(key.first, key.second) = c;
    }
  }

  LinearParamDecomposition d;
  d.rows = m.rows();
  d.cols = m.cols();
  d.param_count = m.param_count();
  d.is_binary = true;
  d.is_unitary = true;
  for (const auto& [param, dr] : derivative) {
    std::size_t i0 = d.rows, j0 = d.cols;
    for (std::size_t j = 0; j < d.cols && i0 == d.rows; ++j)
      for (std::size_t i = 0; i < d.rows; ++i)
        if (dr(i, j) != 0) {
          i0 = i;
          j0 = j;
          break;
        }
    RankOneTerm t;
    t.param = param;
    t.g.resize(d.rows);
    t.h.resize(d.cols);
    const Rational pivot = dr(i0, j0);
    for (std::size_t i = 0; i < d.rows; ++i) t.g[i] = dr(i, j0) / pivot;
    for (std::size_t j = 0; j < d.cols; ++j) t.h[j] = dr(i0, j);
    std::size_t support = 0;
    bool zero_one = true;
    for (std::size_t i = 0; i < d.rows; ++i)
      for (std::size_t j = 0; j < d.cols; ++j) {
        if (t.g[i] * t.h[j] != dr(i, j))
          return NotLinear{NotLinear::Reason::kRankTwoOrMore, param,
                           "partial derivative for parameter index " + std::to_string(param) + " has rank >= 2"};
        if (dr(i, j) != 0) {
          ++support;
          if (dr(i, j) != 1) zero_one = false;
        }
      }
    d.is_binary = d.is_binary && zero_one;
    d.is_unitary = d.is_unitary && zero_one && support == 1;
    d.terms.push_back(std::move(t));
  }
  return d;
}

LinearityResult detect_linear_parameterization(const MultiChannelSystem& sys) {
  return decompose_linear(system_matrix(sys));
}

bool is_polynomially_parameterized(const MultiChannelSystem& sys) {
  const auto within = [&](const ParamMatrix& m) {
    return m.param_count() == sys.q() && (m.parameters().empty() || *m.parameters().rbegin() < sys.q());
  };
  if (!within(sys.A())) return false;
  for (std::size_t i = 0; i < sys.k(); ++i)
    if (!within(sys.B_block(i)) || !within(sys.C_block(i))) return false;
  return true;
}

}  // namespace sfs
