#include "sfs/fixedmodes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sfs {

Eigen::MatrixXd to_double(const RationalMatrix& m) {
  Eigen::MatrixXd r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).get_d();
  return r;
}

NumericSystem NumericSystem::at(const MultiChannelSystem& sys, const RationalPoint& pt) {
  NumericSystem ns;
  ns.channels = sys.channels();
  ns.A = eval(sys.A(), pt);
  for (std::size_t i = 0; i < sys.k(); ++i) {
    ns.B_blocks.push_back(eval(sys.B_block(i), pt));
    ns.C_blocks.push_back(eval(sys.C_block(i), pt));
  }
  return ns;
}

Eigen::MatrixXd NumericSystem::stacked_B() const { return split(ChannelSubset::all(k())).first; }

Eigen::MatrixXd NumericSystem::stacked_C() const { return split(ChannelSubset()).second; }

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> NumericSystem::split(const ChannelSubset& s) const {
  std::size_t bw = 0, ch = 0;
  for (std::size_t i = 0; i < k(); ++i) {
    if (s.contains(i))
      bw += channels[i].inputs;
    else
      ch += channels[i].outputs;
  }
  Eigen::MatrixXd b(n(), bw), c(ch, n());
  std::size_t bc = 0, cr = 0;
  for (std::size_t i = 0; i < k(); ++i) {
    if (s.contains(i)) {
      b.middleCols(bc, channels[i].inputs) = to_double(B_blocks[i]);
      bc += channels[i].inputs;
    } else {
      c.middleRows(cr, channels[i].outputs) = to_double(C_blocks[i]);
      cr += channels[i].outputs;
    }
  }
  return {b, c};
}

std::size_t numeric_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return 0;
  const double threshold = tol * smax * static_cast<double>(std::max(m.rows(), m.cols()));
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++r;
  return r;
}

bool pencil_rank_deficient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b_s, const Eigen::MatrixXd& c_compl,
                           Complex lambda, double tol) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b_s.rows() != n || c_compl.cols() != n)
    throw std::invalid_argument("pencil_rank_deficient: inconsistent shapes");
  if (!(tol > 0)) throw std::invalid_argument("pencil_rank_deficient: tol must be positive");
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n + c_compl.rows(), n + b_s.cols());
  p.topLeftCorner(n, n) = lambda * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>();
  p.topRightCorner(n, b_s.cols()) = b_s.cast<Complex>();
  p.bottomLeftCorner(c_compl.rows(), n) = c_compl.cast<Complex>();
  return numeric_rank(p, tol) < static_cast<std::size_t>(n);
}

namespace {

// Diagonal similarity by powers of two so that row and column norms match.
Eigen::MatrixXd balance(Eigen::MatrixXd a) {
  constexpr double radix = 2.0;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0, r = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      if (c == 0 || r == 0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

bool complex_less(const Complex& x, const Complex& y) {
  return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
}

}  // namespace

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  if (a.rows() == 0) return {};
  Eigen::EigenSolver<Eigen::MatrixXd> solver(balance(a), false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: eigensolver did not converge");
  std::vector<Complex> out(solver.eigenvalues().data(), solver.eigenvalues().data() + a.rows());
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

std::vector<Complex> cluster(const std::vector<Complex>& values, double radius) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) <= radius) parent[find(i)] = find(j);
  std::vector<std::pair<Complex, std::size_t>> sums(n, {Complex(0), 0});
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = sums[find(i)];
    s.first += values[i];
    ++s.second;
  }
  std::vector<Complex> out;
  for (const auto& [sum, count] : sums)
    if (count) out.push_back(sum / static_cast<double>(count));
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

FixedSpectrumResult fixed_spectrum(const NumericSystem& sys, double tol, double cluster_radius) {
  if (sys.n() == 0) throw std::invalid_argument("fixed_spectrum: empty state");
  FixedSpectrumResult result;
  result.tol = tol;
  result.cluster_radius = cluster_radius;
  const Eigen::MatrixXd a = to_double(sys.A);
  const auto subsets = all_subsets(sys.k());
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> splits;
  splits.reserve(subsets.size());
  for (const auto& s : subsets) splits.push_back(sys.split(s));
  for (const Complex& lambda : cluster(eigenvalues(a), cluster_radius)) {
    FixedEigenvalue fe{lambda, {}};
    for (std::size_t i = 0; i < subsets.size(); ++i)
      if (pencil_rank_deficient(a, splits[i].first, splits[i].second, lambda, tol)) fe.witnesses.push_back(subsets[i]);
    if (!fe.witnesses.empty()) result.eigenvalues.push_back(std::move(fe));
  }
  return result;
}

std::vector<Complex> random_feedback_oracle(const NumericSystem& sys, std::size_t samples, std::uint64_t seed,
                                            double tol) {
  if (samples == 0) throw std::invalid_argument("random_feedback_oracle: samples must be >= 1");
  const Eigen::MatrixXd a = to_double(sys.A);
  const Eigen::MatrixXd b = sys.stacked_B();
  const Eigen::MatrixXd c = sys.stacked_C();
  std::vector<Complex> persistent = cluster(eigenvalues(a), tol);
  if (b.size() == 0 || c.size() == 0) return persistent;

  const double scale = (1.0 + a.norm()) / (std::max(b.norm(), 1e-12) * std::max(c.norm(), 1e-12));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (std::size_t s = 0; s < samples && !persistent.empty(); ++s) {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(b.cols(), c.rows());
    std::size_t r0 = 0, c0 = 0;
    for (const auto& ch : sys.channels) {
      for (std::size_t i = 0; i < ch.inputs; ++i)
        for (std::size_t j = 0; j < ch.outputs; ++j) f(r0 + i, c0 + j) = scale * uni(rng);
      r0 += ch.inputs;
      c0 += ch.outputs;
    }
    const auto closed = eigenvalues(a + b * f * c);
    std::erase_if(persistent, [&](const Complex& lambda) {
      return std::none_of(closed.begin(), closed.end(), [&](const Complex& mu) { return std::abs(mu - lambda) <= tol; });
    });
  }
  return persistent;
}

bool same_spectrum(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool matched = false;
    for (std::size_t j = 0; j < b.size() && !matched; ++j)
      if (!used[j] && std::abs(x - b[j]) <= tol) used[j] = matched = true;
    if (!matched) return false;
  }
  return true;
}

}  // namespace sfs
