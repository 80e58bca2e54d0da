#include "sfs/polymatrix.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sfs {

Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

std::uint32_t monomial_degree(const Monomial& m) {
  std::uint32_t d = 0;
  for (const auto& [idx, e] : m) d += e;
  return d;
}

// ---------------------------------------------------------------- ParamPoly

ParamPoly::ParamPoly(const Rational& c) {
  if (c != 0) terms_.emplace(Monomial{}, c);
}

ParamPoly ParamPoly::variable(std::uint32_t index, const Rational& coeff) {
  ParamPoly p;
  if (coeff != 0) p.terms_.emplace(Monomial{{index, 1}}, coeff);
  return p;
}

ParamPoly ParamPoly::from_terms(const std::vector<std::pair<Monomial, Rational>>& terms) {
  ParamPoly p;
  for (const auto& [mono, c] : terms) {
    Monomial m = mono;
    std::sort(m.begin(), m.end());
    Monomial merged;
    for (const auto& [idx, e] : m) {
      if (e == 0) continue;
      if (!merged.empty() && merged.back().first == idx)
        merged.back().second += e;
      else
        merged.emplace_back(idx, e);
    }
    p.add_term(merged, c);
  }
  return p;
}

void ParamPoly::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

std::uint32_t ParamPoly::degree() const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
  return d;
}

Rational ParamPoly::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<std::uint32_t> ParamPoly::parameters() const {
  std::set<std::uint32_t> out;
  for (const auto& [m, c] : terms_)
    for (const auto& [idx, e] : m) out.insert(idx);
  return out;
}

bool ParamPoly::contains(std::uint32_t index) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [idx, e] : m)
      if (idx == index) return true;
  return false;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

ParamPoly operator-(const ParamPoly& a) {
  ParamPoly r = a;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(monomial_product(ma, mb), ca * cb);
  return r;
}

namespace {

template <class T>
T eval_monomial(const Monomial& m, const std::vector<T>& point) {
  T v(1);
  for (const auto& [idx, e] : m) {
    if (idx >= point.size()) throw std::invalid_argument("ParamPoly::eval: parameter index out of range");
    for (std::uint32_t k = 0; k < e; ++k) v *= point[idx];
  }
  return v;
}

}  // namespace

Rational ParamPoly::eval(const std::vector<Rational>& point) const {
  Rational v = 0;
  for (const auto& [m, c] : terms_) v += c * eval_monomial(m, point);
  return v;
}

Fp ParamPoly::eval(const std::vector<Fp>& point) const {
  Fp v;
  for (const auto& [m, c] : terms_) v += to_field(c) * eval_monomial(m, point);
  return v;
}

ParamPoly ParamPoly::shifted(std::uint32_t offset) const {
  ParamPoly r;
  for (const auto& [m, c] : terms_) {
    Monomial s = m;
    for (auto& [idx, e] : s) idx += offset;
    r.terms_.emplace(std::move(s), c);
  }
  return r;
}

std::string ParamPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = abs(c);
    os << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    first = false;
    const bool unit = mag == 1 && !m.empty();
    if (!unit) os << mag.get_str();
    bool lead = unit;
    for (const auto& [idx, e] : m) {
      if (!lead) os << '*';
      lead = false;
      if (idx < names.size())
        os << names[idx];
      else
        os << 'p' << (idx + 1);
      if (e > 1) os << '^' << e;
    }
  }
  return os.str();
}

// -------------------------------------------------------------- ParamMatrix

const ParamPoly& ParamMatrix::at(std::size_t i, std::size_t j) const {
  static const ParamPoly zero;
  auto it = entries_.find({i, j});
  return it == entries_.end() ? zero : it->second;
}

void ParamMatrix::set(std::size_t i, std::size_t j, ParamPoly p) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("ParamMatrix::set: index out of range");
  for (auto idx : p.parameters())
    if (idx >= param_count_) throw std::out_of_range("ParamMatrix::set: parameter index >= param_count");
  if (p.is_zero())
    entries_.erase({i, j});
  else
    entries_[{i, j}] = std::move(p);
}

namespace {

void require_same_shape(const ParamMatrix& a, const ParamMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.param_count() != b.param_count())
    throw std::invalid_argument(std::string("ParamMatrix ") + op + ": shape or parameter space mismatch");
}

}  // namespace

ParamMatrix operator+(const ParamMatrix& a, const ParamMatrix& b) {
  require_same_shape(a, b, "+");
  ParamMatrix r = a;
  for (const auto& [key, p] : b.entries_) r.set(key.first, key.second, r.at(key.first, key.second) + p);
  return r;
}

ParamMatrix operator-(const ParamMatrix& a, const ParamMatrix& b) {
  require_same_shape(a, b, "-");
  ParamMatrix r = a;
  for (const auto& [key, p] : b.entries_) r.set(key.first, key.second, r.at(key.first, key.second) - p);
  return r;
}

ParamMatrix operator*(const ParamMatrix& a, const ParamMatrix& b) {
  if (a.cols_ != b.rows_ || a.param_count_ != b.param_count_)
    throw std::invalid_argument("ParamMatrix *: shape or parameter space mismatch");
  // Index b by row for sparse accumulation.
  std::vector<std::vector<std::pair<std::size_t, const ParamPoly*>>> b_rows(b.rows_);
  for (const auto& [key, p] : b.entries_) b_rows[key.first].emplace_back(key.second, &p);
  std::map<ParamMatrix::Key, ParamPoly> acc;
  for (const auto& [key, pa] : a.entries_)
    for (const auto& [col, pb] : b_rows[key.second]) acc[{key.first, col}] += pa * *pb;
  ParamMatrix r(a.rows_, b.cols_, a.param_count_);
  for (auto& [key, p] : acc)
    if (!p.is_zero()) r.entries_.emplace(key, std::move(p));
  return r;
}

ParamMatrix ParamMatrix::identity(std::size_t n, std::size_t param_count) {
  ParamMatrix m(n, n, param_count);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, ParamPoly(1));
  return m;
}

ParamMatrix ParamMatrix::hcat(const std::vector<ParamMatrix>& blocks, std::size_t rows, std::size_t param_count) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows_ != rows || b.param_count_ != param_count)
      throw std::invalid_argument("ParamMatrix::hcat: block shape mismatch");
    cols += b.cols_;
  }
  ParamMatrix r(rows, cols, param_count);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (const auto& [key, p] : b.entries_) r.entries_.emplace(Key{key.first, key.second + offset}, p);
    offset += b.cols_;
  }
  return r;
}

ParamMatrix ParamMatrix::vcat(const std::vector<ParamMatrix>& blocks, std::size_t cols, std::size_t param_count) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols_ != cols || b.param_count_ != param_count)
      throw std::invalid_argument("ParamMatrix::vcat: block shape mismatch");
    rows += b.rows_;
  }
  ParamMatrix r(rows, cols, param_count);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (const auto& [key, p] : b.entries_) r.entries_.emplace(Key{key.first + offset, key.second}, p);
    offset += b.rows_;
  }
  return r;
}

ParamMatrix ParamMatrix::embedded(std::size_t new_param_count, std::uint32_t offset) const {
  if (new_param_count < param_count_ + offset)
    throw std::invalid_argument("ParamMatrix::embedded: target parameter space too small");
  ParamMatrix r(rows_, cols_, new_param_count);
  for (const auto& [key, p] : entries_) r.entries_.emplace(key, offset ? p.shifted(offset) : p);
  return r;
}

ParamMatrix ParamMatrix::transposed() const {
  ParamMatrix r(cols_, rows_, param_count_);
  for (const auto& [key, p] : entries_) r.entries_.emplace(Key{key.second, key.first}, p);
  return r;
}

ParamMatrix ParamMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
  ParamMatrix r(rows.size(), cols.size(), param_count_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto& p = at(rows[i], cols[j]);
      if (!p.is_zero()) r.entries_.emplace(Key{i, j}, p);
    }
  return r;
}

std::set<std::uint32_t> ParamMatrix::parameters() const {
  std::set<std::uint32_t> out;
  for (const auto& [key, p] : entries_) out.merge(p.parameters());
  return out;
}

// --------------------------------------------------------------- evaluation

namespace {

template <class T>
Matrix<T> eval_impl(const ParamMatrix& m, const ParamPoint<T>& pt) {
  if (pt.values.size() != m.param_count())
    throw std::invalid_argument("eval: point has " + std::to_string(pt.values.size()) +
                                " coordinates, matrix expects " + std::to_string(m.param_count()));
  Matrix<T> r(m.rows(), m.cols());
  for (const auto& [key, p] : m.entries()) r(key.first, key.second) = p.eval(pt.values);
  return r;
}

}  // namespace

RationalMatrix eval(const ParamMatrix& m, const RationalPoint& pt) { return eval_impl(m, pt); }
FieldMatrix eval(const ParamMatrix& m, const FieldPoint& pt) { return eval_impl(m, pt); }

FieldPoint random_field_point(std::size_t q, std::mt19937_64& rng, std::uint64_t seed) {
  std::uniform_int_distribution<std::uint64_t> dist(0, Fp::kModulus - 1);
  FieldPoint pt;
  pt.seed = seed;
  pt.values.reserve(q);
  for (std::size_t i = 0; i < q; ++i) pt.values.emplace_back(dist(rng));
  return pt;
}

RationalPoint random_integer_point(std::size_t q, std::mt19937_64& rng, std::int64_t bound, std::uint64_t seed) {
  std::uniform_int_distribution<std::int64_t> dist(-bound, bound);
  RationalPoint pt;
  pt.seed = seed;
  pt.values.reserve(q);
  for (std::size_t i = 0; i < q; ++i) pt.values.emplace_back(static_cast<long>(dist(rng)));
  return pt;
}

std::size_t grank(const ParamMatrix& m, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("grank: trials must be >= 1");
  const std::size_t full = std::min(m.rows(), m.cols());
  if (full == 0 || m.is_zero()) return 0;
  std::mt19937_64 rng(seed);
  std::size_t best = 0;
  for (std::size_t t = 0; t < trials && best < full; ++t)
    best = std::max(best, rank_exact(eval(m, random_field_point(m.param_count(), rng, seed))));
  return best;
}

ParamMatrix krylov(const ParamMatrix& a, const ParamMatrix& b, std::size_t powers) {
  std::vector<ParamMatrix> blocks;
  blocks.reserve(powers);
  ParamMatrix cur = b;
  for (std::size_t i = 0; i < powers; ++i) {
    if (i) cur = a * cur;
    blocks.push_back(cur);
  }
  return ParamMatrix::hcat(blocks, a.rows(), a.param_count());
}

}  // namespace sfs
