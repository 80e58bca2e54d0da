#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sfs/dense.hpp"
#include "sfs/field.hpp"

namespace sfs {

/// Sorted (parameter index, exponent) pairs, every exponent >= 1.
/// The empty monomial is the constant 1.
using Monomial = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

Monomial monomial_product(const Monomial& a, const Monomial& b);
std::uint32_t monomial_degree(const Monomial& m);

/// Sparse multivariate polynomial with exact rational coefficients.
/// Never stores a zero coefficient.
class ParamPoly {
 public:
  using Terms = std::map<Monomial, Rational>;

  ParamPoly() = default;
  ParamPoly(const Rational& c);  // NOLINT: implicit constant promotion
  /// The polynomial coeff * p_index.
  static ParamPoly variable(std::uint32_t index, const Rational& coeff = 1);
  /// Builds from arbitrary (possibly unsorted, possibly repeated) monomials.
  static ParamPoly from_terms(const std::vector<std::pair<Monomial, Rational>>& terms);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }
  std::uint32_t degree() const;
  Rational constant_term() const;
  /// Parameter indices that occur with nonzero coefficient.
  std::set<std::uint32_t> parameters() const;
  bool contains(std::uint32_t index) const;

  void add_term(const Monomial& m, const Rational& c);

  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator-(const ParamPoly& a);
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  friend bool operator==(const ParamPoly&, const ParamPoly&) = default;

  Rational eval(const std::vector<Rational>& point) const;
  Fp eval(const std::vector<Fp>& point) const;

  /// Shifts every parameter index by `offset` (used to embed into a joint space).
  ParamPoly shifted(std::uint32_t offset) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  Terms terms_;
};

/// A sampled value of the parameter vector, over Rational or GF(P).
template <class T>
struct ParamPoint {
  std::vector<T> values;
  std::uint64_t seed = 0;
};
using RationalPoint = ParamPoint<Rational>;
using FieldPoint = ParamPoint<Fp>;

/// Sparse matrix of polynomials over a parameter space of size `param_count`.
class ParamMatrix {
 public:
  using Key = std::pair<std::size_t, std::size_t>;

  ParamMatrix() = default;
  ParamMatrix(std::size_t rows, std::size_t cols, std::size_t param_count)
      : rows_(rows), cols_(cols), param_count_(param_count) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t param_count() const { return param_count_; }

  /// Returns the entry or the zero polynomial.
  const ParamPoly& at(std::size_t i, std::size_t j) const;
  /// Stores `p` (erases the entry when p is zero). Validates indices.
  void set(std::size_t i, std::size_t j, ParamPoly p);
  const std::map<Key, ParamPoly>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }

  friend bool operator==(const ParamMatrix&, const ParamMatrix&) = default;
  friend ParamMatrix operator+(const ParamMatrix& a, const ParamMatrix& b);
  friend ParamMatrix operator-(const ParamMatrix& a, const ParamMatrix& b);
  friend ParamMatrix operator*(const ParamMatrix& a, const ParamMatrix& b);

  static ParamMatrix identity(std::size_t n, std::size_t param_count);
  static ParamMatrix hcat(const std::vector<ParamMatrix>& blocks, std::size_t rows, std::size_t param_count);
  static ParamMatrix vcat(const std::vector<ParamMatrix>& blocks, std::size_t cols, std::size_t param_count);

  /// Copy with a larger parameter space; indices shifted by `offset`.
  ParamMatrix embedded(std::size_t new_param_count, std::uint32_t offset = 0) const;
  ParamMatrix transposed() const;
  ParamMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;

  std::set<std::uint32_t> parameters() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t param_count_ = 0;
  std::map<Key, ParamPoly> entries_;
};

/// Entrywise exact evaluation. Throws std::invalid_argument when the point
/// length differs from the matrix parameter count.
RationalMatrix eval(const ParamMatrix& m, const RationalPoint& pt);
FieldMatrix eval(const ParamMatrix& m, const FieldPoint& pt);

/// Uniform point of GF(P)^q drawn from `rng`.
FieldPoint random_field_point(std::size_t q, std::mt19937_64& rng, std::uint64_t seed = 0);
/// Point with integer coordinates uniform in [-bound, bound].
RationalPoint random_integer_point(std::size_t q, std::mt19937_64& rng, std::int64_t bound, std::uint64_t seed = 0);

inline constexpr std::size_t kDefaultTrials = 10;

/// Generic rank: maximum exact rank over `trials` random GF(P) points.
///
/// One-sided: never exceeds the true generic rank, and stops early once a
/// full-rank witness has been seen.
std::size_t grank(const ParamMatrix& m, std::size_t trials = kDefaultTrials, std::uint64_t seed = 0);

/// Controllability matrix [B, AB, ..., A^(powers-1) B] as a ParamMatrix.
ParamMatrix krylov(const ParamMatrix& a, const ParamMatrix& b, std::size_t powers);

}  // namespace sfs
