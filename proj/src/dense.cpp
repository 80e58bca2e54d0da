#include "sfs/dense.hpp"

namespace sfs {

namespace {

void trim(FieldPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

void make_monic(FieldPoly& p) {
  if (p.empty()) return;
  const Fp inv = p.back().inverse();
  for (auto& c : p) c *= inv;
}

FieldPoly poly_mod(FieldPoly a, const FieldPoly& b) {
  const Fp lead_inv = b.back().inverse();
  while (a.size() >= b.size()) {
    const Fp f = a.back() * lead_inv;
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  return a;
}

}  // namespace

FieldPoly charpoly(const FieldMatrix& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("charpoly: matrix not square");
  FieldMatrix h = m;
  for (std::size_t c = 0; c + 2 < n; ++c) {
    std::size_t p = c + 1;
    while (p < n && h(p, c).is_zero()) ++p;
    if (p == n) continue;
    if (p != c + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h(p, j), h(c + 1, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h(i, p), h(i, c + 1));
    }
    const Fp inv = h(c + 1, c).inverse();
    for (std::size_t i = c + 2; i < n; ++i) {
      if (h(i, c).is_zero()) continue;
      const Fp f = h(i, c) * inv;
      for (std::size_t j = 0; j < n; ++j) h(i, j) -= f * h(c + 1, j);
      for (std::size_t r = 0; r < n; ++r) h(r, c + 1) += f * h(r, i);
    }
  }
  // polys[k] = charpoly of the leading k x k block.
  std::vector<FieldPoly> polys(n + 1);
  polys[0] = {Fp(1)};
  for (std::size_t k = 1; k <= n; ++k) {
    const std::size_t kk = k - 1;
    FieldPoly next(k + 1);
    for (std::size_t d = 0; d < polys[kk].size(); ++d) {
      next[d + 1] += polys[kk][d];
      next[d] -= h(kk, kk) * polys[kk][d];
    }
    Fp sub(1);
    for (std::size_t i = kk; i-- > 0;) {
      sub *= h(i + 1, i);
      const Fp coeff = h(i, kk) * sub;
      if (coeff.is_zero()) continue;
      for (std::size_t d = 0; d < polys[i].size(); ++d) next[d] -= coeff * polys[i][d];
    }
    polys[k] = std::move(next);
  }
  return polys[n];
}

FieldPoly poly_gcd(FieldPoly a, FieldPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FieldPoly r = poly_mod(std::move(a), b);
    a = std::move(b);
    b = std::move(r);
  }
  make_monic(a);
  return a;
}

}  // namespace sfs
