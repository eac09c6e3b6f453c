#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "lhott/matrix.hpp"

namespace lhott {

/// Sparse vector: (index, value) pairs, strictly increasing index, no zeros.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

inline SparseVector axpy(const SparseVector& x, const Rational& a, const SparseVector& y) {
  // x + a*y
  SparseVector out;
  out.reserve(x.size() + y.size());
  std::size_t i = 0, j = 0;
  while (i < x.size() || j < y.size()) {
    if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
      out.push_back(x[i++]);
    } else if (i == x.size() || y[j].first < x[i].first) {
      out.emplace_back(y[j].first, a * y[j].second);
      ++j;
    } else {
      Rational v = x[i].second + a * y[j].second;
      if (v != 0) out.emplace_back(x[i].first, std::move(v));
      ++i, ++j;
    }
  }
  return out;
}

}  // namespace detail

/// Reduced row echelon form of a subspace of Q^n, pivoting on the LAST
/// nonzero coordinate of each row. The non-pivot ("free") coordinates are
/// therefore the earliest ones, which puts quotient and kernel bases on the
/// leading blocks of a block-structured ambient space. The form depends only
/// on the subspace, not on the spanning set used to build it.
class EchelonSubspace {
 public:
  explicit EchelonSubspace(std::size_t ambient) : ambient_(ambient) {}

  std::size_t ambient() const noexcept { return ambient_; }

  void insert(SparseVector v) {
    finalized_ = false;
    while (!v.empty()) {
      std::size_t p = v.back().first;
      auto it = rows_.find(p);
      if (it == rows_.end()) {
        Rational inv = 1 / v.back().second;
        for (auto& [_, x] : v) x *= inv;
        rows_.emplace(p, std::move(v));
        return;
      }
      Rational a = -v.back().second;
      v = detail::axpy(v, a, it->second);
    }
  }

  void insert_dense_row(const QMatrix& m, std::size_t r) {
    SparseVector v;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(r, j) != 0) v.emplace_back(j, m(r, j));
    insert(std::move(v));
  }

  std::size_t dimension() const noexcept { return rows_.size(); }

  /// Brings every row to fully reduced form (zero at all other pivots).
  void finalize() {
    if (finalized_) return;
    for (auto& [p, row] : rows_) {
      // entries below p at pivot columns are eliminated by rows already final
      for (std::size_t k = row.size(); k-- > 0;) {
        if (k >= row.size()) continue;
        std::size_t c = row[k].first;
        if (c == p) continue;
        auto it = rows_.find(c);
        if (it == rows_.end()) continue;
        Rational a = -row[k].second;
        row = detail::axpy(row, a, it->second);
        k = row.size();  // restart scan; rows are short in practice
      }
    }
    finalized_ = true;
  }

  bool is_pivot(std::size_t c) const { return rows_.count(c) != 0; }

  std::vector<std::size_t> free_coordinates() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < ambient_; ++c)
      if (!is_pivot(c)) out.push_back(c);
    return out;
  }

  const std::map<std::size_t, SparseVector>& rows() const noexcept { return rows_; }

 private:
  std::size_t ambient_;
  std::map<std::size_t, SparseVector> rows_;
  bool finalized_ = true;
};

/// Quotient Q^n / U with basis the images of the free standard vectors.
struct Quotient {
  std::vector<std::size_t> basis;  // free coordinates of the ambient space
  QMatrix projection;              // dim x n, kills U
  QMatrix section;                 // n x dim, projection * section = 1
  std::size_t dimension() const noexcept { return basis.size(); }
};

/// Kernel of a linear system, basis indexed by the free coordinates.
struct Kernel {
  std::vector<std::size_t> basis;  // free coordinates
  QMatrix inclusion;               // n x dim
  QMatrix retraction;              // dim x n, retraction * inclusion = 1
  std::size_t dimension() const noexcept { return basis.size(); }
};

inline Quotient quotient_of(EchelonSubspace& u) {
  u.finalize();
  const std::size_t n = u.ambient();
  Quotient q;
  q.basis = u.free_coordinates();
  std::vector<std::size_t> slot(n, n);
  for (std::size_t a = 0; a < q.basis.size(); ++a) slot[q.basis[a]] = a;
  q.projection = QMatrix(q.basis.size(), n);
  q.section = QMatrix(n, q.basis.size());
  for (std::size_t a = 0; a < q.basis.size(); ++a) {
    q.projection(a, q.basis[a]) = 1;
    q.section(q.basis[a], a) = 1;
  }
  for (const auto& [p, row] : u.rows())
    for (const auto& [c, x] : row)
      if (c != p) q.projection(slot[c], p) = -x;
  return q;
}

/// Kernel of the system whose equations span `u` (rows are linear forms).
inline Kernel kernel_of(EchelonSubspace& u) {
  u.finalize();
  const std::size_t n = u.ambient();
  Kernel k;
  k.basis = u.free_coordinates();
  std::vector<std::size_t> slot(n, n);
  for (std::size_t a = 0; a < k.basis.size(); ++a) slot[k.basis[a]] = a;
  k.inclusion = QMatrix(n, k.basis.size());
  k.retraction = QMatrix(k.basis.size(), n);
  for (std::size_t a = 0; a < k.basis.size(); ++a) {
    k.inclusion(k.basis[a], a) = 1;
    k.retraction(a, k.basis[a]) = 1;
  }
  for (const auto& [p, row] : u.rows())
    for (const auto& [c, x] : row)
      if (c != p) k.inclusion(p, slot[c]) = -x;
  return k;
}

/// Cokernel of a dense map (quotient of the target by the column span).
inline Quotient cokernel(const QMatrix& m) {
  EchelonSubspace u(m.rows());
  QMatrix t = m.transpose();
  for (std::size_t r = 0; r < t.rows(); ++r) u.insert_dense_row(t, r);
  return quotient_of(u);
}

inline Kernel kernel(const QMatrix& m) {
  EchelonSubspace u(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) u.insert_dense_row(m, r);
  return kernel_of(u);
}

/// Solves a * x = b; nullopt if inconsistent. Picks the solution vanishing
/// on the free coordinates.
inline std::optional<QMatrix> solve(const QMatrix& a, const QMatrix& b) {
  if (a.rows() != b.rows()) fail(ErrorKind::ShapeMismatch, "solve: " + a.shape() + " vs " + b.shape());
  QMatrix aug(a.rows(), a.cols() + b.cols());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  auto pivots = row_reduce(aug);
  QMatrix x(a.cols(), b.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] >= a.cols()) return std::nullopt;
    for (std::size_t j = 0; j < b.cols(); ++j) x(pivots[r], j) = aug(r, a.cols() + j);
  }
  return x;
}

}  // namespace lhott
