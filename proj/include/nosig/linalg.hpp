#pragma once

#include <stdexcept>
#include <vector>

#include "nosig/dense.hpp"

namespace nosig {

enum class SolveStatus { kUnique, kUnderdetermined, kInfeasible };

template <typename Scalar>
struct LinearSystemSolution {
  SolveStatus status = SolveStatus::kInfeasible;
  DenseVector<Scalar> particular;                // empty when infeasible
  std::vector<DenseVector<Scalar>> kernel_basis; // spans null(A)
};

namespace detail {

// Gauss-Jordan to reduced row echelon form, exact. Pivot selection is the
// first nonzero entry scanning rows top-down, columns left-to-right, so
// identical inputs always produce identical reductions. Only the leftmost
// `pivot_cols` columns are eligible as pivots (the rest ride along, e.g. an
// augmented right-hand side). Returns the pivot column indices.
template <typename Scalar>
std::vector<Index> rref_in_place(DenseMatrix<Scalar>& m, Index pivot_cols) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < pivot_cols && row < m.rows(); ++col) {
    Index sel = -1;
    for (Index r = row; r < m.rows(); ++r) {
      if (!(m(r, col) == 0)) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != row) m.row(sel).swap(m.row(row));
    const Scalar inv = Scalar(1) / m(row, col);
    m.row(row) *= inv;
    for (Index r = 0; r < m.rows(); ++r) {
      if (r != row && !(m(r, col) == 0)) {
        m.row(r) -= m(r, col) * m.row(row);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

template <typename Scalar>
Index rank(const DenseMatrix<Scalar>& a) {
  DenseMatrix<Scalar> work = a;
  return static_cast<Index>(detail::rref_in_place(work, work.cols()).size());
}

// Exact solution of A x = b. The particular solution sets every free
// variable to zero; kernel vectors carry a 1 in their free coordinate.
template <typename Scalar>
LinearSystemSolution<Scalar> solve_linear(const DenseMatrix<Scalar>& a,
                                          const DenseVector<Scalar>& b) {
  if (a.rows() != b.size()) {
    throw std::invalid_argument("solve_linear: A has " +
                                std::to_string(a.rows()) + " rows but b has " +
                                std::to_string(b.size()) + " entries");
  }
  const Index n = a.cols();
  DenseMatrix<Scalar> work(a.rows(), n + 1);
  work.leftCols(n) = a;
  work.col(n) = b;
  const std::vector<Index> pivots = detail::rref_in_place(work, n);

  LinearSystemSolution<Scalar> out;
  for (Index r = static_cast<Index>(pivots.size()); r < work.rows(); ++r) {
    if (!(work(r, n) == 0)) {
      out.status = SolveStatus::kInfeasible;
      return out;
    }
  }

  out.particular = DenseVector<Scalar>::Zero(n);
  for (std::size_t k = 0; k < pivots.size(); ++k) {
    out.particular(pivots[k]) = work(static_cast<Index>(k), n);
  }

  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  for (Index free = 0; free < n; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    DenseVector<Scalar> v = DenseVector<Scalar>::Zero(n);
    v(free) = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      v(pivots[k]) = -work(static_cast<Index>(k), free);
    }
    out.kernel_basis.push_back(std::move(v));
  }
  out.status = out.kernel_basis.empty() ? SolveStatus::kUnique
                                        : SolveStatus::kUnderdetermined;
  return out;
}

}  // namespace nosig
