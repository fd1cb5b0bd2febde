#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "nosig/dense.hpp"

namespace nosig {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

template <typename Scalar>
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Scalar value = Scalar(0);       // objective at the witness, when optimal
  DenseVector<Scalar> witness;    // satisfies the constraints exactly
};

namespace detail {

// Dense simplex tableau over an exact scalar field. Bland's smallest-index
// rule on both the entering and the leaving variable, which guarantees
// termination and makes every run reproducible.
template <typename Scalar>
class Tableau {
 public:
  Tableau(DenseMatrix<Scalar> body, std::vector<Index> basis)
      : t_(std::move(body)), basis_(std::move(basis)) {}

  Index rows() const { return t_.rows(); }
  Index vars() const { return t_.cols() - 1; }
  const std::vector<Index>& basis() const { return basis_; }

  // Reduced-cost row for objective c (indexed over the first c.size()
  // variables; remaining columns get cost zero).
  void set_objective(const DenseVector<Scalar>& c) {
    cost_ = DenseVector<Scalar>::Zero(t_.cols());
    cost_.head(c.size()) = c;
    reduced_ = cost_;
    for (Index r = 0; r < rows(); ++r) {
      const Scalar cb = cost_(basis_[r]);
      if (!(cb == 0)) reduced_ -= cb * t_.row(r).transpose();
    }
  }

  Scalar objective_value() const { return -reduced_(vars()); }
  Scalar reduced_cost(Index j) const { return reduced_(j); }

  // Returns false when no entering column exists (current basis optimal).
  // `eligible` bounds the columns Bland may consider.
  bool bland_step(Index eligible, bool* unbounded) {
    Index enter = -1;
    for (Index j = 0; j < eligible; ++j) {
      if (reduced_(j) < 0) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return false;

    Index leave = -1;
    Scalar best_ratio = Scalar(0);
    for (Index r = 0; r < rows(); ++r) {
      if (!(t_(r, enter) > 0)) continue;
      const Scalar ratio = t_(r, vars()) / t_(r, enter);
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[r] < basis_[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  void pivot(Index row, Index col) {
    const Scalar inv = Scalar(1) / t_(row, col);
    t_.row(row) *= inv;
    for (Index r = 0; r < rows(); ++r) {
      if (r != row && !(t_(r, col) == 0)) t_.row(r) -= t_(r, col) * t_.row(row);
    }
    if (!(reduced_(col) == 0)) reduced_ -= reduced_(col) * t_.row(row).transpose();
    basis_[row] = col;
  }

  Scalar rhs(Index r) const { return t_(r, vars()); }
  Scalar at(Index r, Index c) const { return t_(r, c); }

  void drop_row(Index row) {
    const Index last = rows() - 1;
    if (row != last) {
      t_.row(row) = t_.row(last);
      basis_[row] = basis_[last];
    }
    t_.conservativeResize(last, Eigen::NoChange);
    basis_.resize(last);
  }

 private:
  DenseMatrix<Scalar> t_;      // [A | b], basis columns kept as unit columns
  std::vector<Index> basis_;
  DenseVector<Scalar> cost_;
  DenseVector<Scalar> reduced_; // last entry = -(objective value)
};

}  // namespace detail

// Minimize c.x subject to A x = b and x >= lower (componentwise; zero when
// omitted). Exact two-phase simplex. Infeasible and unbounded outcomes are
// statuses, not errors.
template <typename Scalar>
LpResult<Scalar> lp_solve(
    const DenseVector<Scalar>& c, const DenseMatrix<Scalar>& a,
    const DenseVector<Scalar>& b,
    const std::optional<DenseVector<Scalar>>& lower = std::nullopt) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (c.size() != n || b.size() != m || (lower && lower->size() != n)) {
    throw std::invalid_argument("lp_solve: inconsistent shapes");
  }

  // Shift to y = x - lower >= 0.
  DenseVector<Scalar> rhs = b;
  if (lower) rhs -= a * (*lower);

  // Phase 1: artificial basis, minimize total artificial mass.
  DenseMatrix<Scalar> body(m, n + m + 1);
  body.leftCols(n) = a;
  body.block(0, n, m, m) = DenseMatrix<Scalar>::Identity(m, m);
  body.col(n + m) = rhs;
  std::vector<Index> basis(static_cast<std::size_t>(m));
  for (Index r = 0; r < m; ++r) {
    if (rhs(r) < 0) body.row(r) = -body.row(r);
    basis[static_cast<std::size_t>(r)] = n + r;
  }
  detail::Tableau<Scalar> tab(std::move(body), std::move(basis));

  DenseVector<Scalar> phase1 = DenseVector<Scalar>::Zero(n + m);
  phase1.tail(m).setConstant(Scalar(1));
  tab.set_objective(phase1);
  bool unbounded = false;
  while (tab.bland_step(n + m, &unbounded)) {
  }

  LpResult<Scalar> out;
  if (!(tab.objective_value() == 0)) {
    out.status = LpStatus::kInfeasible;
    return out;
  }

  // Drive leftover artificials out of the basis; a row with no real-column
  // entry is redundant and is dropped.
  for (Index r = 0; r < tab.rows();) {
    if (tab.basis()[r] < n) {
      ++r;
      continue;
    }
    Index col = -1;
    for (Index j = 0; j < n; ++j) {
      if (!(tab.at(r, j) == 0)) {
        col = j;
        break;
      }
    }
    if (col >= 0) {
      tab.pivot(r, col);
      ++r;
    } else {
      tab.drop_row(r);
    }
  }

  // Phase 2 over the real variables only.
  tab.set_objective(c);
  unbounded = false;
  while (tab.bland_step(n, &unbounded)) {
  }
  if (unbounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  DenseVector<Scalar> x = DenseVector<Scalar>::Zero(n);
  for (Index r = 0; r < tab.rows(); ++r) {
    x(tab.basis()[r]) = tab.rhs(r);
  }
  if (lower) x += *lower;
  out.status = LpStatus::kOptimal;
  out.witness = std::move(x);
  out.value = c.dot(out.witness);
  return out;
}

}  // namespace nosig
