#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "nosig/rational.hpp"

namespace nosig {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = DenseMatrix<Rational>;
using Vec = DenseVector<Rational>;
using Index = Eigen::Index;

template <typename Scalar>
bool equal(const DenseVector<Scalar>& a, const DenseVector<Scalar>& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (!(a(i) == b(i))) return false;
  }
  return true;
}

}  // namespace nosig
