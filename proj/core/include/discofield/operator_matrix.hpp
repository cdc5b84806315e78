#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "discofield/errors.hpp"

namespace discofield {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Square complex matrix plus provenance: which operator, in which
/// representation, for which parameters.
struct OperatorMatrix {
  Matrix mat;
  std::string label;
  std::string representation;
  std::string params;

  Eigen::Index dim() const { return mat.rows(); }

  /// max-abs deviation from self-adjointness.
  double hermiticity_residual() const {
    return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
  }
};

/// Dense Kronecker product, left factor slowest.
Matrix kron(const Matrix& a, const Matrix& b);

/// Identity embedding of a single-axis operator into a product basis:
/// I x ... x op x ... x I with `op` on `axis`.
Matrix embed_axis(const Matrix& op, int axis, const std::vector<int>& cutoffs);

/// Mixed-radix helpers for product-basis indexing (axis 0 slowest).
long flatten_index(const std::vector<int>& tuple, const std::vector<int>& cutoffs);
std::vector<int> unflatten_index(long index, const std::vector<int>& cutoffs);

/// Indices whose per-axis excitation stays away from the truncation edge by
/// `margin` (the ladder-product identities hold exactly there). The default
/// margin 2 matches quadratic ladder products.
std::vector<long> interior_indices(const std::vector<int>& cutoffs, int margin = 2);

/// Restriction of `m` to the given row/col index subset.
Matrix restrict_to(const Matrix& m, const std::vector<long>& indices);

}  // namespace discofield
