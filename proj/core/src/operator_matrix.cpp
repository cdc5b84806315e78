#include "discofield/operator_matrix.hpp"

namespace discofield {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix embed_axis(const Matrix& op, int axis, const std::vector<int>& cutoffs) {
  if (axis < 0 || axis >= static_cast<int>(cutoffs.size()))
    throw std::out_of_range("embed_axis: axis out of range");
  if (op.rows() != cutoffs[axis] || op.cols() != cutoffs[axis])
    throw std::invalid_argument("embed_axis: operator dimension mismatch");
  Matrix out = Matrix::Identity(1, 1);
  for (int a = 0; a < static_cast<int>(cutoffs.size()); ++a) {
    if (a == axis)
      out = kron(out, op);
    else
      out = kron(out, Matrix::Identity(cutoffs[a], cutoffs[a]));
  }
  return out;
}

long flatten_index(const std::vector<int>& tuple, const std::vector<int>& cutoffs) {
  long idx = 0;
  for (std::size_t a = 0; a < cutoffs.size(); ++a) idx = idx * cutoffs[a] + tuple[a];
  return idx;
}

std::vector<int> unflatten_index(long index, const std::vector<int>& cutoffs) {
  std::vector<int> tuple(cutoffs.size());
  for (int a = static_cast<int>(cutoffs.size()) - 1; a >= 0; --a) {
    tuple[a] = static_cast<int>(index % cutoffs[a]);
    index /= cutoffs[a];
  }
  return tuple;
}

std::vector<long> interior_indices(const std::vector<int>& cutoffs, int margin) {
  long total = 1;
  for (int c : cutoffs) total *= c;
  std::vector<long> keep;
  for (long i = 0; i < total; ++i) {
    const auto tuple = unflatten_index(i, cutoffs);
    bool inside = true;
    for (std::size_t a = 0; a < cutoffs.size(); ++a)
      if (tuple[a] > cutoffs[a] - 1 - margin) inside = false;
    if (inside) keep.push_back(i);
  }
  return keep;
}

Matrix restrict_to(const Matrix& m, const std::vector<long>& indices) {
  Matrix out(indices.size(), indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j < indices.size(); ++j)
      out(i, j) = m(indices[i], indices[j]);
  return out;
}

}  // namespace discofield
