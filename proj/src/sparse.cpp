#include "jch/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jch {

SparseOperator SparseOperator::from_triplets(std::size_t dim,
                                             std::vector<std::uint32_t> rows,
                                             std::vector<std::uint32_t> cols,
                                             std::vector<double> values) {
  const std::size_t n = values.size();
  if (rows.size() != n || cols.size() != n)
    throw std::invalid_argument("from_triplets: length mismatch");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Stable sort so duplicate (r, c) entries are summed in insertion order;
  // paired (r, c)/(c, r) insertions then yield bitwise-symmetric matrices.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a] != rows[b]) return rows[a] < rows[b];
    return cols[a] < cols[b];
  });

  SparseOperator op;
  op.dim_ = dim;
  op.row_start_.assign(dim + 1, 0);
  op.cols_.reserve(n);
  op.values_.reserve(n);

  std::size_t k = 0;
  while (k < n) {
    const std::uint32_t r = rows[order[k]], c = cols[order[k]];
    if (r >= dim || c >= dim) throw std::out_of_range("from_triplets: index out of range");
    double v = 0.0;
    while (k < n && rows[order[k]] == r && cols[order[k]] == c) v += values[order[k++]];
    if (std::abs(v) > 1e-15) {
      op.cols_.push_back(c);
      op.values_.push_back(v);
      ++op.row_start_[r + 1];
    }
  }
  for (std::size_t r = 0; r < dim; ++r) op.row_start_[r + 1] += op.row_start_[r];
  return op;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k)
      acc += values_[k] * x[cols_[k]];
    y[r] = acc;
  }
}

std::vector<double> SparseOperator::apply(const std::vector<double>& x) const {
  std::vector<double> y(dim_);
  apply(x, y);
  return y;
}

bool SparseOperator::is_symmetric(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      const std::uint32_t c = cols_[k];
      // find (c, r)
      const auto cc = row_cols(c);
      const auto it = std::lower_bound(cc.begin(), cc.end(), static_cast<std::uint32_t>(r));
      if (it == cc.end() || *it != r) return false;
      const double v = row_values(c)[it - cc.begin()];
      if (std::abs(v - values_[k]) > tol) return false;
    }
  }
  return true;
}

double SparseOperator::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) s += std::abs(values_[k]);
    best = std::max(best, s);
  }
  return best;
}

std::span<const std::uint32_t> SparseOperator::row_cols(std::size_t r) const {
  return {cols_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
}

std::span<const double> SparseOperator::row_values(std::size_t r) const {
  return {values_.data() + row_start_[r], row_start_[r + 1] - row_start_[r]};
}

}  // namespace jch
