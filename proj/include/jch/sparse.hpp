#ifndef JCH_SPARSE_HPP
#define JCH_SPARSE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace jch {

// Real symmetric sparse matrix in CSR form, full storage (both triangles).
// Immutable after assembly; matvec is the only access the solvers use.
class SparseOperator {
 public:
  SparseOperator() = default;

  // Builds from coordinate triplets; duplicates are summed, entries below
  // 1e-15 in magnitude after summing are dropped.
  static SparseOperator from_triplets(std::size_t dim,
                                      std::vector<std::uint32_t> rows,
                                      std::vector<std::uint32_t> cols,
                                      std::vector<double> values);

  std::size_t dim() const { return dim_; }
  std::size_t nonzeros() const { return values_.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(const std::vector<double>& x) const;

  bool is_symmetric(double tol = 0.0) const;

  // Max row sum of absolute values (induced infinity norm).
  double norm_inf() const;

  // Row access for tests and dense conversion.
  std::span<const std::uint32_t> row_cols(std::size_t r) const;
  std::span<const double> row_values(std::size_t r) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> values_;
};

// Incremental triplet collector used by the Hamiltonian assemblers.
class TripletBuffer {
 public:
  explicit TripletBuffer(std::size_t dim) : dim_(dim) {}

  void add(std::size_t r, std::size_t c, double v) {
    if (v == 0.0) return;
    rows_.push_back(static_cast<std::uint32_t>(r));
    cols_.push_back(static_cast<std::uint32_t>(c));
    values_.push_back(v);
  }

  SparseOperator build() && {
    return SparseOperator::from_triplets(dim_, std::move(rows_), std::move(cols_),
                                         std::move(values_));
  }

 private:
  std::size_t dim_;
  std::vector<std::uint32_t> rows_, cols_;
  std::vector<double> values_;
};

}  // namespace jch

#endif
