#pragma once

#include <vector>

#include "inr/kspace.hpp"

namespace inr {

/// Row-major dense matrix. Network activations use one row per feature and
/// one column per pixel, so a pixel's values never mix with its neighbours'.
class Matrix {
 public:
  Matrix() = default;
  Matrix(Index rows, Index cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double& operator()(Index r, Index c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  double operator()(Index r, Index c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  double* row(Index r) { return data_.data() + r * cols_; }
  const double* row(Index r) const { return data_.data() + r * cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& storage() { return data_; }
  const std::vector<double>& storage() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

/// Pixel columns are processed in blocks of this width; callers pad to it.
inline constexpr Index kPixelBlock = 8;

inline Index padded_pixels(Index n) { return (n + kPixelBlock - 1) / kPixelBlock * kPixelBlock; }

/// c (m x n) = a (m x k) * b (k x n), all row-major, n a multiple of
/// kPixelBlock. Each output element is an FMA chain over k in increasing
/// order, so a column's result does not depend on which other columns are
/// evaluated with it.
void gemm_nn(const double* a, Index m, Index k, const double* b, Index n, double* c);

/// c (m x k) = a (m x n) * b(k x n)^T. Reduces over the n pixel columns with
/// a fixed summation tree.
void gemm_nt(const double* a, Index m, Index n, const double* b, Index k, double* c);

/// out[r] = sum over columns of a.row(r), same summation tree as gemm_nt.
void row_sums(const double* a, Index m, Index n, double* out);

}  // namespace inr
