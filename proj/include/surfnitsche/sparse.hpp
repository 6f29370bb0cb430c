#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace surfnitsche {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix with sorted column indices per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;

  /// Duplicates are summed in insertion order, so identical triplet streams
  /// give bitwise identical matrices.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    CsrMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.row_ptr_.assign(rows + 1, 0);
    for (std::size_t i = 0; i < triplets.size();) {
      const int r = triplets[i].row, c = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c) sum += triplets[i++].value;
      m.col_idx_.push_back(c);
      m.values_.push_back(sum);
      ++m.row_ptr_[r + 1];
    }
    std::partial_sum(m.row_ptr_.begin(), m.row_ptr_.end(), m.row_ptr_.begin());
    return m;
  }

  static CsrMatrix from_dense(const std::vector<std::vector<double>>& dense) {
    std::vector<Triplet> t;
    for (int i = 0; i < static_cast<int>(dense.size()); ++i) {
      for (int j = 0; j < static_cast<int>(dense[i].size()); ++j) {
        if (dense[i][j] != 0.0) t.push_back({i, j, dense[i][j]});
      }
    }
    const int n = static_cast<int>(dense.size());
    return from_triplets(n, n == 0 ? 0 : static_cast<int>(dense[0].size()), std::move(t));
  }

  [[nodiscard]] int rows() const { return rows_; }
  [[nodiscard]] int cols() const { return cols_; }
  [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
  [[nodiscard]] std::span<const int> row_ptr() const { return row_ptr_; }
  [[nodiscard]] std::span<const int> col_idx() const { return col_idx_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  [[nodiscard]] double at(int i, int j) const {
    const auto begin = col_idx_.begin() + row_ptr_[i];
    const auto end = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    return it != end && *it == j ? values_[it - col_idx_.begin()] : 0.0;
  }

  /// y = A x, rows summed left to right.
  void multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
      y[i] = s;
    }
  }
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const {
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
  }

  [[nodiscard]] std::vector<double> diagonal() const {
    std::vector<double> d(rows_);
    for (int i = 0; i < rows_; ++i) d[i] = at(i, i);
    return d;
  }

  [[nodiscard]] double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  /// max_ij |A_ij - A_ji|
  [[nodiscard]] double asymmetry() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i) {
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
        m = std::max(m, std::abs(values_[p] - at(col_idx_[p], i)));
      }
    }
    return m;
  }

  /// Largest |i - j| over stored entries.
  [[nodiscard]] int bandwidth() const {
    int b = 0;
    for (int i = 0; i < rows_; ++i) {
      for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) b = std::max(b, std::abs(col_idx_[p] - i));
    }
    return b;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace surfnitsche
