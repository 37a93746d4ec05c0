#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qcluster {

/// Dense row-major integer matrix; small sizes only (exchange matrices, Cartan matrices).
class IntMatrix {
 public:
  using value_type = std::int64_t;

  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<value_type>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("IntMatrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  value_type operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    a.check_same_shape(b);
    IntMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
    return r;
  }
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    a.check_same_shape(b);
    IntMatrix r = a;
    for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
    return r;
  }
  friend IntMatrix operator-(const IntMatrix& a) {
    IntMatrix r = a;
    for (auto& v : r.data_) v = -v;
    return r;
  }
  friend IntMatrix operator*(value_type s, const IntMatrix& a) {
    IntMatrix r = a;
    for (auto& v : r.data_) v *= s;
    return r;
  }
  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        value_type v = a(i, k);
        if (v == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += v * b(k, j);
      }
    return r;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

  bool is_zero() const {
    for (auto v : data_)
      if (v != 0) return false;
    return true;
  }
  bool is_skew_symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
  }
  bool is_symmetric() const { return square() && *this == transpose(); }

  /// Places `block` with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const IntMatrix& block) {
    if (r0 + block.rows_ > rows_ || c0 + block.cols_ > cols_) throw std::out_of_range("IntMatrix::set_block");
    for (std::size_t i = 0; i < block.rows_; ++i)
      for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r0 + i, c0 + j) = block(i, j);
  }

  IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw std::out_of_range("IntMatrix::block");
    IntMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  /// Vertical stack [top; bottom].
  static IntMatrix stack(const IntMatrix& top, const IntMatrix& bottom) {
    if (top.cols_ != bottom.cols_ && top.rows_ && bottom.rows_) throw std::invalid_argument("IntMatrix::stack");
    IntMatrix r(top.rows_ + bottom.rows_, top.rows_ ? top.cols_ : bottom.cols_);
    r.set_block(0, 0, top);
    r.set_block(top.rows_, 0, bottom);
    return r;
  }

  /// 2x2 block matrix [[a, b], [c, d]].
  static IntMatrix blocks(const IntMatrix& a, const IntMatrix& b, const IntMatrix& c, const IntMatrix& d) {
    IntMatrix r(a.rows_ + c.rows_, a.cols_ + b.cols_);
    r.set_block(0, 0, a);
    r.set_block(0, a.cols_, b);
    r.set_block(a.rows_, 0, c);
    r.set_block(a.rows_, a.cols_, d);
    return r;
  }

  std::vector<std::vector<value_type>> to_rows() const {
    std::vector<std::vector<value_type>> out(rows_, std::vector<value_type>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
    return out;
  }

  static IntMatrix from_rows(const std::vector<std::vector<value_type>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("IntMatrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }

 private:
  void check_same_shape(const IntMatrix& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_) throw std::invalid_argument("IntMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

}  // namespace qcluster
