#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "seba/error.hpp"

namespace seba {

// Dense real matrix, column-major.  The universal carrier for eigenvector
// arrays V, sparse arrays S, rotations R and operator matrices.  Entries are
// expected to stay finite; constructors taking data validate, arithmetic
// trusts its inputs.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be >= 1");
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
      : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be >= 1");
    if (data_.size() != rows * cols) throw InvalidArgument("matrix data size mismatch");
    require_finite();
  }

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }

  // Row-by-row construction, convenient in tests.
  static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    if (r == 0) throw InvalidArgument("matrix dimensions must be >= 1");
    const std::size_t c = rows.begin()->size();
    DenseMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw InvalidArgument("ragged rows");
      std::size_t j = 0;
      for (double v : row) m(i, j++) = v;
      ++i;
    }
    m.require_finite();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  double* col(std::size_t j) { return data_.data() + j * rows_; }
  const double* col(std::size_t j) const { return data_.data() + j * rows_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  void require_finite() const {
    if (!all_finite()) throw InvalidArgument("matrix contains NaN/Inf");
  }

  DenseMatrix first_cols(std::size_t r) const {
    if (r == 0 || r > cols_) throw InvalidArgument("column slice out of range");
    DenseMatrix out(rows_, r);
    std::copy(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(r * rows_),
              out.data_.begin());
    return out;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

// Strictly positive per-row weights; caches the l1 mass.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw InvalidArgument("weight vector must be nonempty");
    l1_ = 0.0;
    for (double v : w_) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidArgument("weights must be strictly positive and finite");
      l1_ += v;
    }
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }
  double l1() const { return l1_; }

 private:
  std::vector<double> w_;
  double l1_;
};

// ---- norms ----------------------------------------------------------------

inline double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double frobenius_norm_w(const DenseMatrix& a, const WeightVector& nu) {
  if (nu.size() != a.rows()) throw WeightMismatch("weight length != rows");
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* c = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) s += nu[i] * c[i] * c[i];
  }
  return std::sqrt(s);
}

inline double l11_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += std::abs(v);
  return s;
}

inline double l11_norm_w(const DenseMatrix& a, const WeightVector& nu) {
  if (nu.size() != a.rows()) throw WeightMismatch("weight length != rows");
  double s = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const double* c = a.col(j);
    for (std::size_t i = 0; i < a.rows(); ++i) s += nu[i] * std::abs(c[i]);
  }
  return s;
}

// Count of exactly-zero-free entries; no epsilon, thresholded entries are
// exact zeros by construction.
inline std::size_t l01_count(const DenseMatrix& a) {
  std::size_t n = 0;
  for (double v : a.data())
    if (v != 0.0) ++n;
  return n;
}

// ---- elementary products ---------------------------------------------------

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidArgument("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* cj = c.col(j);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const double* ak = a.col(k);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
    }
  }
  return c;
}

// Aᵀ · B
inline DenseMatrix matmul_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidArgument("matmul_at_b: row counts differ");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const double* bj = b.col(j);
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double* ai = a.col(i);
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += ai[k] * bj[k];
      c(i, j) = s;
    }
  }
  return c;
}

// A · Bᵀ
inline DenseMatrix matmul_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidArgument("matmul_a_bt: column counts differ");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t k = 0; k < a.cols(); ++k) {
    const double* ak = a.col(k);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double bjk = b(j, k);
      if (bjk == 0.0) continue;
      double* cj = c.col(j);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bjk;
    }
  }
  return c;
}

inline DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
  return t;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw InvalidArgument("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k)
    m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
  return m;
}

// max |AᵀA - I|, the orthonormality defect.
inline double orthonormality_error(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    const double* ci = a.col(i);
    for (std::size_t j = i; j < a.cols(); ++j) {
      const double* cj = a.col(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += ci[k] * cj[k];
      m = std::max(m, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return m;
}

inline double orthonormality_error_w(const DenseMatrix& a, const WeightVector& nu) {
  if (nu.size() != a.rows()) throw WeightMismatch("weight length != rows");
  double m = 0.0;
  for (std::size_t i = 0; i < a.cols(); ++i) {
    const double* ci = a.col(i);
    for (std::size_t j = i; j < a.cols(); ++j) {
      const double* cj = a.col(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += nu[k] * ci[k] * cj[k];
      m = std::max(m, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return m;
}

}  // namespace seba
