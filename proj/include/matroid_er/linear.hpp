#pragma once

#include "matroid_er/matroid.hpp"
#include "matroid_er/rational.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace matroid_er {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) throw InputError("matrix entry count does not match dimensions");
    for (auto& q : entries_) q.canonicalize();
  }
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    std::vector<Rational> flat;
    for (const auto& r : rows) {
      if (r.size() != cols) throw InputError("ragged matrix rows");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return {rows.size(), cols, std::move(flat)};
  }
  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  RationalMatrix transpose() const {
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  RationalMatrix select_columns(const ElementSet& cols) const {
    RationalMatrix s(rows_, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] < 0 || static_cast<std::size_t>(cols[k]) >= cols_)
        throw InputError("column " + std::to_string(cols[k]) + " out of range");
      for (std::size_t i = 0; i < rows_; ++i) s(i, k) = (*this)(i, cols[k]);
    }
    return s;
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

namespace detail {

/// Clears denominators row by row, giving an integer matrix of equal rank.
inline std::vector<std::vector<Integer>> integer_rows(const RationalMatrix& a) {
  std::vector<std::vector<Integer>> out(a.rows(), std::vector<Integer>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) out[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
  }
  return out;
}

}  // namespace detail

/// Exact rank by Bareiss fraction-free elimination. Every intermediate division is exact.
inline int rank(const RationalMatrix& a) {
  auto m = detail::integer_rows(a);
  const std::size_t rows = a.rows(), cols = a.cols();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[i][j] = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    ++r;
  }
  return static_cast<int>(r);
}

inline int submatrix_rank(const RationalMatrix& a, const ElementSet& cols) {
  if (cols.empty()) return 0;
  return rank(a.select_columns(cols));
}

using Point3 = std::array<Rational, 3>;

/// Determinant of the 3x3 matrix with columns p, q, r.
inline Rational det3(const Point3& p, const Point3& q, const Point3& r) {
  return p[0] * (q[1] * r[2] - q[2] * r[1]) - q[0] * (p[1] * r[2] - p[2] * r[1]) +
         r[0] * (p[1] * q[2] - p[2] * q[1]);
}

/// Vector matroid M[A]: bases are the column sets of size rank(A) with full rank.
inline Matroid matroid_from_matrix(const RationalMatrix& a, std::size_t max_cols = 20) {
  if (a.cols() > max_cols)
    throw BoundError("matroid_from_matrix limited to " + std::to_string(max_cols) + " columns");
  const int r = rank(a);
  std::vector<ElementSet> bases;
  for_each_subset(static_cast<int>(a.cols()), r, [&](const ElementSet& s) {
    if (submatrix_rank(a, s) == r) bases.push_back(s);
    return true;
  });
  return Matroid(static_cast<int>(a.cols()), r, std::move(bases));
}

/// Projective points as homogeneous rational triples; z = 0 means a point at infinity.
struct PointConfig {
  std::vector<Point3> points;
  std::vector<std::string> labels;

  std::size_t size() const { return points.size(); }

  RationalMatrix to_matrix() const {
    RationalMatrix m(3, points.size());
    for (std::size_t j = 0; j < points.size(); ++j)
      for (std::size_t i = 0; i < 3; ++i) m(i, j) = points[j][i];
    return m;
  }
  static PointConfig from_matrix(const RationalMatrix& a) {
    if (a.rows() != 3) throw InputError("point configuration needs a 3-row matrix");
    PointConfig pc;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      pc.points.push_back({a(0, j), a(1, j), a(2, j)});
      pc.labels.push_back(std::to_string(j));
    }
    return pc;
  }
};

inline bool is_zero(const Point3& p) { return p[0] == 0 && p[1] == 0 && p[2] == 0; }

/// True when p and q span the same projective point.
inline bool proportional(const Point3& p, const Point3& q) {
  return p[0] * q[1] == p[1] * q[0] && p[0] * q[2] == p[2] * q[0] && p[1] * q[2] == p[2] * q[1];
}

}  // namespace matroid_er
