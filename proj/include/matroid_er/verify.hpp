#pragma once

#include "matroid_er/linear.hpp"
#include "matroid_er/matroid.hpp"

#include <optional>
#include <string>

namespace matroid_er {

enum class Verdict { Represents, RankMismatch, MissingBasis, ExtraBasis };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Represents: return "represents";
    case Verdict::RankMismatch: return "rank-mismatch";
    case Verdict::MissingBasis: return "missing-basis";
    case Verdict::ExtraBasis: return "extra-basis";
  }
  return "?";
}

struct VerificationOutcome {
  Verdict verdict = Verdict::Represents;
  int matrix_rank = 0;
  ElementSet basis;              // MissingBasis / ExtraBasis: the offending basis B
  std::optional<Element> x, y;   // ExtraBasis: B - x + y is independent in A but not a basis
  ElementSet extra_set() const {
    ElementSet s;
    for (Element e : basis)
      if (e != *x) s.push_back(e);
    s.push_back(*y);
    return canonical_set(s);
  }
};

namespace detail {

/// Column independence test with a determinant shortcut for the rank-3 case.
class ColumnOracle {
 public:
  explicit ColumnOracle(const RationalMatrix& a) : a_(a) {
    if (a.rows() == 3) {
      pts_.reserve(a.cols());
      for (std::size_t j = 0; j < a.cols(); ++j) pts_.push_back({a(0, j), a(1, j), a(2, j)});
    }
  }
  bool full_rank(const ElementSet& s, int r) const {
    if (r == 3 && s.size() == 3 && !pts_.empty()) return det3(pts_[s[0]], pts_[s[1]], pts_[s[2]]) != 0;
    return submatrix_rank(a_, s) == r;
  }

 private:
  const RationalMatrix& a_;
  std::vector<Point3> pts_;
};

}  // namespace detail

/// Decides M = M[A] in polynomial time in |bases|: rank check, every basis
/// independent, then the exchange-neighbourhood scan for independent non-bases.
/// Does not require m to satisfy the axioms.
inline VerificationOutcome verify_representation(const Matroid& m, const RationalMatrix& a) {
  if (static_cast<int>(a.cols()) != m.size())
    throw InputError("matrix has " + std::to_string(a.cols()) + " columns but matroid has " +
                     std::to_string(m.size()) + " elements");
  VerificationOutcome out;
  out.matrix_rank = rank(a);
  const int r = m.rank();
  if (out.matrix_rank != r) {
    out.verdict = Verdict::RankMismatch;
    return out;
  }
  detail::ColumnOracle oracle(a);
  for (const auto& b : m.bases()) {
    if (!oracle.full_rank(b, r)) {
      out.verdict = Verdict::MissingBasis;
      out.basis = b;
      return out;
    }
  }
  for (const auto& b : m.bases()) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      ElementSet rest = b;
      rest.erase(rest.begin() + static_cast<long>(k));
      for (Element y = 0; y < m.size(); ++y) {
        if (contains(b, y)) continue;
        ElementSet cand = rest;
        cand.insert(std::upper_bound(cand.begin(), cand.end(), y), y);
        if (m.is_basis(cand)) continue;
        if (oracle.full_rank(cand, r)) {
          out.verdict = Verdict::ExtraBasis;
          out.basis = b;
          out.x = b[k];
          out.y = y;
          return out;
        }
      }
    }
  }
  return out;
}

/// Exhaustive oracle: M[A] computed by subset enumeration compared basis by basis.
inline bool brute_force_equal(const Matroid& m, const RationalMatrix& a, std::size_t max_n = 10) {
  if (a.cols() > max_n) throw BoundError("brute_force_equal limited to n <= " + std::to_string(max_n));
  if (static_cast<int>(a.cols()) != m.size()) throw InputError("dimension mismatch between matroid and matrix");
  return matroid_from_matrix(a, max_n) == m;
}

}  // namespace matroid_er
