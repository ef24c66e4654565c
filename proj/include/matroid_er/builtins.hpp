#pragma once

// Bundled desk-scale instances. Element i corresponds to point label i+1 in the
// classical drawing of the Fano plane.

#include "matroid_er/linear.hpp"
#include "matroid_er/matroid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace matroid_er::builtin {

/// The seven dependent triples of the Fano plane, 0-based.
inline std::vector<ElementSet> fano_lines() {
  return {{0, 3, 6}, {0, 1, 2}, {0, 4, 5}, {2, 5, 6}, {1, 4, 6}, {2, 3, 4}, {1, 3, 5}};
}

inline Matroid fano() { return from_lines({7, fano_lines()}); }

/// Fano with the triple {1,3,5} made independent.
inline Matroid nonfano() {
  auto lines = fano_lines();
  lines.pop_back();
  return from_lines({7, lines});
}

/// Columns are nonzero vectors of {0,1}^3 arranged so that every Fano line is
/// a GF(2)-dependent triple. Over Q only {1,3,5} becomes independent, so this
/// is also a rational representation of the non-Fano matroid.
inline RationalMatrix fano_binary_matrix() {
  const int codes[7] = {1, 3, 2, 5, 7, 6, 4};
  RationalMatrix a(3, 7);
  for (int j = 0; j < 7; ++j)
    for (int bit = 0; bit < 3; ++bit) a(bit, j) = (codes[j] >> (2 - bit)) & 1;
  return a;
}

inline Matroid u24() { return uniform_matroid(2, 4); }
inline Matroid u34() { return uniform_matroid(3, 4); }

inline RationalMatrix u24_matrix() {
  return RationalMatrix::from_rows({{1, 0, 1, 1}, {0, 1, 1, 2}});
}
inline RationalMatrix u34_matrix() {
  return RationalMatrix::from_rows({{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}});
}

struct Instance {
  Matroid matroid;
  std::optional<RationalMatrix> matrix;  // candidate to verify; for fano/nonfano the GF(2) matrix, read over Q
};

inline std::optional<Instance> lookup(const std::string& name) {
  if (name == "fano") return Instance{fano(), fano_binary_matrix()};
  if (name == "nonfano") return Instance{nonfano(), fano_binary_matrix()};
  if (name == "u24") return Instance{u24(), u24_matrix()};
  if (name == "u34") return Instance{u34(), u34_matrix()};
  return std::nullopt;
}

}  // namespace matroid_er::builtin
