#pragma once

#include "matroid_er/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matroid_er {

using Element = int;
/// Sorted, duplicate-free list of ground-set labels.
using ElementSet = std::vector<Element>;

inline ElementSet canonical_set(ElementSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline std::size_t intersection_size(const ElementSet& a, const ElementSet& b) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (b[j] < a[i]) ++j;
    else { ++count; ++i; ++j; }
  }
  return count;
}

inline bool contains(const ElementSet& s, Element e) { return std::binary_search(s.begin(), s.end(), e); }

/// Lines of a rank-3 configuration are reported degenerate when they leave no independent triple.
class DegenerateError : public InputError {
 public:
  using InputError::InputError;
};

/// Calls f(subset) for every k-subset of {0..n-1} in lexicographic order.
/// Stops early when f returns false.
template <class F>
bool for_each_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return true;
  ElementSet s(k);
  for (int i = 0; i < k; ++i) s[i] = i;
  while (true) {
    if (!f(static_cast<const ElementSet&>(s))) return false;
    int i = k - 1;
    while (i >= 0 && s[i] == n - k + i) --i;
    if (i < 0) return true;
    ++s[i];
    for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
  }
}

/// Matroid in the explicit-bases encoding: ground set {0..n-1}, rank r, and all bases.
class Matroid {
 public:
  /// Canonicalizes the family (sorted sets, lexicographic order, duplicates dropped).
  /// Throws InputError on structural problems; the basis-exchange axiom is
  /// checked separately by validate_axioms.
  Matroid(int n, int r, std::vector<ElementSet> bases) : n_(n), r_(r), bases_(std::move(bases)) {
    if (n < 0) throw InputError("ground set size must be non-negative");
    if (r < 0 || r > n) throw InputError("rank " + std::to_string(r) + " out of range for n=" + std::to_string(n));
    if (bases_.empty()) throw InputError("bases family is empty");
    for (auto& b : bases_) {
      std::sort(b.begin(), b.end());
      if (std::adjacent_find(b.begin(), b.end()) != b.end()) throw InputError("basis has a repeated element");
      if (static_cast<int>(b.size()) != r) throw InputError("basis of size " + std::to_string(b.size()) + " but rank is " + std::to_string(r));
      for (Element e : b)
        if (e < 0 || e >= n) throw InputError("element " + std::to_string(e) + " out of range");
    }
    std::sort(bases_.begin(), bases_.end());
    bases_.erase(std::unique(bases_.begin(), bases_.end()), bases_.end());
  }

  int size() const { return n_; }
  int rank() const { return r_; }
  const std::vector<ElementSet>& bases() const { return bases_; }

  bool is_basis(const ElementSet& s) const { return std::binary_search(bases_.begin(), bases_.end(), s); }

  friend bool operator==(const Matroid& a, const Matroid& b) {
    return a.n_ == b.n_ && a.r_ == b.r_ && a.bases_ == b.bases_;
  }

 private:
  int n_;
  int r_;
  std::vector<ElementSet> bases_;
};

inline Matroid uniform_matroid(int r, int n) {
  std::vector<ElementSet> bases;
  for_each_subset(n, r, [&](const ElementSet& s) { bases.push_back(s); return true; });
  return Matroid(n, r, std::move(bases));
}

struct ExchangeWitness {
  ElementSet b1;
  ElementSet b2;
  Element x;
};

struct ValidationReport {
  bool ok = true;
  std::optional<ExchangeWitness> witness;
};

namespace detail {

class Bitset {
 public:
  explicit Bitset(int n = 0) : words_((n + 63) / 64, 0) {}
  Bitset(int n, const ElementSet& s) : Bitset(n) {
    for (Element e : s) set(e);
  }
  void set(int i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(int i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  /// (*this & ~minus & other) != 0
  bool intersects_excluding(const Bitset& minus, const Bitset& other) const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] & ~minus.words_[w] & other.words_[w]) return true;
    return false;
  }

 private:
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

/// Basis-exchange check over all ordered pairs of bases, O(|bases|^2 * r) with
/// bitset acceleration. Returns the first (B1, B2, x) in stored order that
/// admits no exchange element.
inline ValidationReport validate_axioms(const Matroid& m) {
  const int n = m.size();
  const auto& bases = m.bases();
  const std::size_t nb = bases.size();
  std::vector<detail::Bitset> masks;
  masks.reserve(nb);
  for (const auto& b : bases) masks.emplace_back(n, b);

  // exchangeable[i][k] = { y not in B_i : B_i - x_k + y is a basis }
  std::vector<std::vector<detail::Bitset>> exchangeable(nb);
  for (std::size_t i = 0; i < nb; ++i) {
    const auto& b = bases[i];
    exchangeable[i].assign(b.size(), detail::Bitset(n));
    for (std::size_t k = 0; k < b.size(); ++k) {
      ElementSet rest = b;
      rest.erase(rest.begin() + static_cast<long>(k));
      for (Element y = 0; y < n; ++y) {
        if (masks[i].test(y)) continue;
        ElementSet cand = rest;
        cand.insert(std::upper_bound(cand.begin(), cand.end(), y), y);
        if (m.is_basis(cand)) exchangeable[i][k].set(y);
      }
    }
  }
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < bases[i].size(); ++k) {
        Element x = bases[i][k];
        if (masks[j].test(x)) continue;
        if (!masks[j].intersects_excluding(masks[i], exchangeable[i][k]))
          return {false, ExchangeWitness{bases[i], bases[j], x}};
      }
    }
  }
  return {};
}

namespace detail {
inline void check_range(const Matroid& m, const ElementSet& s) {
  for (Element e : s)
    if (e < 0 || e >= m.size()) throw InputError("element " + std::to_string(e) + " out of range");
}
}  // namespace detail

/// max over bases B of |s ∩ B|.
inline int rank_of(const Matroid& m, const ElementSet& s) {
  ElementSet t = canonical_set(s);
  detail::check_range(m, t);
  std::size_t best = 0;
  for (const auto& b : m.bases()) {
    best = std::max(best, intersection_size(t, b));
    if (best == t.size()) break;
  }
  return static_cast<int>(best);
}

inline bool is_independent(const Matroid& m, const ElementSet& s) {
  ElementSet t = canonical_set(s);
  return rank_of(m, t) == static_cast<int>(t.size());
}

/// Rank-3 configuration described by its non-trivial lines (collinear groups of >= 3 points).
struct LineSet {
  int n = 0;
  std::vector<ElementSet> lines;
};

/// Checks the LineSet invariants; returns an error message or nullopt.
inline std::optional<std::string> lineset_violation(const LineSet& ls) {
  std::vector<std::vector<int>> pair_line(ls.n, std::vector<int>(ls.n, -1));
  for (std::size_t li = 0; li < ls.lines.size(); ++li) {
    ElementSet line = ls.lines[li];
    std::sort(line.begin(), line.end());
    if (std::adjacent_find(line.begin(), line.end()) != line.end())
      return "line " + std::to_string(li) + " repeats a point";
    if (line.size() < 3) return "line " + std::to_string(li) + " has fewer than 3 points";
    for (Element e : line)
      if (e < 0 || e >= ls.n) return "line " + std::to_string(li) + " has out-of-range point " + std::to_string(e);
    for (std::size_t a = 0; a < line.size(); ++a)
      for (std::size_t b = a + 1; b < line.size(); ++b) {
        int& slot = pair_line[line[a]][line[b]];
        if (slot != -1)
          return "lines " + std::to_string(slot) + " and " + std::to_string(li) + " share points " +
                 std::to_string(line[a]) + " and " + std::to_string(line[b]);
        slot = static_cast<int>(li);
      }
  }
  return std::nullopt;
}

/// Rank-3 simple matroid whose dependent triples are exactly the triples inside a line.
inline Matroid from_lines(const LineSet& ls) {
  if (auto err = lineset_violation(ls)) throw InputError(*err);
  std::vector<std::vector<int>> pair_line(ls.n, std::vector<int>(ls.n, -1));
  for (std::size_t li = 0; li < ls.lines.size(); ++li)
    for (Element a : ls.lines[li])
      for (Element b : ls.lines[li])
        if (a != b) pair_line[a][b] = static_cast<int>(li);
  std::vector<ElementSet> bases;
  for_each_subset(ls.n, 3, [&](const ElementSet& t) {
    int l = pair_line[t[0]][t[1]];
    if (l == -1 || pair_line[t[0]][t[2]] != l) bases.push_back(t);
    return true;
  });
  if (bases.empty()) throw DegenerateError("degenerate line set: no independent triple (rank < 3)");
  return Matroid(ls.n, 3, std::move(bases));
}

/// All minimal dependent sets, in order of size then lexicographic.
inline std::vector<ElementSet> circuits(const Matroid& m) {
  std::vector<ElementSet> out;
  for (int k = 1; k <= std::min(m.rank() + 1, m.size()); ++k) {
    for_each_subset(m.size(), k, [&](const ElementSet& s) {
      if (is_independent(m, s)) return true;
      for (std::size_t drop = 0; drop < s.size(); ++drop) {
        ElementSet t = s;
        t.erase(t.begin() + static_cast<long>(drop));
        if (!is_independent(m, t)) return true;
      }
      out.push_back(s);
      return true;
    });
  }
  return out;
}

/// Maximal circuit-free subsets. Enumerates all 2^n subsets, so n <= 24.
inline Matroid bases_from_circuits(int n, const std::vector<ElementSet>& circs) {
  if (n > 24) throw BoundError("bases_from_circuits limited to n <= 24");
  std::vector<std::uint32_t> circuit_masks;
  for (const auto& c : circs) {
    std::uint32_t mask = 0;
    for (Element e : c) mask |= 1U << e;
    circuit_masks.push_back(mask);
  }
  int best = -1;
  std::vector<std::uint32_t> best_sets;
  for (std::uint32_t s = 0; s < (1U << n); ++s) {
    bool free = std::none_of(circuit_masks.begin(), circuit_masks.end(),
                             [&](std::uint32_t c) { return (s & c) == c; });
    if (!free) continue;
    int size = __builtin_popcount(s);
    if (size > best) { best = size; best_sets.clear(); }
    if (size == best) best_sets.push_back(s);
  }
  std::vector<ElementSet> bases;
  for (auto s : best_sets) {
    ElementSet b;
    for (int e = 0; e < n; ++e)
      if (s >> e & 1U) b.push_back(e);
    bases.push_back(std::move(b));
  }
  return Matroid(n, best, std::move(bases));
}

}  // namespace matroid_er
