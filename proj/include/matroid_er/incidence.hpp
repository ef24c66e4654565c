#pragma once

// Pencil grouping: partition points by the line joining them to a center.
// Lines are hashed modulo the prime 2^61 - 1 and every hash match is
// confirmed with an exact determinant, so results are exact.

#include "matroid_er/projective.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace matroid_er::detail {

using ModVec = std::array<std::uint64_t, 3>;

inline constexpr std::uint64_t kModPrime = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kModPrime), hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  if (s >= kModPrime) s -= kModPrime;
  return s >= kModPrime ? s - kModPrime : s;
}
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kModPrime - b; }

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

inline ModVec mod_point(const IntPoint& p) {
  ModVec v;
  for (int i = 0; i < 3; ++i) v[i] = mpz_fdiv_ui(p[i].get_mpz_t(), kModPrime);
  return v;
}

inline ModVec cross_mod(const ModVec& p, const ModVec& q) {
  return {submod(mulmod(p[1], q[2]), mulmod(p[2], q[1])), submod(mulmod(p[2], q[0]), mulmod(p[0], q[2])),
          submod(mulmod(p[0], q[1]), mulmod(p[1], q[0]))};
}

inline bool is_zero_mod(const ModVec& v) { return v[0] == 0 && v[1] == 0 && v[2] == 0; }

/// Scales every nonzero vector so its first nonzero entry is 1, with one
/// modular inversion for the whole batch.
inline void normalize_batch(std::vector<ModVec>& vs) {
  std::vector<std::uint64_t> pivot(vs.size(), 0), prefix(vs.size() + 1, 1);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (auto c : vs[i])
      if (c != 0) {
        pivot[i] = c;
        break;
      }
    prefix[i + 1] = pivot[i] ? mulmod(prefix[i], pivot[i]) : prefix[i];
  }
  std::uint64_t inv = powmod(prefix[vs.size()], kModPrime - 2);
  for (std::size_t i = vs.size(); i-- > 0;) {
    if (!pivot[i]) continue;
    std::uint64_t pi = mulmod(inv, prefix[i]);  // 1 / pivot[i]
    inv = mulmod(inv, pivot[i]);
    for (auto& c : vs[i]) c = mulmod(c, pi);
  }
}

struct ModVecHash {
  std::size_t operator()(const ModVec& v) const {
    return static_cast<std::size_t>(v[0] * 0x9E3779B97F4A7C15ULL ^ v[1] * 0xC2B2AE3D27D4EB4FULL ^ v[2]);
  }
};

inline bool collinear_exact(const IntPoint& a, const IntPoint& b, const IntPoint& c) {
  Integer d = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
  return d == 0;
}

/// Lines through `center`: classes of the given points, exactly collinear
/// with the center within a class. Points equal to the center must not be
/// passed.
class Pencil {
 public:
  Pencil(const IntPoint& center, const ModVec& center_mod) : center_(center), center_mod_(center_mod) {}

  /// Groups the points; `exact` and `mod` are indexed by the ids in `ids`.
  void build(const std::vector<int>& ids, const std::vector<IntPoint>& exact, const std::vector<ModVec>& mod) {
    std::vector<ModVec> keys(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) keys[i] = cross_mod(center_mod_, mod[ids[i]]);
    normalize_batch(keys);
    std::unordered_map<ModVec, int, ModVecHash> head;  // key -> first class of its chain
    head.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const int q = ids[i];
      if (is_zero_mod(keys[i])) {  // q reduces onto the center mod p: compare exactly with every class
        int c = 0;
        for (; c < static_cast<int>(classes_.size()); ++c)
          if (joins(q, c, exact)) break;
        if (c == static_cast<int>(classes_.size())) orphans_.push_back(found(q, -1));
        continue;
      }
      auto [it, fresh] = head.try_emplace(keys[i], -1);
      int c = it->second;
      while (c >= 0 && !joins(q, c, exact)) c = next_[c];
      if (c >= 0) continue;
      bool placed = false;
      for (int o : orphans_)
        if ((placed = joins(q, o, exact))) break;
      if (!placed) it->second = found(q, it->second);
    }
  }

  const std::vector<std::vector<int>>& classes() const { return classes_; }

 private:
  bool joins(int q, int c, const std::vector<IntPoint>& exact) {
    if (!collinear_exact(center_, exact[classes_[c][0]], exact[q])) return false;
    classes_[c].push_back(q);
    return true;
  }
  int found(int q, int next) {
    classes_.push_back({q});
    next_.push_back(next);
    return static_cast<int>(classes_.size()) - 1;
  }

  IntPoint center_;
  ModVec center_mod_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> next_;     // next class sharing a hash key
  std::vector<int> orphans_;  // classes founded by points that hash to zero
};

}  // namespace matroid_er::detail
