#pragma once

// Randomized sums of four squares (Rabin-Shallit): fix two squares at random
// until the remainder is a prime 1 mod 4, then split it with Cornacchia.

#include "matroid_er/rational.hpp"

#include <array>
#include <optional>
#include <random>
#include <stdexcept>

namespace matroid_er {

inline Integer isqrt(const Integer& n) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

/// p = a^2 + b^2 for a prime p = 1 mod 4 (or p = 2). Requires a primality
/// certificate from the caller; throws domain_error on a bad prime.
inline std::array<Integer, 2> cornacchia(const Integer& p, gmp_randclass& rand) {
  if (p == 2) return {Integer(1), Integer(1)};
  if (p % 4 != 1) throw std::domain_error("cornacchia needs a prime 1 mod 4");
  const Integer e = (p - 1) / 4;
  Integer t;
  for (int tries = 0;; ++tries) {
    if (tries > 200) throw std::domain_error("no square root of -1 found; modulus is not prime");
    Integer c = rand.get_z_range(p - 3) + 2;
    mpz_powm(t.get_mpz_t(), c.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    if ((t * t) % p == p - 1) break;
  }
  Integer r0 = p, r1 = t;
  while (r1 * r1 > p) {
    Integer r2 = r0 % r1;
    r0 = r1;
    r1 = r2;
  }
  Integer rest = p - r1 * r1;
  if (!is_square(rest)) throw std::domain_error("cornacchia failed; modulus is not prime");
  return {r1, isqrt(rest)};
}

/// Some representation n = a^2 + b^2 + c^2 + d^2 with a random first pair.
/// Entries may be zero. nullopt only if the attempt budget runs out.
inline std::optional<std::array<Integer, 4>> four_squares(const Integer& n, gmp_randclass& rand, int attempts = 20000) {
  if (n < 0) throw std::domain_error("negative integer is not a sum of squares");
  if (n == 0) return std::array<Integer, 4>{0, 0, 0, 0};
  if (n % 4 == 0) {  // a multiple of 4 only splits through even squares
    auto r = four_squares(n / 4, rand, attempts);
    if (r)
      for (auto& c : *r) c *= 2;
    return r;
  }
  for (int t = 0; t < attempts; ++t) {
    Integer a = rand.get_z_range(isqrt(n) + 1);
    Integer m = n - a * a;
    Integer b = rand.get_z_range(isqrt(m) + 1);
    Integer rest = m - b * b;
    if (is_square(rest)) return std::array<Integer, 4>{a, b, isqrt(rest), 0};
    if (rest == 2 || (rest % 4 == 1 && mpz_probab_prime_p(rest.get_mpz_t(), 30) > 0)) {
      auto [c, d] = cornacchia(rest, rand);
      return std::array<Integer, 4>{a, b, c, d};
    }
  }
  return std::nullopt;
}

/// Random r with x = r1^2 + r2^2 + r3^2 + r4^2, all r_i nonzero and of
/// pairwise distinct absolute value. Starts from an integer representation
/// of p q (x = p/q) scaled by 1/q, then reflects it across the hyperplane
/// orthogonal to a random small integer vector: reflections keep the sum of
/// squares and move the point to a generic rational point of the sphere.
/// nullopt iff x <= 0.
template <class Rng>
std::optional<std::array<Rational, 4>> positive_four_squares(const Rational& x, Rng& rng) {
  if (x <= 0) return std::nullopt;
  gmp_randclass rand(gmp_randinit_default);
  rand.seed(static_cast<unsigned long>(rng()));
  const Integer p = x.get_num(), q = x.get_den();
  std::optional<std::array<Integer, 4>> base;
  while (!base) base = four_squares(p * q, rand);
  std::array<Rational, 4> r;
  for (int i = 0; i < 4; ++i) {
    r[i] = Rational((*base)[i], q);
    r[i].canonicalize();
  }
  std::uniform_int_distribution<int> coord(-20, 20);
  for (;;) {
    std::array<Rational, 4> v;
    Rational vv = 0, rv = 0;
    for (int i = 0; i < 4; ++i) {
      v[i] = coord(rng);
      vv += v[i] * v[i];
      rv += r[i] * v[i];
    }
    if (vv == 0) continue;
    std::array<Rational, 4> out;
    const Rational t = 2 * rv / vv;
    for (int i = 0; i < 4; ++i) out[i] = r[i] - t * v[i];
    bool generic = true;
    for (int i = 0; i < 4 && generic; ++i) {
      if (out[i] == 0) generic = false;
      for (int j = 0; j < i && generic; ++j)
        if (abs(out[i]) == abs(out[j])) generic = false;
    }
    if (generic) return out;
  }
}

}  // namespace matroid_er
