#pragma once

// Polynomial systems -> ETRAMI -> Feasibility -> STRICT-INEQ -> Distinct-ETR.

#include "matroid_er/etr.hpp"
#include "matroid_er/polynomial.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace matroid_er {

namespace detail {

inline std::vector<std::string> default_names(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

inline bool is_variable_minus_one(const SparsePolynomial& p, int& var) {
  if (p.size() != 2) return false;
  const int n = p.arity();
  Exponents zero(n, 0);
  auto it = p.terms().find(zero);
  if (it == p.terms().end() || it->second != -1) return false;
  for (const auto& [e, c] : p.terms()) {
    if (e == zero) continue;
    if (c != 1) return false;
    int ones = 0, idx = -1;
    for (int i = 0; i < n; ++i) {
      if (e[i] == 1) { ++ones; idx = i; }
      else if (e[i] != 0) return false;
    }
    if (ones != 1) return false;
    var = idx;
  }
  return true;
}

/// Monomial x^e as a product chain x_a * x_b * ... in variable order.
inline int build_monomial(SystemBuilder& b, const std::vector<int>& inputs, const Exponents& e) {
  int acc = -1;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (int k = 0; k < e[i]; ++k) acc = acc < 0 ? inputs[i] : b.mul(acc, inputs[i]);
  return acc;
}

/// Coefficient times monomial, with the monomial looked up or built.
inline int build_term(SystemBuilder& b, const std::vector<int>& inputs, const Exponents& e, const Integer& c) {
  bool constant_term = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
  if (constant_term) return b.constant(c);
  int mono = build_monomial(b, inputs, e);
  if (c == 1) return mono;
  return b.mul(b.constant(c), mono);
}

inline int build_polynomial(SystemBuilder& b, const std::vector<int>& inputs, const SparsePolynomial& p,
                            const std::string& name = "") {
  for (const auto& [e, c] : p.terms())
    if (c != 1) b.constant(c);
  for (const auto& [e, c] : p.terms())
    if (std::any_of(e.begin(), e.end(), [](int k) { return k != 0; })) build_monomial(b, inputs, e);
  int acc = -1;
  std::size_t k = 0;
  for (const auto& [e, c] : p.terms()) {
    int t = build_term(b, inputs, e, c);
    ++k;
    acc = acc < 0 ? t : b.add(acc, t, k == p.size() ? name : "");
  }
  return acc < 0 ? b.zero() : acc;
}

inline std::size_t bitlen(const Integer& z) { return z == 0 ? 0 : mpz_sizeinbase(z.get_mpz_t(), 2); }

}  // namespace detail

/// Each equation p = 0 becomes: coefficient constants, memoized monomials,
/// partial sums into P, then ADD(one, P, one). The equation x - 1 = 0 becomes ONE(x).
inline DefinedSystem flatten_to_etrami(const std::vector<SparsePolynomial>& equations, int arity,
                                       std::vector<std::string> names = {}) {
  if (names.empty()) names = detail::default_names(arity);
  if (static_cast<int>(names.size()) != arity) throw InputError("name list does not match arity");
  SystemBuilder b;
  std::vector<int> inputs;
  for (const auto& n : names) inputs.push_back(b.input(n));
  for (const auto& p : equations) {
    if (p.arity() != arity) throw InputError("equation arity does not match system arity");
    if (p.is_zero()) continue;
    int var = -1;
    if (detail::is_variable_minus_one(p, var)) {
      b.require({Op::One, inputs[var]});
      continue;
    }
    int value = detail::build_polynomial(b, inputs, p);
    int one = b.one();
    b.require({Op::Add, one, value, one});
  }
  return b.take();
}

/// ETRAMI constraint polynomials: x+y-z, xy-z, x-1.
inline std::vector<SparsePolynomial> constraint_polynomials(const ConstraintSystem& cs) {
  const int n = static_cast<int>(cs.size());
  std::vector<SparsePolynomial> out;
  auto var = [&](int i) { return SparsePolynomial::variable(n, i); };
  for (const auto& k : cs.constraints) {
    switch (k.op) {
      case Op::Add: out.push_back(var(k.a) + var(k.b) - var(k.c)); break;
      case Op::Mul: out.push_back(var(k.a) * var(k.b) - var(k.c)); break;
      case Op::One: out.push_back(var(k.a) - SparsePolynomial::constant(n, 1)); break;
      case Op::Pos: throw InputError("POS constraint is not part of ETRAMI");
    }
  }
  return out;
}

struct FeasibilityResult {
  SparsePolynomial p;
  std::size_t distinct_constraints = 0;
  Integer coefficient_bound;  // 36 n^3
};

/// p = sum of f_i^2 over the distinct f_i. Raises BoundError when a
/// coefficient exceeds 36n^3 or there are more than 3n^3 constraints.
inline FeasibilityResult to_feasibility(const std::vector<SparsePolynomial>& fs, int arity) {
  std::vector<SparsePolynomial> uniq;
  for (const auto& f : fs) {
    if (f.arity() != arity) throw InputError("constraint arity mismatch");
    if (f.degree() > 2) throw BoundError("constraint polynomial of degree > 2 is not an ETRAMI constraint");
    if (std::find(uniq.begin(), uniq.end(), f) == uniq.end()) uniq.push_back(f);
  }
  Integer n3 = Integer(arity) * arity * arity;
  FeasibilityResult r{SparsePolynomial(arity), uniq.size(), 36 * n3};
  if (Integer(static_cast<unsigned long>(uniq.size())) > 3 * n3)
    throw BoundError("more than 3n^3 distinct constraints");
  for (const auto& f : uniq) r.p = r.p + square(f);
  if (r.p.max_abs_coefficient() > r.coefficient_bound)
    throw BoundError("coefficient " + r.p.max_abs_coefficient().get_str() + " exceeds 36n^3 = " +
                     r.coefficient_bound.get_str());
  return r;
}

/// L is the serialized bit length of p, floored so the radius (L >= 4) and
/// separation (L >= 5n) bounds both apply. Lbar = L + n*ceil(log2(L+2)) + 64.
struct NormalizationParams {
  int n = 0;
  std::size_t L = 0;
  std::size_t Lbar = 0;
  std::size_t delta_chain_k = 0;  // delta = 2^(-2^k), k = Lbar + 5
  std::size_t R_chain_k = 0;      // R = 2^(2^k) > 2^(L^(8n)), k = bitlen(L^(8n))
  std::size_t R_upper_k = 0;      // 2^(2^k) < 2^(L^(8n+1)), k = floor(log2(L^(8n+1) - 1))
};

inline NormalizationParams compute_params(const SparsePolynomial& p) {
  NormalizationParams np;
  np.n = p.arity();
  np.L = std::max<std::size_t>({p.bit_length(), static_cast<std::size_t>(5 * np.n), 4});
  std::size_t log_term = detail::bitlen(Integer(static_cast<unsigned long>(np.L + 1)));  // ceil(log2(L+2))
  np.Lbar = np.L + static_cast<std::size_t>(np.n) * log_term + 64;
  np.delta_chain_k = np.Lbar + 5;
  Integer L(static_cast<unsigned long>(np.L)), lower, upper;
  mpz_pow_ui(lower.get_mpz_t(), L.get_mpz_t(), 8UL * np.n);
  mpz_pow_ui(upper.get_mpz_t(), L.get_mpz_t(), 8UL * np.n + 1);
  np.R_chain_k = detail::bitlen(lower);
  np.R_upper_k = detail::bitlen(upper - 1) - 1;
  return np;
}

/// -delta < p(x) < delta and ||x||^2 < R, with delta and R either given as
/// small test-scale rationals or kept as repeated-squaring chains.
struct StrictIneqInstance {
  SparsePolynomial p;
  std::vector<std::string> names;
  NormalizationParams params;
  std::optional<Rational> test_delta;
  std::optional<Rational> test_R;
  DefinedSystem chains;  // delta tower and the a < R < b squeeze (structural only)
};

inline StrictIneqInstance to_strict_ineq(const SparsePolynomial& p, std::optional<Rational> test_delta = {},
                                         std::optional<Rational> test_R = {}, std::vector<std::string> names = {}) {
  if (names.empty()) names = detail::default_names(p.arity());
  if (test_delta && *test_delta <= 0) throw InputError("test-scale delta must be positive");
  if (test_R && *test_R <= 0) throw InputError("test-scale R must be positive");
  StrictIneqInstance si{p, names, compute_params(p), test_delta, test_R, {}};
  SystemBuilder b;
  if (test_delta) b.rational_constant(*test_delta);
  else b.tower(static_cast<int>(si.params.delta_chain_k), true);
  if (test_R) {
    b.rational_constant(*test_R);
  } else {
    int lo = b.tower(static_cast<int>(si.params.R_chain_k), false);
    int hi = b.tower(static_cast<int>(si.params.R_upper_k), false);
    int r = b.input("R");
    int s1 = b.sub(r, lo, "_R_minus_a");
    int s2 = b.sub(hi, r, "_b_minus_R");
    b.require({Op::Pos, s1});
    b.require({Op::Pos, s2});
  }
  si.chains = b.take();
  return si;
}

/// Distinct-ETR instance: constants, delta, R, monomials, partial sums P_k,
/// X = sum x_i^2, and slacks a = P + delta, b = delta - P, c = R - X, all positive.
inline DefinedSystem to_distinct(const StrictIneqInstance& si) {
  const int n = si.p.arity();
  SystemBuilder b;
  std::vector<int> inputs;
  for (const auto& name : si.names) inputs.push_back(b.input(name));
  if (si.p.is_zero()) {
    b.one();
    auto out = b.take();
    out.cs.distinct_promise = true;
    return out;
  }
  for (const auto& [e, c] : si.p.terms())
    if (c != 1) b.constant(c);
  int delta = si.test_delta ? b.rational_constant(*si.test_delta)
                            : b.tower(static_cast<int>(si.params.delta_chain_k), true);
  int R = si.test_R ? b.rational_constant(*si.test_R) : b.tower(static_cast<int>(si.params.R_chain_k), false);
  int P = detail::build_polynomial(b, inputs, si.p, "_P");
  SparsePolynomial norm(n);
  for (int i = 0; i < n; ++i) norm = norm + square(SparsePolynomial::variable(n, i));
  int X = detail::build_polynomial(b, inputs, norm, "_X");
  int sa = b.add(P, delta, "_slack_a");
  int sb = b.sub(delta, P, "_slack_b");
  int sc = b.sub(R, X, "_slack_c");
  b.require({Op::Pos, sa});
  b.require({Op::Pos, sb});
  b.require({Op::Pos, sc});
  auto out = dedup(b.take());
  out.cs.distinct_promise = true;
  return out;
}

/// Searches rational points near an exact solution x of p = 0 whose forward
/// extension satisfies the Distinct-ETR system with pairwise-distinct values.
inline std::optional<std::vector<Rational>> find_distinct_witness(const DefinedSystem& ds,
                                                                  const std::vector<QuadraticNumber>& x,
                                                                  std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  for (unsigned bits = 12; bits <= 96; bits += 12) {
    for (int attempt = 0; attempt < 16; ++attempt) {
      std::vector<Rational> inputs;
      Integer scale = Integer(1) << bits;
      for (const auto& xi : x) {
        Rational base = xi.approximate(bits + 8);
        long jitter = std::uniform_int_distribution<long>(-1000, 1000)(rng);
        Rational noise(Integer(jitter), scale * 1024);
        noise.canonicalize();
        inputs.push_back(base + noise);
      }
      std::vector<Rational> values;
      try {
        values = ds.extend(inputs);
      } catch (const std::domain_error&) {
        continue;
      }
      auto rep = check_assignment(ds.cs, values);
      if (rep.all_passed && rep.distinct) return values;
    }
  }
  return std::nullopt;
}

}  // namespace matroid_er
