#pragma once

#include "matroid_er/rational.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace matroid_er {

using Exponents = std::vector<int>;

/// Graded lexicographic: lower total degree first, then lexicographically
/// larger exponent vectors first (x1 > x2 > ...).
struct GradedLex {
  bool operator()(const Exponents& a, const Exponents& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0), db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a > b;
  }
};

/// Polynomial in Z[x1..xn] with no stored zero coefficients.
class SparsePolynomial {
 public:
  using Terms = std::map<Exponents, Integer, GradedLex>;

  explicit SparsePolynomial(int arity = 0) : n_(arity) {}

  static SparsePolynomial constant(int arity, const Integer& c) {
    SparsePolynomial p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }
  static SparsePolynomial variable(int arity, int i, const Integer& c = 1) {
    SparsePolynomial p(arity);
    Exponents e(arity, 0);
    e.at(i) = 1;
    p.add_term(e, c);
    return p;
  }

  int arity() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
  }

  void add_term(const Exponents& e, const Integer& c) {
    if (static_cast<int>(e.size()) != n_) throw InputError("monomial arity does not match polynomial arity");
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Same polynomial viewed in a larger variable set (new variables appended).
  SparsePolynomial extended(int arity) const {
    SparsePolynomial p(arity);
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f.resize(arity, 0);
      p.add_term(f, c);
    }
    return p;
  }

  Integer max_abs_coefficient() const {
    Integer m = 0;
    for (const auto& [e, c] : terms_) m = std::max(m, Integer(abs(c)));
    return m;
  }

  friend SparsePolynomial operator+(SparsePolynomial a, const SparsePolynomial& b) {
    a.check_arity(b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, c);
    return a;
  }
  friend SparsePolynomial operator-(SparsePolynomial a, const SparsePolynomial& b) {
    a.check_arity(b);
    for (const auto& [e, c] : b.terms_) a.add_term(e, -c);
    return a;
  }
  SparsePolynomial operator-() const { return SparsePolynomial(n_) - *this; }
  friend SparsePolynomial operator*(const SparsePolynomial& a, const SparsePolynomial& b) {
    a.check_arity(b);
    SparsePolynomial p(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.n_);
        for (int i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        p.add_term(e, ca * cb);
      }
    return p;
  }
  friend bool operator==(const SparsePolynomial& a, const SparsePolynomial& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }
  friend bool operator<(const SparsePolynomial& a, const SparsePolynomial& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return std::lexicographical_compare(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
                                        [](const auto& x, const auto& y) {
                                          if (x.first != y.first) return GradedLex{}(x.first, y.first);
                                          return x.second < y.second;
                                        });
  }

  /// Evaluation over any ring containing the integers (Rational, QuadraticNumber).
  template <class T>
  T evaluate(const std::vector<T>& x) const {
    if (static_cast<int>(x.size()) != n_) throw InputError("evaluation point has wrong arity");
    T sum = T(Rational(0));
    for (const auto& [e, c] : terms_) {
      T term = T(Rational(c));
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < e[i]; ++k) term = term * x[i];
      sum = sum + term;
    }
    return sum;
  }

  /// Human-readable form, e.g. "x1^2+2*x1*x2-3".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest degree first; x1-heavy monomials first within a degree
    std::vector<std::pair<Exponents, Integer>> ordered(terms_.begin(), terms_.end());
    auto deg = [](const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); };
    std::stable_sort(ordered.begin(), ordered.end(),
                     [&](const auto& a, const auto& b) { return deg(a.first) > deg(b.first); });
    for (const auto& [e, c] : ordered) {
      bool constant_term = std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
      Integer mag = abs(c);
      os << (c < 0 ? "-" : (first ? "" : "+"));
      if (mag != 1 || constant_term) os << mag.get_str() << (constant_term ? "" : "*");
      bool first_var = true;
      for (int i = 0; i < n_; ++i) {
        if (e[i] == 0) continue;
        if (!first_var) os << "*";
        os << "x" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
        first_var = false;
      }
      first = false;
    }
    return os.str();
  }

  /// Bit length of the `term c e1..en` serialization: sign+magnitude bits of
  /// every coefficient and exponent.
  std::size_t bit_length() const {
    std::size_t bits = 0;
    auto len = [](const Integer& z) -> std::size_t { return z == 0 ? 1 : mpz_sizeinbase(z.get_mpz_t(), 2); };
    for (const auto& [e, c] : terms_) {
      bits += len(abs(c)) + 1;
      for (int k : e) bits += len(Integer(k)) + 1;
    }
    return std::max<std::size_t>(bits, 1);
  }

 private:
  void check_arity(const SparsePolynomial& b) const {
    if (n_ != b.n_) throw InputError("polynomial arity mismatch");
  }

  int n_;
  Terms terms_;
};

inline SparsePolynomial square(const SparsePolynomial& p) { return p * p; }

/// Boolean formula over polynomial atoms p = 0, p > 0, p >= 0.
struct Formula {
  enum class Kind { Atom, And, Or, Not };
  enum class Rel { Eq, Gt, Ge };

  Kind kind = Kind::Atom;
  Rel rel = Rel::Eq;
  SparsePolynomial poly;
  std::vector<Formula> children;

  static Formula atom(SparsePolynomial p, Rel r) { return {Kind::Atom, r, std::move(p), {}}; }
  static Formula eq(SparsePolynomial p) { return atom(std::move(p), Rel::Eq); }
  static Formula gt(SparsePolynomial p) { return atom(std::move(p), Rel::Gt); }
  static Formula ge(SparsePolynomial p) { return atom(std::move(p), Rel::Ge); }
  static Formula conj(std::vector<Formula> fs) { return {Kind::And, Rel::Eq, SparsePolynomial(), std::move(fs)}; }
  static Formula disj(std::vector<Formula> fs) { return {Kind::Or, Rel::Eq, SparsePolynomial(), std::move(fs)}; }
  static Formula negate(Formula f) { return {Kind::Not, Rel::Eq, SparsePolynomial(), {std::move(f)}}; }
};

namespace detail {

/// Pushes negations to the atoms: not(p=0) -> p>0 or -p>0, not(p>0) -> -p>=0, not(p>=0) -> -p>0.
inline Formula to_nnf(const Formula& f, bool negated) {
  using K = Formula::Kind;
  using R = Formula::Rel;
  switch (f.kind) {
    case K::Not: return to_nnf(f.children.at(0), !negated);
    case K::And:
    case K::Or: {
      std::vector<Formula> kids;
      for (const auto& c : f.children) kids.push_back(to_nnf(c, negated));
      bool as_and = (f.kind == K::And) != negated;
      return as_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case K::Atom:
      if (!negated) return f;
      switch (f.rel) {
        case R::Eq: return Formula::disj({Formula::gt(f.poly), Formula::gt(-f.poly)});
        case R::Gt: return Formula::ge(-f.poly);
        case R::Ge: return Formula::gt(-f.poly);
      }
  }
  return f;
}

/// Replaces inequality atoms by equations in fresh variables:
/// p >= 0  ->  p - w^2 = 0,   p > 0  ->  p*w^2 - 1 = 0.
inline Formula eliminate_inequalities(const Formula& f, int& arity) {
  using K = Formula::Kind;
  if (f.kind != K::Atom) {
    std::vector<Formula> kids;
    for (const auto& c : f.children) kids.push_back(eliminate_inequalities(c, arity));
    return {f.kind, f.rel, SparsePolynomial(), std::move(kids)};
  }
  if (f.rel == Formula::Rel::Eq) return f;
  int w = arity++;
  SparsePolynomial wv = SparsePolynomial::variable(arity, w);
  SparsePolynomial p = f.poly.extended(arity);
  if (f.rel == Formula::Rel::Ge) return Formula::eq(p - wv * wv);
  return Formula::eq(p * wv * wv - SparsePolynomial::constant(arity, 1));
}

inline SparsePolynomial collapse(const Formula& f, int arity) {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Atom: return f.poly.extended(arity);
    case K::Or: {
      SparsePolynomial p = SparsePolynomial::constant(arity, 1);
      for (const auto& c : f.children) p = p * collapse(c, arity);
      return p;
    }
    case K::And: {
      SparsePolynomial p(arity);
      for (const auto& c : f.children) p = p + square(collapse(c, arity));
      return p;
    }
    case K::Not: break;
  }
  throw std::logic_error("negation left after NNF");
}

}  // namespace detail

struct EquationSystem {
  int arity = 0;  // original variables first, then one per eliminated inequality
  std::vector<SparsePolynomial> equations;
};

/// Rewrites a formula into a conjunction of polynomial equations with the same
/// projection onto the original variables.
inline EquationSystem to_equations(const Formula& f, int arity) {
  Formula nnf = detail::to_nnf(f, false);
  int n = arity;
  Formula eqs = detail::eliminate_inequalities(nnf, n);
  EquationSystem out{n, {}};
  if (eqs.kind == Formula::Kind::And) {
    for (const auto& c : eqs.children) out.equations.push_back(detail::collapse(c, n));
  } else {
    out.equations.push_back(detail::collapse(eqs, n));
  }
  return out;
}

}  // namespace matroid_er
