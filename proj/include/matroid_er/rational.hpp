#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace matroid_er {

using Rational = mpq_class;
using Integer = mpz_class;

/// Malformed input (syntax, ranges, dimensions). The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  InputError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_ = 0;
};

/// A configured size guard was exceeded.
class BoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses `p/q` or an integer. Throws InputError on anything else.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw InputError("empty rational literal");
  auto valid_int = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  auto slash = s.find('/');
  Rational q;
  if (slash == std::string::npos) {
    if (!valid_int(s)) throw InputError("bad rational literal '" + s + "'");
    q = Rational(Integer(strip_plus(s)));
  } else {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
      throw InputError("bad rational literal '" + s + "'");
    Integer d(den);
    if (d == 0) throw InputError("zero denominator in '" + s + "'");
    q = Rational(Integer(strip_plus(num)), d);
    q.canonicalize();
  }
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

inline int sign(const Rational& q) { return sgn(q); }
inline int sign(const Integer& z) { return sgn(z); }

/// Element of Q(sqrt(d)) for a squarefree d > 1, written a + b*sqrt(d).
/// Values with b == 0 are plain rationals and combine with any radicand.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(Rational a) : a_(std::move(a)) {}  // NOLINT: implicit by design of the field tower
  QuadraticNumber(long a) : a_(a) {}                  // NOLINT
  QuadraticNumber(Rational a, Rational b, long radicand) : a_(std::move(a)), b_(std::move(b)), d_(radicand) {
    if (b_ == 0) d_ = 0;
    else if (radicand <= 1) throw std::invalid_argument("radicand must be > 1");
  }

  static QuadraticNumber sqrt_of(long radicand) { return {Rational(0), Rational(1), radicand}; }

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  long radicand() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y) {
    long d = join(x, y);
    return {x.a_ + y.a_, x.b_ + y.b_, d};
  }
  friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y) {
    long d = join(x, y);
    return {x.a_ - y.a_, x.b_ - y.b_, d};
  }
  friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y) {
    long d = join(x, y);
    return {x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, d};
  }
  friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y) {
    long d = join(x, y);
    Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * d;
    if (norm == 0) throw std::domain_error("division by zero in Q(sqrt d)");
    QuadraticNumber conj{y.a_, -y.b_, d};
    QuadraticNumber num = x * conj;
    return {num.a_ / norm, num.b_ / norm, d};
  }
  QuadraticNumber operator-() const { return {-a_, -b_, d_}; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_ == 0 || x.d_ == y.d_);
  }
  friend bool operator!=(const QuadraticNumber& x, const QuadraticNumber& y) { return !(x == y); }

  /// Exact sign of a + b*sqrt(d).
  friend int sign(const QuadraticNumber& x) {
    int sa = sgn(x.a_), sb = sgn(x.b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // opposite signs: compare a^2 with b^2 d
    Rational lhs = x.a_ * x.a_, rhs = x.b_ * x.b_ * x.d_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sa : sb;
  }

  friend std::string to_string(const QuadraticNumber& x) {
    if (x.b_ == 0) return x.a_.get_str();
    return x.a_.get_str() + (x.b_ > 0 ? "+" : "-") + Rational(abs(x.b_)).get_str() + "*sqrt(" +
           std::to_string(x.d_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x) { return os << to_string(x); }

  /// Rational approximation with |error| < 2^-bits.
  Rational approximate(unsigned bits) const {
    if (b_ == 0) return a_;
    // floor(sqrt(d * 4^bits)) / 2^bits
    Integer scale = Integer(1) << bits;
    Integer root;
    Integer radicand_scaled = Integer(d_) * scale * scale;
    mpz_sqrt(root.get_mpz_t(), radicand_scaled.get_mpz_t());
    Rational s(root, scale);
    s.canonicalize();
    return a_ + b_ * s;
  }

 private:
  static long join(const QuadraticNumber& x, const QuadraticNumber& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_) throw std::domain_error("mixing different quadratic fields");
    return x.d_;
  }

  Rational a_{0};
  Rational b_{0};
  long d_ = 0;
};

}  // namespace matroid_er
