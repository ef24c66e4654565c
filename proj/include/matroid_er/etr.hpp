#pragma once

#include "matroid_er/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace matroid_er {

enum class Op { Add, Mul, One, Pos };

inline const char* op_keyword(Op op) {
  switch (op) {
    case Op::Add: return "ADD";
    case Op::Mul: return "MUL";
    case Op::One: return "ONE";
    case Op::Pos: return "POS";
  }
  return "?";
}

/// ADD(a,b,c): a+b=c.  MUL(a,b,c): a*b=c.  ONE(a): a=1.  POS(a): a>0.
/// Operands are variable indices; b and c are -1 for the unary forms.
struct Constraint {
  Op op;
  int a = -1, b = -1, c = -1;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

class ConstraintSystem {
 public:
  std::vector<std::string> vars;
  std::vector<Constraint> constraints;
  bool distinct_promise = false;

  int declare(const std::string& name) {
    if (index_.count(name)) throw InputError("duplicate declaration of '" + name + "'");
    index_[name] = static_cast<int>(vars.size());
    vars.push_back(name);
    return static_cast<int>(vars.size()) - 1;
  }
  std::optional<int> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  int index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) throw InputError("undeclared variable '" + name + "'");
    return *i;
  }
  std::size_t size() const { return vars.size(); }

  void add(int a, int b, int c) { push({Op::Add, a, b, c}); }
  void mul(int a, int b, int c) { push({Op::Mul, a, b, c}); }
  void one(int a) { push({Op::One, a}); }
  void pos(int a) { push({Op::Pos, a}); }
  void push(const Constraint& k) {
    auto check = [&](int v) {
      if (v < 0 || v >= static_cast<int>(vars.size())) throw InputError("constraint references unknown variable");
    };
    check(k.a);
    if (k.op == Op::Add || k.op == Op::Mul) {
      check(k.b);
      check(k.c);
    }
    constraints.push_back(k);
  }

  std::size_t count(Op op) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& k) { return k.op == op; }));
  }

  friend bool operator==(const ConstraintSystem& x, const ConstraintSystem& y) {
    return x.vars == y.vars && x.constraints == y.constraints && x.distinct_promise == y.distinct_promise;
  }

 private:
  std::unordered_map<std::string, int> index_;
};

namespace detail {

inline std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

}  // namespace detail

/// Line grammar: VAR name | ADD x y z | MUL x y z | ONE x | POS x | DISTINCT; '#' starts a comment.
inline ConstraintSystem parse_system(const std::string& text) {
  ConstraintSystem cs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::split_tokens(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto arity = [&](std::size_t k) {
      if (tok.size() != k + 1)
        throw InputError(lineno, kw + " expects " + std::to_string(k) + " operand(s), got " + std::to_string(tok.size() - 1));
    };
    auto var = [&](std::size_t i) {
      auto v = cs.find(tok[i]);
      if (!v) throw InputError(lineno, "undeclared variable '" + tok[i] + "'");
      return *v;
    };
    try {
      if (kw == "VAR") {
        arity(1);
        cs.declare(tok[1]);
      } else if (kw == "ADD") {
        arity(3);
        cs.add(var(1), var(2), var(3));
      } else if (kw == "MUL") {
        arity(3);
        cs.mul(var(1), var(2), var(3));
      } else if (kw == "ONE") {
        arity(1);
        cs.one(var(1));
      } else if (kw == "POS") {
        arity(1);
        cs.pos(var(1));
      } else if (kw == "DISTINCT") {
        arity(0);
        cs.distinct_promise = true;
      } else {
        throw InputError(lineno, "unknown keyword '" + kw + "'");
      }
    } catch (const InputError& e) {
      if (e.line() != 0) throw;
      throw InputError(lineno, e.what());
    }
  }
  return cs;
}

inline std::string serialize(const ConstraintSystem& cs) {
  std::ostringstream os;
  for (const auto& v : cs.vars) os << "VAR " << v << "\n";
  for (const auto& k : cs.constraints) {
    os << op_keyword(k.op) << " " << cs.vars[k.a];
    if (k.op == Op::Add || k.op == Op::Mul) os << " " << cs.vars[k.b] << " " << cs.vars[k.c];
    os << "\n";
  }
  if (cs.distinct_promise) os << "DISTINCT\n";
  return os.str();
}

using Assignment = std::map<std::string, Rational>;

/// `name value` per line, '#' comments.
inline Assignment parse_assignment(const std::string& text) {
  Assignment a;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto tok = detail::split_tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) throw InputError(lineno, "expected 'name value'");
    try {
      if (!a.emplace(tok[0], parse_rational(tok[1])).second)
        throw InputError(lineno, "duplicate value for '" + tok[0] + "'");
    } catch (const InputError& e) {
      if (e.line() != 0) throw;
      throw InputError(lineno, e.what());
    }
  }
  return a;
}

inline std::string serialize(const Assignment& a, const ConstraintSystem* order = nullptr) {
  std::ostringstream os;
  if (order) {
    for (const auto& v : order->vars)
      if (auto it = a.find(v); it != a.end()) os << v << " " << it->second.get_str() << "\n";
  } else {
    for (const auto& [k, v] : a) os << k << " " << v.get_str() << "\n";
  }
  return os.str();
}

/// Values in declaration order; throws InputError when a variable has no value.
inline std::vector<Rational> values_in_order(const ConstraintSystem& cs, const Assignment& a) {
  std::vector<Rational> out;
  out.reserve(cs.size());
  for (const auto& v : cs.vars) {
    auto it = a.find(v);
    if (it == a.end()) throw InputError("assignment is missing variable '" + v + "'");
    out.push_back(it->second);
  }
  return out;
}

struct CheckReport {
  std::vector<bool> passed;  // one entry per constraint
  bool all_passed = true;
  bool distinct = true;
  std::optional<std::pair<int, int>> collision;  // first pair of equal values
  std::optional<std::size_t> first_failure;
  bool ok() const { return all_passed; }
};

template <class T>
bool holds(const Constraint& k, const std::vector<T>& x) {
  switch (k.op) {
    case Op::Add: return x[k.a] + x[k.b] == x[k.c];
    case Op::Mul: return x[k.a] * x[k.b] == x[k.c];
    case Op::One: return x[k.a] == T(Rational(1));
    case Op::Pos: return sign(x[k.a]) > 0;
  }
  return false;
}

/// Exact check over Rational or QuadraticNumber values in declaration order.
template <class T>
CheckReport check_assignment(const ConstraintSystem& cs, const std::vector<T>& x) {
  if (x.size() != cs.size()) throw InputError("assignment size does not match the number of variables");
  CheckReport r;
  r.passed.reserve(cs.constraints.size());
  for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
    bool ok = holds(cs.constraints[i], x);
    r.passed.push_back(ok);
    if (!ok && r.all_passed) {
      r.all_passed = false;
      r.first_failure = i;
    }
  }
  for (std::size_t i = 0; i < x.size() && r.distinct; ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] == x[j]) {
        r.distinct = false;
        r.collision = {static_cast<int>(i), static_cast<int>(j)};
        break;
      }
  return r;
}

inline CheckReport check_assignment(const ConstraintSystem& cs, const Assignment& a) {
  return check_assignment(cs, values_in_order(cs, a));
}

/// How a variable's value follows from earlier variables.
struct Definition {
  enum class Kind { Free, One, Zero, Sum, Difference, Half, Product, Quotient };
  Kind kind = Kind::Free;
  int l = -1, r = -1;
  friend bool operator==(const Definition&, const Definition&) = default;
};

/// Constraint system whose variables (except free inputs) are each pinned by
/// one definitional constraint over earlier variables, so any input point
/// extends uniquely by forward evaluation.
struct DefinedSystem {
  ConstraintSystem cs;
  std::vector<Definition> defs;

  std::vector<int> free_variables() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < defs.size(); ++i)
      if (defs[i].kind == Definition::Kind::Free) out.push_back(static_cast<int>(i));
    return out;
  }

  /// Forward evaluation. `inputs` gives values for the free variables in order.
  template <class T>
  std::vector<T> extend(const std::vector<T>& inputs) const {
    using K = Definition::Kind;
    std::vector<T> x(defs.size());
    std::size_t next_input = 0;
    for (std::size_t i = 0; i < defs.size(); ++i) {
      const auto& d = defs[i];
      switch (d.kind) {
        case K::Free:
          if (next_input >= inputs.size()) throw InputError("not enough input values for forward evaluation");
          x[i] = inputs[next_input++];
          break;
        case K::One: x[i] = T(Rational(1)); break;
        case K::Zero: x[i] = T(Rational(0)); break;
        case K::Sum: x[i] = x[d.l] + x[d.r]; break;
        case K::Difference: x[i] = x[d.l] - x[d.r]; break;
        case K::Half: x[i] = x[d.l] / T(Rational(2)); break;
        case K::Product: x[i] = x[d.l] * x[d.r]; break;
        case K::Quotient:
          if (x[d.r] == T(Rational(0))) throw std::domain_error("forward evaluation divides by zero");
          x[i] = x[d.l] / x[d.r];
          break;
      }
    }
    if (next_input != inputs.size()) throw InputError("too many input values for forward evaluation");
    return x;
  }
};

/// Emits defined variables with hash-consing: structurally identical
/// definitions (commutative operands sorted) return the existing variable.
class SystemBuilder {
 public:
  explicit SystemBuilder(bool hash_cons = true) : hash_cons_(hash_cons) {}

  int input(const std::string& name) { return define(name, {}); }

  int one() {
    if (one_ < 0) {
      one_ = define(next_name("one"), {Definition::Kind::One});
      sys_.cs.one(one_);
    }
    return one_;
  }
  /// 0 via ADD(one, z, one).
  int zero() {
    if (zero_ < 0) {
      int o = one();
      zero_ = define(next_name("zero"), {Definition::Kind::Zero});
      sys_.cs.add(o, zero_, o);
    }
    return zero_;
  }
  int add(int l, int r, const std::string& name = "") {
    if (l > r) std::swap(l, r);
    return emit({Definition::Kind::Sum, l, r}, name, [&](int v) { sys_.cs.add(l, r, v); });
  }
  /// v = l - r via ADD(v, r, l).
  int sub(int l, int r, const std::string& name = "") {
    return emit({Definition::Kind::Difference, l, r}, name, [&](int v) { sys_.cs.add(v, r, l); });
  }
  /// v = l / 2 via ADD(v, v, l).
  int half(int l, const std::string& name = "") {
    return emit({Definition::Kind::Half, l, -1}, name, [&](int v) { sys_.cs.add(v, v, l); });
  }
  int mul(int l, int r, const std::string& name = "") {
    if (l > r) std::swap(l, r);
    return emit({Definition::Kind::Product, l, r}, name, [&](int v) { sys_.cs.mul(l, r, v); });
  }
  /// v = l / r via MUL(v, r, l).
  int div(int l, int r, const std::string& name = "") {
    return emit({Definition::Kind::Quotient, l, r}, name, [&](int v) { sys_.cs.mul(v, r, l); });
  }

  /// Integer constant by double-and-add from 1 (or unary +1 steps). Negative
  /// values m satisfy ADD(m, |k|, zero).
  int constant(const Integer& k, bool unary = false) {
    if (k == 0) return zero();
    std::string key = std::string(unary ? "u:" : "c:") + k.get_str();
    if (auto it = consts_.find(key); it != consts_.end()) return it->second;
    int v;
    if (k < 0) {
      int mag = constant(Integer(-k), unary);
      int z = zero();
      v = define(next_name("c"), {Definition::Kind::Difference, z, mag});
      sys_.cs.add(v, mag, z);
      defs_index_[def_key({Definition::Kind::Difference, z, mag})] = v;
    } else if (k == 1) {
      v = one();
    } else if (unary) {
      v = add(constant(k - 1, true), one());
    } else {
      Integer h = k / 2;
      int d = constant(h);
      v = add(d, d);
      if (k % 2 != 0) v = add(v, one());
    }
    consts_[key] = v;
    return v;
  }

  /// p/q via MUL(v, q, p); integers fall through to constant().
  int rational_constant(const Rational& q) {
    if (q.get_den() == 1) return constant(q.get_num());
    std::string key = "q:" + q.get_str();
    if (auto it = consts_.find(key); it != consts_.end()) return it->second;
    int v = div(constant(q.get_num()), constant(q.get_den()));
    consts_[key] = v;
    return v;
  }

  /// 2^(2^k) (or 2^(-2^k) when small) by repeated squaring, k+2 constraints
  /// when built from scratch: ONE a; ADD a a x0 (x0 = 2) or ADD x0 x0 a
  /// (x0 = 1/2); then k squarings.
  int tower(int k, bool small) {
    std::string key = std::string(small ? "t:" : "T:") + std::to_string(k);
    if (auto it = consts_.find(key); it != consts_.end()) return it->second;
    int v;
    if (k == 0) v = small ? half(one()) : add(one(), one());
    else {
      int prev = tower(k - 1, small);
      v = mul(prev, prev);
    }
    consts_[key] = v;
    return v;
  }

  /// Raw constraint that does not define a variable.
  void require(const Constraint& k) { sys_.cs.push(k); }

  ConstraintSystem& system() { return sys_.cs; }
  const DefinedSystem& defined() const { return sys_; }
  DefinedSystem take() { return std::move(sys_); }

 private:
  static std::string def_key(const Definition& d) {
    return std::to_string(static_cast<int>(d.kind)) + ":" + std::to_string(d.l) + ":" + std::to_string(d.r);
  }

  std::string next_name(const std::string& prefix) {
    std::string name;
    do name = "_" + prefix + std::to_string(counter_++);
    while (sys_.cs.find(name));
    return name;
  }

  int define(const std::string& name, Definition d) {
    int v = sys_.cs.declare(name);
    sys_.defs.push_back(d);
    return v;
  }

  template <class Emit>
  int emit(const Definition& d, const std::string& name, Emit&& emit_constraint) {
    std::string key = def_key(d);
    if (hash_cons_)
      if (auto it = defs_index_.find(key); it != defs_index_.end()) return it->second;
    int v = define(name.empty() ? next_name("v") : name, d);
    emit_constraint(v);
    defs_index_[key] = v;
    return v;
  }

  bool hash_cons_;
  DefinedSystem sys_;
  int one_ = -1;
  int zero_ = -1;
  std::size_t counter_ = 0;
  std::unordered_map<std::string, int> defs_index_;
  std::unordered_map<std::string, int> consts_;
};

struct Fragment {
  DefinedSystem system;
  int output = -1;
};

/// Standalone constant chain for k. The shared zero variable of negative
/// constants is not counted towards the logarithmic size bound.
inline Fragment const_chain(const Integer& k, bool unary = false) {
  if (k == 0) throw InputError("const_chain requires k != 0");
  SystemBuilder b;
  int out = b.constant(k, unary);
  return {b.take(), out};
}

inline Fragment pow_tower_chain(int k, bool small) {
  if (k < 0) throw InputError("pow_tower_chain requires k >= 0");
  SystemBuilder b;
  int out = b.tower(k, small);
  return {b.take(), out};
}

/// Syntactic dedup: merges variables whose definitions are identical after
/// substituting already-merged operands. Free variables are never merged.
inline DefinedSystem dedup(const DefinedSystem& in) {
  using K = Definition::Kind;
  const std::size_t n = in.defs.size();
  std::vector<int> rep(n, -1);   // old index -> new index
  std::map<std::tuple<int, int, int>, int> seen;
  DefinedSystem out;
  // definitional constraint of each non-free variable (first one mentioning it as output)
  for (std::size_t i = 0; i < n; ++i) {
    Definition d = in.defs[i];
    if (d.l >= 0) d.l = rep[d.l];
    if (d.r >= 0) d.r = rep[d.r];
    if ((d.kind == K::Sum || d.kind == K::Product) && d.l > d.r) std::swap(d.l, d.r);
    if (d.kind != K::Free) {
      auto key = std::make_tuple(static_cast<int>(d.kind), d.l, d.r);
      if (auto it = seen.find(key); it != seen.end()) {
        rep[i] = it->second;
        continue;
      }
      seen[key] = static_cast<int>(out.defs.size());
    }
    rep[i] = out.cs.declare(in.cs.vars[i]);
    out.defs.push_back(d);
  }
  std::map<std::tuple<int, int, int, int>, bool> emitted;
  for (const auto& k : in.cs.constraints) {
    Constraint m{k.op, rep[k.a], k.b >= 0 ? rep[k.b] : -1, k.c >= 0 ? rep[k.c] : -1};
    if ((m.op == Op::Add || m.op == Op::Mul) && m.a > m.b) std::swap(m.a, m.b);
    auto key = std::make_tuple(static_cast<int>(m.op), m.a, m.b, m.c);
    if (emitted.count(key)) continue;
    emitted[key] = true;
    out.cs.push(m);
  }
  out.cs.distinct_promise = in.cs.distinct_promise;
  return out;
}

}  // namespace matroid_er
