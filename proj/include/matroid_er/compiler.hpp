#pragma once

// von Staudt gadgets: ADD and MUL over a frame (0, 1, inf) with helpers a, b
// on the line at infinity and c, d off it; POS as a sum of four squares.

#include "matroid_er/compiled.hpp"
#include "matroid_er/etr.hpp"

#include <numeric>
#include <string>
#include <vector>

namespace matroid_er {

enum class GadgetKind { Add, Mul, Pos, Orient };

inline const char* gadget_name(GadgetKind k) {
  switch (k) {
    case GadgetKind::Add: return "ADD";
    case GadgetKind::Mul: return "MUL";
    case GadgetKind::Pos: return "POS";
    case GadgetKind::Orient: return "ORIENT";
  }
  return "?";
}

/// One emitted gadget, in construction order. Sub-gadgets of a POS record
/// follow it and point back through `parent`.
struct GadgetTrace {
  GadgetKind kind = GadgetKind::Add;
  int constraint = -1;  // index into the source system, -1 for internal gadgets
  int frame = 0;
  int x = -1, y = -1, z = -1;  // point ids: inputs x, y and output z (POS uses x)
  std::vector<int> helpers;    // ADD/MUL: a, b, c, d.  POS: r1..r4, s1..s4, p1, p2
  std::vector<int> lines;
  int parent = -1;
  std::vector<int> args;  // kind-specific extra point ids (ORIENT, see orient_arg)
};

/// Layout of GadgetTrace::args for ORIENT records: the triple {a, b, e} is
/// forced to orient like (same = 1) or against (same = 0) the reference
/// triple {a, b, c}. Slot kA holds the pivot (a or b, whichever is not
/// collinear with c and e). c2 sits on line(pivot, c) on c's side of the
/// pivot, d on line(a, b), and c2, d, e span a new line whose point at
/// infinity is inf_new.
namespace orient_arg {
inline constexpr int kA = 0, kB = 1, kC = 2, kE = 3, kC2 = 4, kD = 5, kInfAC = 6, kInfNew = 7, kSame = 8;
inline constexpr int kCount = 9;
}  // namespace orient_arg

struct Compilation {
  CompiledMatroid cm;
  std::vector<GadgetTrace> traces;
  std::vector<int> var_point;  // variable index -> point id
  std::size_t emitted_arith = 0;  // top-level ADD/MUL gadgets actually emitted
  std::size_t emitted_pos = 0;
  std::size_t unaliased_vars = 0;
};

namespace detail {

inline void require_on_frame_line(const CompiledMatroid& cm, const FrameInfo& f, int p) {
  if (!cm.on_line(f.line, p)) throw InputError("gadget argument " + cm.label(p) + " is not on the frame line");
}

inline int new_helper(CompiledMatroid& cm, int gadget, const std::string& name, const std::string& freedom) {
  return cm.add_point({Role::Helper, name + "@" + std::to_string(gadget), -1, gadget, freedom});
}

template <bool IsMul>
int emit_arith(CompiledMatroid& cm, std::vector<GadgetTrace>& traces, int frame, int x, int y, int z,
               int constraint, int parent) {
  const FrameInfo f = cm.frames().at(frame);
  require_on_frame_line(cm, f, x);
  require_on_frame_line(cm, f, y);
  require_on_frame_line(cm, f, z);
  auto expect = [&](int want, const char* why) {
    if (z != want) throw CoincidenceError(std::string(why) + ": output " + cm.label(z) + " must be " + cm.label(want));
    return -1;
  };
  if constexpr (IsMul) {
    if (x == f.zero || y == f.zero) return expect(f.zero, "0*y = 0");
    if (x == f.one) return expect(y, "1*y = y");
    if (y == f.one) return expect(x, "x*1 = x");
  } else {
    if (x == f.zero) return expect(y, "0+y = y");
    if (y == f.zero) return expect(x, "x+0 = x");
  }
  const int id = static_cast<int>(traces.size());
  GadgetTrace t{IsMul ? GadgetKind::Mul : GadgetKind::Add, constraint, frame, x, y, z, {}, {}, parent, {}};
  int a = new_helper(cm, id, "a", "free on line at infinity");
  int b = new_helper(cm, id, "b", "free on line at infinity");
  int c = new_helper(cm, id, "c", "determined by a, b");
  int d = new_helper(cm, id, "d", "determined by a, b");
  cm.add_to_line(CompiledMatroid::kEllInf, a);
  cm.add_to_line(CompiledMatroid::kEllInf, b);
  t.helpers = {a, b, c, d};
  if constexpr (IsMul) {
    t.lines = {cm.declare_line({f.one, b, c}), cm.declare_line({x, a, c}), cm.declare_line({f.zero, c, d}),
               cm.declare_line({b, y, d}), cm.declare_line({a, d, z})};
  } else {
    t.lines = {cm.declare_line({f.zero, b, c}), cm.declare_line({x, a, c}), cm.declare_line({f.inf, c, d}),
               cm.declare_line({y, b, d}), cm.declare_line({a, d, z})};
  }
  traces.push_back(std::move(t));
  return id;
}

}  // namespace detail

/// x + y = z in the given frame. Returns the trace index, or -1 when the
/// relation is trivial (an input is 0) and z is already the right point.
inline int emit_add(CompiledMatroid& cm, std::vector<GadgetTrace>& traces, int x, int y, int z, int frame = 0,
                    int constraint = -1, int parent = -1) {
  return detail::emit_arith<false>(cm, traces, frame, x, y, z, constraint, parent);
}

/// x * y = z in the given frame; -1 when an input is 0 or 1.
inline int emit_mul(CompiledMatroid& cm, std::vector<GadgetTrace>& traces, int x, int y, int z, int frame = 0,
                    int constraint = -1, int parent = -1) {
  return detail::emit_arith<true>(cm, traces, frame, x, y, z, constraint, parent);
}

/// x > 0 in the given frame, certified as x = r1^2 + r2^2 + r3^2 + r4^2 with
/// all roots, squares and partial sums as fresh points on the frame line.
/// Since x is a point distinct from 0, the certificate forces x > 0, and any
/// positive rational has such a representation.
inline int emit_pos(CompiledMatroid& cm, std::vector<GadgetTrace>& traces, int x, int frame = 0,
                    int constraint = -1) {
  const FrameInfo f = cm.frames().at(frame);
  detail::require_on_frame_line(cm, f, x);
  if (x == f.zero) throw CoincidenceError("POS on the zero point: 0 > 0 is false");
  const int id = static_cast<int>(traces.size());
  traces.push_back({GadgetKind::Pos, constraint, frame, x, -1, -1, {}, {}, -1, {}});
  std::vector<int> roots, squares, partial;
  for (int i = 0; i < 4; ++i) {
    roots.push_back(detail::new_helper(cm, id, "r" + std::to_string(i + 1), "free on frame line (sum of squares fixed)"));
    cm.add_to_line(f.line, roots.back());
  }
  for (int i = 0; i < 4; ++i) {
    squares.push_back(detail::new_helper(cm, id, "s" + std::to_string(i + 1), "determined by root"));
    cm.add_to_line(f.line, squares.back());
  }
  for (int i = 0; i < 2; ++i) {
    partial.push_back(detail::new_helper(cm, id, "p" + std::to_string(i + 1), "determined by squares"));
    cm.add_to_line(f.line, partial.back());
  }
  for (int i = 0; i < 4; ++i) emit_mul(cm, traces, roots[i], roots[i], squares[i], frame, -1, id);
  emit_add(cm, traces, squares[0], squares[1], partial[0], frame, -1, id);
  emit_add(cm, traces, partial[0], squares[2], partial[1], frame, -1, id);
  emit_add(cm, traces, partial[1], squares[3], x, frame, -1, id);
  auto& t = traces[id];
  t.helpers = roots;
  t.helpers.insert(t.helpers.end(), squares.begin(), squares.end());
  t.helpers.insert(t.helpers.end(), partial.begin(), partial.end());
  for (std::size_t k = id + 1; k < traces.size(); ++k) {
    t.lines.insert(t.lines.end(), traces[k].lines.begin(), traces[k].lines.end());
    for (int h : traces[k].helpers) t.helpers.push_back(h);
  }
  return id;
}

namespace detail {

/// Union-find over variables plus two sentinels for the points 0 and 1.
class AliasClasses {
 public:
  explicit AliasClasses(std::size_t n) : parent_(n + 2) { std::iota(parent_.begin(), parent_.end(), 0); }
  int zero() const { return static_cast<int>(parent_.size()) - 2; }
  int one() const { return static_cast<int>(parent_.size()) - 1; }
  int find(int v) {
    while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
    return v;
  }
  bool unite(int u, int v) {
    u = find(u);
    v = find(v);
    if (u == v) return false;
    if (u < v) std::swap(u, v);  // sentinels have the largest ids and stay roots
    parent_[v] = u;
    if (find(zero()) == find(one())) throw CoincidenceError("constraints force 0 = 1");
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace detail

/// Lowers a constraint system gadget by gadget. ONE(x) aliases x to the point
/// 1; ADD(p, q, r) with p = r (or q = r) aliases the other summand to 0.
/// Every other variable gets its own point on the measurement line.
inline Compilation compile(const ConstraintSystem& cs) {
  const std::size_t n = cs.size();
  detail::AliasClasses uf(n);
  for (const auto& k : cs.constraints)
    if (k.op == Op::One) uf.unite(k.a, uf.one());
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& k : cs.constraints) {
      if (k.op != Op::Add) continue;
      if (uf.find(k.a) == uf.find(k.c)) changed |= uf.unite(k.b, uf.zero());
      if (uf.find(k.b) == uf.find(k.c)) changed |= uf.unite(k.a, uf.zero());
    }
  }
  Compilation out;
  auto& cm = out.cm;
  out.var_point.assign(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    int cls = uf.find(static_cast<int>(v));
    if (cls == uf.zero()) out.var_point[v] = CompiledMatroid::kZero;
    else if (cls == uf.one()) out.var_point[v] = CompiledMatroid::kOne;
    else {
      int p = cm.add_point({Role::Variable, cs.vars[v], static_cast<int>(v), -1, "fixed by assignment"});
      cm.add_to_line(CompiledMatroid::kEll, p);
      out.var_point[v] = p;
      ++out.unaliased_vars;
    }
  }
  for (std::size_t i = 0; i < cs.constraints.size(); ++i) {
    const auto& k = cs.constraints[i];
    const int ci = static_cast<int>(i);
    int t = -1;
    switch (k.op) {
      case Op::One: continue;
      case Op::Add:
        t = emit_add(cm, out.traces, out.var_point[k.a], out.var_point[k.b], out.var_point[k.c], 0, ci);
        if (t >= 0) ++out.emitted_arith;
        break;
      case Op::Mul:
        t = emit_mul(cm, out.traces, out.var_point[k.a], out.var_point[k.b], out.var_point[k.c], 0, ci);
        if (t >= 0) ++out.emitted_arith;
        break;
      case Op::Pos:
        t = emit_pos(cm, out.traces, out.var_point[k.a], 0, ci);
        if (t >= 0) ++out.emitted_pos;
        break;
    }
  }
  return out;
}

/// Closed-form sizes: 3 + vars + 4k + 38 pos points, 2 + 5k + 35 pos lines.
inline std::size_t expected_points(const Compilation& c) {
  return 3 + c.unaliased_vars + 4 * c.emitted_arith + 38 * c.emitted_pos;
}
inline std::size_t expected_lines(const Compilation& c) { return 2 + 5 * c.emitted_arith + 35 * c.emitted_pos; }

}  // namespace matroid_er
