#pragma once

// Rank-3 order types: chirotopes, orientation from points, and a matroid
// that simulates a chirotope (any valid representation of the matroid, i.e.
// with the distinguished line at infinity, induces the order type up to one
// global reflection).

#include "matroid_er/realizer.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace matroid_er {

/// Orientation signs on triples of distinct elements, stored on sorted
/// triples; access with any argument order applies the permutation sign.
class Chirotope {
 public:
  explicit Chirotope(int n = 0) : n_(n), signs_(static_cast<std::size_t>(n) * n * n, 0) {
    if (n < 0) throw InputError("negative element count");
  }

  int size() const { return n_; }

  int operator()(int i, int j, int k) const {
    int s = sort3(i, j, k);
    return s * signs_[index(i, j, k)];
  }

  void set(int i, int j, int k, int s) {
    if (s < -1 || s > 1) throw InputError("chirotope sign must be -1, 0 or 1");
    int p = sort3(i, j, k);
    signs_[index(i, j, k)] = static_cast<signed char>(p * s);
  }

  bool degenerate() const {
    for (auto s : signs_)
      if (s != 0) return false;
    return true;
  }

  Chirotope negated() const {
    Chirotope c = *this;
    for (auto& s : c.signs_) s = static_cast<signed char>(-s);
    return c;
  }

  bool operator==(const Chirotope& o) const { return n_ == o.n_ && signs_ == o.signs_; }

  template <class F>
  void for_each_triple(F&& f) const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        for (int k = j + 1; k < n_; ++k) f(i, j, k, static_cast<int>(signs_[index(i, j, k)]));
  }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }

  /// Sorts in place and returns the permutation sign.
  int sort3(int& i, int& j, int& k) const {
    if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_) throw InputError("chirotope index out of range");
    if (i == j || j == k || i == k) throw InputError("chirotope arguments must be distinct");
    int s = 1;
    if (i > j) std::swap(i, j), s = -s;
    if (j > k) std::swap(j, k), s = -s;
    if (i > j) std::swap(i, j), s = -s;
    return s;
  }

  int n_;
  std::vector<signed char> signs_;
};

inline bool equal_up_to_sign(const Chirotope& a, const Chirotope& b) { return a == b || a == b.negated(); }

/// chi(p, q, r) = sign det[p q r] with every point scaled to z = 1.
inline Chirotope chirotope_from_points(const PointConfig& pc) {
  std::vector<Point3> pts;
  for (const auto& p : pc.points) {
    if (p[2] == 0) throw InputError("orientation is undefined for a point at infinity");
    pts.push_back(normalized(p));
  }
  Chirotope c(static_cast<int>(pts.size()));
  for (int i = 0; i < c.size(); ++i)
    for (int j = i + 1; j < c.size(); ++j)
      for (int k = j + 1; k < c.size(); ++k) c.set(i, j, k, sign(det3(pts[i], pts[j], pts[k])));
  return c;
}

/// Output of simulate: registry, trace and bookkeeping for the size check.
struct Simulation {
  CompiledMatroid cm;
  std::vector<GadgetTrace> traces;
  std::vector<int> element_point;  // element -> point id
  std::vector<int> order;          // insertion order; the first three are independent
  std::size_t collinear_triples = 0;
  std::size_t same_side = 0, opposite_side = 0;
  std::size_t line_infinities = 0;  // points at infinity created for reference lines
  std::size_t new_lines = 0;        // element lines declared for zero triples or helpers

  /// POS gadgets: one for c' plus one (same side) or two (opposite side).
  std::size_t pos_gadgets() const { return 2 * same_side + 3 * opposite_side; }

  /// Closed form for the registry size: frame, elements, three helpers per
  /// oriented triple, the shared points at infinity and 38 per POS gadget.
  std::size_t expected_points() const {
    return 3 + element_point.size() + 3 * (same_side + opposite_side) + line_infinities + 38 * pos_gadgets();
  }
  std::size_t expected_lines() const { return 2 + new_lines + (same_side + opposite_side) + 35 * pos_gadgets(); }
};

namespace detail {

class SimulationBuilder {
 public:
  explicit SimulationBuilder(const Chirotope& chi) : chi_(chi) {}

  Simulation build() {
    const int n = chi_.size();
    std::array<int, 3> base{-1, -1, -1};
    chi_.for_each_triple([&](int i, int j, int k, int s) {
      if (s != 0 && base[0] < 0) base = {i, j, k};
    });
    if (base[0] < 0)
      throw DegenerateError("every triple of the chirotope is collinear; its matroid has rank below 3");
    auto& cm = out_.cm;
    for (int e = 0; e < n; ++e)
      out_.element_point.push_back(cm.add_point({Role::Variable, "e" + std::to_string(e + 1), e, -1, "source point"}));
    out_.order = {base[0], base[1], base[2]};
    for (int e = 0; e < n; ++e)
      if (e != base[0] && e != base[1] && e != base[2]) out_.order.push_back(e);
    for (std::size_t i = 3; i < out_.order.size(); ++i) add_element(i);
    return std::move(out_);
  }

 private:
  int pt(int e) const { return out_.element_point[e]; }

  /// Registered line through two element points, declaring {p, q, extra} if none.
  int line_through(int p, int q, int extra) {
    auto& cm = out_.cm;
    int l = cm.line_of(p, q);
    if (l >= 0) {
      cm.add_to_line(l, extra);
      return l;
    }
    ++out_.new_lines;
    return cm.declare_line({p, q, extra});
  }

  void add_element(std::size_t pos) {
    auto& cm = out_.cm;
    const int e = out_.order[pos];
    std::vector<std::pair<int, int>> oriented;
    for (std::size_t i = 0; i < pos; ++i)
      for (std::size_t j = i + 1; j < pos; ++j) {
        int a = std::min(out_.order[i], out_.order[j]), b = std::max(out_.order[i], out_.order[j]);
        if (chi_(a, b, e) != 0) {
          oriented.emplace_back(a, b);
          continue;
        }
        ++out_.collinear_triples;
        // collinear triple: grow the existing line or declare it
        if (int l = cm.line_of(pt(a), pt(b)); l >= 0) cm.add_to_line(l, pt(e));
        else if (int l2 = cm.line_of(pt(a), pt(e)); l2 >= 0) cm.add_to_line(l2, pt(b));
        else if (int l3 = cm.line_of(pt(b), pt(e)); l3 >= 0) cm.add_to_line(l3, pt(a));
        else {
          cm.declare_line({pt(a), pt(b), pt(e)});
          ++out_.new_lines;
        }
      }
    std::sort(oriented.begin(), oriented.end());
    for (auto [a, b] : oriented) orient(a, b, e, pos);
  }

  /// Forces {a, b, e} to orient like or against the lexicographically
  /// smallest earlier reference triple {a, b, c}. The helper c' moves on the
  /// line from a pivot (a, or b when e lies on line(a, c)) towards c.
  void orient(int a, int b, int e, std::size_t pos) {
    auto& cm = out_.cm;
    int c = -1, pivot = -1, other = -1;
    std::vector<int> earlier(out_.order.begin(), out_.order.begin() + static_cast<long>(pos));
    std::sort(earlier.begin(), earlier.end());
    for (int x : earlier) {
      if (x == a || x == b || chi_(a, b, x) == 0) continue;
      if (chi_(a, x, e) != 0) std::tie(c, pivot, other) = std::make_tuple(x, a, b);
      else if (chi_(b, x, e) != 0) std::tie(c, pivot, other) = std::make_tuple(x, b, a);
      else continue;  // e coincides with x
      break;
    }
    if (c < 0) throw DegenerateError("element " + std::to_string(e) + " has no reference triple; repeated point?");
    const bool same = chi_(a, b, e) == chi_(a, b, c);
    const int id = static_cast<int>(out_.traces.size());
    const std::string tag = "@" + std::to_string(id);
    auto helper = [&](const std::string& name, const std::string& freedom) {
      return cm.add_point({Role::Helper, name + tag, -1, id, freedom});
    };
    const int c2 = helper("c'", "free on line(pivot,c), c's side of the pivot");
    const int l_ac = line_through(pt(pivot), pt(c), c2);
    int inf_ac = -1;
    if (auto it = line_inf_.find(l_ac); it != line_inf_.end()) {
      inf_ac = it->second;
    } else {
      inf_ac = cm.add_point({Role::Helper, "inf(e" + std::to_string(pivot + 1) + ",e" + std::to_string(c + 1) + ")", -1, id,
                             "determined by line"});
      cm.add_to_line(l_ac, inf_ac);
      cm.add_to_line(CompiledMatroid::kEllInf, inf_ac);
      line_inf_[l_ac] = inf_ac;
      ++out_.line_infinities;
    }
    const int d = helper("d", "determined by c' and e");
    line_through(pt(a), pt(b), d);
    const int inf_new = helper("inf'", "determined by c' and e");
    const int spine = cm.declare_line({c2, d, pt(e)});
    cm.add_to_line(spine, inf_new);
    cm.add_to_line(CompiledMatroid::kEllInf, inf_new);
    (same ? out_.same_side : out_.opposite_side) += 1;

    GadgetTrace t;
    t.kind = GadgetKind::Orient;
    t.frame = -1;
    t.x = pt(e);
    t.y = pt(a);
    t.z = pt(b);
    t.helpers = {c2, d, inf_new};
    t.lines = {spine};
    t.args = {pt(pivot), pt(other), pt(c), pt(e), c2, d, inf_ac, inf_new, same ? 1 : 0};
    out_.traces.push_back(std::move(t));

    auto pos_in = [&](int zero, int one, int x) {
      int f = cm.add_frame({zero, one, inf_new, spine});
      int p = emit_pos(cm, out_.traces, x, f);
      out_.traces[p].parent = id;
    };
    // c' on c's side of the pivot, read in the frame (pivot, c, inf(pivot, c))
    {
      int f = cm.add_frame({pt(pivot), pt(c), inf_ac, l_ac});
      int p = emit_pos(cm, out_.traces, c2, f);
      out_.traces[p].parent = id;
    }
    if (same) {
      pos_in(d, c2, pt(e));  // e on c''s side of d
    } else {
      pos_in(pt(e), c2, d);  // d strictly between e and c'
      pos_in(c2, pt(e), d);
    }
  }

  const Chirotope& chi_;
  Simulation out_;
  std::map<int, int> line_inf_;
};

}  // namespace detail

/// Builds M_3 .. M_n: elements are added one at a time; collinear triples
/// become registered lines and every other new triple gets an orientation
/// gadget against a reference triple on the same pair.
inline Simulation simulate(const Chirotope& chi) { return detail::SimulationBuilder(chi).build(); }

namespace detail {

/// Random orientation-preserving projective map that is finite on the
/// given points, written on homogeneous coordinates.
inline ProjectiveTransform random_positive_map(const std::vector<Point3>& pts, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> small(-6, 6), tilt(-2, 2);
  Rational bound = 1;
  for (const auto& p : pts)
    for (int i = 0; i < 2; ++i) bound = std::max(bound, Rational(abs(p[i])));
  for (;;) {
    long w1 = tilt(rng), w2 = tilt(rng);
    Rational s = 2 * bound * (std::labs(w1) + std::labs(w2)) + 1;
    s = Rational(s.get_num() / s.get_den() + 1);
    ProjectiveTransform t{{make_point(small(rng), small(rng), small(rng)), make_point(small(rng), small(rng), small(rng)),
                           make_point(Rational(w1), Rational(w2), s)}};
    if (t.determinant() > 0) return t;
  }
}

}  // namespace detail

/// Realizes a simulation from source coordinates for the elements (finite
/// points). The source is moved by a random orientation-preserving
/// projective map first, so that parallel lines of the source do not share
/// a point at infinity; restarts draw a new map.
inline Realization realize_order_type(const Simulation& sim, const PointConfig& source, const RealizeOptions& opt = {}) {
  if (source.size() != sim.element_point.size())
    throw InputError("source has " + std::to_string(source.size()) + " points, order type has " +
                     std::to_string(sim.element_point.size()));
  std::vector<Point3> pts;
  for (const auto& p : source.points) {
    if (p[2] == 0) throw InputError("source points must be finite");
    pts.push_back(normalized(p));
  }
  std::mt19937_64 rng(opt.seed ^ 0x5DEECE66DULL);
  RealizeOptions inner = opt;
  inner.max_restarts = 0;
  std::optional<RetryExhausted> last;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    auto map = detail::random_positive_map(pts, rng);
    auto preset = standard_frame();
    for (std::size_t e = 0; e < pts.size(); ++e) preset[sim.element_point[e]] = normalized(map.apply(pts[e]));
    inner.seed = opt.seed + static_cast<std::uint64_t>(restart);
    try {
      auto r = realize_points(sim.cm, sim.traces, preset, inner);
      r.restarts = restart;
      r.seed = opt.seed;
      return r;
    } catch (const RetryExhausted& e) {
      last = e;
    }
  }
  throw *last;
}

/// Orientation of the element points of a realization. Valid realizations
/// keep every element finite.
inline Chirotope induced_chirotope(const Realization& r, const Simulation& sim) {
  PointConfig pc;
  for (int p : sim.element_point) {
    pc.points.push_back(r.config.points.at(p));
    pc.labels.push_back(r.config.labels.at(p));
  }
  return chirotope_from_points(pc);
}

}  // namespace matroid_er
