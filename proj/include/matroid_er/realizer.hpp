#pragma once

// Forward direction: from a satisfying assignment to exact coordinates for
// every point of a compiled matroid. Gadget helpers are sampled at random and
// resampled whenever they create an incidence the registry does not declare.

#include "matroid_er/compiler.hpp"
#include "matroid_er/four_squares.hpp"
#include "matroid_er/incidence.hpp"
#include "matroid_er/projective.hpp"
#include "matroid_er/verify.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <stdexcept>
#include <string>
#include <vector>

namespace matroid_er {

/// A gadget cannot be drawn over the reals at all (e.g. POS on a value <= 0).
class GeometricInfeasibility : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every resample of some helper produced an undeclared incidence.
class RetryExhausted : public std::runtime_error {
 public:
  RetryExhausted(const std::string& what, std::array<int, 3> triple)
      : std::runtime_error(what), triple_(triple) {}
  const std::array<int, 3>& triple() const { return triple_; }

 private:
  std::array<int, 3> triple_;
};

struct RealizeOptions {
  std::uint64_t seed = 1;
  int max_retries = 64;    // per gadget
  int max_restarts = 8;    // global restarts with a derived seed
  long direction_bound = 1000000;
  /// Pinned helper directions (a, b) per trace index, for reproducing a
  /// documented construction. Unpinned traces sample at random.
  std::map<int, std::pair<Point3, Point3>> fixed_directions;
};

struct Realization {
  PointConfig config;
  std::uint64_t seed = 0;
  std::vector<int> resamples;  // per trace: rejected attempts
  int restarts = 0;

  std::size_t total_resamples() const {
    std::size_t s = 0;
    for (int r : resamples) s += static_cast<std::size_t>(r);
    return s;
  }
};

namespace detail {

inline IntPoint cross_int(const IntPoint& p, const IntPoint& q) {
  return {p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]};
}

inline bool make_primitive(IntPoint& v) {
  Integer g = 0;
  for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) return false;
  for (auto& c : v) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  for (const auto& c : v) {
    if (c == 0) continue;
    if (c < 0)
      for (auto& d : v) d = -d;
    break;
  }
  return true;
}

/// Incremental placement with exact incidence bookkeeping. A new point is
/// rejected when it coincides with a placed point or lies on a line through
/// two placed points that the registry does not declare.
class Placer {
 public:
  explicit Placer(const CompiledMatroid& cm)
      : cm_(cm), coords_(cm.num_points()), exact_(cm.num_points()), mod_(cm.num_points()) {}

  bool placed(int id) const { return coords_.at(id).has_value(); }
  Point3 at(int id) const {
    if (!placed(id)) throw std::logic_error("point " + cm_.label(id) + " used before placement");
    return to_point(*coords_[id]);
  }
  std::size_t mark() const { return order_.size(); }
  void rollback(std::size_t m) {
    while (order_.size() > m) {
      int id = order_.back();
      order_.pop_back();
      index_.erase(*coords_[id]);
      coords_[id].reset();
    }
  }

  /// Places id at p; on failure returns the offending triple and leaves
  /// the state unchanged.
  std::optional<std::array<int, 3>> place(int id, const Point3& p) {
    IntPoint v = primitive(p);
    if (auto it = index_.find(v); it != index_.end()) return std::array<int, 3>{id, it->second, it->second};
    exact_[id] = v;
    mod_[id] = mod_point(v);
    Pencil pencil(v, mod_[id]);
    pencil.build(order_, exact_, mod_);
    for (const auto& cls : pencil.classes()) {
      if (cls.size() < 2) continue;
      const int lq = cm_.line_of(id, cls[0]);
      for (std::size_t k = 1; k < cls.size(); ++k)
        if (lq < 0 || lq != cm_.line_of(id, cls[k])) return std::array<int, 3>{id, cls[0], cls[k]};
    }
    coords_[id] = v;
    index_.emplace(v, id);
    order_.push_back(id);
    return std::nullopt;
  }

  const CompiledMatroid& cm() const { return cm_; }

 private:
  const CompiledMatroid& cm_;
  std::vector<std::optional<IntPoint>> coords_;
  std::vector<IntPoint> exact_;
  std::vector<ModVec> mod_;
  std::map<IntPoint, int> index_;
  std::vector<int> order_;
};

struct AttemptFailure {
  std::array<int, 3> triple;
};

class RealizerRun {
 public:
  RealizerRun(const CompiledMatroid& cm, const std::vector<GadgetTrace>& traces, const RealizeOptions& opt,
              std::uint64_t seed)
      : cm_(cm), traces_(traces), opt_(opt), rng_(seed), placer_(cm), resamples_(traces.size(), 0) {}

  Placer& placer() { return placer_; }
  std::vector<int>& resamples() { return resamples_; }
  std::mt19937_64& rng() { return rng_; }

  void must_place(int id, const Point3& p) {
    if (auto bad = placer_.place(id, p))
      throw RetryExhausted("preset point " + cm_.label(id) + " creates an undeclared incidence with " +
                               cm_.label((*bad)[1]) + ", " + cm_.label((*bad)[2]),
                           *bad);
  }

  Point3 random_direction() {
    std::uniform_int_distribution<long> d(-opt_.direction_bound, opt_.direction_bound);
    for (;;) {
      long p = d(rng_), q = d(rng_);
      if (p != 0 || q != 0) return make_point(p, q, 0);
    }
  }

  void run_trace(int t) {
    const auto& tr = traces_.at(t);
    switch (tr.kind) {
      case GadgetKind::Add:
      case GadgetKind::Mul: run_arith(t); break;
      case GadgetKind::Pos: run_pos(t); break;
      case GadgetKind::Orient: run_orient(t); break;
    }
  }

  /// Samples c2 at a random positive value in the frame (a, c, inf(a, c));
  /// d and the new point at infinity follow from line(c2, e). The POS
  /// children then certify the side conditions.
  void run_orient(int t) {
    namespace oa = orient_arg;
    const auto& tr = traces_.at(t);
    const auto& g = tr.args;
    if (g.size() != static_cast<std::size_t>(oa::kCount)) throw std::logic_error("malformed orientation record");
    std::vector<int> children;
    for (int k = t + 1; k < static_cast<int>(traces_.size()) && traces_[k].parent >= 0; ++k)
      if (traces_[k].parent == t) children.push_back(k);
    const Line3 at_infinity = make_point(0, 0, 1);
    std::uniform_int_distribution<long> num(1, 60), den(1, 20);
    std::array<int, 3> last{-1, -1, -1};
    for (int attempt = 0; attempt < opt_.max_retries; ++attempt) {
      const std::size_t mark = placer_.mark();
      auto retry = [&](std::array<int, 3> triple) {
        last = triple;
        placer_.rollback(mark);
        ++resamples_[t];
      };
      const Point3 A = placer_.at(g[oa::kA]), B = placer_.at(g[oa::kB]), C = placer_.at(g[oa::kC]),
                   E = placer_.at(g[oa::kE]);
      const Line3 ac = cross(A, C);
      if (!placer_.placed(g[oa::kInfAC]))
        if (auto bad = placer_.place(g[oa::kInfAC], cross(ac, at_infinity))) throw exhausted(t, *bad);
      LineFrame frame(A, C, placer_.at(g[oa::kInfAC]));
      const Point3 c2 = frame.point_at(make_rational(num(rng_), den(rng_)));
      if (auto bad = placer_.place(g[oa::kC2], c2)) {
        retry(*bad);
        continue;
      }
      const Line3 spine = cross(c2, E);
      const Point3 d = cross(spine, cross(A, B));
      if (is_zero(d)) {
        retry({g[oa::kD], g[oa::kC2], g[oa::kE]});
        continue;
      }
      if (auto bad = placer_.place(g[oa::kD], d)) {
        retry(*bad);
        continue;
      }
      if (auto bad = placer_.place(g[oa::kInfNew], cross(spine, at_infinity))) {
        retry(*bad);
        continue;
      }
      try {
        for (int k : children) run_trace(k);
        return;
      } catch (const RetryExhausted& e) {
        retry(e.triple());
      }
    }
    throw exhausted(t, last);
  }

  void run_arith(int t) {
    std::array<int, 3> last{-1, -1, -1};
    for (int attempt = 0; attempt < opt_.max_retries; ++attempt) {
      auto fail = try_arith(t);
      if (!fail) return;
      last = fail->triple;
      ++resamples_[t];
    }
    throw exhausted(t, last);
  }

  void run_pos(int t) {
    const auto& tr = traces_.at(t);
    const FrameInfo f = cm_.frames().at(tr.frame);
    LineFrame frame(placer_.at(f.zero), placer_.at(f.one), placer_.at(f.inf));
    auto value = frame.value_of(placer_.at(tr.x));
    if (!value) throw GeometricInfeasibility("POS argument sits at the frame's infinity");
    if (*value <= 0)
      throw GeometricInfeasibility("POS on " + to_string(*value) + ": a value <= 0 is not a sum of real squares");
    std::vector<int> subs;
    for (int k = t + 1; k < static_cast<int>(traces_.size()) && traces_[k].parent == t; ++k) subs.push_back(k);
    std::array<int, 3> last{-1, -1, -1};
    for (int attempt = 0; attempt < opt_.max_retries; ++attempt) {
      const std::size_t mark = placer_.mark();
      try {
        auto roots = positive_four_squares(*value, rng_);
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
          if (auto bad = placer_.place(tr.helpers[i], frame.point_at((*roots)[i]))) {
            last = *bad;
            ok = false;
          }
        if (ok) {
          for (int k : subs) run_arith(k);
          return;
        }
      } catch (const RetryExhausted& e) {
        last = e.triple();
      }
      placer_.rollback(mark);
      ++resamples_[t];
    }
    throw exhausted(t, last);
  }

 private:
  RetryExhausted exhausted(int t, const std::array<int, 3>& triple) const {
    auto name = [&](int p) { return p < 0 ? std::string("?") : cm_.label(p); };
    return RetryExhausted("gadget " + std::to_string(t) + " (" + gadget_name(traces_[t].kind) + "): " +
                              std::to_string(opt_.max_retries) + " attempts failed; last undeclared incidence " +
                              name(triple[0]) + ", " + name(triple[1]) + ", " + name(triple[2]),
                          triple);
  }

  static std::optional<Point3> meet(const Line3& l, const Line3& m) {
    Point3 p = cross(l, m);
    if (is_zero(p)) return std::nullopt;
    return p;
  }
  static std::optional<Line3> join(const Point3& p, const Point3& q) {
    Line3 l = cross(p, q);
    if (is_zero(l)) return std::nullopt;
    return l;
  }

  std::optional<AttemptFailure> try_arith(int t) {
    const auto& tr = traces_.at(t);
    const FrameInfo f = cm_.frames().at(tr.frame);
    const int a = tr.helpers[0], b = tr.helpers[1], c = tr.helpers[2], d = tr.helpers[3];
    const bool is_mul = tr.kind == GadgetKind::Mul;
    const std::size_t mark = placer_.mark();
    auto fail = [&](std::array<int, 3> triple) {
      placer_.rollback(mark);
      return AttemptFailure{triple};
    };
    Point3 pa, pb;
    if (auto it = opt_.fixed_directions.find(t); it != opt_.fixed_directions.end()) {
      pa = it->second.first;
      pb = it->second.second;
    } else {
      pa = random_direction();
      pb = random_direction();
    }
    if (auto bad = placer_.place(a, pa)) return fail(*bad);
    if (auto bad = placer_.place(b, pb)) return fail(*bad);
    const Point3 Z = placer_.at(f.zero), X = placer_.at(tr.x), Y = placer_.at(tr.y);
    const Point3 pivot = is_mul ? placer_.at(f.one) : Z;     // line through b and c
    const Point3 second = is_mul ? Z : placer_.at(f.inf);    // line through c and d
    std::optional<Point3> pc, pd, pz;
    if (auto l1 = join(pivot, pb), l2 = join(X, pa); l1 && l2) pc = meet(*l1, *l2);
    if (!pc) return fail({c, a, b});
    if (auto bad = placer_.place(c, *pc)) return fail(*bad);
    if (auto l1 = join(second, *pc), l2 = join(Y, pb); l1 && l2) pd = meet(*l1, *l2);
    if (!pd) return fail({d, c, b});
    if (auto bad = placer_.place(d, *pd)) return fail(*bad);
    const Line3 frame_line = cross(Z, placer_.at(f.inf));
    if (auto l = join(pa, *pd)) pz = meet(*l, frame_line);
    if (!pz) return fail({tr.z, a, d});
    if (placer_.placed(tr.z)) {
      if (!proportional(*pz, placer_.at(tr.z)))
        throw InputError("gadget " + std::to_string(t) + " (" + gadget_name(tr.kind) + ") computes a point other than " +
                         cm_.label(tr.z) + "; the values do not satisfy the constraint");
    } else if (auto bad = placer_.place(tr.z, *pz)) {
      return fail(*bad);
    }
    return std::nullopt;
  }

  const CompiledMatroid& cm_;
  const std::vector<GadgetTrace>& traces_;
  const RealizeOptions& opt_;
  std::mt19937_64 rng_;
  Placer placer_;
  std::vector<int> resamples_;
};

inline PointConfig export_points(const CompiledMatroid& cm, Placer& placer) {
  PointConfig pc;
  for (int p = 0; p < static_cast<int>(cm.num_points()); ++p) {
    if (!placer.placed(p)) throw std::logic_error("point " + cm.label(p) + " was never placed");
    pc.points.push_back(normalized(placer.at(p)));
    pc.labels.push_back(cm.label(p));
  }
  return pc;
}

}  // namespace detail

/// Realizes the registry from preset coordinates (frame points, variables).
/// `extra` runs after presets and before gadgets, for layers that place
/// further points themselves. Restarts with derived seeds on exhaustion.
inline Realization realize_points(const CompiledMatroid& cm, const std::vector<GadgetTrace>& traces,
                                  const std::map<int, Point3>& preset, const RealizeOptions& opt = {},
                                  const std::function<void(detail::RealizerRun&)>& extra = {}) {
  std::optional<RetryExhausted> last;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    const std::uint64_t seed = opt.seed + static_cast<std::uint64_t>(restart) * 0x9E3779B97F4A7C15ULL;
    detail::RealizerRun run(cm, traces, opt, seed);
    try {
      for (const auto& [id, p] : preset) run.must_place(id, p);
      if (extra) extra(run);
      for (int t = 0; t < static_cast<int>(traces.size()); ++t)
        if (traces[t].parent < 0) run.run_trace(t);
      Realization r{detail::export_points(cm, run.placer()), opt.seed, run.resamples(), restart};
      return r;
    } catch (const RetryExhausted& e) {
      last = e;
    }
  }
  throw RetryExhausted(std::string(last->what()) + " (after " + std::to_string(opt.max_restarts) + " restarts)",
                       last->triple());
}

/// Standard-frame placement of values on the measurement line.
inline Point3 value_point(const Rational& v) { return make_point(v, Rational(0), Rational(1)); }

inline std::map<int, Point3> standard_frame() {
  return {{CompiledMatroid::kZero, make_point(0, 0, 1)},
          {CompiledMatroid::kOne, make_point(1, 0, 1)},
          {CompiledMatroid::kInf, make_point(1, 0, 0)}};
}

/// Checks the assignment (satisfying, pairwise distinct), puts variable x at
/// (a(x), 0, 1) and runs every gadget.
inline Realization realize(const Compilation& c, const ConstraintSystem& cs, const Assignment& a,
                           const RealizeOptions& opt = {}) {
  auto report = check_assignment(cs, a);
  if (!report.all_passed) {
    std::string which;
    for (std::size_t i = 0; i < report.passed.size(); ++i)
      if (!report.passed[i]) which += (which.empty() ? "" : ", ") + std::to_string(i + 1);
    throw InputError("assignment violates constraint(s) " + which);
  }
  if (!report.distinct) throw InputError("assignment values are not pairwise distinct");
  if (c.traces.empty()) throw InputError("nothing to realize: the system compiles to the frame alone");
  auto preset = standard_frame();
  const auto values = values_in_order(cs, a);
  for (std::size_t v = 0; v < values.size(); ++v) {
    int p = c.var_point.at(v);
    if (p > CompiledMatroid::kInf) preset[p] = value_point(values[v]);
  }
  return realize_points(c.cm, c.traces, preset, opt);
}

/// Exact check against an explicit matroid (bases compared via the verifier).
inline bool check_realization(const Realization& r, const Matroid& m) {
  if (static_cast<int>(r.config.size()) != m.size())
    throw InputError("realization has " + std::to_string(r.config.size()) + " points, matroid has " +
                     std::to_string(m.size()) + " elements");
  return verify_representation(m, r.config.to_matrix()).verdict == Verdict::Represents;
}

/// Same answer as the matroid check for the simple rank-3 matroid of a line
/// set, in about O(n^2): every pencil of lines through a point must group
/// exactly the declared lines, and no two points may coincide.
inline bool check_realization(const Realization& r, const LineSet& ls) {
  const int n = static_cast<int>(r.config.size());
  if (n != ls.n) throw InputError("realization size does not match the line set");
  std::vector<IntPoint> exact;
  std::vector<detail::ModVec> mod;
  for (const auto& p : r.config.points) {
    exact.push_back(primitive(p));
    mod.push_back(detail::mod_point(exact.back()));
  }
  if (std::set<IntPoint>(exact.begin(), exact.end()).size() != exact.size()) return false;
  std::unordered_map<std::uint64_t, int> pair_line;
  auto key = [](int p, int q) {
    if (p > q) std::swap(p, q);
    return (static_cast<std::uint64_t>(p) << 32) | static_cast<std::uint32_t>(q);
  };
  for (int i = 0; i < static_cast<int>(ls.lines.size()); ++i)
    for (std::size_t a = 0; a < ls.lines[i].size(); ++a)
      for (std::size_t b = a + 1; b < ls.lines[i].size(); ++b) pair_line[key(ls.lines[i][a], ls.lines[i][b])] = i;
  auto line_of = [&](int p, int q) {
    auto it = pair_line.find(key(p, q));
    return it == pair_line.end() ? -1 : it->second;
  };
  std::vector<int> others;
  for (int p = 0; p < n; ++p) {
    others.clear();
    for (int q = 0; q < n; ++q)
      if (q != p) others.push_back(q);
    detail::Pencil pencil(exact[p], mod[p]);
    pencil.build(others, exact, mod);
    for (const auto& cls : pencil.classes()) {
      const int id = line_of(p, cls[0]);
      if (cls.size() == 1) {
        if (id >= 0) return false;  // a declared line through p lost its other points
        continue;
      }
      if (id < 0 || cls.size() + 1 != ls.lines[id].size()) return false;
      for (int q : cls)
        if (line_of(p, q) != id) return false;
    }
  }
  return true;
}

/// Value of a point on the measurement line: the cross-ratio (x, 1; 0, inf)
/// with respect to the realized frame points.
inline Rational read_value(const Realization& r, int pt) {
  const auto& P = r.config.points;
  if (pt < 0 || pt >= static_cast<int>(P.size())) throw InputError("no such point");
  if (pt == CompiledMatroid::kInf) throw InputError("the infinity point has no finite value");
  LineFrame frame(P[CompiledMatroid::kZero], P[CompiledMatroid::kOne], P[CompiledMatroid::kInf]);
  if (!on_line(P[pt], frame.line())) throw InputError("point " + r.config.labels[pt] + " is not on the measurement line");
  auto v = frame.value_of(P[pt]);
  if (!v) throw InputError("point coincides with the infinity point");
  return *v;
}

/// Applies a rational projective map sending `l` to z = 0. Points allowed on
/// l (by index) go to infinity; any other point on l is an error. Finite
/// images are rescaled to z = 1, so points on the far side of l swap sides.
inline Realization send_line_to_infinity(const Realization& r, const Line3& l, const std::vector<int>& on_line_ok = {}) {
  std::optional<Point3> reference;
  for (const auto& p : r.config.points)
    if (dot(l, p) != 0) {
      reference = p;
      break;
    }
  auto t = line_to_infinity_transform(l, reference);
  Realization out = r;
  for (std::size_t i = 0; i < r.config.size(); ++i) {
    const auto& p = r.config.points[i];
    if (dot(l, p) == 0 && std::find(on_line_ok.begin(), on_line_ok.end(), static_cast<int>(i)) == on_line_ok.end())
      throw InputError("point " + r.config.labels[i] + " lies on the line sent to infinity");
    out.config.points[i] = normalized(t.apply(p));
  }
  return out;
}

}  // namespace matroid_er
