// Acceptance run: one [PASS]/[FAIL] line per criterion with its tolerance,
// time budget and measured runtime. Exit status is the number of failures.

#include "matroid_er.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "generators.hpp"

using namespace matroid_er;

namespace {

/// Thrown by require() to fail the current criterion with a reason.
struct Failed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failed(what);
}

struct Criterion {
  int id;
  std::string name;
  std::string tolerance;
  double budget_s;
  std::function<std::string()> body;  // returns a short summary on success
};

SparsePolynomial var(int n, int i) { return SparsePolynomial::variable(n, i); }
SparsePolynomial cst(int n, long c) { return SparsePolynomial::constant(n, c); }

int ceil_log2(const Integer& k) {
  Integer m = abs(k);
  if (m <= 1) return 0;
  Integer t = m - 1;
  return static_cast<int>(mpz_sizeinbase(t.get_mpz_t(), 2));
}

// 1 ------------------------------------------------------------------------

std::string fano_fidelity() {
  auto m = builtin::fano();
  require(m.bases().size() == 28, "fano has " + std::to_string(m.bases().size()) + " bases");
  require(validate_axioms(m).ok, "fano fails the exchange axiom");
  auto o = verify_representation(m, builtin::fano_binary_matrix());
  require(o.verdict == Verdict::ExtraBasis, "verdict " + to_string(o.verdict));
  auto extra = o.extra_set();
  auto lines = builtin::fano_lines();
  for (auto& l : lines) l = canonical_set(l);
  require(std::find(lines.begin(), lines.end(), extra) != lines.end(), "witness is not a Fano line");
  require(!brute_force_equal(m, builtin::fano_binary_matrix()), "brute force disagrees");
  std::ostringstream os;
  os << "28 bases, witness {" << extra[0] << "," << extra[1] << "," << extra[2] << "}";
  return os.str();
}

// 2 ------------------------------------------------------------------------

std::string verifier_oracle() {
  std::mt19937_64 rng(20240601);
  int instances = 0, negatives = 0, mutated = 0;
  for (int t = 0; instances < 1200; ++t) {
    const int n = gen::uniform_int(rng, 1, 7);
    const auto rows = static_cast<std::size_t>(gen::uniform_int(rng, 1, 3));
    auto a = gen::integer_matrix(rng, rows, n, -5, 5);
    auto m = matroid_from_matrix(a);
    std::optional<Matroid> candidate;
    switch (t % 4) {
      case 0: candidate = m; break;
      case 1: candidate = matroid_from_matrix(gen::integer_matrix(rng, rows, n, -5, 5)); break;
      case 2: {  // drop a basis
        if (m.bases().size() < 2) break;
        auto bases = m.bases();
        bases.erase(bases.begin() + gen::uniform_int(rng, 0, static_cast<int>(bases.size()) - 1));
        candidate = Matroid(n, m.rank(), bases);
        ++mutated;
        break;
      }
      case 3: {  // add a dependent r-set as a basis
        std::vector<ElementSet> extra;
        for_each_subset(n, m.rank(), [&](const ElementSet& s) {
          if (!m.is_basis(s)) extra.push_back(s);
          return true;
        });
        if (extra.empty()) break;
        auto bases = m.bases();
        bases.push_back(extra[gen::uniform_int(rng, 0, static_cast<int>(extra.size()) - 1)]);
        candidate = Matroid(n, m.rank(), bases);
        ++mutated;
        break;
      }
    }
    if (!candidate) continue;
    ++instances;
    const bool fast = verify_representation(*candidate, a).verdict == Verdict::Represents;
    const bool slow = brute_force_equal(*candidate, a);
    if (!slow) ++negatives;
    require(fast == slow, "disagreement on instance " + std::to_string(instances));
  }
  return std::to_string(instances) + " instances, " + std::to_string(negatives) + " negatives (" +
         std::to_string(mutated) + " mutated)";
}

// 3 ------------------------------------------------------------------------

Assignment xyz(const Rational& x, const Rational& y, const Rational& z) { return {{"x", x}, {"y", y}, {"z", z}}; }

std::string gadget_geometry() {
  const char* kAdd = "VAR x\nVAR y\nVAR z\nADD x y z\n";
  const char* kMul = "VAR x\nVAR y\nVAR z\nMUL x y z\n";
  {
    RealizeOptions worked;
    worked.fixed_directions[0] = {make_point(1, 1, 0), make_point(0, 1, 0)};
    auto cs = parse_system(kAdd);
    auto c = compile(cs);
    auto r = realize(c, cs, xyz(2, 3, 5), worked);
    const auto& P = r.config.points;
    require(P[8] == make_point(0, -2, 1) && P[9] == make_point(3, -2, 1) && P[5] == make_point(5, 0, 1),
            "worked addition helpers differ");
    require(read_value(r, c.var_point[2]) == 5, "worked addition does not read 5");
    auto csm = parse_system(kMul);
    auto cm = compile(csm);
    auto rm = realize(cm, csm, xyz(2, 3, 6), worked);
    require(rm.config.points[8] == make_point(1, -1, 1) && rm.config.points[9] == make_point(3, -3, 1),
            "worked multiplication helpers differ");
    require(read_value(rm, cm.var_point[2]) == 6, "worked multiplication does not read 6");
  }
  std::mt19937_64 rng(77);
  auto value = [&] { return make_rational(gen::uniform_int(rng, -120, 120), gen::uniform_int(rng, 1, 6)); };
  for (int t = 0; t < 50; ++t) {
    const bool mul = t % 2 == 1;
    Rational x, y, z;
    do {
      x = value();
      y = value();
      z = mul ? Rational(x * y) : Rational(x + y);
    } while (x == y || x == z || y == z || x == 0 || y == 0 || z == 0 || x == 1 || y == 1 || z == 1 ||
             abs(z) > 20);
    auto cs = parse_system(mul ? kMul : kAdd);
    auto c = compile(cs);
    RealizeOptions opt;
    opt.seed = 1000 + t;
    auto r = realize(c, cs, xyz(x, y, z), opt);
    require(check_realization(r, c.cm.line_set()), "random gadget " + std::to_string(t) + " not a realization");
    require(read_value(r, c.var_point[0]) == x && read_value(r, c.var_point[1]) == y &&
                read_value(r, c.var_point[2]) == z,
            "random gadget " + std::to_string(t) + " reads back wrong values");
  }
  return "worked 2+3=5, 2*3=6 exact; 50 random gadgets exact";
}

// 4 ------------------------------------------------------------------------

std::string strict_inequality() {
  auto build = [](const Rational& x, CompiledMatroid& cm, std::vector<GadgetTrace>& traces) {
    auto preset = standard_frame();
    int p = CompiledMatroid::kOne;
    if (x != 1) {
      p = cm.add_point({Role::Variable, "x", 0, -1, "fixed"});
      cm.add_to_line(CompiledMatroid::kEll, p);
      preset[p] = value_point(x);
    }
    emit_pos(cm, traces, p);
    return std::make_pair(p, preset);
  };
  for (auto x : {make_rational(1, 4), Rational(1), Rational(9)}) {
    CompiledMatroid cm;
    std::vector<GadgetTrace> traces;
    auto [p, preset] = build(x, cm, traces);
    auto r = realize_points(cm, traces, preset);
    require(check_realization(r, cm.line_set()), "POS(" + x.get_str() + ") realization invalid");
    require(read_value(r, p) == x, "POS(" + x.get_str() + ") moved its input");
  }
  for (auto x : {Rational(-1), make_rational(-1, 2)}) {
    CompiledMatroid cm;
    std::vector<GadgetTrace> traces;
    auto [p, preset] = build(x, cm, traces);
    bool infeasible = false;
    try {
      realize_points(cm, traces, preset);
    } catch (const GeometricInfeasibility&) {
      infeasible = true;
    }
    require(infeasible, "POS(" + x.get_str() + ") was not reported infeasible");
  }
  return "{1/4, 1, 9} realized; {-1, -1/2} geometric infeasibility";
}

// 5 ------------------------------------------------------------------------

struct PolySystem {
  std::string name;
  int n;
  std::vector<SparsePolynomial> eqs;
  std::vector<QuadraticNumber> solution;
};

std::vector<PolySystem> transport_systems() {
  using Q = QuadraticNumber;
  const Rational half = make_rational(1, 2);
  return {
      {"x^2=2", 1, {var(1, 0) * var(1, 0) - cst(1, 2)}, {Q::sqrt_of(2)}},
      {"x+y=1, xy=-1", 2, {var(2, 0) + var(2, 1) - cst(2, 1), var(2, 0) * var(2, 1) + cst(2, 1)},
       {Q(half, half, 5), Q(half, -half, 5)}},
      {"2x=1", 1, {cst(1, 2) * var(1, 0) - cst(1, 1)}, {Q(half)}},
      {"x^2=x+1", 1, {var(1, 0) * var(1, 0) - var(1, 0) - cst(1, 1)}, {Q(half, half, 5)}},
      {"x^2+y^2=1, x=y", 2, {var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1) - cst(2, 1), var(2, 0) - var(2, 1)},
       {Q(0, half, 2), Q(0, half, 2)}},
      {"x=2, xy=1", 2, {var(2, 0) - cst(2, 2), var(2, 0) * var(2, 1) - cst(2, 1)}, {Q(2), Q(half)}},
      {"x^2=3, y=x+1", 2, {var(2, 0) * var(2, 0) - cst(2, 3), var(2, 1) - var(2, 0) - cst(2, 1)},
       {Q::sqrt_of(3), Q(1, 1, 3)}},
      {"x^3=2x", 1, {var(1, 0) * var(1, 0) * var(1, 0) - cst(1, 2) * var(1, 0)}, {Q::sqrt_of(2)}},
      {"x^2+y^2=3, y=1", 2, {var(2, 0) * var(2, 0) + var(2, 1) * var(2, 1) - cst(2, 3), var(2, 1) - cst(2, 1)},
       {Q::sqrt_of(2), Q(1)}},
      {"x^2=2y, y=2", 2, {var(2, 0) * var(2, 0) - cst(2, 2) * var(2, 1), var(2, 1) - cst(2, 2)}, {Q(2), Q(2)}},
  };
}

std::string pipeline_transport() {
  const Rational delta = make_rational(1, 16), R = 100;
  int done = 0;
  for (const auto& sys : transport_systems()) {
    const std::string tag = "[" + sys.name + "] ";
    for (const auto& e : sys.eqs) require(sign(e.evaluate(sys.solution)) == 0, tag + "bad known solution");
    auto etrami = flatten_to_etrami(sys.eqs, sys.n);
    auto sol = etrami.extend<QuadraticNumber>(sys.solution);
    require(check_assignment(etrami.cs, sol).all_passed, tag + "flattened system rejects the solution");
    const int N = static_cast<int>(etrami.cs.size());
    FeasibilityResult feas;
    try {
      feas = to_feasibility(constraint_polynomials(etrami.cs), N);
    } catch (const BoundError& e) {
      throw Failed(tag + e.what());
    }
    require(feas.p.max_abs_coefficient() <= 36 * Integer(N) * N * N, tag + "coefficient above 36n^3");
    require(sign(feas.p.evaluate(sol)) == 0, tag + "feasibility polynomial nonzero at the solution");
    auto si = to_strict_ineq(feas.p, delta, R, etrami.cs.vars);
    auto ds = to_distinct(si);
    auto witness = find_distinct_witness(ds, sol);
    require(witness.has_value(), tag + "no distinct witness near the transported solution");
    auto rep = check_assignment(ds.cs, *witness);
    require(rep.all_passed && rep.distinct, tag + "check_assignment fails on the transported solution");
    ++done;
  }
  return std::to_string(done) + " systems transported; all coefficients within 36n^3";
}

// 6 ------------------------------------------------------------------------

Rational fragment_value(const Fragment& f) {
  auto x = f.system.extend<Rational>({});
  require(check_assignment(f.system.cs, x).all_passed, "chain does not satisfy its own constraints");
  return x[f.output];
}

std::string chain_sizes() {
  std::vector<long> ks{1, 2, 3, 7, 8, 9, 1023, 1024, 1025, 65535, 999999, 1000000};
  std::mt19937_64 rng(6);
  for (int i = 0; i < 400; ++i) ks.push_back(std::uniform_int_distribution<long>(1, 1000000)(rng));
  std::size_t worst_slack = 1000;
  for (long k0 : ks)
    for (long k : {k0, -k0}) {
      auto f = const_chain(k);
      std::size_t size = f.system.cs.constraints.size();
      if (k < 0) --size;  // the shared zero is materialized once per system, not per constant
      const auto bound = static_cast<std::size_t>(2 * ceil_log2(k) + 2);
      require(size <= bound, "const_chain(" + std::to_string(k) + ") has " + std::to_string(size) + " constraints");
      worst_slack = std::min(worst_slack, bound - size);
      require(fragment_value(f) == k, "const_chain(" + std::to_string(k) + ") has the wrong value");
    }
  for (int k = 0; k <= 6; ++k) {
    auto f = pow_tower_chain(k, false);
    require(f.system.cs.constraints.size() == static_cast<std::size_t>(k + 2),
            "pow_tower_chain(" + std::to_string(k) + ") size");
    require(fragment_value(f) == Rational(Integer(1) << (1U << k)), "pow_tower_chain(" + std::to_string(k) + ") value");
  }
  require(fragment_value(pow_tower_chain(2, false)) == 16, "pow_tower_chain(2) != 16");
  return std::to_string(2 * ks.size()) + " constants within 2ceil(log2|k|)+2 (min slack " + std::to_string(worst_slack) +
         "); towers k<=6 exact, k=2 -> 16";
}

// 7 ------------------------------------------------------------------------

struct DistinctCase {
  const char* system;
  const char* assignment;
};

std::string end_to_end() {
  const std::vector<DistinctCase> cases{
      {"VAR x\nVAR y\nVAR z\nVAR w\nADD x y z\nMUL x z w\nPOS y\nDISTINCT\n", "x 2\ny 1/3\nz 7/3\nw 14/3\n"},
      {"VAR x\nVAR s\nVAR u\nVAR t\nMUL x x s\nONE u\nADD s u t\nPOS t\nDISTINCT\n", "x 3\ns 9\nu 1\nt 10\n"},
      {"VAR a\nVAR b\nVAR c\nVAR d\nVAR e\nVAR f\nADD a b c\nADD c d e\nMUL a e f\nPOS f\nPOS d\nDISTINCT\n",
       "a 2\nb 5\nc 7\nd 1/2\ne 15/2\nf 15\n"},
      {"VAR x\nVAR y\nVAR z\nVAR w\nVAR v\nMUL x y z\nMUL z z w\nADD w x v\nPOS v\nDISTINCT\n",
       "x -2\ny 3\nz -6\nw 36\nv 34\n"},
      {"VAR u\nVAR t\nVAR x\nVAR y\nVAR z\nVAR q\nVAR r\nVAR s\nONE u\nADD u u t\nMUL t x y\nADD y x z\nMUL z z q\n"
       "ADD q r s\nDISTINCT\n",
       "u 1\nt 2\nx 5\ny 10\nz 15\nq 225\nr -1/3\ns 674/3\n"},
  };
  std::size_t total_points = 0;
  int k = 0;
  for (const auto& dc : cases) {
    const std::string tag = "[case " + std::to_string(++k) + "] ";
    auto cs = parse_system(dc.system);
    auto a = parse_assignment(dc.assignment);
    require(cs.size() <= 8 && cs.constraints.size() <= 6, tag + "instance exceeds the size limits");
    auto rep = check_assignment(cs, a);
    require(rep.all_passed && rep.distinct, tag + "assignment is not a distinct solution");
    auto c = compile(cs);
    const std::size_t arith = cs.count(Op::Add) + cs.count(Op::Mul), pos = cs.count(Op::Pos);
    require(c.emitted_arith == arith && c.emitted_pos == pos, tag + "gadget count differs from the constraint count");
    require(c.traces.size() == arith + 8 * pos, tag + "trace count differs from arith + 8 pos");
    require(c.cm.num_points() == 3 + c.unaliased_vars + 4 * arith + 38 * pos, tag + "point count formula");
    require(c.cm.num_lines() == 2 + 5 * arith + 35 * pos, tag + "line count formula");
    RealizeOptions opt;
    opt.seed = 500 + k;
    auto r = realize(c, cs, a, opt);
    require(check_realization(r, c.cm.line_set()), tag + "check_realization is false");
    for (std::size_t v = 0; v < cs.size(); ++v)
      require(read_value(r, c.var_point[v]) == a.at(cs.vars[v]), tag + "variable " + cs.vars[v] + " moved");
    total_points += c.cm.num_points();
  }
  return "5 systems realized and checked, " + std::to_string(total_points) + " points; counts match the formulas";
}

// 8 ------------------------------------------------------------------------

PointConfig random_points(std::mt19937_64& rng, int n, bool degenerate) {
  auto coord = [&] { return make_rational(gen::uniform_int(rng, -30, 30), gen::uniform_int(rng, 1, 5)); };
  for (;;) {
    PointConfig pc;
    for (int i = 0; i < n; ++i) {
      pc.points.push_back(make_point(coord(), coord(), Rational(1)));
      pc.labels.push_back(std::to_string(i));
    }
    if (degenerate) {  // put the last point on the line through the first two
      Rational t = make_rational(gen::uniform_int(rng, 2, 9), gen::uniform_int(rng, 1, 3));
      const auto &p = pc.points[0], &q = pc.points[1];
      pc.points[n - 1] = make_point(p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]), Rational(1));
    }
    int zero_triples = 0;
    bool repeated = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        repeated = repeated || pc.points[i] == pc.points[j];
        for (int l = j + 1; l < n; ++l) zero_triples += collinear(pc.points[i], pc.points[j], pc.points[l]);
      }
    if (!repeated && zero_triples == (degenerate ? 1 : 0)) return pc;
  }
}

std::string order_types() {
  std::mt19937_64 rng(8);
  const int sizes[10] = {4, 4, 5, 5, 5, 5, 6, 6, 6, 6};
  std::size_t points = 0;
  for (int t = 0; t < 10; ++t) {
    const bool degenerate = t == 9;
    const std::string tag = "[chirotope " + std::to_string(t) + "] ";
    auto src = random_points(rng, sizes[t], degenerate);
    auto chi = chirotope_from_points(src);
    auto sim = simulate(chi);
    require(sim.cm.num_points() == sim.expected_points() && sim.cm.num_lines() == sim.expected_lines(),
            tag + "simulation sizes differ from the formulas");
    require(sim.collinear_triples == (degenerate ? 1u : 0u), tag + "collinear triple count");
    RealizeOptions opt;
    opt.seed = 40 + t;
    auto r = realize_order_type(sim, src, opt);
    require(check_realization(r, sim.cm.line_set()), tag + "check_realization is false");
    require(equal_up_to_sign(induced_chirotope(r, sim), chi), tag + "induced chirotope differs");
    points += sim.cm.num_points();
  }
  return "10 chirotopes (one with a collinear triple) recovered up to sign, " + std::to_string(points) + " points";
}

// 9 ------------------------------------------------------------------------

void check_properties(const Matroid& m, const std::vector<ElementSet>& subsets, const std::string& tag) {
  require(validate_axioms(m).ok, tag + "exchange axiom fails");
  require(bases_from_circuits(m.size(), circuits(m)) == m, tag + "circuits do not determine the bases");
  for (const auto& s : subsets) {
    const int rs = rank_of(m, s);
    require(rs <= static_cast<int>(s.size()) && rs <= m.rank(), tag + "rank bound");
    require(is_independent(m, s) == (rs == static_cast<int>(s.size())), tag + "independence differs from rank");
    for (Element e = 0; e < m.size(); ++e) {
      if (contains(s, e)) continue;
      ElementSet t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), e), e);
      const int rt = rank_of(m, t);
      require(rs <= rt && rt <= rs + 1, tag + "rank is not monotone with unit increase");
    }
  }
}

void check_line_form(const LineSet& ls, const Matroid& m, const std::string& tag) {
  for_each_subset(ls.n, 3, [&](const ElementSet& t) {
    bool in_line = std::any_of(ls.lines.begin(), ls.lines.end(), [&](const ElementSet& l) {
      return contains(l, t[0]) && contains(l, t[1]) && contains(l, t[2]);
    });
    require(m.is_basis(t) != in_line, tag + "from_lines basis/line mismatch");
    return true;
  });
}

std::string axiom_suite() {
  std::mt19937_64 rng(9);
  int matroids = 0;
  for (int n = 1; n <= 9; ++n) {
    auto all = gen::all_subsets(n);
    std::vector<ElementSet> subsets;
    if (n <= 8) {
      subsets = all;
    } else {
      for (int i = 0; i < 120; ++i) subsets.push_back(all[gen::uniform_int(rng, 0, static_cast<int>(all.size()) - 1)]);
    }
    const std::string tag = "[n=" + std::to_string(n) + "] ";
    for (int r = 0; r <= std::min(3, n); ++r, ++matroids) check_properties(uniform_matroid(r, n), subsets, tag);
    for (int i = 0; i < (n <= 8 ? 6 : 4); ++i, ++matroids) {
      auto a = gen::integer_matrix(rng, static_cast<std::size_t>(gen::uniform_int(rng, 1, 3)), n, -2, 2);
      check_properties(matroid_from_matrix(a), subsets, tag + "vector ");
    }
    if (n < 3) continue;
    for (int i = 0; i < (n <= 8 ? 6 : 4); ++i, ++matroids) {
      auto ls = gen::proper_line_set(rng, n, 8);
      auto m = from_lines(ls);
      check_line_form(ls, m, tag);
      check_properties(m, subsets, tag + "lines ");
    }
  }
  return std::to_string(matroids) + " matroids; all subsets for n<=8, 120 random subsets for n=9";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Fano instance fidelity", "exact", 1, fano_fidelity},
      {2, "Verifier oracle equivalence", "exact agreement", 60, verifier_oracle},
      {3, "Gadget geometry", "tolerance 0", 10, gadget_geometry},
      {4, "Strict-inequality gadget", "exact", 5, strict_inequality},
      {5, "Pipeline solution transport", "exact; delta=1/16, R=100", 10, pipeline_transport},
      {6, "Chain sizes", "exact", 5, chain_sizes},
      {7, "End-to-end forward direction", "exact counts", 30, end_to_end},
      {8, "Rank-3 order-type simulation", "equal up to global sign", 60, order_types},
      {9, "Axiom/property suite", "exact", 60, axiom_suite},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = true;
    const auto start = std::chrono::steady_clock::now();
    try {
      detail = c.body();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs >= c.budget_s) {
      ok = false;
      detail += "; over the time budget";
    }
    failures += ok ? 0 : 1;
    std::printf("[%s] %d. %s | %s | %.3f s (budget < %g s) | %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                c.tolerance.c_str(), secs, c.budget_s, detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
