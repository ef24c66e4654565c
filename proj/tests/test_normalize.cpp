#include "matroid_er/normalize.hpp"

#include <gtest/gtest.h>

using namespace matroid_er;

namespace {

SparsePolynomial var(int n, int i) { return SparsePolynomial::variable(n, i); }
SparsePolynomial cst(int n, long c) { return SparsePolynomial::constant(n, c); }

bool has_constraint(const ConstraintSystem& cs, Op op, int a, int b, int c) {
  return std::find(cs.constraints.begin(), cs.constraints.end(), Constraint{op, a, b, c}) != cs.constraints.end();
}

}  // namespace

TEST(Polynomial, ArithmeticAndPrinting) {
  auto x = var(2, 0), y = var(2, 1);
  auto p = square(x + y);
  EXPECT_EQ(p.to_string(), "x1^2+2*x1*x2+x2^2");
  EXPECT_EQ(p.degree(), 2);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((x - cst(2, 3)).to_string(), "x1-3");
  EXPECT_EQ(p.evaluate<Rational>({2, 3}), 25);
}

TEST(Polynomial, FormulaFrontEnd) {
  // not(x = 0) over one variable: x > 0 or -x > 0, each becoming x*w^2 - 1 = 0.
  auto eqs = to_equations(Formula::negate(Formula::eq(var(1, 0))), 1);
  EXPECT_EQ(eqs.arity, 3);
  ASSERT_EQ(eqs.equations.size(), 1u);
  // x = 2: pick w1 = 1/sqrt(2) -> irrational; instead check x = 1 with w1 = 1.
  EXPECT_EQ(eqs.equations[0].evaluate<Rational>({1, 1, 5}), 0);
  EXPECT_NE(eqs.equations[0].evaluate<Rational>({0, 1, 1}), 0);

  // x >= 0 and y = 1  ->  [x - w^2, y - 1]
  auto conj = to_equations(Formula::conj({Formula::ge(var(2, 0)), Formula::eq(var(2, 1) - cst(2, 1))}), 2);
  ASSERT_EQ(conj.equations.size(), 2u);
  EXPECT_EQ(conj.arity, 3);
  EXPECT_EQ(conj.equations[0].evaluate<Rational>({4, 1, 2}), 0);

  // (x = 0 and y = 0) or x = 1  ->  (x^2 + y^2)(x - 1)
  auto disj = to_equations(Formula::disj({Formula::conj({Formula::eq(var(2, 0)), Formula::eq(var(2, 1))}),
                                          Formula::eq(var(2, 0) - cst(2, 1))}),
                           2);
  ASSERT_EQ(disj.equations.size(), 1u);
  EXPECT_EQ(disj.equations[0], (square(var(2, 0)) + square(var(2, 1))) * (var(2, 0) - cst(2, 1)));
}

TEST(Flatten, SquareRootOfTwo) {
  auto ds = flatten_to_etrami({square(var(1, 0)) - cst(1, 2)}, 1);
  const auto& cs = ds.cs;
  int x = cs.index_of("x1");
  bool squares_x = std::any_of(cs.constraints.begin(), cs.constraints.end(), [&](const Constraint& k) {
    return k.op == Op::Mul && k.a == x && k.b == x;
  });
  EXPECT_TRUE(squares_x);
  EXPECT_EQ(cs.count(Op::Pos), 0u);
  auto vals = ds.extend<QuadraticNumber>({QuadraticNumber::sqrt_of(2)});
  EXPECT_TRUE(check_assignment(cs, vals).all_passed);
  auto bad = ds.extend<QuadraticNumber>({QuadraticNumber(make_rational(141, 100))});
  EXPECT_FALSE(check_assignment(cs, bad).all_passed);
}

TEST(Flatten, VariableMinusOneIsOne) {
  auto ds = flatten_to_etrami({var(1, 0) - cst(1, 1)}, 1);
  EXPECT_EQ(serialize(ds.cs), "VAR x1\nONE x1\n");
}

TEST(Flatten, ProjectionOntoInputs) {
  auto ds = flatten_to_etrami({var(2, 0) + var(2, 1), var(2, 0) - cst(2, 1)}, 2);
  EXPECT_TRUE(has_constraint(ds.cs, Op::One, 0, -1, -1));
  EXPECT_TRUE(check_assignment(ds.cs, ds.extend<Rational>({1, -1})).all_passed);
  EXPECT_FALSE(check_assignment(ds.cs, ds.extend<Rational>({1, -2})).all_passed);
  EXPECT_FALSE(check_assignment(ds.cs, ds.extend<Rational>({2, -2})).all_passed);
}

TEST(Feasibility, WorkedExpansion) {
  auto x = var(3, 0), y = var(3, 1), z = var(3, 2);
  auto r = to_feasibility({x + y - z}, 3);
  EXPECT_EQ(r.p, square(x) + cst(3, 2) * x * y - cst(3, 2) * x * z + square(y) - cst(3, 2) * y * z + square(z));
  EXPECT_EQ(r.p.to_string(), "x1^2+2*x1*x2-2*x1*x3+x2^2-2*x2*x3+x3^2");
  EXPECT_TRUE(to_feasibility({}, 3).p.is_zero());
  auto q = to_feasibility({x - cst(3, 1), x * y - z}, 3);
  EXPECT_EQ(q.p.degree(), 4);
  EXPECT_LE(q.p.max_abs_coefficient(), q.coefficient_bound);
  EXPECT_EQ(q.coefficient_bound, 36 * 27);
}

TEST(Feasibility, DuplicatesMergedAndBoundsEnforced) {
  auto x = var(1, 0);
  EXPECT_EQ(to_feasibility({x - cst(1, 1), x - cst(1, 1)}, 1).distinct_constraints, 1u);
  EXPECT_THROW(to_feasibility({cst(1, 7) * x - cst(1, 7)}, 1), BoundError);
  EXPECT_THROW(to_feasibility({x * x * x}, 1), BoundError);
}

TEST(StrictIneq, Params) {
  auto p = square(var(1, 0));
  auto si = to_strict_ineq(p);
  const auto& np = si.params;
  EXPECT_EQ(np.L, 5u);  // max(bit length 5, 5n = 5, 4)
  EXPECT_EQ(np.Lbar, 5u + 3u + 64u);
  EXPECT_EQ(np.delta_chain_k, np.Lbar + 5);
  // 5^8 = 390625 has 19 bits; 5^9 - 1 = 1953124 has 21 bits.
  EXPECT_EQ(np.R_chain_k, 19u);
  EXPECT_EQ(np.R_upper_k, 20u);
  // chains: delta tower (k+2) plus both R towers sharing the prefix, R and two slacks
  EXPECT_EQ(si.chains.cs.count(Op::Pos), 2u);
  EXPECT_TRUE(si.chains.cs.find("R").has_value());
}

TEST(StrictIneq, ZeroPolynomialIsTrivial) {
  auto si = to_strict_ineq(SparsePolynomial(1), make_rational(1, 16), Rational(100));
  auto ds = to_distinct(si);
  EXPECT_EQ(ds.cs.constraints.size(), 1u);
  EXPECT_TRUE(ds.cs.distinct_promise);
  auto vals = ds.extend<Rational>({make_rational(1, 3)});
  EXPECT_TRUE(check_assignment(ds.cs, vals).all_passed);
}

TEST(Distinct, SquareTestScale) {
  auto si = to_strict_ineq(square(var(1, 0)), make_rational(1, 16), Rational(100));
  auto ds = to_distinct(si);
  EXPECT_EQ(ds.cs.count(Op::Pos), 3u);
  auto vals = ds.extend<Rational>({make_rational(1, 10)});
  auto rep = check_assignment(ds.cs, vals);
  EXPECT_TRUE(rep.all_passed);
  EXPECT_TRUE(rep.distinct);
  EXPECT_FALSE(check_assignment(ds.cs, ds.extend<Rational>({Rational(1)})).all_passed);
  // monomial x^2 shared between P and X
  EXPECT_EQ(ds.cs.count(Op::Mul), 2u);  // x*x and the quotient for 1/16
}

TEST(Distinct, FullScaleStaysSymbolic) {
  auto p = square(var(2, 0) - var(2, 1));
  auto si = to_strict_ineq(p);
  auto ds = to_distinct(si);
  // delta tower (Lbar + 5 squarings) and R tower present as chains, polynomial size
  EXPECT_LT(ds.cs.constraints.size(), 400u);
  EXPECT_GE(ds.cs.count(Op::Mul), si.params.delta_chain_k + si.params.R_chain_k);
}

TEST(Distinct, Deterministic) {
  auto p = square(var(2, 0)) + cst(2, 3) * var(2, 0) * var(2, 1) - cst(2, 2);
  auto a = serialize(to_distinct(to_strict_ineq(p, make_rational(1, 16), Rational(100))).cs);
  auto b = serialize(to_distinct(to_strict_ineq(p, make_rational(1, 16), Rational(100))).cs);
  EXPECT_EQ(a, b);
}

TEST(Pipeline, SqrtTwoTransport) {
  auto etrami = flatten_to_etrami({square(var(1, 0)) - cst(1, 2)}, 1);
  auto sol = etrami.extend<QuadraticNumber>({QuadraticNumber::sqrt_of(2)});
  ASSERT_TRUE(check_assignment(etrami.cs, sol).all_passed);
  const int n = static_cast<int>(etrami.cs.size());
  auto feas = to_feasibility(constraint_polynomials(etrami.cs), n);
  EXPECT_EQ(sign(feas.p.evaluate(sol)), 0);
  auto si = to_strict_ineq(feas.p, make_rational(1, 16), Rational(100), etrami.cs.vars);
  auto ds = to_distinct(si);
  auto witness = find_distinct_witness(ds, sol);
  ASSERT_TRUE(witness.has_value());
  auto rep = check_assignment(ds.cs, *witness);
  EXPECT_TRUE(rep.all_passed);
  EXPECT_TRUE(rep.distinct);
}
