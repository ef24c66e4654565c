#include "matroid_er/compiler.hpp"

#include <gtest/gtest.h>

#include "generators.hpp"

using namespace matroid_er;

namespace {

void expect_sizes(const Compilation& c) {
  EXPECT_EQ(c.cm.num_points(), expected_points(c));
  EXPECT_EQ(c.cm.num_lines(), expected_lines(c));
}

/// Random system over fresh variables that avoids forced coincidences.
ConstraintSystem random_system(std::mt19937_64& rng, int vars, int cons) {
  ConstraintSystem cs;
  for (int i = 0; i < vars; ++i) cs.declare("v" + std::to_string(i));
  for (int k = 0; k < cons; ++k) {
    int a = gen::uniform_int(rng, 0, vars - 1), b = gen::uniform_int(rng, 0, vars - 1);
    int c = gen::uniform_int(rng, 0, vars - 1);
    int kind = gen::uniform_int(rng, 0, 2);
    if (kind == 2) {
      cs.pos(a);
      continue;
    }
    if (c == a || c == b) continue;
    if (kind == 0) cs.add(a, b, c);
    else cs.mul(a, b, c);
  }
  return cs;
}

}  // namespace

TEST(Compiler, FrameOnlyIsDegenerate) {
  CompiledMatroid cm;
  EXPECT_EQ(cm.num_points(), 3u);
  EXPECT_EQ(cm.line_set().lines.size(), 1u);
  EXPECT_THROW(cm.matroid(), DegenerateError);
}

TEST(Compiler, SingleAdd) {
  auto c = compile(parse_system("VAR x\nVAR y\nVAR z\nADD x y z\n"));
  EXPECT_EQ(c.cm.num_points(), 3u + 3u + 4u);
  EXPECT_EQ(c.cm.num_lines(), 2u + 5u);
  expect_sizes(c);
  ASSERT_EQ(c.traces.size(), 1u);
  EXPECT_EQ(c.traces[0].kind, GadgetKind::Add);
  EXPECT_EQ(c.traces[0].constraint, 0);
  EXPECT_EQ(lineset_violation(c.cm.line_set()), std::nullopt);
  auto m = c.cm.matroid();
  EXPECT_EQ(m.size(), 10);
  EXPECT_EQ(m.rank(), 3);
}

TEST(Compiler, SingleMulAndPos) {
  auto c = compile(parse_system("VAR x\nVAR y\nVAR z\nMUL x y z\nPOS z\n"));
  EXPECT_EQ(c.emitted_arith, 1u);
  EXPECT_EQ(c.emitted_pos, 1u);
  expect_sizes(c);
  EXPECT_EQ(c.cm.num_points(), 3u + 3u + 4u + 38u);
  EXPECT_EQ(c.cm.num_lines(), 2u + 5u + 35u);
  // POS record followed by its 7 sub-gadgets
  ASSERT_EQ(c.traces.size(), 1u + 1u + 7u);
  EXPECT_EQ(c.traces[1].kind, GadgetKind::Pos);
  for (std::size_t i = 2; i < c.traces.size(); ++i) EXPECT_EQ(c.traces[i].parent, 1);
  EXPECT_EQ(c.traces[1].helpers.size(), 38u);
  EXPECT_EQ(c.traces[1].lines.size(), 35u);
}

TEST(Compiler, OneAliasesToFramePoint) {
  auto c = compile(parse_system("VAR u\nVAR x\nVAR y\nONE u\nADD u x y\n"));
  EXPECT_EQ(c.var_point[0], CompiledMatroid::kOne);
  EXPECT_EQ(c.traces.size(), 1u);
  EXPECT_EQ(c.traces[0].x, CompiledMatroid::kOne);
  expect_sizes(c);
  // 1 * x = y with x != y is a forced coincidence
  EXPECT_THROW(compile(parse_system("VAR u\nVAR x\nVAR y\nONE u\nMUL u x y\n")), CoincidenceError);
}

TEST(Compiler, TrivialGadgetsEmitNothing) {
  auto c = compile(parse_system("VAR u\nVAR x\nONE u\nMUL u x x\n"));
  EXPECT_EQ(c.traces.size(), 0u);
  EXPECT_EQ(c.cm.num_points(), 4u);
  // ADD x z x aliases z to 0
  auto d = compile(parse_system("VAR x\nVAR z\nADD x z x\n"));
  EXPECT_EQ(d.var_point[1], CompiledMatroid::kZero);
  EXPECT_EQ(d.traces.size(), 0u);
  expect_sizes(d);
}

TEST(Compiler, Coincidences) {
  EXPECT_THROW(compile(parse_system("VAR x\nMUL x x x\n")), CoincidenceError);
  EXPECT_THROW(compile(parse_system("VAR x\nVAR z\nONE x\nADD x z x\nONE z\n")), CoincidenceError);
  EXPECT_THROW(compile(parse_system("VAR x\nVAR z\nADD x z x\nPOS z\n")), CoincidenceError);
  // 0 * y = z with z a fresh point
  EXPECT_THROW(compile(parse_system("VAR x\nVAR y\nVAR z\nADD x y x\nMUL y z x\n")), CoincidenceError);
}

TEST(Compiler, RandomSystemsMatchClosedFormSizes) {
  std::mt19937_64 rng(42);
  int compiled = 0;
  for (int t = 0; t < 200; ++t) {
    auto cs = random_system(rng, gen::uniform_int(rng, 3, 7), gen::uniform_int(rng, 1, 6));
    try {
      auto c = compile(cs);
      expect_sizes(c);
      EXPECT_EQ(lineset_violation(c.cm.line_set()), std::nullopt);
      for (const auto& l : c.cm.lines()) EXPECT_TRUE(std::is_sorted(l.begin(), l.end()));
      ++compiled;
    } catch (const CoincidenceError&) {
    }
  }
  EXPECT_GT(compiled, 100);
}

TEST(Compiler, GadgetLinesMeetInAtMostOnePoint) {
  auto c = compile(parse_system("VAR x\nVAR y\nVAR z\nVAR w\nADD x y z\nMUL z z w\nPOS w\n"));
  const auto& lines = c.cm.lines();
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) EXPECT_LE(intersection_size(lines[i], lines[j]), 1u);
}
