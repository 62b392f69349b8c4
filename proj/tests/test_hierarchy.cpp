#include <gtest/gtest.h>

#include <cmath>

#include "teig/examples.hpp"
#include "teig/hierarchy.hpp"

using namespace teig;

namespace {

std::vector<double> Values(const Spectrum& s) {
  std::vector<double> v;
  for (const auto& p : s.pairs) v.push_back(p.lambda);
  return v;
}

void ExpectValues(const Spectrum& s, const std::vector<double>& want, double tol) {
  const std::vector<double> got = Values(s);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

}  // namespace

TEST(Hierarchy, ConfigValidation) {
  SolverConfig cfg;
  EXPECT_NO_THROW(cfg.Validate(2));
  cfg.n_max = 1;
  EXPECT_THROW(cfg.Validate(2), std::invalid_argument);
  cfg = {};
  cfg.delta0 = 0.0;
  EXPECT_THROW(cfg.Validate(2), std::invalid_argument);
  EXPECT_EQ(SolverConfig{}.MaxOrder(2), 5);
}

TEST(Hierarchy, LargestOfDiagonalQuartic) {
  const BuiltinExample ex = MakeExample("ex4_1");
  EigenSolver solver(ex.tensor, MakeBTensor(BKind::Z, 3, 4), SolverConfig{});
  const EigenSolver::LevelResult r = solver.Largest();
  ASSERT_EQ(r.kind, EigenSolver::LevelResult::Kind::Flat) << r.message;
  EXPECT_NEAR(r.value, 3.0, 1e-6);
  ASSERT_FALSE(r.atoms.empty());
  EXPECT_NEAR(std::abs(r.atoms[0].u[2]), 1.0, 1e-6);
}

TEST(Hierarchy, NextBelowMinimumIsInfeasible) {
  const BuiltinExample ex = MakeExample("ex4_1");
  EigenSolver solver(ex.tensor, MakeBTensor(BKind::Z, 3, 4), SolverConfig{});
  const EigenSolver::LevelResult r = solver.Next(6.0 / 11.0, 0.05);
  EXPECT_EQ(r.kind, EigenSolver::LevelResult::Kind::Infeasible) << r.message;
}

TEST(Hierarchy, FullSpectrumOfTwoVariableQuartic) {
  const BuiltinExample ex = MakeExample("ex4_4", 2.0);
  const Spectrum s = AllEigenpairs(ex.tensor, MakeBTensor(BKind::Z, 2, 4));
  EXPECT_TRUE(s.complete);
  ExpectValues(s, {4.125, 3.0, 1.0}, 1e-6);
  EXPECT_EQ(s.pairs[0].multiplicity, 2);
  EXPECT_EQ(s.pairs[1].multiplicity, 1);
  for (const auto& p : s.pairs) EXPECT_LE(p.residual, 1e-6);
  EXPECT_GT(s.relaxations, 0);
  EXPECT_GT(s.sdp_iterations, 0);
  EXPECT_EQ(s.diagnostics.size(), s.pairs.size());
}

TEST(Hierarchy, BandRestrictsSpectrum) {
  const BuiltinExample ex = MakeExample("ex4_1");
  const Spectrum s = ConstrainedEigenpairs(ex.tensor, MakeBTensor(BKind::Z, 3, 4), 1.0, 2.5);
  EXPECT_TRUE(s.complete);
  ExpectValues(s, {2.0, 1.2, 1.0}, 1e-6);
  EXPECT_THROW(ConstrainedEigenpairs(ex.tensor, MakeBTensor(BKind::Z, 3, 4), 2.0, 1.0), std::invalid_argument);
}

TEST(Hierarchy, ZeroTensorHasEigenvalueZero) {
  const SymmetricTensor zero = SymmetricTensor::FromEntries(3, 4, {});
  const Spectrum s = AllEigenpairs(zero, MakeBTensor(BKind::Z, 3, 4));
  EXPECT_TRUE(s.complete);
  ASSERT_EQ(s.pairs.size(), 1u);
  EXPECT_NEAR(s.pairs[0].lambda, 0.0, 1e-6);
  EXPECT_TRUE(s.pairs[0].recovered);
  ASSERT_FALSE(s.pairs[0].vectors.empty());
  double norm = 0.0;
  for (double v : s.pairs[0].vectors[0]) norm += v * v;
  EXPECT_NEAR(norm, 1.0, 1e-6);
}

TEST(Hierarchy, ScalingTensorScalesEigenvalues) {
  const BuiltinExample ex = MakeExample("ex4_4", 0.0);
  const SymmetricTensor b = MakeBTensor(BKind::Z, 2, 4);
  const Spectrum s1 = AllEigenpairs(ex.tensor, b);
  const Spectrum s2 = AllEigenpairs(ex.tensor.scaled(2.0), b);
  ASSERT_EQ(s1.pairs.size(), s2.pairs.size());
  for (std::size_t i = 0; i < s1.pairs.size(); ++i) {
    EXPECT_NEAR(s2.pairs[i].lambda, 2.0 * s1.pairs[i].lambda, 1e-6);
    EXPECT_EQ(s2.pairs[i].multiplicity, s1.pairs[i].multiplicity);
  }
}

TEST(Hierarchy, OddOrderSpectrumIsPaired) {
  const BuiltinExample ex = MakeExample("ex4_9");
  const Spectrum s = AllEigenpairs(ex.tensor, MakeBTensor(BKind::Z, 3, 3));
  EXPECT_TRUE(s.complete);
  ExpectValues(s, {2.0, -2.0}, 1e-6);
  for (const auto& p : s.pairs) EXPECT_TRUE(p.paired);
  const std::vector<EigenPair> reps = NonnegativeRepresentatives(s);
  ASSERT_EQ(reps.size(), 1u);
  EXPECT_NEAR(reps[0].lambda, 2.0, 1e-6);
}

TEST(Hierarchy, SignConventions) {
  EXPECT_TRUE(SignFlipsEigenvalue(3, 2));
  EXPECT_FALSE(SignFlipsEigenvalue(4, 2));
  EXPECT_TRUE(SignKeepsEigenvalue(4, 2));
  EXPECT_FALSE(SignKeepsEigenvalue(3, 3));
  EXPECT_EQ(CanonicalSign({-1.0, 0.5}), (std::vector<double>{1.0, -0.5}));
  EXPECT_EQ(CanonicalSign({0.5, 0.25}), (std::vector<double>{0.5, 0.25}));
  EXPECT_EQ(CanonicalSign({-1.0, 1.0}), (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(CanonicalSign({0.0, 1.0, -1.0}), (std::vector<double>{0.0, 1.0, -1.0}));
}

TEST(Hierarchy, EigenvalueCountBound) {
  EXPECT_EQ(CartwrightSturmfelsBound(3, 3), 7);
  EXPECT_EQ(CartwrightSturmfelsBound(4, 3), 13);
  EXPECT_EQ(CartwrightSturmfelsBound(4, 2), 4);
  EXPECT_EQ(CartwrightSturmfelsBound(2, 5), 5);
}

TEST(Hierarchy, SortedSymmetryAddsInequalities) {
  SolverConfig cfg;
  cfg.symmetry = Symmetry::SortedDescending;
  EigenSolver solver(MakeExample("ex4_16", 3.0).tensor, MakeBTensor(BKind::Z, 3, 4), cfg);
  EXPECT_EQ(solver.system().extra_ineqs.size(), 2u);
  cfg.symmetry = Symmetry::NonnegativeOrthant;
  EigenSolver nonneg(MakeExample("ex4_16", 3.0).tensor, MakeBTensor(BKind::Z, 3, 4), cfg);
  EXPECT_EQ(nonneg.system().extra_ineqs.size(), 3u);
}
