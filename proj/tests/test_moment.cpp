#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "teig/examples.hpp"
#include "teig/moment.hpp"

using namespace teig;

namespace {

Polynomial X(int n, int i) { return Polynomial::Variable(n, i); }

// The tms ordinal referenced by a single-term cell.
int SoleVar(const LinearForm& f) {
  EXPECT_EQ(f.terms.size(), 1u);
  EXPECT_DOUBLE_EQ(f.terms[0].second, 1.0);
  return f.terms[0].first;
}

}  // namespace

TEST(Moment, BasisIsGradedLexWithInverse) {
  const MonomialBasis b(2, 2);
  ASSERT_EQ(b.size(), 6);
  const std::vector<Exponent> expected = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(b[i], expected[static_cast<std::size_t>(i)]);
    EXPECT_EQ(b.index_of(b[i]), i);
  }
  EXPECT_EQ(b.index_of({3, 0}), -1);
  const MonomialBasis bigger(2, 4);
  for (int i = 0; i < b.size(); ++i) EXPECT_EQ(bigger[i], b[i]);
  EXPECT_EQ(MonomialBasis(3, 4).size(), 35);
}

TEST(Moment, SecondOrderMomentMatrixStencil) {
  const MonomialBasis tms(2, 4);
  const AffineMatrixBlock m = MomentBlock(2, tms);
  ASSERT_EQ(m.side, 6);
  const std::vector<Exponent> first_row = {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}};
  for (int c = 0; c < 6; ++c) EXPECT_EQ(tms[SoleVar(m.cell(0, c))], first_row[static_cast<std::size_t>(c)]);
  // Hankel structure: the cell (x1, x2) and the cell (1, x1 x2) share y11.
  EXPECT_EQ(SoleVar(m.cell(1, 2)), SoleVar(m.cell(0, 4)));
  EXPECT_EQ(tms[SoleVar(m.cell(5, 5))], (Exponent{0, 4}));
  EXPECT_EQ(tms[SoleVar(m.cell(3, 5))], (Exponent{2, 2}));
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) EXPECT_EQ(SoleVar(m.cell(r, c)), SoleVar(m.cell(c, r)));
}

TEST(Moment, DiskLocalizingMatrix) {
  const MonomialBasis tms(2, 4);
  const Polynomial q = (Polynomial::Constant(2, 1.0) - X(2, 0).pow(2) - X(2, 1).pow(2));
  const AffineMatrixBlock l = LocalizingBlock(q, 2, tms);
  ASSERT_EQ(l.side, 3);
  const LinearForm c00 = l.cell(0, 0);
  ASSERT_EQ(c00.terms.size(), 3u);
  for (const auto& [var, coef] : c00.terms) {
    const Exponent& e = tms[var];
    if (e == Exponent{0, 0}) EXPECT_DOUBLE_EQ(coef, 1.0);
    else if (e == Exponent{2, 0} || e == Exponent{0, 2}) EXPECT_DOUBLE_EQ(coef, -1.0);
    else ADD_FAILURE() << "unexpected moment in cell (0,0)";
  }
  // Cell (x1, x2) is y11 - y31 - y13.
  Eigen::VectorXd y = Eigen::VectorXd::Zero(tms.size());
  y[tms.index_of({1, 1})] = 1.0;
  y[tms.index_of({3, 1})] = 10.0;
  y[tms.index_of({1, 3})] = 100.0;
  EXPECT_DOUBLE_EQ(l.cell(1, 2).evaluate(y), 1.0 - 10.0 - 100.0);
}

TEST(Moment, SingleVariableHankel) {
  const MonomialBasis tms(1, 6);
  const AffineMatrixBlock m = MomentBlock(3, tms);
  ASSERT_EQ(m.side, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(tms[SoleVar(m.cell(r, c))], (Exponent{r + c}));
}

TEST(Moment, LocalizingSideFormula) {
  EXPECT_EQ(LocalizingSide(2, 2, 0), 6);
  EXPECT_EQ(LocalizingSide(2, 2, 2), 3);
  EXPECT_EQ(LocalizingSide(2, 2, 3), 1);
  EXPECT_EQ(LocalizingSide(3, 3, 4), 4);
  EXPECT_EQ(LocalizingSide(3, 2, 1), 4);
}

TEST(Moment, EqualityRowsTruncateIdeal) {
  // g = x1^2 + x2^2 - 1 at order 1: only L(g) itself fits.
  const MonomialBasis tms1(2, 2);
  const Polynomial g = (X(2, 0).pow(2) + X(2, 1).pow(2)).add_constant(-1.0);
  const std::vector<LinearForm> rows1 = EqualityRows(g, 1, tms1);
  ASSERT_EQ(rows1.size(), 1u);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(tms1.size());
  y[0] = 1.0;
  y[tms1.index_of({2, 0})] = 0.25;
  y[tms1.index_of({0, 2})] = 0.75;
  EXPECT_NEAR(rows1[0].evaluate(y), 0.0, 1e-15);
  // At order 2 the multipliers x^alpha with |alpha| <= 2 give six rows.
  EXPECT_EQ(EqualityRows(g, 2, MonomialBasis(2, 4)).size(), 6u);
}

TEST(Moment, DiracSatisfiesRelaxationConstraints) {
  const BuiltinExample ex = MakeExample("ex4_1");
  const ConstraintSystem sys = BuildJacobianSystem(ex.tensor, MakeBTensor(BKind::Z, 3, 4));
  const MomentProblem p = CompileRelaxation(sys, 2, sys.f, Sense::Maximize, {});
  EXPECT_EQ(p.num_vars(), 35);
  ASSERT_FALSE(p.blocks.empty());
  EXPECT_EQ(p.blocks[0].side, 10);

  const std::vector<double> u = {0.0, std::sqrt(0.6), std::sqrt(0.4)};
  const Tms y = Tms::Dirac(u, 4);
  for (std::size_t i = 0; i < p.equalities.size(); ++i)
    EXPECT_NEAR(p.equalities[i].evaluate(y.values), p.equality_rhs[i], 1e-10);
  for (const auto& block : p.blocks) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block.evaluate(y.values));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  }
  EXPECT_NEAR(p.objective.evaluate(y.values), 1.2, 1e-10);
}

TEST(Moment, MixtureMomentRank) {
  const std::vector<std::vector<double>> pts = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.6, 0.8, 0}};
  const Tms y = Tms::Mixture(pts, {0.1, 0.2, 0.3, 0.4}, 4);
  const MonomialBasis tms(3, 4);
  const Eigen::MatrixXd m = MomentBlock(2, tms).evaluate(y.values);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()[i] > 1e-9 * es.eigenvalues().maxCoeff();
  EXPECT_EQ(rank, 4);
  EXPECT_DOUBLE_EQ(y[(Exponent{0, 0, 0})], 1.0);
  EXPECT_NEAR(y[(Exponent{1, 1, 0})], 0.4 * 0.48, 1e-15);
}

TEST(Moment, BandInequalityAddsLocalizingBlock) {
  const BuiltinExample ex = MakeExample("ex4_1");
  const ConstraintSystem sys = BuildJacobianSystem(ex.tensor, MakeBTensor(BKind::Z, 3, 4));
  const MomentProblem plain = CompileRelaxation(sys, 2, sys.f, Sense::Minimize, {});
  const MomentProblem band = CompileRelaxation(sys, 2, sys.f, Sense::Minimize, {sys.f.add_constant(-1.0)});
  EXPECT_EQ(band.blocks.size(), plain.blocks.size() + 1);
  EXPECT_EQ(band.blocks.back().side, LocalizingSide(3, 2, 4));
  EXPECT_EQ(band.sense, Sense::Minimize);
}

TEST(Moment, DumpListsBasisAndBlocks) {
  const ConstraintSystem sys = BuildJacobianSystem(RandomSymmetric(2, 3, 1), MakeBTensor(BKind::Z, 2, 3));
  EXPECT_THROW(CompileRelaxation(sys, 1, sys.f, Sense::Maximize, {}), std::invalid_argument);
  const MomentProblem p = CompileRelaxation(sys, 2, sys.f, Sense::Maximize, {});
  std::ostringstream os;
  DumpMomentProblem(p, os);
  EXPECT_NE(os.str().find("equalities 10"), std::string::npos);
  EXPECT_NE(os.str().find("+1*y[1] = 1"), std::string::npos);
  EXPECT_NE(os.str().find("block M_2(y) side=6"), std::string::npos);
}
