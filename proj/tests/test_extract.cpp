#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "teig/examples.hpp"
#include "teig/extract.hpp"

using namespace teig;

namespace {

std::vector<double> RandomUnit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  std::vector<double> u(static_cast<std::size_t>(n));
  double s = 0.0;
  for (auto& v : u) {
    v = nd(rng);
    s += v * v;
  }
  for (auto& v : u) v /= std::sqrt(s);
  return u;
}

// Every expected point appears among the extracted atoms within tol.
void ExpectSameAtoms(const std::vector<std::vector<double>>& got, const std::vector<std::vector<double>>& want,
                     double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (const auto& w : want) {
    double best = INFINITY;
    for (const auto& g : got) {
      double d = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) d = std::max(d, std::abs(g[i] - w[i]));
      best = std::min(best, d);
    }
    EXPECT_LE(best, tol);
  }
}

}  // namespace

TEST(Extract, DiracIsFlatWithOneAtom) {
  const std::vector<double> u = {0.0, std::sqrt(0.6), std::sqrt(0.4)};
  const Tms y = Tms::Dirac(u, 6);
  const FlatnessReport r = CheckFlatness(y, 3, 2);
  ASSERT_TRUE(r.satisfied);
  EXPECT_EQ(r.t, 2);
  EXPECT_EQ(r.ell, 1);
  const Extraction ex = ExtractAtoms(y, r);
  ASSERT_TRUE(ex.ok) << ex.failure;
  ExpectSameAtoms(ex.atoms, {u}, 1e-8);
}

TEST(Extract, TwoAtomMixture) {
  const std::vector<std::vector<double>> pts = {{0, std::sqrt(0.6), std::sqrt(0.4)}, {0, -std::sqrt(0.6), std::sqrt(0.4)}};
  const Tms y = Tms::Mixture(pts, {0.5, 0.5}, 6);
  const FlatnessReport r = CheckFlatness(y, 3, 2);
  ASSERT_TRUE(r.satisfied);
  EXPECT_EQ(r.ell, 2);
  const Extraction ex = ExtractAtoms(y, r);
  ASSERT_TRUE(ex.ok) << ex.failure;
  ExpectSameAtoms(ex.atoms, pts, 1e-8);
}

TEST(Extract, FourSignedCopiesOfOneEigenvector) {
  const double a = std::sqrt(6.0 / 11.0), b = std::sqrt(3.0 / 11.0), c = std::sqrt(2.0 / 11.0);
  const std::vector<std::vector<double>> pts = {{a, b, c}, {a, -b, c}, {a, b, -c}, {a, -b, -c}};
  // x1 is constant on the support, so rank M_1 = 3 and flatness needs order 4.
  const Tms y = Tms::Mixture(pts, {0.25, 0.25, 0.25, 0.25}, 8);
  EXPECT_FALSE(CheckFlatness(Tms::Mixture(pts, {0.25, 0.25, 0.25, 0.25}, 6), 3, 2).satisfied);
  const FlatnessReport r = CheckFlatness(y, 4, 2);
  ASSERT_TRUE(r.satisfied);
  EXPECT_EQ(r.ell, 4);
  const Extraction ex = ExtractAtoms(y, r, 7);
  ASSERT_TRUE(ex.ok) << ex.failure;
  ExpectSameAtoms(ex.atoms, pts, 1e-7);
  const SymmetricTensor b3 = MakeBTensor(BKind::Z, 3, 4);
  const SymmetricTensor t = MakeExample("ex4_1").tensor;
  for (const auto& u : ex.atoms) EXPECT_LE(EigenResidual(t, b3, 6.0 / 11.0, u), 1e-6);
}

TEST(Extract, RandomMixturesRecovered) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> w(0.1, 1.0);
  for (int ell = 1; ell <= 4; ++ell) {
    std::vector<std::vector<double>> pts;
    std::vector<double> weights;
    double total = 0.0;
    for (int k = 0; k < ell; ++k) {
      pts.push_back(RandomUnit(rng, 3));
      weights.push_back(w(rng));
      total += weights.back();
    }
    for (auto& x : weights) x /= total;
    const Tms y = Tms::Mixture(pts, weights, 6);
    const FlatnessReport r = CheckFlatness(y, 3, 1);
    ASSERT_TRUE(r.satisfied) << "ell = " << ell;
    EXPECT_EQ(r.ell, ell);
    const Extraction ex = ExtractAtoms(y, r, 1);
    ASSERT_TRUE(ex.ok) << ex.failure;
    ExpectSameAtoms(ex.atoms, pts, 1e-6);
  }
}

TEST(Extract, RanksAreMonotone) {
  std::mt19937_64 rng(5);
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 6; ++k) pts.push_back(RandomUnit(rng, 3));
  const Tms y = Tms::Mixture(pts, std::vector<double>(6, 1.0 / 6.0), 6);
  const FlatnessReport r = CheckFlatness(y, 3, 1);
  ASSERT_EQ(r.ranks.size(), 4u);
  for (std::size_t s = 1; s < r.ranks.size(); ++s) EXPECT_GE(r.ranks[s], r.ranks[s - 1]);
  EXPECT_EQ(r.ranks[0], 1);
}

TEST(Extract, GenericMomentsAreNotFlat) {
  // Moments of a continuous measure: the uniform distribution on a cube has full-rank moment matrices.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<std::vector<double>> pts;
  for (int k = 0; k < 400; ++k) pts.push_back({ud(rng), ud(rng), ud(rng)});
  const Tms y = Tms::Mixture(pts, std::vector<double>(400, 1.0 / 400.0), 6);
  const FlatnessReport r = CheckFlatness(y, 3, 2);
  EXPECT_FALSE(r.satisfied);
  EXPECT_EQ(r.ranks.back(), 20);
}

TEST(Extract, TruncatedMomentMatrixIsLeadingBlock) {
  const std::vector<double> u = {0.5, -2.0};
  const Tms y = Tms::Dirac(u, 4);
  const Eigen::MatrixXd m1 = TruncatedMomentMatrix(y, 1);
  ASSERT_EQ(m1.rows(), 3);
  EXPECT_DOUBLE_EQ(m1(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m1(1, 2), -1.0);
  EXPECT_DOUBLE_EQ(TruncatedMomentMatrix(y, 2)(1, 2), -1.0);
}

TEST(Extract, ResidualOfKnownEigenpairs) {
  const SymmetricTensor t = MakeExample("ex4_1").tensor;
  const SymmetricTensor b = MakeBTensor(BKind::Z, 3, 4);
  const std::vector<double> e3 = {0, 0, 1};
  EXPECT_NEAR(EigenResidual(t, b, 3.0, e3), 0.0, 1e-14);
  EXPECT_NEAR(EigenResidual(t, b, 2.0, e3), 1.0, 1e-14);
  const std::vector<double> off = {0.1, 0, 1};
  EXPECT_GT(EigenResidual(t, b, 3.0, off), 1e-3);
}

TEST(Extract, PolishConvergesFromPerturbedPoint) {
  const SymmetricTensor t = MakeExample("ex4_1").tensor;
  const SymmetricTensor b = MakeBTensor(BKind::Z, 3, 4);
  const std::vector<double> start = {0.01, 0.78, 0.63};
  const PolishedPair p = VerifyEigenpair(t, b, 1.19, start);
  EXPECT_LE(p.residual, 1e-10);
  EXPECT_NEAR(p.lambda, 1.2, 1e-10);
  EXPECT_NEAR(std::abs(p.u[1]), std::sqrt(0.6), 1e-8);
  EXPECT_LE(p.iterations, 10);
}

TEST(Extract, PolishHandlesOddOrderAndHKind) {
  const SymmetricTensor t = MakeExample("ex4_9").tensor;
  const SymmetricTensor b = MakeBTensor(BKind::Z, 3, 3);
  const std::vector<double> start = {0.99, 0.01, -0.02};
  const PolishedPair p = VerifyEigenpair(t, b, 2.1, start, 50);
  EXPECT_LE(p.residual, 1e-6);
  EXPECT_NEAR(p.lambda, 2.0, 1e-6);

  const SymmetricTensor h = MakeBTensor(BKind::H, 3, 4);
  const SymmetricTensor t3 = MakeExample("ex4_3").tensor;
  const std::vector<double> e1 = {1.0, 0.0, 0.0};
  const PolishedPair q = VerifyEigenpair(t3, h, 2.0, e1);
  EXPECT_LE(q.residual, 1e-12);
  EXPECT_NEAR(q.lambda, 2.0, 1e-12);
}
