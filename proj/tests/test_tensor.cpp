#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "teig/tensor.hpp"

using namespace teig;

namespace {

SymmetricTensor DiagonalQuartic() {
  const std::vector<TensorEntry> e = {{{1, 1, 1, 1}, 1.0}, {{2, 2, 2, 2}, 2.0}, {{3, 3, 3, 3}, 3.0}};
  return SymmetricTensor::FromEntries(3, 4, e);
}

}  // namespace

TEST(Tensor, FromEntriesDiagonalForm) {
  const SymmetricTensor t = DiagonalQuartic();
  EXPECT_EQ(t.form().terms().size(), 3u);
  EXPECT_DOUBLE_EQ(t.form().coefficient({4, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(t.form().coefficient({0, 4, 0}), 2.0);
  EXPECT_DOUBLE_EQ(t.form().coefficient({0, 0, 4}), 3.0);
}

TEST(Tensor, EmptyEntriesGiveZeroTensor) {
  const SymmetricTensor t = SymmetricTensor::FromEntries(2, 3, {});
  EXPECT_TRUE(t.form().is_zero());
  EXPECT_EQ(t.dim(), 2);
  EXPECT_EQ(t.order(), 3);
}

TEST(Tensor, SingleOffDiagonalEntryIsSymmetrized) {
  const std::vector<TensorEntry> e = {{{1, 2}, 1.0}};
  const SymmetricTensor t = SymmetricTensor::FromEntries(2, 2, e);
  EXPECT_DOUBLE_EQ(t.form().coefficient({1, 1}), 1.0);
  const int i12[] = {1, 2}, i21[] = {2, 1};
  EXPECT_DOUBLE_EQ(t.entry(i12), 0.5);
  EXPECT_DOUBLE_EQ(t.entry(i21), 0.5);
}

TEST(Tensor, FromEntriesIsPermutationInvariant) {
  const std::vector<TensorEntry> a = {{{1, 2, 3}, 2.0}, {{1, 1, 2}, -1.0}};
  const std::vector<TensorEntry> b = {{{3, 1, 2}, 2.0}, {{2, 1, 1}, -1.0}};
  EXPECT_EQ(SymmetricTensor::FromEntries(3, 3, a), SymmetricTensor::FromEntries(3, 3, b));
}

TEST(Tensor, EntryRoundTripThroughMultinomialWeights) {
  const SymmetricTensor t = RandomSymmetric(3, 4, 11);
  std::vector<TensorEntry> entries;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k)
        for (int l = 1; l <= 3; ++l) {
          const std::vector<int> idx = {i, j, k, l};
          entries.push_back({idx, t.entry(idx)});
        }
  const SymmetricTensor back = SymmetricTensor::FromEntries(3, 4, entries);
  for (const auto& [alpha, c] : t.form().terms()) EXPECT_NEAR(back.form().coefficient(alpha), c, 1e-12);
}

TEST(Tensor, IndexOutOfRangeThrows) {
  const std::vector<TensorEntry> e = {{{1, 4}, 1.0}};
  EXPECT_THROW(SymmetricTensor::FromEntries(3, 2, e), std::out_of_range);
  const std::vector<TensorEntry> short_idx = {{{1}, 1.0}};
  EXPECT_THROW(SymmetricTensor::FromEntries(3, 2, short_idx), std::invalid_argument);
}

TEST(Tensor, BTensorKinds) {
  const SymmetricTensor z = MakeBTensor(BKind::Z, 3, 4);
  EXPECT_EQ(z.order(), 2);
  EXPECT_DOUBLE_EQ(z.form().coefficient({2, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(z.form().coefficient({0, 0, 2}), 1.0);
  EXPECT_EQ(z.form().terms().size(), 3u);

  const SymmetricTensor h = MakeBTensor(BKind::H, 2, 4);
  EXPECT_EQ(h.order(), 4);
  EXPECT_DOUBLE_EQ(h.form().coefficient({4, 0}), 1.0);
  EXPECT_DOUBLE_EQ(h.form().coefficient({0, 4}), 1.0);

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_EQ(MakeBTensor(BKind::D, 2, 4, &id), MakeBTensor(BKind::Z, 2, 4));
}

TEST(Tensor, DMatrixMustBePositiveDefinite) {
  Eigen::MatrixXd d(2, 2);
  d << 1, 2, 2, 1;
  EXPECT_THROW(MakeBTensor(BKind::D, 2, 2, &d), std::invalid_argument);
  d << 1, 0.5, 0.0, 1;
  EXPECT_THROW(MakeBTensor(BKind::D, 2, 2, &d), std::invalid_argument);
}

TEST(Tensor, ContractDiagonal) {
  const SymmetricTensor t = DiagonalQuartic();
  const double u[] = {0.0, 0.0, 1.0};
  const std::vector<double> v = t.contract(u, 3).as_vector();
  ASSERT_EQ(v.size(), 3u);
  EXPECT_DOUBLE_EQ(v[0], 0.0);
  EXPECT_DOUBLE_EQ(v[1], 0.0);
  EXPECT_DOUBLE_EQ(v[2], 3.0);
  EXPECT_DOUBLE_EQ(t.contract(u, 4).scalar(), 3.0);
  EXPECT_EQ(t.contract(u, 0), t);
}

TEST(Tensor, ContractChainAndEulerIdentity) {
  const SymmetricTensor t = RandomSymmetric(3, 4, 5);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 5; ++trial) {
    const std::vector<double> u = {nd(rng), nd(rng), nd(rng)};
    const double full = t.contract(u, 4).scalar();
    const double chained = t.contract(u, 1).contract(u, 3).scalar();
    EXPECT_NEAR(chained, full, 1e-12 * std::max(1.0, std::abs(full)));
    const std::vector<double> g = t.contract(u, 3).as_vector();
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += u[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
    EXPECT_NEAR(dot, full, 1e-10 * std::max(1.0, std::abs(full)));
    EXPECT_NEAR(t.form().evaluate(u), full, 1e-10 * std::max(1.0, std::abs(full)));
  }
}

TEST(Tensor, ContractDimensionMismatchThrows) {
  const SymmetricTensor t = DiagonalQuartic();
  const double u[] = {1.0, 0.0};
  EXPECT_THROW(t.contract(u, 1), std::invalid_argument);
}

TEST(Tensor, ContractMatrixView) {
  const SymmetricTensor t = DiagonalQuartic();
  const double u[] = {1.0, 1.0, 1.0};
  const Eigen::MatrixXd m = t.contract(u, 2).as_matrix();
  EXPECT_NEAR(m(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(m(1, 1), 2.0, 1e-14);
  EXPECT_NEAR(m(2, 2), 3.0, 1e-14);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-14);
}

TEST(Tensor, RandomIsDeterministicAndSymmetric) {
  const SymmetricTensor a = RandomSymmetric(3, 3, 42);
  const SymmetricTensor b = RandomSymmetric(3, 3, 42);
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == RandomSymmetric(3, 3, 43));
  const int p[] = {1, 2, 3}, q[] = {3, 1, 2}, r[] = {2, 3, 1};
  EXPECT_DOUBLE_EQ(a.entry(p), a.entry(q));
  EXPECT_DOUBLE_EQ(a.entry(p), a.entry(r));
}

TEST(Tensor, ScaledMultipliesForm) {
  const SymmetricTensor t = DiagonalQuartic().scaled(2.0);
  EXPECT_DOUBLE_EQ(t.form().coefficient({0, 0, 4}), 6.0);
}
