#include "teig/examples.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace teig {

namespace {

Polynomial X(int n, int i) { return Polynomial::Variable(n, i - 1); }

Polynomial Mono(int n, std::initializer_list<int> e, double c) { return Polynomial::Monomial(n, Exponent(e), c); }

Polynomial PairwiseQuartic(int n) {
  Polynomial p(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) p = p + (X(n, i) - X(n, j)).pow(4);
  }
  return p;
}

int DimensionParam(std::optional<double> param, int fallback) {
  if (!param) return fallback;
  const int n = static_cast<int>(std::lround(*param));
  if (n < 1 || std::abs(*param - n) > 1e-12) throw std::invalid_argument("dimension parameter must be a positive integer");
  return n;
}

}  // namespace

SymmetricTensor TensorFromEntryFunction(int n, int m, const std::function<double(const std::vector<int>&)>& fn) {
  std::vector<TensorEntry> entries;
  for (const Exponent& a : ExponentsOfDegree(n, m)) {
    TensorEntry e;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < a[static_cast<std::size_t>(i)]; ++k) e.index.push_back(i + 1);
    }
    e.value = fn(e.index);
    entries.push_back(std::move(e));
  }
  return SymmetricTensor::FromSymmetricEntries(n, m, entries);
}

std::vector<std::string> ExampleNames() {
  std::vector<std::string> names;
  for (int k = 1; k <= 17; ++k) names.push_back("ex4_" + std::to_string(k));
  return names;
}

BuiltinExample MakeExample(const std::string& name, std::optional<double> param, std::uint64_t seed) {
  BuiltinExample ex;
  ex.name = name;
  if (name == "ex4_1") {
    const int n = 3;
    ex.description = "x1^4 + 2 x2^4 + 3 x3^4";
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {4, 0, 0}, 1) + Mono(n, {0, 4, 0}, 2) + Mono(n, {0, 0, 4}, 3));
  } else if (name == "ex4_2") {
    // D(Px)^5 with P a product of three Householder reflections from seeded unit vectors.
    const int n = 4;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r < 3; ++r) {
      Eigen::VectorXd w(n);
      for (int i = 0; i < n; ++i) w[i] = normal(rng);
      w.normalize();
      P = P * (Eigen::MatrixXd::Identity(n, n) - 2.0 * w * w.transpose());
    }
    const double d[4] = {1.0, 2.0, -3.0, -4.0};
    Polynomial f(n);
    for (int i = 0; i < n; ++i) {
      Polynomial row(n);
      for (int j = 0; j < n; ++j) row = row + P(i, j) * X(n, j + 1);
      f = f + d[i] * row.pow(5);
    }
    ex.description = "D(Px)^5, D = diag(1, 2, -3, -4), P from seeded reflections";
    ex.tensor = SymmetricTensor::FromForm(f);
  } else if (name == "ex4_3") {
    const int n = 3;
    const double a = param.value_or(0.0);
    ex.description = "2 x1^4 + 3 x2^4 + 5 x3^4 + 4a x1^2 x2 x3, a = " + std::to_string(a);
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {4, 0, 0}, 2) + Mono(n, {0, 4, 0}, 3) + Mono(n, {0, 0, 4}, 5) +
                                          Mono(n, {2, 1, 1}, 4 * a));
  } else if (name == "ex4_4") {
    const int n = 2;
    const double a = param.value_or(0.0);
    ex.description = "3 x1^4 + x2^4 + 6a x1^2 x2^2, a = " + std::to_string(a);
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {4, 0}, 3) + Mono(n, {0, 4}, 1) + Mono(n, {2, 2}, 6 * a));
  } else if (name == "ex4_5") {
    const std::vector<TensorEntry> e = {
        {{1, 1, 1, 1}, 0.2883},  {{1, 1, 1, 2}, -0.0031}, {{1, 1, 1, 3}, 0.1973}, {{1, 1, 2, 2}, -0.2485},
        {{1, 1, 2, 3}, -0.2939}, {{1, 1, 3, 3}, 0.3847},  {{1, 2, 2, 2}, 0.2972}, {{1, 2, 2, 3}, 0.1862},
        {{1, 2, 3, 3}, 0.0919},  {{1, 3, 3, 3}, -0.3619}, {{2, 2, 2, 2}, 0.1241}, {{2, 2, 2, 3}, -0.3420},
        {{2, 2, 3, 3}, 0.2127},  {{2, 3, 3, 3}, 0.2727},  {{3, 3, 3, 3}, -0.3054}};
    ex.description = "order 4 dimension 3 tensor with listed entries";
    ex.tensor = SymmetricTensor::FromSymmetricEntries(3, 4, e);
  } else if (name == "ex4_6") {
    const int n = 6;
    Polynomial f(n);
    for (int i = 1; i <= n; ++i) f = f + X(n, i).pow(3);
    for (int i = 1; i < n; ++i) f = f + 30.0 * X(n, i).pow(2) * X(n, i + 1);
    ex.description = "x1^3 + ... + x6^3 + 30 x1^2 x2 + ... + 30 x5^2 x6";
    ex.tensor = SymmetricTensor::FromForm(f);
  } else if (name == "ex4_7") {
    ex.description = "-sum_{i<j} (xi - xj)^4, n = 6";
    ex.tensor = SymmetricTensor::FromForm(-PairwiseQuartic(6));
    ex.symmetry = Symmetry::SortedDescending;
  } else if (name == "ex4_8") {
    const int n = 5;
    const Polynomial s1 = X(n, 1) + X(n, 2) + X(n, 3) + X(n, 4);
    const Polynomial s2 = X(n, 2) + X(n, 3) + X(n, 4) + X(n, 5);
    ex.description = "(x1 + x2 + x3 + x4)^4 + (x2 + x3 + x4 + x5)^4";
    ex.tensor = SymmetricTensor::FromForm(s1.pow(4) + s2.pow(4));
  } else if (name == "ex4_9") {
    const int n = 3;
    ex.description = "2 x1^3 + 3 x1 x2^2 + 3 x1 x3^2";
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {3, 0, 0}, 2) + Mono(n, {1, 2, 0}, 3) + Mono(n, {1, 0, 2}, 3));
  } else if (name == "ex4_10") {
    const int n = 3;
    ex.description = "Motzkin form x1^4 x2^2 + x1^2 x2^4 + x3^6 - 3 x1^2 x2^2 x3^2";
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {4, 2, 0}, 1) + Mono(n, {2, 4, 0}, 1) + Mono(n, {0, 0, 6}, 1) +
                                          Mono(n, {2, 2, 2}, -3));
    ex.kind = BKind::H;
    ex.symmetry = Symmetry::NonnegativeOrthant;
  } else if (name == "ex4_11") {
    const int n = DimensionParam(param, 5);
    ex.description = "A_ijk = (-1)^i/i + (-1)^j/j + (-1)^k/k, n = " + std::to_string(n);
    ex.tensor = TensorFromEntryFunction(n, 3, [](const std::vector<int>& idx) {
      double s = 0.0;
      for (int i : idx) s += (i % 2 == 0 ? 1.0 : -1.0) / i;
      return s;
    });
  } else if (name == "ex4_12") {
    const int n = DimensionParam(param, 5);
    ex.description = "A_i1..i4 = sin(i1 + i2 + i3 + i4), n = " + std::to_string(n);
    ex.tensor = TensorFromEntryFunction(n, 4, [](const std::vector<int>& idx) {
      int s = 0;
      for (int i : idx) s += i;
      return std::sin(static_cast<double>(s));
    });
  } else if (name == "ex4_13") {
    const int n = DimensionParam(param, 5);
    ex.description = "A_i1..i4 = tan(i1) + ... + tan(i4), n = " + std::to_string(n);
    ex.tensor = TensorFromEntryFunction(n, 4, [](const std::vector<int>& idx) {
      double s = 0.0;
      for (int i : idx) s += std::tan(static_cast<double>(i));
      return s;
    });
  } else if (name == "ex4_14") {
    const int n = DimensionParam(param, 4);
    ex.description = "A_i1..i5 = ln(i1) + ... + ln(i5), n = " + std::to_string(n);
    ex.tensor = TensorFromEntryFunction(n, 5, [](const std::vector<int>& idx) {
      double s = 0.0;
      for (int i : idx) s += std::log(static_cast<double>(i));
      return s;
    });
  } else if (name == "ex4_15") {
    const int n = DimensionParam(param, 3);
    ex.description = "seeded random symmetric tensor, m = 3, n = " + std::to_string(n);
    ex.tensor = RandomSymmetric(n, 3, seed);
  } else if (name == "ex4_16") {
    const int n = DimensionParam(param, 4);
    ex.description = "sum_{i<j} (xi - xj)^4, n = " + std::to_string(n);
    ex.tensor = SymmetricTensor::FromForm(PairwiseQuartic(n));
    ex.symmetry = Symmetry::SortedDescending;
  } else if (name == "ex4_17") {
    const int n = 2;
    ex.description = "A_111 = 1, A_222 = 1 + 1e-6";
    ex.tensor = SymmetricTensor::FromForm(Mono(n, {3, 0}, 1.0) + Mono(n, {0, 3}, 1.0 + 1e-6));
  } else {
    throw std::invalid_argument("unknown example '" + name + "'");
  }
  return ex;
}

}  // namespace teig
