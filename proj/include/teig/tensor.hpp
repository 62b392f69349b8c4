#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teig/polynomial.hpp"

namespace teig {

/// One raw entry A_{i1...im} of a (possibly nonsymmetric) tensor; indices are 1-based.
struct TensorEntry {
  std::vector<int> index;
  double value = 0.0;
};

/// Order-m, dimension-n real symmetric tensor.
///
/// Stored by exponent vector: the coefficient f_alpha of A x^m = sum f_alpha x^alpha.
/// Entry-level values are recovered on demand through multinomial weights,
/// A_{i1..im} = f_alpha * alpha! / m! where alpha counts index occurrences.
/// Order 0 is allowed and represents a scalar.
class SymmetricTensor {
 public:
  /// The zero tensor.
  SymmetricTensor(int n, int m);

  /// Symmetrizes a raw entry list: each index class receives the average of the raw
  /// array over its permutations (unspecified entries count as 0). A tuple listed
  /// more than once keeps its last value.
  static SymmetricTensor FromEntries(int n, int m, std::span<const TensorEntry> entries);

  /// Builds from one representative per index class carrying the symmetric entry value.
  static SymmetricTensor FromSymmetricEntries(int n, int m, std::span<const TensorEntry> entries);

  /// The tensor whose form A x^m equals the given homogeneous polynomial.
  static SymmetricTensor FromForm(const Polynomial& form);

  int dim() const { return n_; }
  int order() const { return m_; }

  const Polynomial& form() const { return form_; }

  /// Entry A_{i1..im}; indices are 1-based.
  double entry(std::span<const int> index) const;

  /// A u^k, the order m-k tensor. k = m gives the scalar A u^m (read with scalar()),
  /// k = m-1 gives the vector A u^{m-1} (read with as_vector()).
  SymmetricTensor contract(std::span<const double> u, int k) const;

  /// Value of an order-0 tensor.
  double scalar() const;
  /// Components of an order-1 tensor.
  std::vector<double> as_vector() const;
  /// Dense matrix of an order-2 tensor.
  Eigen::MatrixXd as_matrix() const;

  SymmetricTensor scaled(double c) const;

  bool operator==(const SymmetricTensor& o) const { return n_ == o.n_ && m_ == o.m_ && form_ == o.form_; }

 private:
  SymmetricTensor(int n, int m, Polynomial form);

  int n_;
  int m_;
  Polynomial form_;
};

/// alpha! / m! for the index class alpha.
double MultinomialWeight(const Exponent& alpha);

enum class BKind { Z, H, D };

/// Normalization tensor: Z gives sum x_i^2, H gives sum x_i^m, D gives x^T D x.
/// D must be symmetric positive definite.
SymmetricTensor MakeBTensor(BKind kind, int n, int m, const Eigen::MatrixXd* d_matrix = nullptr);

/// Symmetrization of a dense array of i.i.d. standard normal draws; deterministic per seed.
SymmetricTensor RandomSymmetric(int n, int m, std::uint64_t seed);

}  // namespace teig
