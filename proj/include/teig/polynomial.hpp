#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "teig/exponent.hpp"

namespace teig {

/// Sparse multivariate polynomial over the reals, stored as exponent -> coefficient
/// in graded-lex order.
///
/// Every arithmetic result is pruned: coefficients whose magnitude falls below
/// kPruneRelative times the largest coefficient are dropped, so cancellation
/// never leaves near-zero debris in the support.
class Polynomial {
 public:
  using Terms = std::map<Exponent, double, GradedLexLess>;

  static constexpr double kPruneRelative = 1e-14;

  explicit Polynomial(int num_vars = 0);
  Polynomial(int num_vars, Terms terms);

  static Polynomial Constant(int num_vars, double c);
  /// x_i, with i zero-based.
  static Polynomial Variable(int num_vars, int i);
  static Polynomial Monomial(int num_vars, const Exponent& alpha, double c = 1.0);

  int num_vars() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Max |alpha| over stored terms; 0 for the zero polynomial.
  int degree() const;
  double coefficient(const Exponent& alpha) const;
  double max_abs_coefficient() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const { return scale(-1.0); }
  Polynomial scale(double c) const;
  Polynomial add_constant(double c) const;
  Polynomial pow(int k) const;

  /// d/dx_i, zero-based i.
  Polynomial partial(int i) const;
  /// Directional derivative sum_i u_i d/dx_i.
  Polynomial directional(std::span<const double> u) const;

  double evaluate(std::span<const double> u) const;
  std::vector<double> gradient(std::span<const double> u) const;

  std::string to_string() const;

  bool operator==(const Polynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

 private:
  void prune();

  int n_;
  Terms terms_;
};

inline Polynomial operator*(double c, const Polynomial& p) { return p.scale(c); }

/// Parses the sparse region syntax: whitespace-separated terms "coeff:e1,e2,...,en".
Polynomial ParseSparsePolynomial(const std::string& line, int num_vars);

}  // namespace teig
