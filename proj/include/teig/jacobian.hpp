#pragma once

#include <vector>

#include "teig/polynomial.hpp"
#include "teig/tensor.hpp"

namespace teig {

/// Polynomial data of the critical-point problem max f s.t. g = 0.
///
/// h holds the anti-diagonal sums of 2x2 Jacobian minors of (grad f, grad g)
/// followed by g itself, so its common real zeros on g = 0 are exactly the
/// B-eigenvectors. extra_ineqs are region polynomials p_i treated as p_i(x) >= 0.
struct ConstraintSystem {
  int n = 0;
  int order_a = 0;  // m
  int order_b = 0;  // m'
  Polynomial f;
  Polynomial g;
  std::vector<Polynomial> h;
  std::vector<Polynomial> extra_ineqs;

  /// ceil((m + m' - 2) / 2), at least 1.
  int base_order() const;
};

/// f = A x^m, g = B x^{m'} - 1, h_r = sum_{i<j, i+j=r+2} (f_i g_j - f_j g_i) for
/// r = 1..2n-3, then h_{2n-2} = g. For n = 1 there are no minors and h = (g).
ConstraintSystem BuildJacobianSystem(const SymmetricTensor& a, const SymmetricTensor& b,
                                     std::vector<Polynomial> extra_ineqs = {});

}  // namespace teig
