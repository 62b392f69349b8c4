#include "teig/jacobian.hpp"

#include <stdexcept>

namespace teig {

int ConstraintSystem::base_order() const {
  const int s = order_a + order_b - 2;
  return std::max(1, (s + 1) / 2);
}

ConstraintSystem BuildJacobianSystem(const SymmetricTensor& a, const SymmetricTensor& b,
                                     std::vector<Polynomial> extra_ineqs) {
  if (a.dim() != b.dim()) throw std::invalid_argument("BuildJacobianSystem: A and B differ in dimension");
  if (b.order() < 1) throw std::invalid_argument("BuildJacobianSystem: B must have order >= 1");
  const int n = a.dim();
  for (const auto& p : extra_ineqs) {
    if (p.num_vars() != n) throw std::invalid_argument("BuildJacobianSystem: region polynomial has wrong variable count");
  }

  ConstraintSystem sys;
  sys.n = n;
  sys.order_a = a.order();
  sys.order_b = b.order();
  sys.f = a.form();
  sys.g = b.form().add_constant(-1.0);
  sys.extra_ineqs = std::move(extra_ineqs);

  std::vector<Polynomial> fx, gx;
  for (int i = 0; i < n; ++i) {
    fx.push_back(sys.f.partial(i));
    gx.push_back(sys.g.partial(i));
  }
  // 1-based i < j with i + j = r + 2.
  for (int r = 1; r <= 2 * n - 3; ++r) {
    Polynomial hr(n);
    for (int i = 1; i <= n; ++i) {
      const int j = r + 2 - i;
      if (j <= i || j > n) continue;
      hr = hr + fx[i - 1] * gx[j - 1] - fx[j - 1] * gx[i - 1];
    }
    sys.h.push_back(std::move(hr));
  }
  sys.h.push_back(sys.g);
  return sys;
}

}  // namespace teig
