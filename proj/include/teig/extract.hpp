#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "teig/moment.hpp"
#include "teig/tensor.hpp"

namespace teig {

struct FlatnessReport {
  bool satisfied = false;
  int t = -1;              // certifying truncation order
  std::vector<int> ranks;  // ranks[s] = rank M_s(y), s = 0..N
  int ell = 0;             // rank M_t(y) when satisfied
};

/// Leading principal block M_s(y) of the moment matrix, s <= y.degree / 2.
Eigen::MatrixXd TruncatedMomentMatrix(const Tms& y, int s);

/// Smallest t in [base_order, order] with rank M_{t - base_order}(y) = rank M_t(y).
FlatnessReport CheckFlatness(const Tms& y, int order, int base_order, double rank_tol = 1e-6);

struct Extraction {
  bool ok = false;
  std::vector<std::vector<double>> atoms;
  std::string failure;
};

/// Recovers the ell support points of a flat truncation via multiplication matrices and
/// a real Schur factorization of a seeded random combination of them.
Extraction ExtractAtoms(const Tms& y, const FlatnessReport& report, std::uint64_t seed = 0, double rank_tol = 1e-6);

struct PolishedPair {
  double lambda = 0.0;
  std::vector<double> u;
  double residual = 0.0;  // infinity norm of (A u^{m-1} - lambda B u^{m'-1}, B u^{m'} - 1)
  int iterations = 0;
};

/// Residual of the eigen equations at (lambda, u) without any polishing.
double EigenResidual(const SymmetricTensor& a, const SymmetricTensor& b, double lambda, std::span<const double> u);

/// Newton polish (at most max_iterations least-squares steps) on the eigen equations
/// in (u, lambda), starting from u rescaled onto B u^{m'} = 1 when possible.
PolishedPair VerifyEigenpair(const SymmetricTensor& a, const SymmetricTensor& b, double lambda,
                             std::span<const double> u, int max_iterations = 10);

}  // namespace teig
