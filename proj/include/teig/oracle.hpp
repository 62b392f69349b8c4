#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teig/polynomial.hpp"
#include "teig/tensor.hpp"

namespace teig {

enum class OracleSource { AnalyticDiagonal, CircleScan, NewtonMultistart };

const char* ToString(OracleSource s);

/// Eigenvalues from an independent method, strictly decreasing.
struct OracleSpectrum {
  std::vector<double> eigenvalues;
  /// Sign-canonical eigenvector count per eigenvalue where the method knows it, else empty.
  std::vector<int> multiplicities;
  OracleSource source = OracleSource::NewtonMultistart;
  double tolerance = 0.0;
};

/// Z-eigenvalues of  sum a_i x_i^m  (m even, a_i > 0): one value per nonempty support S,
/// lambda_S = (sum_{i in S} a_i^{-2/(m-2)})^{-(m-2)/2}, which is 1 / sum 1/a_i for m = 4.
/// Multiplicity of lambda_S is 2^{|S|-1}. m = 2 gives the a_i themselves.
OracleSpectrum DiagonalZSpectrum(const std::vector<double>& a, int m);

/// Critical values of f(cos t, sin t) over the full circle for a form f in two variables.
/// Sign changes of the derivative are located on a uniform grid by central differences and
/// refined by bisection then Newton.
OracleSpectrum CircleScan(const Polynomial& f, int grid = 100000);

/// Damped Newton on the eigenpair equations from random starts on the unit sphere.
/// Keeps solutions with residual <= 1e-10 and merges eigenvalues within 1e-6. Not complete.
OracleSpectrum NewtonMultistart(const SymmetricTensor& a, const SymmetricTensor& b, int starts = 2000,
                                std::uint64_t seed = 0);

/// Coefficients a_i when A x^m = sum a_i x_i^m, otherwise nullopt.
std::optional<std::vector<double>> DiagonalCoefficients(const SymmetricTensor& a);

struct OracleComparison {
  bool agrees = false;
  OracleSpectrum oracle;
  std::string detail;
};

/// Picks the strongest applicable oracle for (A, B) and compares it with the given eigenvalues.
/// Analytic and circle oracles must match set-for-set within 1e-4; Newton values must each
/// appear in the list within 1e-5.
OracleComparison CompareWithOracle(const SymmetricTensor& a, const SymmetricTensor& b, bool z_kind,
                                   const std::vector<double>& eigenvalues, std::uint64_t seed = 0);

}  // namespace teig
