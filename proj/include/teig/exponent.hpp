#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

namespace teig {

/// Exponent vector alpha in N^n of a monomial x^alpha.
using Exponent = std::vector<int>;

inline int TotalDegree(const Exponent& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// Graded lexicographic order: lower total degree first, then lex with x1 > x2 > ... > xn.
/// For n = 2 the degree-2 block reads x1^2, x1*x2, x2^2.
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = TotalDegree(a);
    const int db = TotalDegree(b);
    if (da != db) return da < db;
    // Same degree: larger power of x1 comes first.
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i] != b[i]) return a[i] > b[i];
    }
    return a.size() < b.size();
  }
};

struct ExponentHash {
  std::size_t operator()(const Exponent& a) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (int e : a) {
      h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

inline Exponent AddExponents(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

/// Binomial coefficient C(n, k) as a size; inputs are small at desk scale.
inline std::size_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

/// Human-readable monomial, e.g. "x1^2*x3"; "1" for the constant.
std::string MonomialString(const Exponent& a);

/// All exponents of total degree exactly d in n variables, in graded-lex order.
std::vector<Exponent> ExponentsOfDegree(int n, int d);

/// All exponents with total degree <= d, in graded-lex order.
std::vector<Exponent> ExponentsUpToDegree(int n, int d);

}  // namespace teig
