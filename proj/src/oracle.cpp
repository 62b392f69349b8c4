#include "teig/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "teig/extract.hpp"

namespace teig {

namespace {

// Sorts descending and merges values within tol, summing the paired counts.
void MergeDescending(std::vector<double>& v, std::vector<int>* counts, double tol) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v[i] > v[j]; });
  std::vector<double> out;
  std::vector<int> cnt;
  for (std::size_t i : idx) {
    const int c = counts ? (*counts)[i] : 0;
    if (!out.empty() && std::abs(out.back() - v[i]) <= tol * std::max(1.0, std::abs(v[i]))) {
      if (counts) cnt.back() += c;
      continue;
    }
    out.push_back(v[i]);
    cnt.push_back(c);
  }
  v = std::move(out);
  if (counts) *counts = std::move(cnt);
}

bool SetsMatch(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

std::string Join(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(10);
  os << "{";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "}";
  return os.str();
}

}  // namespace

const char* ToString(OracleSource s) {
  switch (s) {
    case OracleSource::AnalyticDiagonal: return "analytic_diagonal";
    case OracleSource::CircleScan: return "circle_scan";
    case OracleSource::NewtonMultistart: return "newton_multistart";
  }
  return "unknown";
}

OracleSpectrum DiagonalZSpectrum(const std::vector<double>& a, int m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("diagonal Z oracle needs an even order");
  if (a.empty() || a.size() > 20) throw std::invalid_argument("diagonal Z oracle needs 1..20 coefficients");
  for (double v : a) {
    if (!(v > 0.0)) throw std::invalid_argument("diagonal Z oracle needs positive coefficients");
  }
  OracleSpectrum out;
  out.source = OracleSource::AnalyticDiagonal;
  out.tolerance = 1e-12;
  const std::size_t n = a.size();
  if (m == 2) {
    out.eigenvalues = a;
    out.multiplicities.assign(n, 1);
  } else {
    const double p = 2.0 / (m - 2);
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      double s = 0.0;
      int size = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) {
          s += std::pow(a[i], -p);
          ++size;
        }
      }
      out.eigenvalues.push_back(std::pow(s, -1.0 / p));
      out.multiplicities.push_back(1 << (size - 1));
    }
  }
  MergeDescending(out.eigenvalues, &out.multiplicities, 1e-12);
  return out;
}

OracleSpectrum CircleScan(const Polynomial& f, int grid) {
  if (f.num_vars() != 2) throw std::invalid_argument("circle scan needs a form in two variables");
  if (grid < 8) throw std::invalid_argument("circle scan needs at least 8 grid points");
  const Polynomial fx = f.partial(0), fy = f.partial(1);
  const Polynomial fxx = fx.partial(0), fxy = fx.partial(1), fyy = fy.partial(1);
  auto phi = [&](double t) {
    const double u[2] = {std::cos(t), std::sin(t)};
    return f.evaluate(u);
  };
  auto dphi = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double u[2] = {c, s};
    return -s * fx.evaluate(u) + c * fy.evaluate(u);
  };
  auto ddphi = [&](double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double u[2] = {c, s};
    return s * s * fxx.evaluate(u) - 2.0 * s * c * fxy.evaluate(u) + c * c * fyy.evaluate(u) - c * fx.evaluate(u) -
           s * fy.evaluate(u);
  };

  const double h = 2.0 * std::numbers::pi / grid;
  std::vector<double> d(static_cast<std::size_t>(grid));
  for (int i = 0; i < grid; ++i) d[static_cast<std::size_t>(i)] = (phi((i + 1) * h) - phi((i - 1) * h)) / (2.0 * h);

  std::vector<double> values;
  for (int i = 0; i < grid; ++i) {
    const double d0 = d[static_cast<std::size_t>(i)];
    const double d1 = d[static_cast<std::size_t>((i + 1) % grid)];
    if (d0 != 0.0 && (d0 > 0.0) == (d1 > 0.0)) continue;
    if (d0 != 0.0 && d1 == 0.0) continue;  // picked up at the next cell
    double lo = i * h, hi = (i + 1) * h;
    double t = lo;
    if (d0 != 0.0) {
      // Bisection on the exact derivative, widened by one cell if the difference quotient misled.
      double glo = dphi(lo), ghi = dphi(hi);
      if ((glo > 0.0) == (ghi > 0.0)) {
        lo -= h;
        hi += h;
        glo = dphi(lo);
        ghi = dphi(hi);
      }
      if ((glo > 0.0) != (ghi > 0.0)) {
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = dphi(mid);
          if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
      }
      t = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 20; ++it) {
      const double g = dphi(t), gg = ddphi(t);
      if (gg == 0.0 || std::abs(g) <= 1e-15) break;
      const double step = g / gg;
      if (std::abs(step) > h) break;
      t -= step;
      if (std::abs(step) <= 1e-12) break;
    }
    values.push_back(phi(t));
  }
  OracleSpectrum out;
  out.source = OracleSource::CircleScan;
  out.tolerance = 1e-8;
  out.eigenvalues = std::move(values);
  MergeDescending(out.eigenvalues, nullptr, out.tolerance);
  return out;
}

OracleSpectrum NewtonMultistart(const SymmetricTensor& a, const SymmetricTensor& b, int starts, std::uint64_t seed) {
  if (a.dim() != b.dim()) throw std::invalid_argument("A and B dimensions differ");
  const int n = a.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values;
  std::vector<double> u(static_cast<std::size_t>(n));
  for (int s = 0; s < starts; ++s) {
    double norm = 0.0;
    for (auto& v : u) {
      v = normal(rng);
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (auto& v : u) v /= norm;
    const double bu = b.form().evaluate(u);
    if (!(std::abs(bu) > 1e-12)) continue;
    const PolishedPair p = VerifyEigenpair(a, b, a.form().evaluate(u) / bu, u, 100);
    if (p.residual <= 1e-10 && std::isfinite(p.lambda)) values.push_back(p.lambda);
  }
  OracleSpectrum out;
  out.source = OracleSource::NewtonMultistart;
  out.tolerance = 1e-6;
  out.eigenvalues = std::move(values);
  MergeDescending(out.eigenvalues, nullptr, out.tolerance);
  return out;
}

std::optional<std::vector<double>> DiagonalCoefficients(const SymmetricTensor& a) {
  const int n = a.dim(), m = a.order();
  std::vector<double> c(static_cast<std::size_t>(n), 0.0);
  for (const auto& [alpha, coef] : a.form().terms()) {
    int i = -1;
    for (int k = 0; k < n; ++k) {
      if (alpha[static_cast<std::size_t>(k)] == m) i = k;
    }
    if (i < 0) return std::nullopt;
    c[static_cast<std::size_t>(i)] = coef;
  }
  return c;
}

OracleComparison CompareWithOracle(const SymmetricTensor& a, const SymmetricTensor& b, bool z_kind,
                                   const std::vector<double>& eigenvalues, std::uint64_t seed) {
  OracleComparison cmp;
  std::vector<double> mine = eigenvalues;
  MergeDescending(mine, nullptr, 0.0);
  const auto diag = DiagonalCoefficients(a);
  const bool positive = diag && std::all_of(diag->begin(), diag->end(), [](double v) { return v > 0.0; });
  if (z_kind && a.order() % 2 == 0 && positive && a.dim() <= 20) {
    cmp.oracle = DiagonalZSpectrum(*diag, a.order());
    cmp.agrees = SetsMatch(cmp.oracle.eigenvalues, mine, 1e-4);
  } else if (z_kind && a.dim() == 2) {
    cmp.oracle = CircleScan(a.form());
    cmp.agrees = SetsMatch(cmp.oracle.eigenvalues, mine, 1e-4);
  } else {
    cmp.oracle = NewtonMultistart(a, b, 2000, seed);
    cmp.agrees = std::all_of(cmp.oracle.eigenvalues.begin(), cmp.oracle.eigenvalues.end(), [&](double v) {
      return std::any_of(mine.begin(), mine.end(), [&](double w) { return std::abs(v - w) <= 1e-5; });
    });
  }
  cmp.detail = std::string(ToString(cmp.oracle.source)) + " " + Join(cmp.oracle.eigenvalues) + " vs solver " + Join(mine);
  return cmp;
}

}  // namespace teig
