#include "teig/tensor.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace teig {

namespace {

void CheckShape(int n, int m) {
  if (n < 1) throw std::invalid_argument("tensor dimension n must be >= 1");
  if (m < 0) throw std::invalid_argument("tensor order m must be >= 0");
}

Exponent IndexClass(int n, int m, std::span<const int> index) {
  if (static_cast<int>(index.size()) != m) {
    throw std::invalid_argument("tensor entry index has length " + std::to_string(index.size()) +
                                ", expected " + std::to_string(m));
  }
  Exponent a(static_cast<std::size_t>(n), 0);
  for (int i : index) {
    if (i < 1 || i > n) throw std::out_of_range("tensor entry index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
    ++a[static_cast<std::size_t>(i - 1)];
  }
  return a;
}

double Factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

double MultinomialWeight(const Exponent& alpha) {
  double w = 1.0 / Factorial(TotalDegree(alpha));
  for (int e : alpha) w *= Factorial(e);
  return w;
}

SymmetricTensor::SymmetricTensor(int n, int m) : n_(n), m_(m), form_(n) { CheckShape(n, m); }

SymmetricTensor::SymmetricTensor(int n, int m, Polynomial form) : n_(n), m_(m), form_(std::move(form)) {}

SymmetricTensor SymmetricTensor::FromEntries(int n, int m, std::span<const TensorEntry> entries) {
  CheckShape(n, m);
  if (m < 2) throw std::invalid_argument("tensor order m must be >= 2");
  std::map<std::vector<int>, double> raw;
  for (const auto& e : entries) {
    IndexClass(n, m, e.index);  // validates
    raw[e.index] = e.value;
  }
  // The form sum A_{i} x_{i1}...x_{im} is invariant under symmetrization, so each
  // class coefficient is the plain sum of its raw entries.
  Polynomial::Terms terms;
  for (const auto& [idx, v] : raw) terms[IndexClass(n, m, idx)] += v;
  return SymmetricTensor(n, m, Polynomial(n, std::move(terms)));
}

SymmetricTensor SymmetricTensor::FromSymmetricEntries(int n, int m, std::span<const TensorEntry> entries) {
  CheckShape(n, m);
  Polynomial::Terms terms;
  for (const auto& e : entries) {
    Exponent a = IndexClass(n, m, e.index);
    terms[a] = e.value / MultinomialWeight(a);
  }
  return SymmetricTensor(n, m, Polynomial(n, std::move(terms)));
}

SymmetricTensor SymmetricTensor::FromForm(const Polynomial& form) {
  if (form.num_vars() < 1) throw std::invalid_argument("FromForm: polynomial has no variables");
  int m = -1;
  for (const auto& [a, c] : form.terms()) {
    const int d = TotalDegree(a);
    if (m >= 0 && d != m) throw std::invalid_argument("FromForm: polynomial is not homogeneous");
    m = d;
  }
  if (m < 0) throw std::invalid_argument("FromForm: zero polynomial has no defined order");
  return SymmetricTensor(form.num_vars(), m, form);
}

double SymmetricTensor::entry(std::span<const int> index) const {
  Exponent a = IndexClass(n_, m_, index);
  return form_.coefficient(a) * MultinomialWeight(a);
}

SymmetricTensor SymmetricTensor::contract(std::span<const double> u, int k) const {
  if (static_cast<int>(u.size()) != n_) throw std::invalid_argument("contract: dimension mismatch");
  if (k < 0 || k > m_) throw std::invalid_argument("contract: k must lie in 0..m");
  // (u . grad)^k A x^m = m (m-1) ... (m-k+1) (A u^k) x^{m-k}.
  Polynomial p = form_;
  double falling = 1.0;
  for (int j = 0; j < k; ++j) {
    p = p.directional(u);
    falling *= (m_ - j);
  }
  return SymmetricTensor(n_, m_ - k, p.scale(1.0 / falling));
}

double SymmetricTensor::scalar() const {
  if (m_ != 0) throw std::logic_error("scalar() requires an order-0 tensor");
  return form_.coefficient(Exponent(static_cast<std::size_t>(n_), 0));
}

std::vector<double> SymmetricTensor::as_vector() const {
  if (m_ != 1) throw std::logic_error("as_vector() requires an order-1 tensor");
  std::vector<double> v(static_cast<std::size_t>(n_), 0.0);
  for (const auto& [a, c] : form_.terms()) {
    for (int i = 0; i < n_; ++i) {
      if (a[static_cast<std::size_t>(i)] == 1) v[static_cast<std::size_t>(i)] = c;
    }
  }
  return v;
}

Eigen::MatrixXd SymmetricTensor::as_matrix() const {
  if (m_ != 2) throw std::logic_error("as_matrix() requires an order-2 tensor");
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const int idx[2] = {i + 1, j + 1};
      M(i, j) = entry(idx);
    }
  }
  return M;
}

SymmetricTensor SymmetricTensor::scaled(double c) const { return SymmetricTensor(n_, m_, form_.scale(c)); }

SymmetricTensor MakeBTensor(BKind kind, int n, int m, const Eigen::MatrixXd* d_matrix) {
  CheckShape(n, m);
  switch (kind) {
    case BKind::Z: {
      Polynomial p(n);
      for (int i = 0; i < n; ++i) p = p + Polynomial::Variable(n, i).pow(2);
      return SymmetricTensor::FromForm(p);
    }
    case BKind::H: {
      if (m < 1) throw std::invalid_argument("H-kind requires order m >= 1");
      Polynomial p(n);
      for (int i = 0; i < n; ++i) p = p + Polynomial::Variable(n, i).pow(m);
      return SymmetricTensor::FromForm(p);
    }
    case BKind::D: {
      if (d_matrix == nullptr) throw std::invalid_argument("D-kind requires a matrix");
      const Eigen::MatrixXd& D = *d_matrix;
      if (D.rows() != n || D.cols() != n) throw std::invalid_argument("D matrix has wrong size");
      if ((D - D.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + D.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("D matrix is not symmetric");
      }
      Eigen::LLT<Eigen::MatrixXd> llt(D);
      if (llt.info() != Eigen::Success) throw std::invalid_argument("D matrix is not positive definite");
      std::vector<TensorEntry> entries;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) entries.push_back({{i + 1, j + 1}, D(i, j)});
      }
      return SymmetricTensor::FromEntries(n, 2, entries);
    }
  }
  throw std::logic_error("unknown B kind");
}

SymmetricTensor RandomSymmetric(int n, int m, std::uint64_t seed) {
  CheckShape(n, m);
  if (m < 2) throw std::invalid_argument("tensor order m must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  // Walk the dense n^m array in column-major order.
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(n);
  Polynomial::Terms terms;
  Exponent a(static_cast<std::size_t>(n));
  std::vector<int> idx(static_cast<std::size_t>(m), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::fill(a.begin(), a.end(), 0);
    for (int i : idx) ++a[static_cast<std::size_t>(i)];
    terms[a] += normal(rng);
    for (int p = 0; p < m; ++p) {
      if (++idx[static_cast<std::size_t>(p)] < n) break;
      idx[static_cast<std::size_t>(p)] = 0;
    }
  }
  return SymmetricTensor::FromForm(Polynomial(n, std::move(terms)));
}

}  // namespace teig
