#include "teig/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace teig {

std::string MonomialString(const Exponent& a) {
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += "x" + std::to_string(i + 1);
    if (a[i] > 1) out += "^" + std::to_string(a[i]);
  }
  return out.empty() ? "1" : out;
}

namespace {

void FillDegree(int n, int remaining, int pos, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  // Descending power of the current variable gives graded-lex order within a degree.
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    FillDegree(n, remaining - e, pos + 1, cur, out);
  }
}

}  // namespace

std::vector<Exponent> ExponentsOfDegree(int n, int d) {
  std::vector<Exponent> out;
  if (n <= 0 || d < 0) return out;
  Exponent cur(static_cast<std::size_t>(n), 0);
  FillDegree(n, d, 0, cur, out);
  return out;
}

std::vector<Exponent> ExponentsUpToDegree(int n, int d) {
  std::vector<Exponent> out;
  for (int k = 0; k <= d; ++k) {
    auto block = ExponentsOfDegree(n, k);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

Polynomial::Polynomial(int num_vars) : n_(num_vars) {
  if (num_vars < 0) throw std::invalid_argument("Polynomial: negative variable count");
}

Polynomial::Polynomial(int num_vars, Terms terms) : n_(num_vars), terms_(std::move(terms)) {
  for (const auto& [a, c] : terms_) {
    if (static_cast<int>(a.size()) != n_) throw std::invalid_argument("Polynomial: exponent length mismatch");
    for (int e : a) {
      if (e < 0) throw std::invalid_argument("Polynomial: negative exponent");
    }
  }
  prune();
}

Polynomial Polynomial::Constant(int num_vars, double c) {
  Terms t;
  t[Exponent(static_cast<std::size_t>(num_vars), 0)] = c;
  return Polynomial(num_vars, std::move(t));
}

Polynomial Polynomial::Variable(int num_vars, int i) {
  if (i < 0 || i >= num_vars) throw std::out_of_range("Polynomial::Variable: index out of range");
  Exponent a(static_cast<std::size_t>(num_vars), 0);
  a[static_cast<std::size_t>(i)] = 1;
  return Monomial(num_vars, a, 1.0);
}

Polynomial Polynomial::Monomial(int num_vars, const Exponent& alpha, double c) {
  Terms t;
  t[alpha] = c;
  return Polynomial(num_vars, std::move(t));
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, TotalDegree(a));
  return d;
}

double Polynomial::coefficient(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::prune() {
  const double cut = kPruneRelative * max_abs_coefficient();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0 || std::abs(it->second) <= cut) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

static void CheckSameVars(const Polynomial& a, const Polynomial& b) {
  if (a.num_vars() != b.num_vars()) throw std::invalid_argument("Polynomial: variable count mismatch");
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  CheckSameVars(*this, o);
  Terms t = terms_;
  for (const auto& [a, c] : o.terms_) t[a] += c;
  return Polynomial(n_, std::move(t));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  CheckSameVars(*this, o);
  Terms t = terms_;
  for (const auto& [a, c] : o.terms_) t[a] -= c;
  return Polynomial(n_, std::move(t));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  CheckSameVars(*this, o);
  Terms t;
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : o.terms_) t[AddExponents(a, b)] += ca * cb;
  }
  return Polynomial(n_, std::move(t));
}

Polynomial Polynomial::scale(double c) const {
  Terms t;
  if (c != 0.0) {
    for (const auto& [a, v] : terms_) t.emplace(a, v * c);
  }
  return Polynomial(n_, std::move(t));
}

Polynomial Polynomial::add_constant(double c) const { return *this + Constant(n_, c); }

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
  Polynomial r = Constant(n_, 1.0);
  for (int i = 0; i < k; ++i) r = r * (*this);
  return r;
}

Polynomial Polynomial::partial(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("Polynomial::partial: variable index out of range");
  Terms t;
  for (const auto& [a, c] : terms_) {
    const int e = a[static_cast<std::size_t>(i)];
    if (e == 0) continue;
    Exponent b = a;
    b[static_cast<std::size_t>(i)] = e - 1;
    t[b] += c * e;
  }
  return Polynomial(n_, std::move(t));
}

Polynomial Polynomial::directional(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != n_) throw std::invalid_argument("Polynomial::directional: dimension mismatch");
  Polynomial r(n_);
  for (int i = 0; i < n_; ++i) {
    if (u[static_cast<std::size_t>(i)] != 0.0) r = r + partial(i).scale(u[static_cast<std::size_t>(i)]);
  }
  return r;
}

double Polynomial::evaluate(std::span<const double> u) const {
  if (static_cast<int>(u.size()) != n_) throw std::invalid_argument("Polynomial::evaluate: dimension mismatch");
  double s = 0.0;
  for (const auto& [a, c] : terms_) {
    double term = c;
    for (int i = 0; i < n_; ++i) {
      const int e = a[static_cast<std::size_t>(i)];
      if (e > 0) term *= std::pow(u[static_cast<std::size_t>(i)], e);
    }
    s += term;
  }
  return s;
}

std::vector<double> Polynomial::gradient(std::span<const double> u) const {
  std::vector<double> g(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) g[static_cast<std::size_t>(i)] = partial(i).evaluate(u);
  return g;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const double c = it->second;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    const double ac = std::abs(c);
    const std::string mono = MonomialString(it->first);
    if (mono == "1") {
      os << ac;
    } else {
      if (ac != 1.0) os << ac << "*";
      os << mono;
    }
    first = false;
  }
  return os.str();
}

Polynomial ParseSparsePolynomial(const std::string& line, int num_vars) {
  std::istringstream is(line);
  std::string tok;
  Polynomial::Terms terms;
  while (is >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("region term missing ':' in '" + tok + "'");
    double coeff = 0.0;
    try {
      coeff = std::stod(tok.substr(0, colon));
    } catch (const std::exception&) {
      throw std::invalid_argument("region term has a malformed coefficient: '" + tok + "'");
    }
    Exponent a;
    std::stringstream es(tok.substr(colon + 1));
    std::string part;
    while (std::getline(es, part, ',')) {
      try {
        a.push_back(std::stoi(part));
      } catch (const std::exception&) {
        throw std::invalid_argument("region term has a malformed exponent: '" + tok + "'");
      }
    }
    if (static_cast<int>(a.size()) != num_vars) {
      throw std::invalid_argument("region term exponent has wrong length: '" + tok + "'");
    }
    terms[a] += coeff;
  }
  return Polynomial(num_vars, std::move(terms));
}

}  // namespace teig
