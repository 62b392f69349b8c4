#include "teig/moment.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>

namespace teig {

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(d), exps_(ExponentsUpToDegree(n, d)) {
  if (n < 1 || d < 0) throw std::invalid_argument("MonomialBasis: need n >= 1 and d >= 0");
  index_.reserve(exps_.size());
  for (std::size_t i = 0; i < exps_.size(); ++i) index_.emplace(exps_[i], static_cast<int>(i));
}

int MonomialBasis::index_of(const Exponent& alpha) const {
  auto it = index_.find(alpha);
  return it == index_.end() ? -1 : it->second;
}

Tms Tms::Dirac(std::span<const double> u, int degree) {
  return Mixture({std::vector<double>(u.begin(), u.end())}, {1.0}, degree);
}

Tms Tms::Mixture(const std::vector<std::vector<double>>& points, const std::vector<double>& weights, int degree) {
  if (points.empty() || points.size() != weights.size()) throw std::invalid_argument("Tms::Mixture: bad input");
  const int n = static_cast<int>(points.front().size());
  MonomialBasis basis(n, degree);
  Tms t{n, degree, Eigen::VectorXd::Zero(basis.size())};
  for (std::size_t k = 0; k < points.size(); ++k) {
    for (int i = 0; i < basis.size(); ++i) {
      double v = weights[k];
      for (int j = 0; j < n; ++j) {
        const int e = basis[i][static_cast<std::size_t>(j)];
        if (e > 0) v *= std::pow(points[k][static_cast<std::size_t>(j)], e);
      }
      t.values[i] += v;
    }
  }
  return t;
}

double Tms::operator[](const Exponent& alpha) const {
  MonomialBasis basis(n, degree);
  const int i = basis.index_of(alpha);
  if (i < 0) throw std::out_of_range("Tms: exponent beyond truncation degree");
  return values[i];
}

double LinearForm::evaluate(const Eigen::VectorXd& y) const {
  double s = 0.0;
  for (const auto& [i, c] : terms) s += c * y[i];
  return s;
}

LinearForm RieszForm(const Polynomial& p, const MonomialBasis& tms_basis) {
  LinearForm lf;
  for (const auto& [a, c] : p.terms()) {
    const int i = tms_basis.index_of(a);
    if (i < 0) throw std::invalid_argument("RieszForm: polynomial degree exceeds tms degree");
    lf.terms.emplace_back(i, c);
  }
  return lf;
}

Eigen::MatrixXd AffineMatrixBlock::evaluate(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(side, side);
  for (const auto& e : entries) {
    M(e.row, e.col) += e.coef * y[e.var];
  }
  for (int r = 0; r < side; ++r) {
    for (int c = r + 1; c < side; ++c) M(c, r) = M(r, c);
  }
  return M;
}

LinearForm AffineMatrixBlock::cell(int r, int c) const {
  if (r > c) std::swap(r, c);
  LinearForm lf;
  for (const auto& e : entries) {
    if (e.row == r && e.col == c) lf.terms.emplace_back(e.var, e.coef);
  }
  return lf;
}

int LocalizingSide(int n, int order, int q_degree) {
  const int t = (2 * order - q_degree) / 2;
  if (2 * order - q_degree < 0) return 0;
  return static_cast<int>(Binomial(n + t, t));
}

AffineMatrixBlock LocalizingBlock(const Polynomial& q, int order, const MonomialBasis& tms_basis) {
  const int n = tms_basis.num_vars();
  if (q.num_vars() != n) throw std::invalid_argument("LocalizingBlock: variable count mismatch");
  if (2 * order > tms_basis.degree()) throw std::invalid_argument("LocalizingBlock: order exceeds tms degree");
  const int dq = q.degree();
  if (dq > 2 * order) throw std::invalid_argument("LocalizingBlock: deg(q) > 2N");
  const int t = (2 * order - dq) / 2;

  AffineMatrixBlock blk;
  blk.row_monomials = ExponentsUpToDegree(n, t);
  blk.side = static_cast<int>(blk.row_monomials.size());
  for (int r = 0; r < blk.side; ++r) {
    for (int c = r; c < blk.side; ++c) {
      const Exponent bg = AddExponents(blk.row_monomials[static_cast<std::size_t>(r)],
                                       blk.row_monomials[static_cast<std::size_t>(c)]);
      for (const auto& [a, coef] : q.terms()) {
        const int var = tms_basis.index_of(AddExponents(a, bg));
        blk.entries.push_back({r, c, var, coef});
      }
    }
  }
  return blk;
}

AffineMatrixBlock MomentBlock(int order, const MonomialBasis& tms_basis) {
  AffineMatrixBlock blk = LocalizingBlock(Polynomial::Constant(tms_basis.num_vars(), 1.0), order, tms_basis);
  blk.label = "M_" + std::to_string(order) + "(y)";
  return blk;
}

std::vector<LinearForm> EqualityRows(const Polynomial& h, int order, const MonomialBasis& tms_basis) {
  const int n = tms_basis.num_vars();
  if (h.num_vars() != n) throw std::invalid_argument("EqualityRows: variable count mismatch");
  const int dh = h.degree();
  if (dh > 2 * order) throw std::invalid_argument("EqualityRows: deg(h) > 2N");
  std::vector<LinearForm> rows;
  if (h.is_zero()) return rows;
  // Each multiplier exponent is a distinct key, so rows are unique by construction.
  for (const Exponent& shift : ExponentsUpToDegree(n, 2 * order - dh)) {
    std::map<int, double> acc;
    for (const auto& [a, coef] : h.terms()) acc[tms_basis.index_of(AddExponents(a, shift))] += coef;
    LinearForm lf;
    for (const auto& [i, c] : acc) {
      if (c != 0.0) lf.terms.emplace_back(i, c);
    }
    if (!lf.empty()) rows.push_back(std::move(lf));
  }
  return rows;
}

MomentProblem CompileRelaxation(const ConstraintSystem& sys, int order, const Polynomial& objective, Sense sense,
                                const std::vector<Polynomial>& ineqs) {
  const int n0 = sys.base_order();
  if (order < n0) {
    throw std::invalid_argument("CompileRelaxation: order " + std::to_string(order) + " below N0 = " + std::to_string(n0));
  }
  if (objective.degree() > 2 * order) throw std::invalid_argument("CompileRelaxation: objective degree exceeds 2N");

  MomentProblem p;
  p.n = sys.n;
  p.order = order;
  p.basis = MonomialBasis(sys.n, 2 * order);
  p.sense = sense;
  p.objective = RieszForm(objective, p.basis);

  LinearForm y0;
  y0.terms.emplace_back(0, 1.0);
  p.equalities.push_back(y0);
  p.equality_rhs.push_back(1.0);
  for (const auto& h : sys.h) {
    for (auto& row : EqualityRows(h, order, p.basis)) {
      p.equalities.push_back(std::move(row));
      p.equality_rhs.push_back(0.0);
    }
  }

  p.blocks.push_back(MomentBlock(order, p.basis));
  auto add_ineq = [&](const Polynomial& q, const std::string& tag) {
    if (q.degree() > 2 * order) throw std::invalid_argument("CompileRelaxation: inequality degree exceeds 2N");
    AffineMatrixBlock blk = LocalizingBlock(q, order, p.basis);
    blk.label = tag;
    p.blocks.push_back(std::move(blk));
  };
  for (std::size_t i = 0; i < ineqs.size(); ++i) add_ineq(ineqs[i], "L[q" + std::to_string(i + 1) + "]");
  for (std::size_t i = 0; i < sys.extra_ineqs.size(); ++i) add_ineq(sys.extra_ineqs[i], "L[p" + std::to_string(i + 1) + "]");
  return p;
}

namespace {

void PrintForm(const LinearForm& lf, const MonomialBasis& basis, std::ostream& os) {
  if (lf.empty()) {
    os << "0";
    return;
  }
  bool first = true;
  for (const auto& [i, c] : lf.terms) {
    if (!first) os << " ";
    os << (c < 0 ? "-" : "+") << std::abs(c) << "*y[" << MonomialString(basis[i]) << "]";
    first = false;
  }
}

}  // namespace

void DumpMomentProblem(const MomentProblem& p, std::ostream& os) {
  os << "# moment relaxation n=" << p.n << " N=" << p.order << " tms_length=" << p.basis.size() << "\n";
  os << "sense " << (p.sense == Sense::Maximize ? "max" : "min") << "\n";
  os << "basis";
  for (const auto& a : p.basis.exponents()) os << " " << MonomialString(a);
  os << "\nobjective ";
  PrintForm(p.objective, p.basis, os);
  os << "\nequalities " << p.equalities.size() << "\n";
  for (std::size_t i = 0; i < p.equalities.size(); ++i) {
    os << "  ";
    PrintForm(p.equalities[i], p.basis, os);
    os << " = " << p.equality_rhs[i] << "\n";
  }
  os << "blocks " << p.blocks.size() << "\n";
  for (const auto& b : p.blocks) {
    os << "block " << b.label << " side=" << b.side << " rows:";
    for (const auto& a : b.row_monomials) os << " " << MonomialString(a);
    os << "\n";
    for (int r = 0; r < b.side; ++r) {
      for (int c = r; c < b.side; ++c) {
        os << "  (" << r << "," << c << ") ";
        PrintForm(b.cell(r, c), p.basis, os);
        os << "\n";
      }
    }
  }
}

}  // namespace teig
