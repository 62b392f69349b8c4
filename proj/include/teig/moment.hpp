#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "teig/exponent.hpp"
#include "teig/jacobian.hpp"
#include "teig/polynomial.hpp"

namespace teig {

/// Exponents of N^n_d in graded-lex order with an inverse lookup. Ordinal 0 is the
/// constant monomial, and the basis of degree d is a prefix of the basis of degree d+1.
class MonomialBasis {
 public:
  MonomialBasis(int n, int d);

  int num_vars() const { return n_; }
  int degree() const { return d_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const Exponent& operator[](int i) const { return exps_[static_cast<std::size_t>(i)]; }
  const std::vector<Exponent>& exponents() const { return exps_; }
  /// Ordinal of alpha, or -1 when |alpha| > d.
  int index_of(const Exponent& alpha) const;

 private:
  int n_;
  int d_;
  std::vector<Exponent> exps_;
  std::unordered_map<Exponent, int, ExponentHash> index_;
};

/// Truncated moment sequence y indexed by MonomialBasis(n, degree).
struct Tms {
  int n = 0;
  int degree = 0;
  Eigen::VectorXd values;

  /// y_alpha = u^alpha, the moments of the Dirac measure at u.
  static Tms Dirac(std::span<const double> u, int degree);
  /// sum_i w_i * Dirac(u_i).
  static Tms Mixture(const std::vector<std::vector<double>>& points, const std::vector<double>& weights, int degree);

  double operator[](const Exponent& alpha) const;
};

/// Sparse linear functional over tms entries.
struct LinearForm {
  std::vector<std::pair<int, double>> terms;  // (tms ordinal, coefficient)

  double evaluate(const Eigen::VectorXd& y) const;
  bool empty() const { return terms.empty(); }
};

/// L_y applied to a polynomial: <p, y> = sum p_alpha y_alpha.
LinearForm RieszForm(const Polynomial& p, const MonomialBasis& tms_basis);

/// Symmetric matrix whose cells are linear forms in y: cell(beta, gamma) = sum_alpha q_alpha y_{alpha+beta+gamma}.
struct AffineMatrixBlock {
  struct Entry {
    int row;  // row <= col
    int col;
    int var;  // tms ordinal
    double coef;
  };

  int side = 0;
  std::vector<Exponent> row_monomials;
  std::vector<Entry> entries;
  std::string label;

  Eigen::MatrixXd evaluate(const Eigen::VectorXd& y) const;
  /// Linear form of cell (r, c); symmetric in (r, c).
  LinearForm cell(int r, int c) const;
};

/// The k-th localizing matrix of q; for q = 1 this is the moment matrix M_k(y).
/// Rows are indexed by monomials p with deg(q p^2) <= 2k.
AffineMatrixBlock LocalizingBlock(const Polynomial& q, int order, const MonomialBasis& tms_basis);
AffineMatrixBlock MomentBlock(int order, const MonomialBasis& tms_basis);

/// Side length C(n + t, t), t = floor((2k - deg q)/2).
int LocalizingSide(int n, int order, int q_degree);

/// Scalar equalities encoding h = 0 at relaxation order k: L_y(h x^alpha) = 0 for all
/// |alpha| <= 2k - deg h, i.e. the truncated ideal I_{2k}(h). Rows with identical
/// exponent keys are merged, zero rows dropped.
std::vector<LinearForm> EqualityRows(const Polynomial& h, int order, const MonomialBasis& tms_basis);

enum class Sense { Maximize, Minimize };

/// A moment relaxation: optimize <objective, y> subject to linear equalities
/// (including y_0 = 1) and affine PSD blocks.
struct MomentProblem {
  int n = 0;
  int order = 0;  // N
  MonomialBasis basis{1, 0};  // degree 2N
  Sense sense = Sense::Maximize;
  LinearForm objective;
  std::vector<LinearForm> equalities;
  std::vector<double> equality_rhs;
  std::vector<AffineMatrixBlock> blocks;

  int num_vars() const { return basis.size(); }
};

/// Assembles the order-N relaxation of  opt objective s.t. h_r = 0, q >= 0 (q in ineqs
/// and sys.extra_ineqs), with the moment matrix M_N(y) as the first block.
MomentProblem CompileRelaxation(const ConstraintSystem& sys, int order, const Polynomial& objective, Sense sense,
                                const std::vector<Polynomial>& ineqs);

/// Plain-text dump: basis list, equality rows, block stencils.
void DumpMomentProblem(const MomentProblem& p, std::ostream& os);

}  // namespace teig
