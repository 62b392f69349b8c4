#include "teig/extract.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "teig/sdp.hpp"

namespace teig {

Eigen::MatrixXd TruncatedMomentMatrix(const Tms& y, int s) {
  const int side = static_cast<int>(Binomial(y.n + s, s));
  const MonomialBasis rows(y.n, s);
  const MonomialBasis full(y.n, y.degree);
  if (2 * s > y.degree) throw std::invalid_argument("TruncatedMomentMatrix: order exceeds tms degree");
  Eigen::MatrixXd M(side, side);
  for (int r = 0; r < side; ++r) {
    for (int c = r; c < side; ++c) {
      M(r, c) = y.values[full.index_of(AddExponents(rows[r], rows[c]))];
      M(c, r) = M(r, c);
    }
  }
  return M;
}

FlatnessReport CheckFlatness(const Tms& y, int order, int base_order, double rank_tol) {
  FlatnessReport rep;
  const Eigen::MatrixXd full = TruncatedMomentMatrix(y, order);
  for (int s = 0; s <= order; ++s) {
    const int side = static_cast<int>(Binomial(y.n + s, s));
    rep.ranks.push_back(RankOfPsd(full.topLeftCorner(side, side), rank_tol));
  }
  for (int t = std::max(base_order, 0); t <= order; ++t) {
    if (rep.ranks[static_cast<std::size_t>(t - base_order)] == rep.ranks[static_cast<std::size_t>(t)]) {
      rep.satisfied = true;
      rep.t = t;
      rep.ell = rep.ranks[static_cast<std::size_t>(t)];
      break;
    }
  }
  return rep;
}

Extraction ExtractAtoms(const Tms& y, const FlatnessReport& report, std::uint64_t seed, double rank_tol) {
  Extraction ex;
  if (!report.satisfied || report.ell < 1) {
    ex.failure = "truncation is not flat";
    return ex;
  }
  const int n = y.n;
  const int t = report.t;
  const int ell = report.ell;
  const Eigen::MatrixXd M = TruncatedMomentMatrix(y, t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const int side = static_cast<int>(M.rows());
  // Eigenvalues ascend; the last ell are dominant.
  Eigen::MatrixXd V = es.eigenvectors().rightCols(ell);
  for (int j = 0; j < ell; ++j) V.col(j) *= std::sqrt(std::max(0.0, es.eigenvalues()[side - ell + j]));

  // Reduced row echelon form of V^T: the pivot columns name a monomial basis of the quotient.
  Eigen::MatrixXd W = V.transpose();
  const double tol = rank_tol * std::max(1.0, W.cwiseAbs().maxCoeff());
  std::vector<int> pivots;
  int r = 0;
  for (int j = 0; j < side && r < ell; ++j) {
    Eigen::Index best = 0;
    const double mx = W.col(j).tail(ell - r).cwiseAbs().maxCoeff(&best);
    if (mx <= tol) continue;
    W.row(r).swap(W.row(r + static_cast<int>(best)));
    W.row(r) /= W(r, j);
    for (int i = 0; i < ell; ++i) {
      if (i != r) W.row(i) -= W(i, j) * W.row(r);
    }
    pivots.push_back(j);
    ++r;
  }
  if (r < ell) {
    ex.failure = "echelon form is rank deficient";
    return ex;
  }

  const MonomialBasis basis(n, t);
  std::vector<Eigen::MatrixXd> mult(static_cast<std::size_t>(n), Eigen::MatrixXd(ell, ell));
  for (int k = 0; k < ell; ++k) {
    for (int i = 0; i < n; ++i) {
      Exponent e = basis[pivots[static_cast<std::size_t>(k)]];
      ++e[static_cast<std::size_t>(i)];
      const int idx = basis.index_of(e);
      if (idx < 0) {
        ex.failure = "quotient basis reaches the truncation degree";
        return ex;
      }
      mult[static_cast<std::size_t>(i)].row(k) = W.col(idx).transpose();
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(n));
  double csum = 0.0;
  for (auto& ci : c) csum += (ci = unif(rng));
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(ell, ell);
  for (int i = 0; i < n; ++i) N += (c[static_cast<std::size_t>(i)] / csum) * mult[static_cast<std::size_t>(i)];

  Eigen::RealSchur<Eigen::MatrixXd> schur(N);
  if (schur.info() != Eigen::Success) {
    ex.failure = "Schur factorization failed";
    return ex;
  }
  const Eigen::MatrixXd& T = schur.matrixT();
  const double tnorm = std::max(1.0, T.norm());
  for (int j = 0; j + 1 < ell; ++j) {
    if (std::abs(T(j + 1, j)) > 1e-8 * tnorm) {
      ex.failure = "combination has a non-real eigenvalue";
      return ex;
    }
  }
  const Eigen::MatrixXd& Q = schur.matrixU();
  for (int j = 0; j < ell; ++j) {
    std::vector<double> u(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = Q.col(j).dot(mult[static_cast<std::size_t>(i)] * Q.col(j));
    bool dup = false;
    for (const auto& a : ex.atoms) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d = std::max(d, std::abs(a[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i)]));
      if (d <= 1e-6) dup = true;
    }
    if (!dup) ex.atoms.push_back(std::move(u));
  }
  ex.ok = true;
  return ex;
}

namespace {

struct EigenSystem {
  int n;
  int m;
  int mb;
  Polynomial f;
  Polynomial b;
  std::vector<Polynomial> df, db;
  std::vector<std::vector<Polynomial>> d2f, d2b;

  EigenSystem(const SymmetricTensor& a, const SymmetricTensor& bt)
      : n(a.dim()), m(a.order()), mb(bt.order()), f(a.form()), b(bt.form()) {
    for (int i = 0; i < n; ++i) {
      df.push_back(f.partial(i));
      db.push_back(b.partial(i));
    }
    for (int i = 0; i < n; ++i) {
      d2f.emplace_back();
      d2b.emplace_back();
      for (int j = 0; j < n; ++j) {
        d2f.back().push_back(df[static_cast<std::size_t>(i)].partial(j));
        d2b.back().push_back(db[static_cast<std::size_t>(i)].partial(j));
      }
    }
  }

  // (A u^{m-1} - lambda B u^{m'-1}, B u^{m'} - 1), using grad(A x^m) = m A x^{m-1}.
  Eigen::VectorXd Residual(std::span<const double> u, double lambda) const {
    Eigen::VectorXd F(n + 1);
    for (int i = 0; i < n; ++i) {
      F[i] = df[static_cast<std::size_t>(i)].evaluate(u) / m - lambda * db[static_cast<std::size_t>(i)].evaluate(u) / mb;
    }
    F[n] = b.evaluate(u) - 1.0;
    return F;
  }

  Eigen::MatrixXd Jacobian(std::span<const double> u, double lambda) const {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        J(i, j) = d2f[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].evaluate(u) / m -
                  lambda * d2b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].evaluate(u) / mb;
      }
      const double gb = db[static_cast<std::size_t>(i)].evaluate(u);
      J(i, n) = -gb / mb;
      J(n, i) = gb;
    }
    return J;
  }
};

}  // namespace

double EigenResidual(const SymmetricTensor& a, const SymmetricTensor& b, double lambda, std::span<const double> u) {
  const EigenSystem sys(a, b);
  return sys.Residual(u, lambda).cwiseAbs().maxCoeff();
}

PolishedPair VerifyEigenpair(const SymmetricTensor& a, const SymmetricTensor& b, double lambda,
                             std::span<const double> u0, int max_iterations) {
  const EigenSystem sys(a, b);
  const int n = sys.n;
  PolishedPair out;
  out.u.assign(u0.begin(), u0.end());
  out.lambda = lambda;
  const double bu = sys.b.evaluate(out.u);
  if (bu > 0.0 && std::isfinite(bu)) {
    const double s = std::pow(bu, 1.0 / sys.mb);
    for (auto& v : out.u) v /= s;
  }
  out.residual = sys.Residual(out.u, out.lambda).cwiseAbs().maxCoeff();

  std::vector<double> trial(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iterations && out.residual > 1e-15; ++it) {
    const Eigen::VectorXd F = sys.Residual(out.u, out.lambda);
    const Eigen::MatrixXd J = sys.Jacobian(out.u, out.lambda);
    const Eigen::VectorXd step = J.completeOrthogonalDecomposition().solve(-F);
    bool improved = false;
    for (double damp = 1.0; damp >= 1.0 / 64.0; damp *= 0.5) {
      for (int i = 0; i < n; ++i) trial[static_cast<std::size_t>(i)] = out.u[static_cast<std::size_t>(i)] + damp * step[i];
      const double tl = out.lambda + damp * step[n];
      const double res = sys.Residual(trial, tl).cwiseAbs().maxCoeff();
      if (res < out.residual) {
        out.u = trial;
        out.lambda = tl;
        out.residual = res;
        improved = true;
        break;
      }
    }
    out.iterations = it + 1;
    if (!improved) break;
  }
  return out;
}

}  // namespace teig
