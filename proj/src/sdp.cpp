#include "teig/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace teig {

const char* ToString(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::Infeasible: return "infeasible";
    case SdpStatus::Unbounded: return "unbounded";
    case SdpStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

int RankOfPsd(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
  const double cut = tol * std::max(1.0, sv.maxCoeff());
  return static_cast<int>((sv.array() > cut).count());
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// PSD block after presolve scaling, with entries grouped by tms ordinal.
struct Block {
  int side = 0;
  double scale = 1.0;
  std::vector<AffineMatrixBlock::Entry> entries;
  std::vector<int> vars;
  std::vector<std::vector<int>> by_var;
};

Block MakeBlock(const AffineMatrixBlock& src) {
  Block b;
  b.side = src.side;
  b.entries = src.entries;
  double mx = 0.0;
  for (const auto& e : b.entries) mx = std::max(mx, std::abs(e.coef));
  b.scale = mx > 0.0 ? mx : 1.0;
  for (auto& e : b.entries) e.coef /= b.scale;
  std::vector<int> slot;
  for (std::size_t i = 0; i < b.entries.size(); ++i) {
    const int v = b.entries[i].var;
    if (v >= static_cast<int>(slot.size())) slot.resize(static_cast<std::size_t>(v) + 1, -1);
    if (slot[static_cast<std::size_t>(v)] < 0) {
      slot[static_cast<std::size_t>(v)] = static_cast<int>(b.vars.size());
      b.vars.push_back(v);
      b.by_var.emplace_back();
    }
    b.by_var[static_cast<std::size_t>(slot[static_cast<std::size_t>(v)])].push_back(static_cast<int>(i));
  }
  return b;
}

// Sum of coef * x_var over the block stencil, as a full symmetric matrix.
Mat ApplyF(const Block& b, const Vec& x) {
  Mat M = Mat::Zero(b.side, b.side);
  for (const auto& e : b.entries) M(e.row, e.col) += e.coef * x[e.var];
  for (int r = 0; r < b.side; ++r) {
    for (int c = r + 1; c < b.side; ++c) M(c, r) = M(r, c);
  }
  return M;
}

// out += alpha * F^*(Z), the adjoint under <X, Y> = tr(XY).
void AddAdjoint(const Block& b, const Mat& Z, double alpha, Vec& out) {
  for (const auto& e : b.entries) {
    const double v = e.row == e.col ? Z(e.row, e.row) : Z(e.row, e.col) + Z(e.col, e.row);
    out[e.var] += alpha * e.coef * v;
  }
}

// Nesterov-Todd scaling: r^T z r = r^{-1} s r^{-T} = diag(lambda).
struct Scaling {
  Mat r;
  Mat rti;  // r^{-T}
  Mat w;    // r r^T, so that W(dz) = w dz w
  Mat v;    // (r r^T)^{-1}
  Vec lambda;
};

bool ComputeScaling(const Mat& s, const Mat& z, Scaling& out) {
  Eigen::LLT<Mat> ls(s);
  Eigen::LLT<Mat> lz(z);
  if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
  const Mat Ls = ls.matrixL();
  const Mat Lz = lz.matrixL();
  Eigen::JacobiSVD<Mat> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.lambda = svd.singularValues();
  if (out.lambda.minCoeff() <= 0.0 || !out.lambda.allFinite()) return false;
  const Vec isq = out.lambda.cwiseSqrt().cwiseInverse();
  out.r = Ls * svd.matrixV() * isq.asDiagonal();
  out.rti = Lz * svd.matrixU() * isq.asDiagonal();
  out.w = out.r * out.r.transpose();
  out.v = out.rti * out.rti.transpose();
  return true;
}

// Largest alpha with diag(lambda) + alpha * d PSD (infinity when unrestricted).
double MaxStep(const Vec& lambda, const Mat& d) {
  const Vec isq = lambda.cwiseSqrt().cwiseInverse();
  const Mat m = isq.asDiagonal() * d * isq.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  const double mn = es.eigenvalues().minCoeff();
  return mn >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / mn;
}

double Dot(const Mat& a, const Mat& b) { return (a.array() * b.array()).sum(); }

class HsdSolver {
 public:
  HsdSolver(const MomentProblem& prob, const SdpSettings& st) : prob_(prob), st_(st) {}

  ConicSolution Run();

 private:
  bool Presolve(ConicSolution& out);
  void FormSchur();
  void SolveKkt(const Vec& bx, const Vec& by, const std::vector<Mat>& bz, Vec& ux, Vec& unu, std::vector<Mat>& uz) const;
  void SolveKktOnce(const Vec& bx, const Vec& by, const std::vector<Mat>& bz, Vec& ux, Vec& unu, std::vector<Mat>& uz) const;
  Vec Adjoint(const std::vector<Mat>& z) const;
  InfeasibilityCertificate MakeCertificate(const Vec& nu_kept, const std::vector<Mat>& z) const;

  const MomentProblem& prob_;
  const SdpSettings& st_;

  int L_ = 0;
  double sign_ = 1.0;  // +1 minimize, -1 maximize
  Vec c_;
  Mat E_;              // all equality rows, normalized
  Vec e_;
  Vec row_scale_;      // original row = E_ row * row_scale
  std::vector<int> kept_;
  Mat A_;
  Vec b_;
  Mat Q1_, Q2_, R11_;
  std::vector<Block> blocks_;
  std::vector<Scaling> scal_;
  Mat H_, HQ2_;
  Eigen::LLT<Mat> kchol_;
  Eigen::LDLT<Mat> kldlt_;
  bool use_ldlt_ = false;
};

bool HsdSolver::Presolve(ConicSolution& out) {
  const int p0 = static_cast<int>(prob_.equalities.size());
  E_ = Mat::Zero(p0, L_);
  e_ = Vec::Zero(p0);
  row_scale_ = Vec::Ones(p0);
  for (int i = 0; i < p0; ++i) {
    for (const auto& [j, v] : prob_.equalities[static_cast<std::size_t>(i)].terms) E_(i, j) += v;
    e_[i] = prob_.equality_rhs[static_cast<std::size_t>(i)];
    const double nrm = E_.row(i).norm();
    if (nrm > 0.0) {
      E_.row(i) /= nrm;
      e_[i] /= nrm;
      row_scale_[i] = 1.0 / nrm;
    }
  }
  Eigen::ColPivHouseholderQR<Mat> qr(E_.transpose());
  qr.setThreshold(st_.presolve_tol);
  const int rank = static_cast<int>(qr.rank());
  const auto& perm = qr.colsPermutation().indices();
  kept_.assign(perm.data(), perm.data() + rank);
  A_.resize(rank, L_);
  b_.resize(rank);
  for (int i = 0; i < rank; ++i) {
    A_.row(i) = E_.row(kept_[static_cast<std::size_t>(i)]);
    b_[i] = e_[kept_[static_cast<std::size_t>(i)]];
  }
  const Mat Q = qr.householderQ();
  Q1_ = Q.leftCols(rank);
  Q2_ = Q.rightCols(L_ - rank);
  R11_ = qr.matrixR().topLeftCorner(rank, rank).triangularView<Eigen::Upper>();

  // Dropped rows must be consistent with the kept ones.
  const Vec xp = Q1_ * R11_.transpose().triangularView<Eigen::Lower>().solve(b_);
  const Vec res = E_ * xp - e_;
  const double tol = 1e-8 * (1.0 + xp.norm());
  int worst = -1;
  for (int i = 0; i < p0; ++i) {
    if (std::abs(res[i]) > tol && (worst < 0 || std::abs(res[i]) > std::abs(res[worst]))) worst = i;
  }
  if (worst < 0) return true;

  // Row `worst` is A^T t in span of kept rows but with a different right-hand side.
  const Vec t = R11_.triangularView<Eigen::Upper>().solve(Q1_.transpose() * E_.row(worst).transpose());
  Vec nu_norm = Vec::Zero(p0);
  nu_norm[worst] = 1.0;
  for (int i = 0; i < rank; ++i) nu_norm[kept_[static_cast<std::size_t>(i)]] -= t[i];
  if (res[worst] < 0.0) nu_norm = -nu_norm;  // e^T nu = -res[worst] must be negative
  InfeasibilityCertificate cert;
  cert.equality_multipliers = nu_norm.cwiseProduct(row_scale_);
  for (const auto& blk : prob_.blocks) cert.block_duals.push_back(Mat::Zero(blk.side, blk.side));
  const double scale = cert.equality_multipliers.norm();
  cert.equality_multipliers /= scale;
  Vec eo(p0);
  for (int i = 0; i < p0; ++i) eo[i] = prob_.equality_rhs[static_cast<std::size_t>(i)];
  cert.violation = -eo.dot(cert.equality_multipliers);
  Mat Eo = E_;
  for (int i = 0; i < p0; ++i) Eo.row(i) /= row_scale_[i];
  cert.residual = (Eo.transpose() * cert.equality_multipliers).norm();
  out.status = SdpStatus::Infeasible;
  out.certificate = std::move(cert);
  out.message = "equality system is inconsistent";
  return false;
}

Vec HsdSolver::Adjoint(const std::vector<Mat>& z) const {
  Vec out = Vec::Zero(L_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) AddAdjoint(blocks_[k], z[k], 1.0, out);
  return out;
}

void HsdSolver::FormSchur() {
  H_ = Mat::Zero(L_, L_);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const Block& b = blocks_[k];
    const Mat& V = scal_[k].v;
    Mat T(b.side, b.side), U, W;
    for (std::size_t j = 0; j < b.vars.size(); ++j) {
      // T = sum over entries of cf V[:, row] V[:, col]^T, as one rank-k product.
      const auto& ids = b.by_var[j];
      const auto k_terms = static_cast<Eigen::Index>(ids.size());
      U.resize(b.side, k_terms);
      W.resize(b.side, k_terms);
      for (Eigen::Index t = 0; t < k_terms; ++t) {
        const auto& e = b.entries[static_cast<std::size_t>(ids[static_cast<std::size_t>(t)])];
        const double cf = e.row == e.col ? 0.5 * e.coef : e.coef;
        U.col(t) = cf * V.col(e.row);
        W.col(t) = V.col(e.col);
      }
      T.noalias() = U * W.transpose();
      // V F_j V = T + T^T; accumulate <F_i, V F_j V> for every i in this block.
      const int vj = b.vars[j];
      for (const auto& e : b.entries) {
        const double tv = e.row == e.col ? 2.0 * T(e.row, e.row) : 2.0 * (T(e.row, e.col) + T(e.col, e.row));
        H_(e.var, vj) += e.coef * tv;
      }
    }
  }
  H_ = 0.5 * (H_ + H_.transpose());
  HQ2_ = H_ * Q2_;
  Mat K(Q2_.cols(), Q2_.cols());
  K.triangularView<Eigen::Lower>() = Q2_.transpose() * HQ2_;
  use_ldlt_ = false;
  if (K.rows() > 0) {
    kchol_.compute(K);
    if (kchol_.info() != Eigen::Success) {
      kldlt_.compute(K);
      use_ldlt_ = true;
    }
  }
}

// Solves  A^T unu - F^*(rti uz rti^T) = bx,  A ux = by,  -rti^T F(ux) rti - uz = bz,
// the KKT system with the cone rows written in Nesterov-Todd scaled coordinates.
void HsdSolver::SolveKktOnce(const Vec& bx, const Vec& by, const std::vector<Mat>& bz, Vec& ux, Vec& unu,
                             std::vector<Mat>& uz) const {
  const Vec xp = Q1_ * R11_.transpose().triangularView<Eigen::Lower>().solve(by);
  std::vector<Mat> ubz(bz.size());
  for (std::size_t k = 0; k < bz.size(); ++k) ubz[k] = scal_[k].rti * bz[k] * scal_[k].rti.transpose();
  const Vec rhs = bx - Adjoint(ubz) - H_ * xp;
  if (Q2_.cols() > 0) {
    const Vec q = Q2_.transpose() * rhs;
    const Vec w = use_ldlt_ ? Vec(kldlt_.solve(q)) : Vec(kchol_.solve(q));
    ux = xp + Q2_ * w;
    unu = R11_.triangularView<Eigen::Upper>().solve(Q1_.transpose() * (rhs - HQ2_ * w));
  } else {
    ux = xp;
    unu = R11_.triangularView<Eigen::Upper>().solve(Q1_.transpose() * rhs);
  }
  uz.resize(bz.size());
  for (std::size_t k = 0; k < bz.size(); ++k) {
    uz[k] = -(scal_[k].rti.transpose() * ApplyF(blocks_[k], ux) * scal_[k].rti) - bz[k];
  }
}

void HsdSolver::SolveKkt(const Vec& bx, const Vec& by, const std::vector<Mat>& bz, Vec& ux, Vec& unu,
                         std::vector<Mat>& uz) const {
  SolveKktOnce(bx, by, bz, ux, unu, uz);
  // Iterative refinement, kept only while it lowers the residual.
  auto residual = [&](const Vec& x, const Vec& nu, const std::vector<Mat>& z, Vec& ex, Vec& ey, std::vector<Mat>& ez) {
    std::vector<Mat> uzs(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) uzs[k] = scal_[k].rti * z[k] * scal_[k].rti.transpose();
    ex = bx - (A_.transpose() * nu - Adjoint(uzs));
    ey = by - A_ * x;
    double r2 = ex.squaredNorm() + ey.squaredNorm();
    ez.resize(bz.size());
    for (std::size_t k = 0; k < bz.size(); ++k) {
      ez[k] = bz[k] + scal_[k].rti.transpose() * ApplyF(blocks_[k], x) * scal_[k].rti + z[k];
      r2 += ez[k].squaredNorm();
    }
    return std::sqrt(r2);
  };
  Vec ex, ey;
  std::vector<Mat> ez;
  double res = residual(ux, unu, uz, ex, ey, ez);
  for (int round = 0; round < 3 && res > 0.0; ++round) {
    Vec cx, cnu;
    std::vector<Mat> cz;
    SolveKktOnce(ex, ey, ez, cx, cnu, cz);
    Vec tx = ux + cx, tnu = unu + cnu;
    std::vector<Mat> tz(uz.size());
    for (std::size_t k = 0; k < uz.size(); ++k) tz[k] = uz[k] + cz[k];
    Vec fx, fy;
    std::vector<Mat> fz;
    const double tres = residual(tx, tnu, tz, fx, fy, fz);
    if (!(tres < 0.5 * res)) break;
    ux = std::move(tx);
    unu = std::move(tnu);
    uz = std::move(tz);
    ex = std::move(fx);
    ey = std::move(fy);
    ez = std::move(fz);
    res = tres;
  }
}

InfeasibilityCertificate HsdSolver::MakeCertificate(const Vec& nu_kept, const std::vector<Mat>& z) const {
  InfeasibilityCertificate cert;
  const int p0 = static_cast<int>(E_.rows());
  Vec nu = Vec::Zero(p0);
  for (std::size_t i = 0; i < kept_.size(); ++i) nu[kept_[i]] = nu_kept[static_cast<Eigen::Index>(i)];
  cert.equality_multipliers = nu.cwiseProduct(row_scale_);
  double total = cert.equality_multipliers.norm();
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    cert.block_duals.push_back(z[k] / blocks_[k].scale);
    total += cert.block_duals.back().norm();
  }
  cert.equality_multipliers /= total;
  for (auto& zk : cert.block_duals) zk /= total;

  Vec eo(p0);
  for (int i = 0; i < p0; ++i) eo[i] = prob_.equality_rhs[static_cast<std::size_t>(i)];
  cert.violation = -eo.dot(cert.equality_multipliers);
  Vec r = Vec::Zero(L_);
  for (int i = 0; i < p0; ++i) {
    for (const auto& [j, v] : prob_.equalities[static_cast<std::size_t>(i)].terms) r[j] -= v * cert.equality_multipliers[i];
  }
  for (std::size_t k = 0; k < prob_.blocks.size(); ++k) {
    const Mat& Z = cert.block_duals[k];
    for (const auto& e : prob_.blocks[k].entries) {
      r[e.var] += e.coef * (e.row == e.col ? Z(e.row, e.row) : Z(e.row, e.col) + Z(e.col, e.row));
    }
  }
  cert.residual = r.norm();
  return cert;
}

ConicSolution HsdSolver::Run() {
  ConicSolution out;
  L_ = prob_.num_vars();
  out.y_star = Tms{prob_.n, 2 * prob_.order, Vec::Zero(L_)};
  if (prob_.blocks.empty()) throw std::invalid_argument("SolveSdp: problem needs at least one PSD block");
  if (prob_.equalities.size() != prob_.equality_rhs.size()) throw std::invalid_argument("SolveSdp: equality size mismatch");

  sign_ = prob_.sense == Sense::Minimize ? 1.0 : -1.0;
  c_ = Vec::Zero(L_);
  for (const auto& [i, v] : prob_.objective.terms) c_[i] += sign_ * v;

  if (!Presolve(out)) return out;
  for (const auto& b : prob_.blocks) blocks_.push_back(MakeBlock(b));
  scal_.resize(blocks_.size());

  const int p = static_cast<int>(A_.rows());
  int cone_dim = 0;
  for (const auto& b : blocks_) cone_dim += b.side;

  Vec x = Vec::Zero(L_);
  Vec nu = Vec::Zero(p);
  std::vector<Mat> s, z;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const int side = blocks_[k].side;
    s.push_back(Mat::Identity(side, side));
    z.push_back(Mat::Identity(side, side));
    scal_[k].r = scal_[k].rti = scal_[k].w = scal_[k].v = Mat::Identity(side, side);
    scal_[k].lambda = Vec::Ones(side);
  }
  ConicSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  // Stall detection: the merit must drop tenfold within every stall_iterations window.
  // Skipped while kappa dominates tau, where an infeasibility certificate may still form.
  double window_merit = std::numeric_limits<double>::infinity();
  int window_start = 0;
  auto give_up = [&](const std::string& why) {
    ConicSolution r = std::isfinite(best_merit) ? best : out;
    r.status = SdpStatus::Inconclusive;
    r.iterations = out.iterations;
    r.message = why;
    return r;
  };
  double tau = 1.0, kappa = 1.0;
  const double bnorm = 1.0 + b_.norm();
  const double cnorm = 1.0 + c_.norm();

  if (st_.log) {
    *st_.log << "sdp: vars=" << L_ << " eq=" << prob_.equalities.size() << " kept=" << p << " blocks=" << blocks_.size()
             << " cone_dim=" << cone_dim << "\n";
  }

  const std::size_t nb = blocks_.size();
  for (int it = 0; it <= st_.max_iterations; ++it) {
    out.iterations = it;
    // Residuals of the homogeneous system.
    const Vec hrx = A_.transpose() * nu - Adjoint(z);
    const Vec rx = hrx + c_ * tau;
    const Vec hry = A_ * x;
    const Vec ry = b_ * tau - hry;
    std::vector<Mat> rz(nb);
    double rz_norm2 = 0.0, gap = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      rz[k] = ApplyF(blocks_[k], x) - s[k];
      rz_norm2 += rz[k].squaredNorm();
      gap += Dot(s[k], z[k]);
    }
    const double cx = c_.dot(x);
    const double bnu = b_.dot(nu);
    const double rt = -cx - bnu - kappa;
    const double mu = (gap + tau * kappa) / (cone_dim + 1);

    const double pcost = cx / tau;
    const double dcost = -bnu / tau;
    const double pres = std::max(ry.norm() / bnorm, std::sqrt(rz_norm2)) / tau;
    const double dres = rx.norm() / cnorm / tau;
    const double relgap = std::max(std::abs(pcost - dcost), gap / (tau * tau)) / (1.0 + std::abs(pcost));

    out.primal_residual = pres;
    out.dual_residual = dres;
    out.gap_residual = relgap;
    out.primal_objective = sign_ * pcost;
    out.dual_objective = sign_ * dcost;
    out.y_star.values = x / tau;

    if (st_.log) {
      *st_.log << std::scientific << std::setprecision(3) << "  it " << std::setw(3) << it << " mu " << mu << " pres "
               << pres << " dres " << dres << " gap " << relgap << " tau " << tau << " kappa " << kappa << " obj "
               << std::setprecision(9) << sign_ * pcost << "\n"
               << std::defaultfloat;
    }

    if (pres <= st_.feasibility_tol && dres <= st_.feasibility_tol && relgap <= st_.gap_tol) {
      out.status = SdpStatus::Optimal;
      out.primal_objective = prob_.objective.evaluate(out.y_star.values);
      out.message = "optimal";
      return out;
    }
    if (bnu < 0.0 && hrx.norm() / (-bnu) <= st_.certificate_tol) {
      InfeasibilityCertificate cert = MakeCertificate(nu, z);
      if (VerifyCertificate(prob_, cert, st_.certificate_tol)) {
        out.status = SdpStatus::Infeasible;
        out.certificate = std::move(cert);
        out.message = "primal infeasible (certified)";
        return out;
      }
    }
    if (cx < 0.0) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < nb; ++k) r2 += (ApplyF(blocks_[k], x) - s[k]).squaredNorm();
      const double dinf = std::max(hry.norm() / bnorm, std::sqrt(r2)) / (-cx);
      if (dinf <= st_.certificate_tol) {
        out.status = SdpStatus::Unbounded;
        out.message = "dual infeasible: improving direction found";
        return out;
      }
    }
    if (it == st_.max_iterations) break;

    const double merit = std::max({pres, dres, relgap});
    if (merit < best_merit) {
      best_merit = merit;
      best = out;
    }
    if (merit < 0.1 * window_merit) {
      window_merit = merit;
      window_start = it;
    } else if (it - window_start >= st_.stall_iterations && tau > kappa) {
      return give_up("progress stalled");
    }
    FormSchur();

    // Direction for the tau column.
    Vec x1, nu1;
    std::vector<Mat> z1, zero_z(nb);
    for (std::size_t k = 0; k < nb; ++k) zero_z[k] = Mat::Zero(blocks_[k].side, blocks_[k].side);
    SolveKkt(-c_, b_, zero_z, x1, nu1, z1);
    const double denom1 = -c_.dot(x1) - b_.dot(nu1) + kappa / tau;

    double sigma = 0.0, eta = 0.0, alpha = 0.0;
    std::vector<Mat> dsa(nb), dza(nb);
    double dtau_a = 0.0, dkappa_a = 0.0;
    Vec dx, dnu;
    std::vector<Mat> dz(nb), dst(nb);
    double dtau = 0.0, dkappa = 0.0;

    for (int pass = 0; pass < 2; ++pass) {
      std::vector<Mat> delta(nb), bz(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        const Vec& lam = scal_[k].lambda;
        if (pass == 0) {
          delta[k] = Mat((-lam).asDiagonal());
        } else {
          Mat R = -Mat(lam.cwiseAbs2().asDiagonal()) - 0.5 * (dsa[k] * dza[k] + dza[k] * dsa[k]);
          R.diagonal().array() += sigma * mu;
          delta[k].resize(R.rows(), R.cols());
          for (int i = 0; i < R.rows(); ++i) {
            for (int j = 0; j < R.cols(); ++j) delta[k](i, j) = 2.0 * R(i, j) / (lam[i] + lam[j]);
          }
        }
        bz[k] = (1.0 - eta) * (scal_[k].rti.transpose() * rz[k] * scal_[k].rti) - delta[k];
      }
      const double rhs_t = pass == 0 ? -tau * kappa : -tau * kappa - dtau_a * dkappa_a + sigma * mu;

      Vec x2, nu2;
      std::vector<Mat> z2;
      SolveKkt(-(1.0 - eta) * rx, (1.0 - eta) * ry, bz, x2, nu2, z2);
      dtau = (-(1.0 - eta) * rt + rhs_t / tau + c_.dot(x2) + b_.dot(nu2)) / denom1;
      dx = x2 + dtau * x1;
      dnu = nu2 + dtau * nu1;
      for (std::size_t k = 0; k < nb; ++k) dz[k] = z2[k] + dtau * z1[k];  // scaled
      dkappa = (rhs_t - kappa * dtau) / tau;

      double amax = std::numeric_limits<double>::infinity();
      std::vector<Mat> dzt(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        dzt[k] = dz[k];
        dst[k] = delta[k] - dzt[k];
        amax = std::min(amax, MaxStep(scal_[k].lambda, dst[k]));
        amax = std::min(amax, MaxStep(scal_[k].lambda, dzt[k]));
      }
      if (dtau < 0.0) amax = std::min(amax, -tau / dtau);
      if (dkappa < 0.0) amax = std::min(amax, -kappa / dkappa);

      if (pass == 0) {
        const double aff = std::min(1.0, amax);
        sigma = std::pow(1.0 - aff, 3);
        eta = sigma;
        dsa = dst;
        dza = dzt;
        dtau_a = dtau;
        dkappa_a = dkappa;
      } else {
        alpha = std::min(1.0, 0.99 * amax);
      }
    }

    if (!(alpha > 1e-12) || !std::isfinite(alpha)) return give_up("step length collapsed");
    // Update the scaling in scaled coordinates: the new s~, z~ are diag(lambda) + alpha * d.
    std::vector<Scaling> next(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      Mat st = alpha * dst[k];
      st.diagonal() += scal_[k].lambda;
      Mat zt = alpha * dz[k];
      zt.diagonal() += scal_[k].lambda;
      Scaling inc;
      if (!ComputeScaling(0.5 * (st + st.transpose()), 0.5 * (zt + zt.transpose()), inc)) {
        return give_up("lost positive definiteness");
      }
      next[k].r = scal_[k].r * inc.r;
      next[k].rti = scal_[k].rti * inc.rti;
      next[k].lambda = inc.lambda;
      next[k].w = next[k].r * next[k].r.transpose();
      next[k].v = next[k].rti * next[k].rti.transpose();
    }
    x += alpha * dx;
    nu += alpha * dnu;
    for (std::size_t k = 0; k < nb; ++k) {
      scal_[k] = std::move(next[k]);
      s[k] = scal_[k].r * scal_[k].lambda.asDiagonal() * scal_[k].r.transpose();
      z[k] = scal_[k].rti * scal_[k].lambda.asDiagonal() * scal_[k].rti.transpose();
    }
    tau += alpha * dtau;
    kappa += alpha * dkappa;
  }
  return give_up("iteration limit reached");
}

}  // namespace

ConicSolution SolveSdp(const MomentProblem& problem, const SdpSettings& settings) {
  HsdSolver solver(problem, settings);
  return solver.Run();
}

bool VerifyCertificate(const MomentProblem& problem, const InfeasibilityCertificate& cert, double tol) {
  const int p0 = static_cast<int>(problem.equalities.size());
  if (cert.equality_multipliers.size() != p0 || cert.block_duals.size() != problem.blocks.size()) return false;
  double scale = cert.equality_multipliers.norm();
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const Mat& Z = cert.block_duals[k];
    if (Z.rows() != problem.blocks[k].side) return false;
    scale += Z.norm();
    if (Z.size() > 0) {
      Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Z + Z.transpose()), Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol * std::max(1e-300, Z.norm())) return false;
    }
  }
  if (!(scale > 0.0)) return false;
  double violation = 0.0;
  for (int i = 0; i < p0; ++i) violation -= problem.equality_rhs[static_cast<std::size_t>(i)] * cert.equality_multipliers[i];
  Vec r = Vec::Zero(problem.num_vars());
  for (int i = 0; i < p0; ++i) {
    for (const auto& [j, v] : problem.equalities[static_cast<std::size_t>(i)].terms) r[j] -= v * cert.equality_multipliers[i];
  }
  for (std::size_t k = 0; k < problem.blocks.size(); ++k) {
    const Mat& Z = cert.block_duals[k];
    for (const auto& e : problem.blocks[k].entries) {
      r[e.var] += e.coef * (e.row == e.col ? Z(e.row, e.row) : Z(e.row, e.col) + Z(e.col, e.row));
    }
  }
  violation /= scale;
  const double residual = r.norm() / scale;
  return violation > tol && residual <= tol * violation;
}

}  // namespace teig
