#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "teig/moment.hpp"

namespace teig {

struct SdpSettings {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  double certificate_tol = 1e-7;
  int max_iterations = 200;
  /// Give up (inconclusive) when the residuals fail to drop tenfold within this many iterations.
  int stall_iterations = 15;
  /// Relative tolerance of the rank-revealing presolve on the equality rows.
  double presolve_tol = 1e-10;
  /// Per-iteration log lines go to this stream when set.
  std::ostream* log = nullptr;
};

enum class SdpStatus { Optimal, Infeasible, Unbounded, Inconclusive };

const char* ToString(SdpStatus s);

/// Farkas ray proving that no y satisfies the equalities and PSD blocks:
/// sum_k A_k^*(Z_k) = E^T w with Z_k PSD and e^T w < 0, where E y = e are the
/// equalities and A_k^* is the adjoint of block k (Z -> (<A_k,alpha, Z>)_alpha).
/// Stored normalized so that ||w|| + sum ||Z_k||_F = 1.
struct InfeasibilityCertificate {
  Eigen::VectorXd equality_multipliers;
  std::vector<Eigen::MatrixXd> block_duals;
  double violation = 0.0;  // -e^T w
  double residual = 0.0;   // ||sum A_k^*(Z_k) - E^T w||_2
};

struct ConicSolution {
  SdpStatus status = SdpStatus::Inconclusive;
  Tms y_star;  // meaningful when Optimal
  double primal_objective = 0.0;  // <objective, y> at y_star
  double dual_objective = 0.0;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap_residual = 0.0;
  std::optional<InfeasibilityCertificate> certificate;
  std::string message;
};

/// Primal-dual path-following interior-point method on the homogeneous
/// self-dual embedding, with Nesterov-Todd scaling and a Mehrotra
/// predictor-corrector. Single-threaded and deterministic.
ConicSolution SolveSdp(const MomentProblem& problem, const SdpSettings& settings = {});

/// Checks a certificate against the problem data independently of the solver.
/// True when every Z_k is PSD (up to tol * ||Z_k||), the violation exceeds tol,
/// and the residual is at most tol times the violation.
bool VerifyCertificate(const MomentProblem& problem, const InfeasibilityCertificate& cert, double tol);

/// Number of singular values above tol * max(1, largest singular value).
int RankOfPsd(const Eigen::MatrixXd& m, double tol = 1e-6);

}  // namespace teig
