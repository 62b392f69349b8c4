#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "teig/extract.hpp"
#include "teig/jacobian.hpp"
#include "teig/sdp.hpp"
#include "teig/tensor.hpp"

namespace teig {

enum class Symmetry { None, SortedDescending, NonnegativeOrthant };

const char* ToString(Symmetry s);

struct SolverConfig {
  double delta0 = 0.05;
  double delta_shrink = 5.0;
  double epsilon0 = 0.05;
  double epsilon_shrink = 5.0;
  /// Highest relaxation order; 0 means N0 + 3.
  int n_max = 0;
  double rank_tol = 1e-6;
  double residual_tol = 1e-6;
  std::uint64_t seed = 0;
  Symmetry symmetry = Symmetry::None;
  /// Keep climbing past a stabilized value while the tms length stays at or below this.
  int climb_cap = 500;
  int max_c_draws = 5;
  int max_epsilon_shrinks = 4;
  /// Safety stop for the descent loop.
  int max_eigenvalues = 256;
  SdpSettings sdp;
  std::ostream* log = nullptr;

  void Validate(int base_order) const;
  int MaxOrder(int base_order) const { return n_max > 0 ? n_max : base_order + 3; }
};

struct EigenPair {
  double lambda = 0.0;
  std::vector<std::vector<double>> vectors;
  int multiplicity = 0;
  bool recovered = false;  // eigenvector found through the generic linear objective path
  double residual = 0.0;
  /// (lambda, u) and (-lambda, -u) are both eigenpairs (m' even, m - m' odd).
  bool paired = false;
};

struct PairDiagnostics {
  int order = 0;              // relaxation order that produced lambda
  int flat_t = -1;            // flatness order, -1 when not flat
  bool stabilized = false;    // accepted by the stabilization heuristic
  double delta = 0.0;         // final gap probe delta below lambda
  double epsilon = 0.0;       // band half-width of the recovery solve, 0 if unused
  std::vector<double> values; // relaxation values per order
  double seconds = 0.0;
  std::string note;
};

struct Spectrum {
  std::vector<EigenPair> pairs;  // strictly decreasing lambda
  bool complete = false;
  std::vector<PairDiagnostics> diagnostics;
  std::vector<std::string> warnings;
  int relaxations = 0;     // moment relaxations solved
  long sdp_iterations = 0; // interior-point iterations over all of them
};

/// Shared state of one run: tensors, Jacobian system (with symmetry inequalities), config.
class EigenSolver {
 public:
  EigenSolver(SymmetricTensor a, SymmetricTensor b, SolverConfig cfg, std::vector<Polynomial> region = {});

  const ConstraintSystem& system() const { return sys_; }
  const SolverConfig& config() const { return cfg_; }

  struct LevelResult {
    enum class Kind { Flat, Stabilized, Bound, Infeasible, Failed } kind = Kind::Failed;
    double value = 0.0;
    int order = 0;
    int flat_t = -1;
    std::vector<PolishedPair> atoms;
    std::vector<double> values;
    std::string message;
  };

  /// Climbs the hierarchy of  opt objective s.t. h = 0, q >= 0 (q in ineqs).
  /// accept_at, when set, stops early once a minimization bound reaches it.
  /// probe, when set, is offered every usable relaxation and may end the climb with its eigenpair.
  using Probe = std::function<std::optional<PolishedPair>(const Tms& y, double value)>;
  LevelResult Climb(const Polynomial& objective, Sense sense, const std::vector<Polynomial>& ineqs,
                    std::optional<double> accept_at = std::nullopt, const Probe& probe = {});

  /// Largest eigenvalue in the band (lo, hi bounds optional).
  LevelResult Largest(std::optional<double> lo = std::nullopt, std::optional<double> hi = std::nullopt);

  struct GapResult {
    bool ok = false;
    double chi = 0.0;
    double delta = 0.0;
    std::string message;
  };
  /// Shrinks delta until no eigenvalue other than lambda_k lies in [lambda_k - delta, lambda_k].
  GapResult GapProbe(double lambda_k, std::optional<double> lo = std::nullopt);

  /// Largest eigenvalue at most lambda_k - delta; Infeasible kind means lambda_k is the minimum.
  LevelResult Next(double lambda_k, double delta, std::optional<double> lo = std::nullopt);

  /// One eigenvector of lambda_k through  min c^T x  over the band |f - lambda_k| <= epsilon.
  std::optional<PolishedPair> Recover(double lambda_k, double epsilon_cap, double* epsilon_used = nullptr);

  /// The full descent; lo/hi restrict to a band.
  Spectrum Run(std::optional<double> lo = std::nullopt, std::optional<double> hi = std::nullopt);

 private:
  void Log(const std::string& line) const;
  std::optional<PolishedPair> Attained(const Tms& y, double value, const std::vector<Polynomial>& ineqs) const;
  std::vector<Polynomial> WithBand(std::vector<Polynomial> q, std::optional<double> lo) const;
  EigenPair MakePair(double lambda, const std::vector<PolishedPair>& atoms, bool recovered) const;

  SymmetricTensor a_;
  SymmetricTensor b_;
  SolverConfig cfg_;
  ConstraintSystem sys_;
  std::uint64_t draws_ = 0;
  int relaxations_ = 0;
  long sdp_iterations_ = 0;
};

/// Algorithm entry point: every real B-eigenpair of A, largest first.
Spectrum AllEigenpairs(const SymmetricTensor& a, const SymmetricTensor& b, const SolverConfig& cfg = {});

/// Eigenpairs with lambda in [lo, hi], optionally restricted to p_i(x) >= 0.
Spectrum ConstrainedEigenpairs(const SymmetricTensor& a, const SymmetricTensor& b, double lo, double hi,
                               const SolverConfig& cfg = {}, std::vector<Polynomial> region = {});

/// Canonical sign of an eigenvector when -u is an eigenvector of the same lambda:
/// sum u_i >= 0, ties broken by a positive first nonzero entry.
std::vector<double> CanonicalSign(std::vector<double> u);

/// True when (lambda, u) and ((-1)^{m - m'} lambda, -u) are both eigenpairs and the
/// sign flip changes lambda, i.e. m' even and m - m' odd.
bool SignFlipsEigenvalue(int m, int m_b);
/// True when -u is an eigenvector of the same eigenvalue (m' even, m - m' even).
bool SignKeepsEigenvalue(int m, int m_b);

/// Pairs with lambda >= -tol; for paired spectra this picks one representative per pair.
std::vector<EigenPair> NonnegativeRepresentatives(const Spectrum& s, double tol = 1e-9);

/// ((m-1)^n - 1)/(m - 2), the bound on distinct complex Z-eigenvalues (n for m = 2).
long long CartwrightSturmfelsBound(int m, int n);

}  // namespace teig
