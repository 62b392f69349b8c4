#include "teig/hierarchy.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace teig {

const char* ToString(Symmetry s) {
  switch (s) {
    case Symmetry::None: return "none";
    case Symmetry::SortedDescending: return "sorted";
    case Symmetry::NonnegativeOrthant: return "nonneg";
  }
  return "?";
}

void SolverConfig::Validate(int base_order) const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
  if (!(epsilon0 > 0.0)) throw std::invalid_argument("epsilon0 must be positive");
  if (!(delta_shrink > 1.0) || !(epsilon_shrink > 1.0)) throw std::invalid_argument("shrink factors must exceed 1");
  if (n_max != 0 && n_max < base_order) {
    throw std::invalid_argument("nmax " + std::to_string(n_max) + " is below N0 = " + std::to_string(base_order));
  }
  if (!(rank_tol > 0.0) || !(residual_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
}

bool SignFlipsEigenvalue(int m, int m_b) { return m_b % 2 == 0 && (m - m_b) % 2 != 0; }
bool SignKeepsEigenvalue(int m, int m_b) { return m_b % 2 == 0 && (m - m_b) % 2 == 0; }

std::vector<double> CanonicalSign(std::vector<double> u) {
  double s = 0.0;
  for (double v : u) s += v;
  bool flip = s < 0.0;
  if (std::abs(s) < 1e-9) {
    flip = false;
    for (double v : u) {
      if (std::abs(v) > 1e-9) {
        flip = v < 0.0;
        break;
      }
    }
  }
  if (flip) {
    for (double& v : u) v = -v;
  }
  return u;
}

std::vector<EigenPair> NonnegativeRepresentatives(const Spectrum& s, double tol) {
  std::vector<EigenPair> out;
  for (const auto& p : s.pairs) {
    if (p.lambda >= -tol) out.push_back(p);
  }
  return out;
}

long long CartwrightSturmfelsBound(int m, int n) {
  if (m == 2) return n;
  long long p = 1;
  for (int i = 0; i < n; ++i) p *= (m - 1);
  return (p - 1) / (m - 2);
}

EigenSolver::EigenSolver(SymmetricTensor a, SymmetricTensor b, SolverConfig cfg, std::vector<Polynomial> region)
    : a_(std::move(a)), b_(std::move(b)), cfg_(std::move(cfg)) {
  const int n = a_.dim();
  std::vector<Polynomial> extra = std::move(region);
  if (cfg_.symmetry == Symmetry::SortedDescending) {
    for (int i = 0; i + 1 < n; ++i) extra.push_back(Polynomial::Variable(n, i) - Polynomial::Variable(n, i + 1));
  } else if (cfg_.symmetry == Symmetry::NonnegativeOrthant) {
    for (int i = 0; i < n; ++i) extra.push_back(Polynomial::Variable(n, i));
  }
  sys_ = BuildJacobianSystem(a_, b_, std::move(extra));
  cfg_.Validate(sys_.base_order());
}

void EigenSolver::Log(const std::string& line) const {
  if (cfg_.log) *cfg_.log << line << "\n";
}

std::vector<Polynomial> EigenSolver::WithBand(std::vector<Polynomial> q, std::optional<double> lo) const {
  if (lo) q.push_back(sys_.f.add_constant(-*lo));
  return q;
}

EigenSolver::LevelResult EigenSolver::Climb(const Polynomial& objective, Sense sense, const std::vector<Polynomial>& ineqs,
                                            std::optional<double> accept_at, const Probe& probe) {
  LevelResult res;
  const int n0 = sys_.base_order();
  const int nmax = cfg_.MaxOrder(n0);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int order = n0; order <= nmax; ++order) {
    res.order = order;
    const MomentProblem prob = CompileRelaxation(sys_, order, objective, sense, ineqs);
    const ConicSolution sol = SolveSdp(prob, cfg_.sdp);
    ++relaxations_;
    sdp_iterations_ += sol.iterations;
    {
      std::ostringstream os;
      os << "  N=" << order << " tms=" << prob.num_vars() << " status=" << ToString(sol.status) << " value=" << std::setprecision(12)
         << sol.primal_objective << " iters=" << sol.iterations;
      Log(os.str());
    }
    if (sol.status == SdpStatus::Infeasible) {
      res.kind = LevelResult::Kind::Infeasible;
      res.message = sol.message;
      return res;
    }
    const bool near = sol.status == SdpStatus::Inconclusive && sol.primal_residual <= 1e-6 && sol.dual_residual <= 1e-6 &&
                      sol.gap_residual <= 1e-6;
    if (sol.status != SdpStatus::Optimal && !near) {
      res.message = std::string("relaxation ") + ToString(sol.status) + ": " + sol.message;
      continue;
    }
    const double value = sol.primal_objective;
    res.values.push_back(value);
    res.value = value;
    if (accept_at && sense == Sense::Minimize && value >= *accept_at) {
      res.kind = LevelResult::Kind::Bound;
      return res;
    }

    const FlatnessReport rep = CheckFlatness(sol.y_star, order, n0, cfg_.rank_tol);
    if (rep.satisfied) {
      const Extraction ex = ExtractAtoms(sol.y_star, rep, cfg_.seed + 7919 * (draws_++), cfg_.rank_tol);
      if (ex.ok && !ex.atoms.empty()) {
        std::vector<PolishedPair> atoms;
        bool all_good = true;
        for (const auto& u : ex.atoms) {
          const double bu = b_.form().evaluate(u);
          const double lam0 = std::abs(bu) > 1e-12 ? a_.form().evaluate(u) / bu : a_.form().evaluate(u);
          PolishedPair p = VerifyEigenpair(a_, b_, lam0, u, 50);
          // The quotient is second-order accurate in u, which matters at singular eigenvectors.
          const double bp = b_.form().evaluate(p.u);
          if (std::abs(bp) > 1e-12) p.lambda = a_.form().evaluate(p.u) / bp;
          if (p.residual > cfg_.residual_tol) all_good = false;
          atoms.push_back(std::move(p));
        }
        if (all_good) {
          res.kind = LevelResult::Kind::Flat;
          res.flat_t = rep.t;
          res.atoms = std::move(atoms);
          return res;
        }
        res.message = "extracted atoms failed verification";
      } else {
        res.message = "extraction failed: " + ex.failure;
      }
    } else {
      res.message = "rank condition not satisfied";
    }

    const bool last = order == nmax;
    const bool costly = static_cast<int>(Binomial(sys_.n + 2 * order + 2, 2 * order + 2)) > cfg_.climb_cap;
    if (probe) {
      if (auto hit = probe(sol.y_star, value)) {
        res.kind = LevelResult::Kind::Stabilized;
        res.message = "probe accepted an eigenpair";
        res.atoms = {*hit};
        return res;
      }
    }
    if ((last || costly) && objective == sys_.f) {
      if (auto hit = Attained(sol.y_star, value, ineqs)) {
        res.kind = LevelResult::Kind::Stabilized;
        res.message = "relaxation bound attained by an eigenpair";
        res.atoms = {*hit};
        return res;
      }
    }

    if (!std::isnan(prev) && std::abs(value - prev) <= 1e-6 * std::max(1.0, std::abs(value))) {
      if (last || costly) {
        res.kind = LevelResult::Kind::Stabilized;
        return res;
      }
    }
    prev = value;
  }
  res.kind = LevelResult::Kind::Failed;
  if (res.message.empty()) res.message = "no usable relaxation";
  res.message += " (N_max = " + std::to_string(nmax) + " reached)";
  return res;
}

std::optional<PolishedPair> EigenSolver::Attained(const Tms& y, double value, const std::vector<Polynomial>& ineqs) const {
  // The relaxation value bounds f over the feasible set; an eigenpair meeting the bound proves it exact.
  const int n = sys_.n;
  if (y.degree < 2) return std::nullopt;
  Eigen::MatrixXd second(n, n);
  Eigen::VectorXd first(n);
  for (int i = 0; i < n; ++i) {
    Exponent e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    first[i] = y[e];
    for (int j = 0; j < n; ++j) {
      Exponent f2 = e;
      ++f2[static_cast<std::size_t>(j)];
      second(i, j) = y[f2];
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(second);
  std::vector<Eigen::VectorXd> starts;
  if (first.norm() > 1e-6) starts.push_back(first);
  const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
  for (int k = n - 1; k >= 0; --k) {
    if (es.eigenvalues()[k] < 1e-3 * top) break;
    starts.push_back(es.eigenvectors().col(k));
    starts.push_back(-es.eigenvectors().col(k));
  }
  const double tol = cfg_.residual_tol * std::max(1.0, std::abs(value));
  for (const auto& v : starts) {
    std::vector<double> u(v.data(), v.data() + n);
    const double bu = b_.form().evaluate(u);
    if (!(bu > 1e-12)) continue;
    PolishedPair p = VerifyEigenpair(a_, b_, a_.form().evaluate(u) / bu, u, 50);
    if (p.residual > cfg_.residual_tol) continue;
    const double bp = b_.form().evaluate(p.u);
    if (std::abs(bp) > 1e-12) p.lambda = a_.form().evaluate(p.u) / bp;
    if (std::abs(p.lambda - value) > tol) continue;
    bool feasible = true;
    for (const auto& q : ineqs) feasible = feasible && q.evaluate(p.u) >= -tol;
    if (feasible) return p;
  }
  return std::nullopt;
}

EigenSolver::LevelResult EigenSolver::Largest(std::optional<double> lo, std::optional<double> hi) {
  std::vector<Polynomial> q;
  if (hi) q.push_back((-sys_.f).add_constant(*hi));
  Log("largest eigenvalue");
  return Climb(sys_.f, Sense::Maximize, WithBand(std::move(q), lo));
}

EigenSolver::GapResult EigenSolver::GapProbe(double lambda_k, std::optional<double> lo) {
  GapResult g;
  double delta = cfg_.delta0;
  const double tol = cfg_.residual_tol;
  while (true) {
    {
      std::ostringstream os;
      os << "gap probe below " << std::setprecision(12) << lambda_k << " delta=" << delta;
      Log(os.str());
    }
    const Polynomial q = sys_.f.add_constant(-(lambda_k - delta));
    const LevelResult r = Climb(sys_.f, Sense::Minimize, WithBand({q}, lo), lambda_k - tol);
    double chi = r.value;
    if (r.kind == LevelResult::Kind::Bound) {
      g.ok = true;
    } else if (r.kind == LevelResult::Kind::Flat || r.kind == LevelResult::Kind::Stabilized) {
      if (r.kind == LevelResult::Kind::Flat) {
        for (const auto& a : r.atoms) chi = std::min(chi, a.lambda);
      }
      g.ok = chi >= lambda_k - tol;
    } else {
      g.message = "gap probe failed: " + r.message;
      return g;
    }
    if (g.ok) {
      g.chi = std::min(chi, lambda_k);
      g.delta = delta;
      return g;
    }
    delta = std::min(delta / cfg_.delta_shrink, lambda_k - chi);
    if (!(delta >= 1e-12)) {
      g.message = "delta fell below 1e-12: eigenvalues not separable at working precision";
      return g;
    }
  }
}

EigenSolver::LevelResult EigenSolver::Next(double lambda_k, double delta, std::optional<double> lo) {
  {
    std::ostringstream os;
    os << "next eigenvalue below " << std::setprecision(12) << lambda_k - delta;
    Log(os.str());
  }
  const Polynomial q = (-sys_.f).add_constant(lambda_k - delta);
  return Climb(sys_.f, Sense::Maximize, WithBand({q}, lo));
}

std::optional<PolishedPair> EigenSolver::Recover(double lambda_k, double epsilon_cap, double* epsilon_used) {
  const int n = sys_.n;
  const double eps0 = std::min(cfg_.epsilon0, epsilon_cap);
  for (int draw = 0; draw < cfg_.max_c_draws; ++draw) {
    std::mt19937_64 rng(cfg_.seed * 1000003ull + 101 * (draws_++) + 17);
    std::normal_distribution<double> normal(0.0, 1.0);
    Polynomial obj(n);
    for (int i = 0; i < n; ++i) obj = obj + normal(rng) * Polynomial::Variable(n, i);
    double eps = eps0;
    for (int s = 0; s <= cfg_.max_epsilon_shrinks; ++s, eps /= cfg_.epsilon_shrink) {
      {
        std::ostringstream os;
        os << "recovery at " << std::setprecision(12) << lambda_k << " eps=" << eps << " draw=" << draw;
        Log(os.str());
      }
      const std::vector<Polynomial> band = {sys_.f.add_constant(-(lambda_k - eps)), (-sys_.f).add_constant(lambda_k + eps)};
      // The first moments approximate the minimizer even before the relaxation is exact.
      const Probe first_moments = [&](const Tms& y, double) -> std::optional<PolishedPair> {
        std::vector<double> u(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          Exponent e(static_cast<std::size_t>(n), 0);
          e[static_cast<std::size_t>(i)] = 1;
          u[static_cast<std::size_t>(i)] = y[e];
        }
        const double bu = b_.form().evaluate(u);
        if (!(bu > 1e-12)) return std::nullopt;
        PolishedPair p = VerifyEigenpair(a_, b_, a_.form().evaluate(u) / bu, u, 50);
        const double bp = b_.form().evaluate(p.u);
        if (std::abs(bp) > 1e-12) p.lambda = a_.form().evaluate(p.u) / bp;
        return p;
      };
      const LevelResult r = Climb(obj, Sense::Minimize, band, std::nullopt, [&](const Tms& y, double v) {
        auto p = first_moments(y, v);
        if (p && p->residual <= cfg_.residual_tol &&
            std::abs(p->lambda - lambda_k) <= 1e-5 * std::max(1.0, std::abs(lambda_k))) {
          return p;
        }
        return std::optional<PolishedPair>{};
      });
      if (r.kind == LevelResult::Kind::Stabilized && !r.atoms.empty()) {
        if (epsilon_used) *epsilon_used = eps;
        return r.atoms.front();
      }
      if (r.kind != LevelResult::Kind::Flat) continue;
      for (const auto& a : r.atoms) {
        if (a.residual <= cfg_.residual_tol && std::abs(a.lambda - lambda_k) <= 1e-5 * std::max(1.0, std::abs(lambda_k))) {
          if (epsilon_used) *epsilon_used = eps;
          return a;
        }
      }
    }
  }
  return std::nullopt;
}

EigenPair EigenSolver::MakePair(double lambda, const std::vector<PolishedPair>& atoms, bool recovered) const {
  EigenPair p;
  p.lambda = lambda;
  p.recovered = recovered;
  p.paired = SignFlipsEigenvalue(a_.order(), b_.order());
  const bool fold = SignKeepsEigenvalue(a_.order(), b_.order());
  for (const auto& a : atoms) {
    std::vector<double> u = fold ? CanonicalSign(a.u) : a.u;
    bool dup = false;
    for (const auto& v : p.vectors) {
      double d = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::abs(u[i] - v[i]));
      if (d <= 1e-4) dup = true;  // singular eigenvectors polish only to about residual^(1/3)
    }
    if (!dup) p.vectors.push_back(std::move(u));
    p.residual = std::max(p.residual, EigenResidual(a_, b_, lambda, a.u));
  }
  std::sort(p.vectors.begin(), p.vectors.end(), std::greater<>());
  p.multiplicity = static_cast<int>(p.vectors.size());
  return p;
}

Spectrum EigenSolver::Run(std::optional<double> lo, std::optional<double> hi) {
  using Clock = std::chrono::steady_clock;
  Spectrum sp;
  auto t0 = Clock::now();
  LevelResult r = Largest(lo, hi);
  const double tol = cfg_.residual_tol;
  // Atoms above the current ceiling come from rounding of the moment data, not from the problem.
  double ceiling = hi ? *hi : std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    if (r.kind == LevelResult::Kind::Infeasible) {
      sp.complete = true;
      break;
    }
    if (r.kind == LevelResult::Kind::Failed || r.kind == LevelResult::Kind::Bound) {
      sp.warnings.push_back("stopped after " + std::to_string(sp.pairs.size()) + " eigenvalues: " + r.message);
      break;
    }
    if (k >= cfg_.max_eigenvalues) {
      sp.warnings.push_back("eigenvalue cap reached");
      break;
    }

    PairDiagnostics diag;
    diag.order = r.order;
    diag.flat_t = r.flat_t;
    diag.values = r.values;
    double lambda = r.value;
    std::vector<PolishedPair> atoms;
    if (r.kind == LevelResult::Kind::Flat) {
      // Keep the atoms of the largest polished value; lower ones are left to the descent.
      double top = -std::numeric_limits<double>::infinity();
      for (const auto& a : r.atoms) {
        if (a.lambda <= ceiling + tol && std::abs(a.lambda - r.value) <= 1e-4 * std::max(1.0, std::abs(r.value))) {
          top = std::max(top, a.lambda);
        }
      }
      const double group_tol = 0.1 * tol * std::max(1.0, std::abs(top));
      double sum = 0.0;
      for (const auto& a : r.atoms) {
        if (std::isfinite(top) && std::abs(a.lambda - top) <= group_tol) {
          atoms.push_back(a);
          sum += a.lambda;
        }
      }
      if (atoms.empty()) {
        r.kind = LevelResult::Kind::Stabilized;
        diag.note = "extracted atoms disagree with the relaxation value";
      } else {
        lambda = sum / static_cast<double>(atoms.size());
      }
    }
    if (r.kind == LevelResult::Kind::Stabilized && !r.atoms.empty()) lambda = r.atoms.front().lambda;
    if (!sp.pairs.empty() && lambda >= sp.pairs.back().lambda - tol) {
      sp.warnings.push_back("descent produced a non-decreasing value; stopping");
      break;
    }

    const GapResult gap = GapProbe(lambda, lo);
    diag.delta = gap.delta;

    EigenPair pair;
    if (r.kind == LevelResult::Kind::Flat) {
      pair = MakePair(lambda, atoms, false);
    } else {
      diag.stabilized = true;
      if (diag.note.empty()) diag.note = "value stabilized without flatness";
      double cap = gap.ok ? 0.9 * gap.delta : cfg_.epsilon0;
      if (!sp.pairs.empty()) cap = std::min(cap, (sp.pairs.back().lambda - lambda) / 3.0);
      double eps = 0.0;
      const auto found = Recover(lambda, cap, &eps);
      diag.epsilon = eps;
      if (found) {
        pair = MakePair(found->lambda, {*found}, true);
      } else if (!r.atoms.empty()) {
        pair = MakePair(lambda, r.atoms, false);
        sp.warnings.push_back("eigenvector for lambda = " + std::to_string(lambda) + " taken from the bound-attaining point");
      } else {
        pair = MakePair(lambda, {}, true);
        pair.residual = std::numeric_limits<double>::infinity();
        sp.warnings.push_back("no eigenvector recovered for lambda = " + std::to_string(lambda));
      }
      sp.warnings.push_back("stabilization heuristic used for lambda = " + std::to_string(lambda));
    }
    auto t1 = Clock::now();
    diag.seconds = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    sp.pairs.push_back(std::move(pair));
    sp.diagnostics.push_back(std::move(diag));

    if (!gap.ok) {
      sp.warnings.push_back(gap.message);
      break;
    }
    ceiling = sp.pairs.back().lambda - gap.delta;
    r = Next(sp.pairs.back().lambda, gap.delta, lo);
  }
  sp.relaxations = relaxations_;
  sp.sdp_iterations = sdp_iterations_;
  return sp;
}

Spectrum AllEigenpairs(const SymmetricTensor& a, const SymmetricTensor& b, const SolverConfig& cfg) {
  EigenSolver solver(a, b, cfg);
  return solver.Run();
}

Spectrum ConstrainedEigenpairs(const SymmetricTensor& a, const SymmetricTensor& b, double lo, double hi,
                               const SolverConfig& cfg, std::vector<Polynomial> region) {
  if (lo > hi) throw std::invalid_argument("band lower end exceeds upper end");
  EigenSolver solver(a, b, cfg, std::move(region));
  return solver.Run(lo, hi);
}

}  // namespace teig
