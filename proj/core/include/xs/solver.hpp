#pragma once

#include "xs/dtn.hpp"
#include "xs/wave_ops.hpp"

namespace xs {

/// The penalized surface-source subproblem:
///   minimize ||S h - d||^2_d + alpha^2 ||A h||^2_m
/// with the data norm weighted by W_d and the penalty norm by W_m.
/// data_scale is the impedance normalization sqrt(kappa rho) applied to the
/// unweighted baseline so alpha acts as the same dimensionless weight in
/// both solvers; 1 leaves the baseline in raw field units.
struct InversionProblem {
  LinearOp S;
  PenaltyOp penalty;
  LinearOp W_d;
  LinearOp W_m;
  LinearOp Wm_inv;
  Gather d;
  double alpha = 0.0;
  double data_scale = 1.0;
};

struct SolveReport {
  std::vector<double> normal_residual;  // length iterations + 1
  std::vector<double> data_misfit;      // same length
  std::vector<double> wall_seconds;     // cumulative, same length
  Gather h;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;

  void write_csv(const std::string& path) const;
};

/// Time-reversal approximate inverse: 4 V^T d.
Gather approx_inverse(const Gather& d, const LinearOp& V);

struct NormalSystem {
  LinearOp N;  // S^T W_d S + alpha^2 A^T W_m A
  Gather rhs;  // S^T W_d d
};

NormalSystem normal_op(const InversionProblem& problem);

/// M^-1 = (I + alpha^2 A^T A)^(-1/2) Wm_inv (I + alpha^2 A^T A)^(-1/2).
LinearOp preconditioner(const InversionProblem& problem);

/// Euclidean-norm CG baseline on (S^T S + alpha^2 A^T A) h = S^T d, the
/// data term divided by data_scale^2; problem weights are ignored.
SolveReport cg(const InversionProblem& problem, int max_iter, double tol);

/// Preconditioned CG on the weighted normal system, h0 = 0. M_override
/// replaces the default preconditioner when given (identity reduces the
/// iteration to cg on the same weights).
SolveReport pcg(const InversionProblem& problem, int max_iter, double tol,
                const LinearOp* M_override = nullptr);

/// Iterations the baseline needs to reach the residual level the
/// preconditioned run attains at iteration k, divided by k. Both curves are
/// normalized by their initial residual. Returns +inf if the baseline never
/// gets there.
double speedup_at(const SolveReport& baseline, const SolveReport& preconditioned, int k);

}  // namespace xs
