#include "xs/solver.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

namespace xs {

void SolveReport::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "iter,normal_residual,data_misfit,wall_seconds\n";
  for (std::size_t k = 0; k < normal_residual.size(); ++k)
    out << k << "," << normal_residual[k] << "," << data_misfit[k] << ","
        << wall_seconds[k] << "\n";
}

Gather approx_inverse(const Gather& d, const LinearOp& V) {
  return gather_scale(4.0, V.adjoint_apply(d));
}

namespace {

// One normal-operator application, keeping the intermediate S p so the
// solver can track the data misfit without extra wave solves.
struct NormalParts {
  Gather Np;
  Gather Sp;
};

struct NormalApply {
  const LinearOp* S;
  const LinearOp* W_d;
  const LinearOp* A;
  const LinearOp* W_m;
  double alpha;

  NormalParts operator()(const Gather& p) const {
    Gather sp = S->apply(p);
    Gather np = S->adjoint_apply(W_d->apply(sp));
    if (alpha != 0.0) {
      Gather ap = A->apply(p);
      Gather pen = A->adjoint_apply(W_m->apply(ap));
      np = gather_axpy(alpha * alpha, pen, np);
    }
    return NormalParts{std::move(np), std::move(sp)};
  }

  Gather rhs(const Gather& d) const { return S->adjoint_apply(W_d->apply(d)); }
};

SolveReport run_pcg(const NormalApply& normal, const Gather& d, const LinearOp* M_inv,
                    int max_iter, double tol) {
  if (max_iter < 1) throw ConfigError("solver: max_iter must be >= 1");
  auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  };

  SolveReport rep;
  Gather h(normal.S->domain);
  Gather r = normal.rhs(d);
  Gather g = M_inv ? M_inv->apply(r) : r;
  Gather p = g;
  NormalParts parts = normal(p);
  Gather sh(normal.S->range);  // S h, accumulated incrementally

  double r0 = gather_norm(r);
  rep.normal_residual.push_back(r0);
  rep.data_misfit.push_back(gather_norm(d));
  rep.wall_seconds.push_back(elapsed());

  double gr = gather_dot(g, r);
  int k = 0;
  for (; k < max_iter; ++k) {
    double pq = gather_dot(p, parts.Np);
    if (pq <= 0.0) {
      double scale = gather_norm(p) * gather_norm(parts.Np);
      if (pq < -1e-13 * scale)
        throw NumericError("conjugate gradients: operator not positive, <p, Np> = " +
                           std::to_string(pq) + " at iteration " + std::to_string(k));
      rep.stop_reason = "stagnated: <p, Np> vanished";
      break;
    }
    double ak = gr / pq;
    h = gather_axpy(ak, p, h);
    sh = gather_axpy(ak, parts.Sp, sh);
    r = gather_axpy(-ak, parts.Np, r);

    rep.normal_residual.push_back(gather_norm(r));
    rep.data_misfit.push_back(gather_norm(gather_axpy(-1.0, d, sh)));
    rep.wall_seconds.push_back(elapsed());

    if (rep.normal_residual.back() <= tol * r0) {
      ++k;
      rep.converged = true;
      rep.stop_reason = "relative normal residual below tolerance";
      break;
    }
    Gather g_next = M_inv ? M_inv->apply(r) : r;
    double gr_next = gather_dot(g_next, r);
    double beta = gr_next / gr;
    p = gather_axpy(beta, p, g_next);
    parts = normal(p);
    g = std::move(g_next);
    gr = gr_next;
  }
  rep.iterations = static_cast<int>(rep.normal_residual.size()) - 1;
  if (rep.stop_reason.empty()) rep.stop_reason = "max iterations reached";
  rep.h = std::move(h);
  return rep;
}

}  // namespace

NormalSystem normal_op(const InversionProblem& problem) {
  NormalApply na{&problem.S, &problem.W_d, &problem.penalty.A, &problem.W_m,
                 problem.alpha};
  GatherSpec dom = problem.S.domain;
  auto apply = [na](const Gather& g) { return na(g).Np; };
  LinearOp N{dom, dom, "N", apply, apply};
  return NormalSystem{std::move(N), na.rhs(problem.d)};
}

LinearOp preconditioner(const InversionProblem& problem) {
  LinearOp J = problem.penalty.inv_sqrt(problem.alpha);
  return compose_op(J, compose_op(problem.Wm_inv, J));
}

SolveReport cg(const InversionProblem& problem, int max_iter, double tol) {
  double ds = problem.data_scale;
  LinearOp I_d = ds == 1.0 ? identity_op(problem.S.range)
                           : scaled_op(1.0 / (ds * ds), identity_op(problem.S.range));
  LinearOp I_m = identity_op(problem.S.domain);
  NormalApply na{&problem.S, &I_d, &problem.penalty.A, &I_m, problem.alpha};
  return run_pcg(na, problem.d, nullptr, max_iter, tol);
}

SolveReport pcg(const InversionProblem& problem, int max_iter, double tol,
                const LinearOp* M_override) {
  NormalApply na{&problem.S, &problem.W_d, &problem.penalty.A, &problem.W_m,
                 problem.alpha};
  LinearOp M_inv = M_override ? *M_override : preconditioner(problem);
  double sym = dot_test(M_inv, 2, 0x5eedULL);
  if (sym > 1e-9)
    throw NumericError("pcg: preconditioner failed the symmetry dot test: " +
                       std::to_string(sym));
  return run_pcg(na, problem.d, &M_inv, max_iter, tol);
}

double speedup_at(const SolveReport& baseline, const SolveReport& preconditioned, int k) {
  if (k <= 0 || k >= static_cast<int>(preconditioned.normal_residual.size()))
    throw ConfigError("speedup_at: iteration index out of range");
  double level = preconditioned.normal_residual[k] / preconditioned.normal_residual[0];
  for (std::size_t j = 0; j < baseline.normal_residual.size(); ++j) {
    if (baseline.normal_residual[j] / baseline.normal_residual[0] <= level)
      return static_cast<double>(j) / k;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace xs
