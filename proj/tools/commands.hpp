#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"
#include "xs/solver.hpp"

namespace xs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitThreshold = 4;

int cmd_simulate(const RunConfig& cfg);
int cmd_dottest(const RunConfig& cfg);
int cmd_invert(const RunConfig& cfg);
int cmd_lambda(const RunConfig& cfg);
int cmd_energy(const RunConfig& cfg);
int cmd_symbol_check(const RunConfig& cfg);

// ---- reusable analysis routines (shared with the acceptance suite) ----

struct SymbolCheck {
  double slowness_ratio;  // kappa xi^2 / (rho omega^2)
  double measured;        // thin-slab amplitude
  double expected;        // 2 sqrt(1-s) / sqrt(kappa rho)
  double rel_error;
};

/// Thin-slab amplitude against the homogeneous-medium symbol at the given
/// slowness ratios, probed at probe_hz on a refined time axis.
std::vector<SymbolCheck> run_symbol_checks(const Scenario& scn,
                                           const std::vector<double>& slowness_ratios,
                                           double probe_hz = 4.0);

struct EnergyIdentity {
  double plateau;         // post-source energy level, J/m
  double plateau_spread;  // relative flatness over the window
  double quadratic_form;  // <P_s p, sym(Lambda) P_s p>
  double rel_error;
  std::vector<double> times;
  std::vector<double> energies;
};

/// Radiated-energy identity on an enlarged homogeneous domain: total field
/// energy after the surface source switches off against the quadratic form
/// of the pressure trace under the symmetrized pressure-to-source operator.
EnergyIdentity run_energy_identity(const Scenario& scn);

/// Operators for inversion in the given medium, anchored on the scenario
/// acquisition geometry.
struct InversionOps {
  LinearOp S;
  LinearOp V;
  LinearOp W_d;
  LinearOp W_m;
  LinearOp Wm_inv;
  PenaltyOp penalty;
  double data_scale;
};

InversionOps build_inversion_ops(const Scenario& scn, const Medium& medium);

InversionProblem build_problem(const InversionOps& ops, const Gather& d, double alpha);

}  // namespace xs::cli
