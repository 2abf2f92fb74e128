#include "xs/linear_op.hpp"

#include <cmath>
#include <memory>

namespace xs {

namespace {
void check_spec(const Gather& g, const GatherSpec& spec, const std::string& label,
                const char* side) {
  if (g.ntr() != spec.ntr())
    throw ShapeError(label + ": " + side + " trace count mismatch: got " +
                     std::to_string(g.ntr()) + ", expected " + std::to_string(spec.ntr()));
  if (g.nt() != spec.time.nt)
    throw ShapeError(label + ": " + side + " sample count mismatch: got " +
                     std::to_string(g.nt()) + ", expected " + std::to_string(spec.time.nt));
}
}  // namespace

Gather LinearOp::apply(const Gather& x) const {
  check_spec(x, domain, label, "domain");
  return apply_fn(x);
}

Gather LinearOp::adjoint_apply(const Gather& y) const {
  check_spec(y, range, label, "range");
  return adjoint_fn(y);
}

LinearOp identity_op(const GatherSpec& spec) {
  return LinearOp{spec, spec, "I", [](const Gather& g) { return g; },
                  [](const Gather& g) { return g; }};
}

LinearOp scaled_op(double alpha, const LinearOp& op) {
  LinearOp out = op;
  out.label = std::to_string(alpha) + "*" + op.label;
  out.apply_fn = [alpha, op](const Gather& g) { return gather_scale(alpha, op.apply(g)); };
  out.adjoint_fn = [alpha, op](const Gather& g) {
    return gather_scale(alpha, op.adjoint_apply(g));
  };
  return out;
}

LinearOp transposed_op(const LinearOp& op) {
  return LinearOp{op.range, op.domain, op.label + "^T",
                  [op](const Gather& g) { return op.adjoint_apply(g); },
                  [op](const Gather& g) { return op.apply(g); }};
}

LinearOp sum_op(const LinearOp& a, const LinearOp& b) {
  return LinearOp{a.domain, a.range, a.label + "+" + b.label,
                  [a, b](const Gather& g) { return gather_axpy(1.0, a.apply(g), b.apply(g)); },
                  [a, b](const Gather& g) {
                    return gather_axpy(1.0, a.adjoint_apply(g), b.adjoint_apply(g));
                  }};
}

LinearOp compose_op(const LinearOp& a, const LinearOp& b) {
  return LinearOp{b.domain, a.range, a.label + "*" + b.label,
                  [a, b](const Gather& g) { return a.apply(b.apply(g)); },
                  [a, b](const Gather& g) { return b.adjoint_apply(a.adjoint_apply(g)); }};
}

LinearOp diag_trace_op(const GatherSpec& spec, std::vector<double> weights,
                       const std::string& label) {
  if (weights.size() != static_cast<std::size_t>(spec.ntr()))
    throw ShapeError(label + ": weight count does not match trace count");
  auto w = std::make_shared<std::vector<double>>(std::move(weights));
  auto mul = [spec, w](const Gather& g) {
    Gather out = g;
    for (int r = 0; r < g.ntr(); ++r) {
      double* tr = out.trace(r);
      for (int n = 0; n < g.nt(); ++n) tr[n] *= (*w)[r];
    }
    return out;
  };
  return LinearOp{spec, spec, label, mul, mul};
}

double dot_test(const LinearOp& op, int trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("dot_test: trials must be >= 1");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Gather x = random_gather(op.domain, seed + 0x9e37ULL * (t + 1));
    Gather y = random_gather(op.range, seed + 0x79b9ULL * (t + 1) + 1);
    Gather ax = op.apply(x);
    Gather aty = op.adjoint_apply(y);
    double lhs = gather_dot(ax, y);
    double rhs = gather_dot(x, aty);
    double denom = gather_norm(ax) * gather_norm(y);
    if (denom == 0.0) denom = 1e-300;
    worst = std::max(worst, std::abs(lhs - rhs) / denom);
  }
  return worst;
}

}  // namespace xs
