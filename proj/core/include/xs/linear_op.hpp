#pragma once

#include <functional>
#include <string>

#include "xs/gather.hpp"

namespace xs {

/// A gather-to-gather linear map paired with its exact adjoint with respect
/// to gather_dot. Instances are immutable and cheap to copy.
struct LinearOp {
  GatherSpec domain;
  GatherSpec range;
  std::string label;
  std::function<Gather(const Gather&)> apply_fn;
  std::function<Gather(const Gather&)> adjoint_fn;

  Gather apply(const Gather& x) const;
  Gather adjoint_apply(const Gather& y) const;
};

LinearOp identity_op(const GatherSpec& spec);
LinearOp scaled_op(double alpha, const LinearOp& op);
LinearOp transposed_op(const LinearOp& op);
LinearOp sum_op(const LinearOp& a, const LinearOp& b);
/// a after b (apply order: b first).
LinearOp compose_op(const LinearOp& a, const LinearOp& b);
/// Pointwise multiply each trace by a per-trace weight (self-adjoint).
LinearOp diag_trace_op(const GatherSpec& spec, std::vector<double> weights,
                       const std::string& label);

/// Max over pseudorandom trials of |<Ax,y> - <x,A^T y>| / (||Ax|| ||y||).
double dot_test(const LinearOp& op, int trials, std::uint64_t seed);

}  // namespace xs
