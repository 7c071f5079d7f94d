#pragma once

#include <vector>

#include "adrm/types.hpp"

namespace adrm::opt {

/// x[idx]^T P x[idx] + q^T x[idx] <= r with P symmetric positive semidefinite.
/// The constraint touches only the variables listed in idx.
struct QuadraticConstraint {
  std::vector<int> idx;
  RMat P;
  RVec q;
  double r = 0.0;

  double value(const RVec& x) const;  // lhs - r, negative when strictly feasible
};

/// minimize c^T x  s.t.  A x <= b,  quadratic[j](x) <= 0.
struct ConvexProgram {
  RVec c;
  RMat A;
  RVec b;
  std::vector<QuadraticConstraint> quadratic;

  int constraint_count() const { return static_cast<int>(A.rows() + quadratic.size()); }
  /// Largest constraint violation at x (0 when feasible).
  double max_violation(const RVec& x) const;
};

struct BarrierOptions {
  double gap_tol = 1e-10;  ///< stop when m / t falls below this
  double t0 = 1.0;
  double mu = 20.0;
  int max_newton_per_center = 80;
  int max_total_newton = 2000;
  double newton_tol = 1e-12;  ///< half squared Newton decrement
};

struct BarrierResult {
  RVec x;
  double objective = 0.0;
  double gap_bound = 0.0;  ///< m / t at termination, bounds c^T x - p*
  int newton_steps = 0;
  bool converged = false;
};

/// Log-barrier interior-point method with damped Newton centering. x0 must be
/// strictly feasible; throws NumericalError otherwise.
BarrierResult solve_barrier(const ConvexProgram& prog, const RVec& x0,
                            const BarrierOptions& opts = {});

}  // namespace adrm::opt
