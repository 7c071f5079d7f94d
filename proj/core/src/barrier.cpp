#include "adrm/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adrm::opt {

namespace {

RVec gather(const RVec& x, const std::vector<int>& idx) {
  RVec out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = x(idx[i]);
  return out;
}

struct Slacks {
  RVec lin;
  RVec quad;
  bool strictly_feasible = false;
};

Slacks slacks(const ConvexProgram& prog, const RVec& x) {
  Slacks s;
  s.lin = prog.b - prog.A * x;
  s.quad.resize(static_cast<Eigen::Index>(prog.quadratic.size()));
  for (std::size_t j = 0; j < prog.quadratic.size(); ++j) {
    s.quad(static_cast<Eigen::Index>(j)) = -prog.quadratic[j].value(x);
  }
  s.strictly_feasible = (s.lin.size() == 0 || s.lin.minCoeff() > 0.0) &&
                        (s.quad.size() == 0 || s.quad.minCoeff() > 0.0);
  return s;
}

double barrier_value(const ConvexProgram& prog, const RVec& x, double t, bool& feasible) {
  const Slacks s = slacks(prog, x);
  feasible = s.strictly_feasible;
  if (!feasible) return std::numeric_limits<double>::infinity();
  return t * prog.c.dot(x) - s.lin.array().log().sum() - s.quad.array().log().sum();
}

}  // namespace

double QuadraticConstraint::value(const RVec& x) const {
  const RVec xs = gather(x, idx);
  return xs.dot(P * xs) + q.dot(xs) - r;
}

double ConvexProgram::max_violation(const RVec& x) const {
  double v = 0.0;
  if (A.rows() > 0) v = std::max(v, (A * x - b).maxCoeff());
  for (const auto& qc : quadratic) v = std::max(v, qc.value(x));
  return v;
}

BarrierResult solve_barrier(const ConvexProgram& prog, const RVec& x0, const BarrierOptions& opts) {
  const Eigen::Index n = x0.size();
  const double m = prog.constraint_count();
  RVec x = x0;
  if (!slacks(prog, x).strictly_feasible) {
    throw NumericalError("barrier: starting point is not strictly feasible");
  }

  BarrierResult res;
  double t = opts.t0;
  while (true) {
    // Centering: minimize t c^T x + phi(x).
    for (int it = 0; it < opts.max_newton_per_center; ++it) {
      if (res.newton_steps >= opts.max_total_newton) break;
      const Slacks s = slacks(prog, x);
      RVec grad = t * prog.c;
      RMat hess = RMat::Zero(n, n);
      if (prog.A.rows() > 0) {
        const RVec inv = s.lin.cwiseInverse();
        grad += prog.A.transpose() * inv;
        const RMat w = inv.asDiagonal() * prog.A;
        hess.selfadjointView<Eigen::Lower>().rankUpdate(w.transpose());
      }
      for (std::size_t j = 0; j < prog.quadratic.size(); ++j) {
        const auto& qc = prog.quadratic[j];
        const double sj = s.quad(static_cast<Eigen::Index>(j));
        const RVec xs = gather(x, qc.idx);
        const RVec dc = 2.0 * (qc.P * xs) + qc.q;
        const auto k = static_cast<Eigen::Index>(qc.idx.size());
        for (Eigen::Index a = 0; a < k; ++a) {
          grad(qc.idx[a]) += dc(a) / sj;
          for (Eigen::Index b = 0; b <= a; ++b) {
            const int ia = std::max(qc.idx[a], qc.idx[b]);
            const int ib = std::min(qc.idx[a], qc.idx[b]);
            hess(ia, ib) += dc(a) * dc(b) / (sj * sj) + 2.0 * qc.P(a, b) / sj;
          }
        }
      }
      const RMat full = hess.selfadjointView<Eigen::Lower>();
      Eigen::LDLT<RMat> ldlt(full);
      RVec dx = ldlt.solve(-grad);
      if (!dx.allFinite()) throw NumericalError("barrier: singular Newton system");
      const double decrement = -grad.dot(dx);
      ++res.newton_steps;
      if (decrement * 0.5 <= opts.newton_tol) break;

      bool feasible = false;
      const double f0 = barrier_value(prog, x, t, feasible);
      double step = 1.0;
      RVec trial;
      for (int ls = 0; ls < 60; ++ls) {
        trial = x + step * dx;
        const double f1 = barrier_value(prog, trial, t, feasible);
        if (feasible && f1 <= f0 - 0.25 * step * decrement) break;
        step *= 0.5;
      }
      if (!feasible) break;
      x = trial;
    }
    res.gap_bound = m / t;
    if (m / t < opts.gap_tol) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= opts.max_total_newton) break;
    t *= opts.mu;
  }
  res.x = x;
  res.objective = prog.c.dot(x);
  return res;
}

}  // namespace adrm::opt
