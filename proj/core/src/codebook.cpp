#include "adrm/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "adrm/barrier.hpp"

namespace adrm {

CMat DistanceProblem::r_matrix(std::size_t pair) const {
  const CVec& w = factors[pair];
  return w * w.adjoint();
}

double DistanceProblem::quadratic(std::size_t pair, const RVec& a) const {
  const cplx z = factors[pair].transpose() * a.cast<cplx>();
  return std::norm(z);
}

double DistanceProblem::min_distance(const RVec& a) const {
  double best = std::numeric_limits<double>::infinity();
  const CVec ac = a.cast<cplx>();
  for (const auto& w : factors) best = std::min(best, std::norm(cplx(w.transpose() * ac)));
  return best;
}

double DistanceProblem::column_power(const RVec& a, int k) const {
  const auto col = a.segment(static_cast<Eigen::Index>(k) * groups, groups);
  return col.dot(f * col);
}

double DistanceProblem::max_violation(const RVec& a) const {
  double v = 0.0;
  for (int k = 0; k < order; ++k) v = std::max(v, column_power(a, k) - p_a);
  v = std::max(v, lower - a.minCoeff());
  v = std::max(v, a.maxCoeff() - upper);
  return v;
}

std::vector<CVec> codeword_vectors(int groups, int order, const Constellation& constellation) {
  const int ib = log2_exact(order);
  const int count = constellation.size() * order;
  std::vector<CVec> psi;
  psi.reserve(count);
  for (int q = 0; q < count; ++q) {
    const int m = q >> ib;
    const int k = q & (order - 1);
    CVec v = CVec::Zero(static_cast<Eigen::Index>(groups) * order);
    v.segment(static_cast<Eigen::Index>(k) * groups, groups).setConstant(constellation.points[m]);
    psi.push_back(std::move(v));
  }
  return psi;
}

DistanceProblem build_distance_problem(const RVec& h, const CVec& p,
                                       const Constellation& constellation,
                                       const SystemConfig& cfg, double epsilon) {
  DistanceProblem prob;
  prob.groups = static_cast<int>(h.size());
  prob.order = cfg.codebook_order;
  prob.mod_order = constellation.size();
  prob.lower = 1.0 + epsilon;
  prob.upper = cfg.alpha_max;
  prob.p_a = cfg.p_a;

  // Power form of the RIS output budget: P_AP |p^H a_k|^2 + sigma_r^2 ||a_k||^2.
  const RMat pp = (p * p.adjoint()).real();
  prob.f = cfg.p_ap * pp + cfg.sigma_r_sq * RMat::Identity(prob.groups, prob.groups);

  const Eigen::Index dim = prob.dim();
  CVec h_tilde(dim);
  for (int k = 0; k < prob.order; ++k) h_tilde.segment(static_cast<Eigen::Index>(k) * prob.groups, prob.groups) = h.cast<cplx>();

  const auto psi = codeword_vectors(prob.groups, prob.order, constellation);
  const int count = static_cast<int>(psi.size());
  prob.pairs.reserve(static_cast<std::size_t>(count) * (count - 1) / 2);
  prob.factors.reserve(prob.pairs.capacity());
  for (int q = 0; q < count; ++q) {
    for (int qh = q + 1; qh < count; ++qh) {
      prob.pairs.push_back({q, qh});
      prob.factors.push_back(h_tilde.conjugate().cwiseProduct(psi[q] - psi[qh]));
    }
  }

  double smax = 0.0;
  for (const auto& s : constellation.points) smax = std::max(smax, std::abs(s));
  const double g = prob.upper * h.cwiseAbs().sum() * smax;
  prob.scale = g > 0.0 ? g * g : 1.0;
  return prob;
}

RVec stack_codebook(const AapCodebook& codebook) {
  return Eigen::Map<const RVec>(codebook.a.data(), codebook.a.size());
}

AapCodebook reshape_codebook(const RVec& a, int groups, int order) {
  AapCodebook cb;
  cb.a = Eigen::Map<const RMat>(a.data(), groups, order);
  return cb;
}

namespace {

// Gradient 2 Re(R a_prev) and value a_prev^T R a_prev of the linearisation.
void linearise(const CVec& w, const RVec& a_prev, RVec& grad, double& value) {
  const cplx z = w.transpose() * a_prev.cast<cplx>();
  grad = 2.0 * (z * w.conjugate()).real();
  value = std::norm(z);
}

}  // namespace

double linearised_distance(const DistanceProblem& problem, std::size_t pair, const RVec& a_prev,
                           const RVec& a) {
  RVec grad;
  double value = 0.0;
  linearise(problem.factors[pair], a_prev, grad, value);
  return grad.dot(a) - value;
}

RVec project_power(const DistanceProblem& problem, RVec a) {
  const int L = problem.groups;
  const RVec ones = RVec::Ones(L);
  const double lo = problem.lower;
  const double corner = lo * lo * ones.dot(problem.f * ones);
  for (int k = 0; k < problem.order; ++k) {
    if (problem.column_power(a, k) <= problem.p_a) continue;
    if (corner >= problem.p_a) {
      std::ostringstream msg;
      msg << "power constraint of column " << k << " cannot be met inside the box: "
          << "a_k^T F a_k = " << corner << " at the lower bound " << lo << " exceeds P_a = "
          << problem.p_a;
      throw NumericalError(msg.str());
    }
    auto col = a.segment(static_cast<Eigen::Index>(k) * L, L);
    const RVec d = col - lo * ones;
    const double qa = d.dot(problem.f * d);
    const double qb = 2.0 * lo * ones.dot(problem.f * d);
    const double qc = corner - problem.p_a;
    const double c = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    col = lo * ones + (c * (1.0 - 1e-12)) * d;
  }
  return a;
}

SubproblemResult solve_sca_subproblem(const DistanceProblem& problem, const RVec& a_prev) {
  const int n_a = problem.dim();
  const int L = problem.groups;
  const auto n_pairs = static_cast<Eigen::Index>(problem.factors.size());
  const double lo = problem.lower;
  const double hi = problem.upper;
  const double s = problem.scale;

  // Strictly interior anchor near the lower corner.
  const RVec anchor = RVec::Constant(n_a, lo + 1e-3 * (hi - lo));
  for (int k = 0; k < problem.order; ++k) {
    if (problem.column_power(anchor, k) >= problem.p_a) {
      std::ostringstream msg;
      msg << "power constraint (column " << k << ") infeasible with the amplitude lower bound "
          << lo << ": a_k^T F a_k = " << problem.column_power(anchor, k)
          << " >= P_a = " << problem.p_a;
      throw NumericalError(msg.str());
    }
  }
  if (problem.max_violation(a_prev) > 1e-9 * std::max(1.0, problem.p_a)) {
    throw NumericalError("solve_sca_subproblem: previous iterate is infeasible");
  }

  opt::ConvexProgram prog;
  const Eigen::Index n = n_a + 1;
  prog.c = RVec::Zero(n);
  prog.c(n_a) = -1.0;
  prog.A = RMat::Zero(n_pairs + 2 * n_a, n);
  prog.b = RVec::Zero(n_pairs + 2 * n_a);
  for (Eigen::Index i = 0; i < n_pairs; ++i) {
    RVec grad;
    double value = 0.0;
    linearise(problem.factors[static_cast<std::size_t>(i)], a_prev, grad, value);
    // tau - grad^T a / s <= -value / s
    prog.A.row(i).head(n_a) = -grad.transpose() / s;
    prog.A(i, n_a) = 1.0;
    prog.b(i) = -value / s;
  }
  for (int i = 0; i < n_a; ++i) {
    prog.A(n_pairs + i, i) = 1.0;
    prog.b(n_pairs + i) = hi;
    prog.A(n_pairs + n_a + i, i) = -1.0;
    prog.b(n_pairs + n_a + i) = -lo;
  }
  const RMat fp = problem.f / problem.p_a;
  for (int k = 0; k < problem.order; ++k) {
    opt::QuadraticConstraint qc;
    for (int l = 0; l < L; ++l) qc.idx.push_back(k * L + l);
    qc.P = fp;
    qc.q = RVec::Zero(L);
    qc.r = 1.0;
    prog.quadratic.push_back(std::move(qc));
  }

  const double kappa = 1e-4;
  RVec x0(n);
  x0.head(n_a) = (1.0 - kappa) * a_prev + kappa * anchor;
  const RVec lin = prog.b.head(n_pairs) - prog.A.topLeftCorner(n_pairs, n_a) * x0.head(n_a);
  const double tau_start = n_pairs > 0 ? lin.minCoeff() : 0.0;
  x0(n_a) = tau_start - 0.1;

  opt::BarrierOptions bopts;
  bopts.gap_tol = 1e-10;
  const opt::BarrierResult br = opt::solve_barrier(prog, x0, bopts);

  SubproblemResult res;
  res.a = br.x.head(n_a);
  res.newton_steps = br.newton_steps;
  double tau = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < problem.factors.size(); ++i) {
    tau = std::min(tau, linearised_distance(problem, i, a_prev, res.a));
  }
  res.tau = n_pairs > 0 ? tau : 0.0;
  return res;
}

namespace {

RVec sca_start(const DistanceProblem& problem, ScaStart start) {
  const int L = problem.groups;
  const RVec ones = RVec::Ones(L);
  // Largest uniform level inside the power budget.
  const double unit = ones.dot(problem.f * ones);
  double top = problem.upper;
  if (unit > 0.0) top = std::min(top, std::sqrt(problem.p_a / unit) * (1.0 - 1e-9));
  if (top <= problem.lower) return project_power(problem, RVec::Constant(problem.dim(), problem.lower));
  RVec a(problem.dim());
  for (int k = 0; k < problem.order; ++k) {
    const double level = start == ScaStart::kUniformMax
                             ? top
                             : problem.lower + (top - problem.lower) * (k + 1.0) / problem.order;
    a.segment(static_cast<Eigen::Index>(k) * L, L).setConstant(level);
  }
  return a;
}

}  // namespace

ScaResult design_codebook_sca(const DistanceProblem& original, const ScaOptions& opts) {
  // Distances are measured relative to the start point, so tau_per_iter[0] = 1
  // and the stopping rule is relative to the initial min distance.
  DistanceProblem problem = original;
  RVec a = sca_start(problem, opts.start);
  const double d0 = problem.min_distance(a);
  if (d0 > 0.0) problem.scale = d0;
  ScaResult res;
  res.trace.scale = problem.scale;
  double prev = problem.min_distance(a) / problem.scale;
  res.trace.tau_per_iter.push_back(prev);
  RVec best = a;
  double best_tau = prev;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    const SubproblemResult sub = solve_sca_subproblem(problem, a);
    a = sub.a;
    const double tau = problem.min_distance(a) / problem.scale;
    res.trace.tau_per_iter.push_back(tau);
    res.trace.iterations = it;
    if (tau > best_tau) {
      best_tau = tau;
      best = a;
    }
    if (std::fabs(tau - prev) / std::max(1.0, std::fabs(prev)) < opts.rel_tol) {
      res.trace.converged = true;
      break;
    }
    prev = tau;
  }
  res.codebook = reshape_codebook(best, problem.groups, problem.order);
  return res;
}

ScaResult design_codebook_sca(const RVec& h, const CVec& p, const Constellation& constellation,
                              const SystemConfig& cfg, const ScaOptions& opts) {
  return design_codebook_sca(build_distance_problem(h, p, constellation, cfg, opts.epsilon), opts);
}

RVec random_feasible_point(const DistanceProblem& problem, Rng& rng) {
  RVec a(problem.dim());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a(i) = problem.lower + (problem.upper - problem.lower) * rng.uniform();
  }
  return project_power(problem, a);
}

GaResult design_codebook_ga(const DistanceProblem& problem, Rng& rng, const GaOptions& opts) {
  const int pop_size = std::max(2, opts.population);
  const double width = problem.upper - problem.lower;
  std::vector<RVec> pop;
  std::vector<double> fit;
  pop.reserve(pop_size);
  for (int i = 0; i < pop_size; ++i) {
    pop.push_back(random_feasible_point(problem, rng));
    fit.push_back(problem.min_distance(pop.back()));
  }

  auto tournament = [&]() -> const RVec& {
    int best = static_cast<int>(rng.below(pop_size));
    for (int t = 1; t < opts.tournament; ++t) {
      const int c = static_cast<int>(rng.below(pop_size));
      if (fit[c] > fit[best]) best = c;
    }
    return pop[best];
  };

  for (int gen = 0; gen < opts.generations; ++gen) {
    std::vector<int> order(pop_size);
    for (int i = 0; i < pop_size; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return fit[x] > fit[y]; });

    std::vector<RVec> next;
    std::vector<double> next_fit;
    next.reserve(pop_size);
    for (int e = 0; e < std::min(opts.elites, pop_size); ++e) {
      next.push_back(pop[order[e]]);
      next_fit.push_back(fit[order[e]]);
    }
    while (static_cast<int>(next.size()) < pop_size) {
      const RVec& p1 = tournament();
      const RVec& p2 = tournament();
      RVec child(p1.size());
      for (Eigen::Index i = 0; i < child.size(); ++i) {
        const double lo = std::min(p1(i), p2(i));
        const double hi = std::max(p1(i), p2(i));
        const double span = hi - lo;
        child(i) = lo - opts.blend_alpha * span + (1.0 + 2.0 * opts.blend_alpha) * span * rng.uniform();
        if (rng.uniform() < opts.mutation_rate) child(i) += opts.mutation_sigma * width * rng.normal();
        child(i) = std::clamp(child(i), problem.lower, problem.upper);
      }
      child = project_power(problem, child);
      next_fit.push_back(problem.min_distance(child));
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    fit = std::move(next_fit);
  }

  const auto best = static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  return {reshape_codebook(pop[best], problem.groups, problem.order), fit[best]};
}

void write_codebook(std::ostream& os, const AapCodebook& codebook,
                    const std::vector<std::string>& comments) {
  for (const auto& c : comments) os << "# " << c << '\n';
  os << codebook.groups() << ' ' << codebook.order() << '\n';
  os << std::setprecision(17);
  for (int l = 0; l < codebook.groups(); ++l) {
    for (int k = 0; k < codebook.order(); ++k) {
      if (k) os << ' ';
      os << codebook.a(l, k);
    }
    os << '\n';
  }
}

AapCodebook read_codebook(std::istream& is) {
  std::string line;
  int groups = -1;
  int order = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream hs(line);
    if (!(hs >> groups >> order) || groups <= 0 || order <= 0) {
      throw ConfigError("codebook file: bad header line '" + line + "'");
    }
    break;
  }
  if (groups <= 0) throw ConfigError("codebook file: missing header");
  AapCodebook cb;
  cb.a.resize(groups, order);
  for (int l = 0; l < groups; ++l) {
    if (!std::getline(is, line)) throw ConfigError("codebook file: truncated");
    std::istringstream rs(line);
    for (int k = 0; k < order; ++k) {
      if (!(rs >> cb.a(l, k))) throw ConfigError("codebook file: bad row " + std::to_string(l));
    }
  }
  return cb;
}

}  // namespace adrm
