#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "adrm/config.hpp"
#include "adrm/modem.hpp"
#include "adrm/rng.hpp"
#include "adrm/types.hpp"

namespace adrm {

/// Unordered codeword pair (q < q_hat). Codeword q carries the data word q,
/// i.e. symbol q >> log2(A) and pattern q & (A - 1).
struct CodewordPair {
  int q = 0;
  int q_hat = 0;
};

/// Max-min distance problem over the stacked amplitude vector
/// a = [a_1; ...; a_A] (column-major L x A codebook).
///
/// Each R_{q,q_hat} = h~^H h~ (.) (Psi_q - Psi_qhat)(Psi_q - Psi_qhat)^H is rank one,
/// R = w w^H with w = conj(h~) (.) (Psi_q - Psi_qhat); only w is stored and
/// r_matrix() materialises R on request.
struct DistanceProblem {
  int groups = 0;
  int order = 0;
  int mod_order = 0;
  std::vector<CodewordPair> pairs;
  std::vector<CVec> factors;  ///< w per pair, length A L
  RMat f;                     ///< L x L power quadratic form
  double lower = 0.0;         ///< 1 + epsilon
  double upper = 0.0;         ///< alpha_max
  double p_a = 0.0;
  double scale = 1.0;         ///< largest attainable |h^T a_k s_m|^2, normalises tau

  int dim() const { return groups * order; }
  CMat r_matrix(std::size_t pair) const;
  /// a^T R_pair a.
  double quadratic(std::size_t pair, const RVec& a) const;
  /// min over pairs of a^T R a.
  double min_distance(const RVec& a) const;
  /// a_k^T F a_k for column k of the stacked vector.
  double column_power(const RVec& a, int k) const;
  /// Largest violation of the power and box constraints (0 when feasible).
  double max_violation(const RVec& a) const;
};

/// Codewords as Psi_q = e_k (x) (s_m 1_L), ordered by data word.
std::vector<CVec> codeword_vectors(int groups, int order, const Constellation& constellation);

DistanceProblem build_distance_problem(const RVec& h, const CVec& p,
                                       const Constellation& constellation,
                                       const SystemConfig& cfg, double epsilon = 1e-6);

RVec stack_codebook(const AapCodebook& codebook);
AapCodebook reshape_codebook(const RVec& a, int groups, int order);

struct SubproblemResult {
  RVec a;
  double tau = 0.0;  ///< min over pairs of the linearised distance at a
  int newton_steps = 0;
};

/// One convex SCA step: maximise tau subject to the linearised distance
/// constraints around a_prev, the per-column power budget and the box.
/// a_prev must satisfy the power and box constraints.
SubproblemResult solve_sca_subproblem(const DistanceProblem& problem, const RVec& a_prev);

/// Linearised distance 2 a_prev^T R a - a_prev^T R a_prev for one pair.
double linearised_distance(const DistanceProblem& problem, std::size_t pair, const RVec& a_prev,
                           const RVec& a);

struct ScaTrace {
  std::vector<double> tau_per_iter;  ///< min distance over scale; entry 0 is the start point (1 unless degenerate)
  int iterations = 0;
  bool converged = false;
  double scale = 1.0;  ///< start-point min distance; multiply tau_per_iter by this for physical units
};

enum class ScaStart {
  kStaggered,  ///< column k at lower + (upper - lower)(k + 1)/A
  kUniformMax  ///< every entry at alpha_max
};

struct ScaOptions {
  int max_iterations = 100;
  double rel_tol = 1e-4;
  double epsilon = 1e-6;
  ScaStart start = ScaStart::kStaggered;
};

struct ScaResult {
  AapCodebook codebook;
  ScaTrace trace;
};

/// Pulls each column toward the lower-bound corner until its power budget holds.
/// Throws NumericalError when even the lower corner violates the budget.
RVec project_power(const DistanceProblem& problem, RVec a);

/// Successive convex approximation of the max-min distance codebook.
ScaResult design_codebook_sca(const RVec& h, const CVec& p, const Constellation& constellation,
                              const SystemConfig& cfg, const ScaOptions& opts = {});
ScaResult design_codebook_sca(const DistanceProblem& problem, const ScaOptions& opts = {});

/// Uniform box draw followed by power projection.
RVec random_feasible_point(const DistanceProblem& problem, Rng& rng);

struct GaOptions {
  int population = 50;
  int generations = 200;
  int tournament = 3;
  double blend_alpha = 0.5;
  double mutation_rate = 0.1;
  double mutation_sigma = 0.1;  ///< fraction of the box width
  int elites = 1;
};

struct GaResult {
  AapCodebook codebook;
  double objective = 0.0;  ///< min distance, physical units
};

/// Real-coded genetic algorithm on the same objective: tournament selection,
/// blend crossover, Gaussian mutation, repair by box clamping and power projection.
GaResult design_codebook_ga(const DistanceProblem& problem, Rng& rng, const GaOptions& opts = {});

/// Plain-text codebook: optional '#' comment lines, a header "L A", then L rows
/// of A space-separated amplitudes.
void write_codebook(std::ostream& os, const AapCodebook& codebook,
                    const std::vector<std::string>& comments = {});
AapCodebook read_codebook(std::istream& is);

}  // namespace adrm
