#pragma once

#include <string>
#include <vector>

#include "adrm/config.hpp"
#include "adrm/modem.hpp"
#include "adrm/types.hpp"

namespace adrm {

enum class SchemeKind { kAdrm, kPdrm, kIm, kSrpm };

std::string scheme_name(SchemeKind kind);
/// Accepts "adrm", "pdrm", "im", "srpm". Throws ConfigError otherwise.
SchemeKind parse_scheme(const std::string& name);

/// Benchmark scheme parameters. `index_bits` is the number of bits carried by
/// the reflection pattern (PDRM, SRPM); IM derives it from L and active_groups.
struct BaselineScheme {
  SchemeKind kind = SchemeKind::kPdrm;
  int groups = 4;
  int active_groups = 2;
  int index_bits = 2;
  int mod_order = 4;

  /// Number of patterns actually used.
  int order() const;
  int rate() const { return log2_exact(mod_order) + log2_exact(order()); }
};

/// First `count` patterns of {0, pi}^L in lexicographic order (group 0 is the
/// most significant digit), as per-group weights +1 / -1.
std::vector<CVec> pdrm_patterns(int groups, int count);

/// First 2^floor(log2 C(L, L_a)) L_a-subsets of {0..L-1} in lexicographic order.
std::vector<std::vector<int>> im_combinations(int groups, int active);

/// Per-group unit/zero weights of every pattern of the scheme.
std::vector<CVec> scheme_weights(const BaselineScheme& scheme);

/// Common uniform gain for all patterns: the smallest per-pattern
/// uniform_alpha so that every pattern meets the output-power budget.
double scheme_alpha(const BaselineScheme& scheme, const CVec& p, const SystemConfig& cfg);

/// alpha * sum_l w_l h_l per pattern, with amplitudes alpha |w_l| for the
/// forwarded RIS noise. Group gains may be complex (CSI mismatch).
IndexAlphabet baseline_alphabet(const BaselineScheme& scheme, const CVec& group_gains, double alpha);

/// Scalar effective gains of one pattern (0-based k), as in the scheme descriptions.
cplx pdrm_codeword(int k, const RVec& h, double alpha, int index_bits);
cplx im_codeword(int k, const RVec& h, double alpha, int active_groups);
cplx srpm_codeword(int k, const RVec& h, double alpha, int order, int mod_order);

/// Order of the rotational symmetry of the QAM constellation: 4 for square
/// QAM, 2 for BPSK and rectangular QAM.
int rotation_order(int mod_order);
/// SRPM offset 2 pi k / (A s) with s = rotation_order(M). Offsets spread over
/// 2 pi / s so no pattern maps the constellation onto itself.
double srpm_offset(int k, int order, int mod_order);

/// Throws ConfigError when the scheme rate differs from `target_rate`.
void check_rate(const BaselineScheme& scheme, int target_rate);

}  // namespace adrm
