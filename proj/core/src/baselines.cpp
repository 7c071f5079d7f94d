#include "adrm/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "adrm/power_model.hpp"

namespace adrm {

std::string scheme_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kAdrm: return "adrm";
    case SchemeKind::kPdrm: return "pdrm";
    case SchemeKind::kIm: return "im";
    case SchemeKind::kSrpm: return "srpm";
  }
  return "unknown";
}

SchemeKind parse_scheme(const std::string& name) {
  if (name == "adrm") return SchemeKind::kAdrm;
  if (name == "pdrm") return SchemeKind::kPdrm;
  if (name == "im") return SchemeKind::kIm;
  if (name == "srpm") return SchemeKind::kSrpm;
  throw ConfigError("unknown scheme '" + name + "' (expected adrm, pdrm, im or srpm)");
}

namespace {

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int floor_log2(long long v) {
  int b = 0;
  while ((2LL << b) <= v) ++b;
  return b;
}

}  // namespace

int BaselineScheme::order() const {
  switch (kind) {
    case SchemeKind::kIm: {
      if (active_groups < 1 || active_groups > groups) {
        throw ConfigError("IM needs 1 <= active_groups <= groups, got active_groups = " +
                          std::to_string(active_groups) + ", groups = " + std::to_string(groups));
      }
      return 1 << floor_log2(binomial(groups, active_groups));
    }
    case SchemeKind::kPdrm:
      if (index_bits < 0 || index_bits > groups) {
        throw ConfigError("PDRM needs 0 <= index_bits <= groups");
      }
      return 1 << index_bits;
    case SchemeKind::kSrpm:
      if (index_bits < 0 || index_bits > 16) throw ConfigError("SRPM index_bits out of range");
      return 1 << index_bits;
    case SchemeKind::kAdrm:
      break;
  }
  throw ConfigError("ADRM is not a baseline scheme");
}

std::vector<CVec> pdrm_patterns(int groups, int count) {
  std::vector<CVec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    CVec w(groups);
    for (int l = 0; l < groups; ++l) w(l) = ((k >> (groups - 1 - l)) & 1) ? -1.0 : 1.0;
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::vector<int>> im_combinations(int groups, int active) {
  const int count = 1 << floor_log2(binomial(groups, active));
  std::vector<std::vector<int>> out;
  std::vector<int> c(active);
  for (int i = 0; i < active; ++i) c[i] = i;
  while (static_cast<int>(out.size()) < count) {
    out.push_back(c);
    int i = active - 1;
    while (i >= 0 && c[i] == groups - active + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < active; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

std::vector<CVec> scheme_weights(const BaselineScheme& scheme) {
  const int order = scheme.order();
  switch (scheme.kind) {
    case SchemeKind::kPdrm:
      return pdrm_patterns(scheme.groups, order);
    case SchemeKind::kIm: {
      std::vector<CVec> out;
      for (const auto& c : im_combinations(scheme.groups, scheme.active_groups)) {
        CVec w = CVec::Zero(scheme.groups);
        for (int l : c) w(l) = 1.0;
        out.push_back(std::move(w));
      }
      return out;
    }
    case SchemeKind::kSrpm: {
      std::vector<CVec> out;
      for (int k = 0; k < order; ++k) {
        out.push_back(CVec::Constant(scheme.groups, std::polar(1.0, srpm_offset(k, order, scheme.mod_order))));
      }
      return out;
    }
    case SchemeKind::kAdrm:
      break;
  }
  throw ConfigError("ADRM is not a baseline scheme");
}

double scheme_alpha(const BaselineScheme& scheme, const CVec& p, const SystemConfig& cfg) {
  double alpha = cfg.alpha_max;
  for (const auto& w : scheme_weights(scheme)) alpha = std::min(alpha, uniform_alpha(w, p, cfg));
  return alpha;
}

IndexAlphabet baseline_alphabet(const BaselineScheme& scheme, const CVec& group_gains, double alpha) {
  IndexAlphabet out;
  for (const auto& w : scheme_weights(scheme)) {
    out.gains.push_back(alpha * w.cwiseProduct(group_gains).sum());
    out.amplitudes.push_back(alpha * w.cwiseAbs());
  }
  return out;
}

cplx pdrm_codeword(int k, const RVec& h, double alpha, int index_bits) {
  const auto pats = pdrm_patterns(static_cast<int>(h.size()), 1 << index_bits);
  return alpha * pats.at(k).cwiseProduct(h.cast<cplx>()).sum();
}

cplx im_codeword(int k, const RVec& h, double alpha, int active_groups) {
  const auto combos = im_combinations(static_cast<int>(h.size()), active_groups);
  double acc = 0.0;
  for (int l : combos.at(k)) acc += h(l);
  return alpha * acc;
}

int rotation_order(int mod_order) { return log2_exact(mod_order) % 2 == 0 ? 4 : 2; }

double srpm_offset(int k, int order, int mod_order) {
  return 2.0 * kPi * k / (static_cast<double>(order) * rotation_order(mod_order));
}

cplx srpm_codeword(int k, const RVec& h, double alpha, int order, int mod_order) {
  return alpha * std::polar(1.0, srpm_offset(k, order, mod_order)) * h.sum();
}

void check_rate(const BaselineScheme& scheme, int target_rate) {
  const int r = scheme.rate();
  if (r != target_rate) {
    throw ConfigError(scheme_name(scheme.kind) + " carries " + std::to_string(r) +
                      " bpcu but the comparison runs at " + std::to_string(target_rate) +
                      " bpcu; adjust index_bits or active_groups");
  }
}

}  // namespace adrm
