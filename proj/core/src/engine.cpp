#include "adrm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include "adrm/analysis.hpp"
#include "adrm/mimo.hpp"

#ifndef ADRM_VERSION
#define ADRM_VERSION "0.0.0"
#endif

namespace adrm {

std::string version_string() { return std::string("adrm ") + ADRM_VERSION; }

void SweepSpec::validate() const {
  if (p_ap_grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 0; i < p_ap_grid.size(); ++i) {
    if (!(p_ap_grid[i] > 0.0)) throw ConfigError("sweep powers must be positive");
    if (i > 0 && !(p_ap_grid[i] > p_ap_grid[i - 1])) {
      throw ConfigError("sweep grid must be strictly increasing");
    }
  }
  if (bits_per_point < 1) throw ConfigError("bits_per_point must be positive");
  if (channels_per_point < 1) throw ConfigError("channels_per_point must be positive");
  if (csi_delta < 0.0) throw ConfigError("csi_delta must be non-negative");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

std::string SchemeSpec::name() const {
  if (kind == SchemeKind::kAdrm) return mimo ? "adrm-mimo" : "adrm";
  return scheme_name(kind);
}

int SchemeSpec::rate(const SystemConfig& cfg) const {
  if (kind != SchemeKind::kAdrm) return baseline.rate();
  if (mimo) return mimo_rate(cfg.nt, cfg.mod_order, cfg.codebook_order);
  return adrm::rate(cfg.mod_order, cfg.codebook_order);
}

double BerPoint::std_error() const {
  if (bits == 0) return 0.0;
  const double p = ber();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

ChannelRealization sweep_channel(const SystemConfig& cfg, std::uint64_t seed, int c) {
  Rng rng(seed, {StreamPurpose::kChannel, 0, static_cast<std::uint32_t>(c), 0});
  return draw_channel(cfg, rng);
}

ChannelRealization apply_csi_error(const ChannelRealization& ch, double delta, double rho_f,
                                   double rho_g, int n_groups, Rng& rng) {
  if (delta < 0.0) throw DomainError("apply_csi_error: delta must be non-negative");
  ChannelRealization est;
  est.f = ch.f;
  est.g = ch.g;
  if (delta > 0.0) {
    for (Eigen::Index i = 0; i < est.f.size(); ++i) est.f(i) += rng.complex_normal(delta * delta * rho_f);
    for (Eigen::Index i = 0; i < est.g.size(); ++i) est.g(i) += rng.complex_normal(delta * delta * rho_g);
  }
  est.theta = align_phases(est.f, est.g);
  auto [h, p] = derive_groups(est.f, est.g, est.theta, n_groups);
  est.h = std::move(h);
  est.p = std::move(p);
  return est;
}

namespace {

struct TaskResult {
  long long errors = 0;
  long long frames = 0;
  bool failed = false;
};

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = next++; i < count; i = next++) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

TaskResult run_siso_task(const SystemConfig& cfg, const SweepSpec& sweep, const SchemeSpec& scheme,
                         const Constellation& constellation, int point, int c, long long frames) {
  TaskResult res;
  const ChannelRealization ch = sweep_channel(cfg, sweep.master_seed, c);
  const int L = cfg.n_groups;

  // Detector-side channel and the gains the RIS actually produces.
  ChannelRealization est = ch;
  CVec true_gains = ch.h.cast<cplx>();
  if (sweep.csi_delta > 0.0) {
    Rng csi(sweep.master_seed, {StreamPurpose::kCsiError, 0, static_cast<std::uint32_t>(c), 0});
    est = apply_csi_error(ch, sweep.csi_delta, cfg.rho1(), cfg.rho2(), L, csi);
    true_gains = effective_group_gains(ch.f, ch.g, est.theta, L);
  }

  IndexAlphabet tx;
  IndexAlphabet rx;
  if (scheme.kind == SchemeKind::kAdrm) {
    AapCodebook cb;
    if (scheme.fixed_codebook) {
      cb = *scheme.fixed_codebook;
    } else {
      try {
        cb = design_codebook_sca(ch.h, ch.p, constellation, cfg, scheme.sca).codebook;
      } catch (const NumericalError&) {
        res.failed = true;
        return res;
      }
    }
    tx = adrm_alphabet(true_gains, cb);
    rx = adrm_alphabet(est.h, cb);
  } else {
    const double alpha = scheme_alpha(scheme.baseline, est.p, cfg);
    tx = baseline_alphabet(scheme.baseline, true_gains, alpha);
    rx = baseline_alphabet(scheme.baseline, est.h.cast<cplx>(), alpha);
  }

  const MlDetector det(rx, constellation, cfg.p_ap);
  const CVec ris_weights = sweep.noise_mode == NoiseMode::kPhysical ? ris_noise_weights(ch.g, est.theta) : CVec();
  const int ib = log2_exact(tx.size());
  const int r = log2_exact(constellation.size()) + ib;
  const double amp = std::sqrt(cfg.p_ap);
  for (long long t = 0; t < frames; ++t) {
    Rng rng(sweep.master_seed, {StreamPurpose::kTrial, static_cast<std::uint32_t>(point),
                                static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(t)});
    const std::uint32_t word = rng.below(1u << r);
    const int sym = static_cast<int>(word >> ib);
    const int k = static_cast<int>(word & ((1u << ib) - 1u));
    const RVec& amps = tx.amplitudes[k];
    const NoiseDraw nd = sweep.noise_mode == NoiseMode::kClt
                             ? draw_noise(amps, cfg, rng)
                             : draw_noise_physical(amps, ris_weights, cfg, rng);
    const cplx y = amp * tx.gains[k] * constellation.points[sym] + nd.w;
    const Detection d = det.detect(y);
    const std::uint32_t got = (static_cast<std::uint32_t>(d.sym) << ib) | static_cast<std::uint32_t>(d.aap);
    res.errors += std::popcount(word ^ got);
  }
  res.frames = frames;
  return res;
}

TaskResult run_mimo_task(const SystemConfig& cfg, const SweepSpec& sweep, const SchemeSpec& scheme,
                         const Constellation& constellation, int point, int c, long long frames) {
  TaskResult res;
  Rng chr(sweep.master_seed, {StreamPurpose::kChannel, 1, static_cast<std::uint32_t>(c), 0});
  const MimoChannels ch = gen_mimo_channels(cfg, chr, scheme.correlation);
  const PhaseSolution phases = mbcd_phases(ch.h, ch.f, ch.g, scheme.mbcd_iterations);
  AapCodebook cb;
  if (scheme.fixed_codebook) {
    cb = *scheme.fixed_codebook;
  } else {
    const MimoEquivalent eq = mimo_equivalent(ch, phases.phi0, cfg.n_groups);
    try {
      cb = design_codebook_sca(eq.h, eq.p, constellation, cfg, scheme.sca).codebook;
    } catch (const NumericalError&) {
      res.failed = true;
      return res;
    }
  }
  const MimoDetector det(ch, phases.phi0, cb, constellation, cfg);
  const int r = mimo_rate(cfg.nt, cfg.mod_order, cfg.codebook_order);
  for (long long t = 0; t < frames; ++t) {
    Rng rng(sweep.master_seed, {StreamPurpose::kTrial, static_cast<std::uint32_t>(point),
                                static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(t)});
    const std::uint32_t word = rng.below(1u << r);
    const MimoFrame fr = mimo_frame_from_word(word, cfg.nt, cfg.mod_order, cfg.codebook_order);
    const CVec y = mimo_transceive(fr, ch, phases, cb, constellation, cfg, rng, scheme.forward_ris_noise);
    res.errors += std::popcount(word ^ det.detect(y).word);
  }
  res.frames = frames;
  return res;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_metadata(const SystemConfig& cfg,
                                                                  const SweepSpec& sweep,
                                                                  const SchemeSpec& scheme) {
  std::vector<std::pair<std::string, std::string>> md;
  md.emplace_back("version", version_string());
  md.emplace_back("scheme", scheme.name());
  md.emplace_back("rate_bpcu", std::to_string(scheme.rate(cfg)));
  md.emplace_back("n_elements", std::to_string(cfg.n_elements));
  md.emplace_back("n_groups", std::to_string(cfg.n_groups));
  md.emplace_back("codebook_order", std::to_string(cfg.codebook_order));
  md.emplace_back("mod_order", std::to_string(cfg.mod_order));
  md.emplace_back("p_a", num(cfg.p_a));
  md.emplace_back("alpha_max", num(cfg.alpha_max));
  md.emplace_back("sigma_r_sq", num(cfg.sigma_r_sq));
  md.emplace_back("sigma_0_sq", num(cfg.sigma_0_sq));
  md.emplace_back("d0", num(cfg.d0));
  md.emplace_back("d1", num(cfg.d1));
  md.emplace_back("d2", num(cfg.d2));
  md.emplace_back("k0", num(cfg.k0));
  md.emplace_back("k1", num(cfg.k1));
  md.emplace_back("k2", num(cfg.k2));
  md.emplace_back("v0", num(cfg.v0));
  md.emplace_back("v1", num(cfg.v1));
  md.emplace_back("v2", num(cfg.v2));
  md.emplace_back("rho_r", num(cfg.rho_r));
  md.emplace_back("lambda", num(cfg.lambda));
  md.emplace_back("nt", std::to_string(cfg.nt));
  md.emplace_back("nr", std::to_string(cfg.nr));
  md.emplace_back("p_ap", num(cfg.p_ap));
  std::string grid;
  for (double w : sweep.p_ap_grid) grid += (grid.empty() ? "" : " ") + num(w);
  md.emplace_back("p_ap_grid_w", grid);
  md.emplace_back("seed", std::to_string(sweep.master_seed));
  md.emplace_back("bits_per_point", std::to_string(sweep.bits_per_point));
  md.emplace_back("channels_per_point", std::to_string(sweep.channels_per_point));
  md.emplace_back("csi_delta", num(sweep.csi_delta));
  md.emplace_back("noise_mode", sweep.noise_mode == NoiseMode::kClt ? "clt" : "physical");
  md.emplace_back("uniform_alpha_noise_term", "L*sigma_r_sq");
  if (scheme.kind == SchemeKind::kAdrm) {
    md.emplace_back("codebook", scheme.fixed_codebook ? "fixed" : "sca-per-channel");
    md.emplace_back("sca_max_iterations", std::to_string(scheme.sca.max_iterations));
    md.emplace_back("sca_rel_tol", num(scheme.sca.rel_tol));
    md.emplace_back("sca_epsilon", num(scheme.sca.epsilon));
  } else {
    md.emplace_back("baseline_index_bits", std::to_string(scheme.baseline.index_bits));
    md.emplace_back("baseline_active_groups", std::to_string(scheme.baseline.active_groups));
    md.emplace_back("baseline_note",
                    "pdrm offsets in {0,pi}, srpm offsets 2*pi*k/(A*s) with s the QAM rotation order, uniform gain alpha*");
  }
  if (scheme.mimo) {
    md.emplace_back("correlation", num(scheme.correlation));
    md.emplace_back("mbcd_iterations", std::to_string(scheme.mbcd_iterations));
    md.emplace_back("forward_ris_noise", scheme.forward_ris_noise ? "true" : "false");
  }
  return md;
}

BerCurve run_ber_sweep(const SystemConfig& cfg, const SweepSpec& sweep, const SchemeSpec& scheme) {
  cfg.validate();
  sweep.validate();
  if (scheme.kind != SchemeKind::kAdrm) {
    if (scheme.mimo) throw ConfigError("baseline schemes are SISO only");
    if (scheme.baseline.groups != cfg.n_groups || scheme.baseline.mod_order != cfg.mod_order) {
      throw ConfigError("baseline groups/mod_order must match the system configuration");
    }
    check_rate(scheme.baseline, adrm::rate(cfg.mod_order, cfg.codebook_order));
  }
  if (scheme.mimo && sweep.csi_delta > 0.0) throw ConfigError("CSI error is supported for SISO runs only");
  if (!scheme.mimo && (cfg.nt != 1 || cfg.nr != 1)) {
    throw ConfigError("SISO schemes need nt = nr = 1; use adrm-mimo for multi-antenna runs");
  }
  if (scheme.fixed_codebook && (scheme.fixed_codebook->groups() != cfg.n_groups ||
                                scheme.fixed_codebook->order() != cfg.codebook_order)) {
    throw ConfigError("fixed codebook shape does not match n_groups x codebook_order");
  }

  const Constellation constellation = Constellation::qam(cfg.mod_order);
  const int r = scheme.rate(cfg);
  const long long total_frames = (sweep.bits_per_point + r - 1) / r;
  const int channels = sweep.channels_per_point;
  const long long per_channel = (total_frames + channels - 1) / channels;
  const int n_points = static_cast<int>(sweep.p_ap_grid.size());

  std::vector<TaskResult> results(static_cast<std::size_t>(n_points) * channels);
  parallel_for(static_cast<int>(results.size()), sweep.workers, [&](int task) {
    const int point = task / channels;
    const int c = task % channels;
    SystemConfig cp = cfg;
    cp.p_ap = sweep.p_ap_grid[point];
    results[task] = scheme.mimo ? run_mimo_task(cp, sweep, scheme, constellation, point, c, per_channel)
                                : run_siso_task(cp, sweep, scheme, constellation, point, c, per_channel);
  });

  BerCurve curve;
  curve.metadata = config_metadata(cfg, sweep, scheme);
  for (int point = 0; point < n_points; ++point) {
    BerPoint bp;
    bp.p_ap = sweep.p_ap_grid[point];
    for (int c = 0; c < channels; ++c) {
      const TaskResult& tr = results[static_cast<std::size_t>(point) * channels + c];
      bp.errors += tr.errors;
      bp.frames += tr.frames;
      bp.failed_designs += tr.failed ? 1 : 0;
    }
    bp.bits = bp.frames * r;
    bp.low_confidence = bp.errors < sweep.min_errors;
    curve.points.push_back(bp);
  }
  return curve;
}

TheoryCurve run_theory_sweep(const SystemConfig& cfg, const SweepSpec& sweep,
                             const SchemeSpec& scheme, const TheoryOptions& opts) {
  cfg.validate();
  sweep.validate();
  if (scheme.kind != SchemeKind::kAdrm || scheme.mimo) {
    throw ConfigError("theory curves are available for SISO ADRM only");
  }
  if (opts.mi_samples < 1 || opts.mi_channels < 1) throw ConfigError("MI sample counts must be positive");
  const Constellation constellation = Constellation::qam(cfg.mod_order);
  const int n_points = static_cast<int>(sweep.p_ap_grid.size());

  std::vector<TheoryPoint> pts(n_points);
  parallel_for(n_points, sweep.workers, [&](int point) {
    SystemConfig cp = cfg;
    cp.p_ap = sweep.p_ap_grid[point];
    const HStatistics stats = h_statistics(cp);
    TheoryPoint tp;
    tp.p_ap = cp.p_ap;
    double mi = 0.0;
    double mi_var = 0.0;
    for (int c = 0; c < opts.mi_channels; ++c) {
      const ChannelRealization ch = sweep_channel(cp, sweep.master_seed, c);
      const AapCodebook cb = scheme.fixed_codebook
                                 ? *scheme.fixed_codebook
                                 : design_codebook_sca(ch.h, ch.p, constellation, cp, scheme.sca).codebook;
      if (c == 0) {
        tp.abep_raw = abep_bound(cb, constellation, cp, stats);
        tp.abep_bound = std::min(1.0, tp.abep_raw);
        tp.abep_exact = abep_bound(cb, constellation, cp, stats, MgfForm::kExact);
      }
      const MiEstimate est = mi_estimate(ch.h, cb, constellation, cp, opts.mi_samples,
                                         sweep.master_seed, static_cast<std::uint32_t>(c));
      mi += est.bits;
      mi_var += est.std_error * est.std_error;
    }
    tp.mi = mi / opts.mi_channels;
    tp.mi_std_error = std::sqrt(mi_var) / opts.mi_channels;
    pts[point] = tp;
  });

  TheoryCurve curve;
  curve.metadata = config_metadata(cfg, sweep, scheme);
  curve.metadata.emplace_back("mi_samples", std::to_string(opts.mi_samples));
  curve.metadata.emplace_back("mi_channels", std::to_string(opts.mi_channels));
  curve.metadata.emplace_back("abep_reporting", "clipped at 1");
  curve.points = std::move(pts);
  return curve;
}

namespace {

void write_metadata(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& md) {
  for (const auto& [k, v] : md) os << "# " << k << " = " << v << '\n';
}

}  // namespace

void write_ber_csv(std::ostream& os, const BerCurve& curve) {
  write_metadata(os, curve.metadata);
  os << "p_ap_dBm,ber,errors,trials,stderr,flag\n";
  for (const auto& p : curve.points) {
    std::string flag = "ok";
    if (p.failed_designs > 0) {
      flag = "design_failed_" + std::to_string(p.failed_designs);
    } else if (p.low_confidence) {
      flag = "low_confidence";
    }
    os << num(watt_to_dbm(p.p_ap)) << ',' << num(p.ber()) << ',' << p.errors << ',' << p.frames << ','
       << num(p.std_error()) << ',' << flag << '\n';
  }
}

void write_theory_csv(std::ostream& os, const TheoryCurve& curve) {
  write_metadata(os, curve.metadata);
  os << "p_ap_dBm,abep_bound,abep_raw,mi,mi_stderr,abep_exact\n";
  for (const auto& p : curve.points) {
    os << num(watt_to_dbm(p.p_ap)) << ',' << num(p.abep_bound) << ',' << num(p.abep_raw) << ','
       << num(p.mi) << ',' << num(p.mi_std_error) << ',' << num(p.abep_exact) << '\n';
  }
}

}  // namespace adrm
