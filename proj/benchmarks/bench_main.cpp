#include <benchmark/benchmark.h>

#include "adrm/channel.hpp"
#include "adrm/codebook.hpp"
#include "adrm/engine.hpp"
#include "adrm/mimo.hpp"
#include "adrm/modem.hpp"
#include "adrm/rng.hpp"

using namespace adrm;

static void BM_RngComplexNormal(benchmark::State& state) {
  Rng rng(1);
  cplx acc{};
  for (auto _ : state) acc += rng.complex_normal(1.0);
  benchmark::DoNotOptimize(acc);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RngComplexNormal);

static void BM_RngStreamSetup(benchmark::State& state) {
  std::uint32_t t = 0;
  for (auto _ : state) {
    Rng rng(7, {StreamPurpose::kTrial, 0, 0, t++});
    benchmark::DoNotOptimize(rng.below(16));
  }
}
BENCHMARK(BM_RngStreamSetup);

static void BM_DrawChannel(benchmark::State& state) {
  SystemConfig cfg;
  cfg.n_elements = static_cast<int>(state.range(0));
  Rng rng(2);
  for (auto _ : state) benchmark::DoNotOptimize(draw_channel(cfg, rng));
}
BENCHMARK(BM_DrawChannel)->Arg(64)->Arg(128)->Arg(256);

static void BM_ScaDesign(benchmark::State& state) {
  SystemConfig cfg;
  cfg.codebook_order = static_cast<int>(state.range(0));
  cfg.p_ap = 1e-4;
  const ChannelRealization ch = sweep_channel(cfg, 1, 0);
  const Constellation con = Constellation::qam(cfg.mod_order);
  for (auto _ : state) benchmark::DoNotOptimize(design_codebook_sca(ch.h, ch.p, con, cfg));
}
BENCHMARK(BM_ScaDesign)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_SisoDetect(benchmark::State& state) {
  SystemConfig cfg;
  cfg.codebook_order = static_cast<int>(state.range(0));
  cfg.p_ap = 1e-4;
  const ChannelRealization ch = sweep_channel(cfg, 1, 0);
  const Constellation con = Constellation::qam(cfg.mod_order);
  const AapCodebook cb = design_codebook_sca(ch.h, ch.p, con, cfg).codebook;
  const IndexAlphabet alpha = adrm_alphabet(ch.h, cb);
  const MlDetector det(alpha, con, cfg.p_ap);
  Rng rng(3);
  for (auto _ : state) {
    const cplx y = std::sqrt(cfg.p_ap) * alpha.gains[1] * con.points[2] + rng.complex_normal(1e-9);
    benchmark::DoNotOptimize(det.detect(y));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SisoDetect)->Arg(4)->Arg(16);

static void BM_Mbcd(benchmark::State& state) {
  SystemConfig cfg;
  cfg.n_elements = static_cast<int>(state.range(0));
  cfg.nt = cfg.nr = 2;
  Rng rng(4);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mbcd_phases(ch.h, ch.f, ch.g, 20));
}
BENCHMARK(BM_Mbcd)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_MimoDetect(benchmark::State& state) {
  SystemConfig cfg;
  cfg.n_elements = 64;
  cfg.codebook_order = 2;
  cfg.nt = 2;
  cfg.nr = static_cast<int>(state.range(0));
  cfg.p_ap = 1e-2;
  Rng rng(5);
  const MimoChannels ch = gen_mimo_channels(cfg, rng);
  const PhaseSolution ph = mbcd_phases(ch.h, ch.f, ch.g, 20);
  const Constellation con = Constellation::qam(cfg.mod_order);
  const MimoEquivalent eq = mimo_equivalent(ch, ph.phi0, cfg.n_groups);
  const AapCodebook cb = design_codebook_sca(eq.h, eq.p, con, cfg).codebook;
  const MimoDetector det(ch, ph.phi0, cb, con, cfg);
  const MimoFrame fr = mimo_frame_from_word(13, cfg.nt, cfg.mod_order, cfg.codebook_order);
  const CVec y = mimo_transceive(fr, ch, ph, cb, con, cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(det.detect(y));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MimoDetect)->Arg(2)->Arg(4);
BENCHMARK_MAIN();
