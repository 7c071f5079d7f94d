#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adrm/analysis.hpp"
#include "adrm/codebook.hpp"
#include "adrm/engine.hpp"
#include "adrm/run_config.hpp"

namespace {

using adrm::RunConfig;

struct Options {
  std::string config;
  std::string out;
  std::string codebook;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

enum ExitCode { kOk = 0, kConfigFailure = 1, kNumericalFailure = 2 };

RunConfig load(const Options& opt) {
  RunConfig rc = opt.config.empty() ? RunConfig{} : adrm::load_run_config(opt.config);
  if (rc.sweep.p_ap_grid.empty()) rc.sweep.p_ap_grid = {rc.system.p_ap};
  if (opt.seed) rc.sweep.master_seed = *opt.seed;
  if (opt.workers) rc.sweep.workers = *opt.workers;
  if (!opt.codebook.empty()) {
    std::ifstream in(opt.codebook);
    if (!in) throw adrm::ConfigError("cannot open codebook file '" + opt.codebook + "'");
    rc.scheme.fixed_codebook = adrm::read_codebook(in);
    const auto& cb = *rc.scheme.fixed_codebook;
    if (cb.groups() != rc.system.n_groups || cb.order() != rc.system.codebook_order) {
      throw adrm::ConfigError("codebook file is " + std::to_string(cb.groups()) + "x" +
                              std::to_string(cb.order()) + ", config expects " +
                              std::to_string(rc.system.n_groups) + "x" +
                              std::to_string(rc.system.codebook_order));
    }
  }
  return rc;
}

// Writes to --out, then [output] path, then stdout.
class Sink {
 public:
  Sink(const Options& opt, const RunConfig& rc) {
    const std::string path = !opt.out.empty() ? opt.out : rc.output;
    if (path.empty()) return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw adrm::ConfigError("cannot write output file '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void add_source(std::vector<std::pair<std::string, std::string>>& md, const std::string& command,
                const Options& opt) {
  md.insert(md.begin() + 1, {"command", command});
  md.insert(md.begin() + 2, {"config_file", opt.config.empty() ? "<defaults>" : opt.config});
  if (!opt.codebook.empty()) md.insert(md.begin() + 3, {"codebook_file", opt.codebook});
}

int cmd_design(const Options& opt) {
  RunConfig rc = load(opt);
  rc.validate();
  const adrm::SystemConfig& cfg = rc.system;
  const adrm::ChannelRealization ch = adrm::sweep_channel(cfg, rc.sweep.master_seed, 0);
  const auto constellation = adrm::Constellation::qam(cfg.mod_order);
  const adrm::ScaResult res = adrm::design_codebook_sca(ch.h, ch.p, constellation, cfg, rc.scheme.sca);

  auto md = adrm::config_metadata(cfg, rc.sweep, rc.scheme);
  add_source(md, "design", opt);
  std::vector<std::string> comments;
  for (const auto& [k, v] : md) comments.push_back(k + " = " + v);
  comments.push_back("channel = 0");
  comments.push_back("sca_iterations = " + std::to_string(res.trace.iterations));
  comments.push_back(std::string("sca_converged = ") + (res.trace.converged ? "true" : "false"));
  std::ostringstream tau;
  tau.precision(17);
  for (std::size_t i = 0; i < res.trace.tau_per_iter.size(); ++i) {
    tau << (i ? " " : "") << res.trace.tau_per_iter[i] * res.trace.scale;
  }
  comments.push_back("min_distance_trace = " + tau.str());

  Sink sink(opt, rc);
  adrm::write_codebook(sink.stream(), res.codebook, comments);
  return kOk;
}

int cmd_ber(const Options& opt, const std::string& command, bool force_mimo) {
  RunConfig rc = load(opt);
  if (force_mimo) {
    rc.scheme.kind = adrm::SchemeKind::kAdrm;
    rc.scheme.mimo = true;
  }
  rc.validate();
  adrm::BerCurve curve = adrm::run_ber_sweep(rc.system, rc.sweep, rc.scheme);
  add_source(curve.metadata, command, opt);
  Sink sink(opt, rc);
  adrm::write_ber_csv(sink.stream(), curve);
  return kOk;
}

int cmd_theory(const Options& opt, bool mi_only) {
  RunConfig rc = load(opt);
  rc.validate();
  if (rc.scheme.kind != adrm::SchemeKind::kAdrm || rc.scheme.mimo) {
    throw adrm::ConfigError("theory and mi support the SISO adrm scheme only");
  }
  adrm::TheoryCurve curve = adrm::run_theory_sweep(rc.system, rc.sweep, rc.scheme, rc.theory);
  add_source(curve.metadata, mi_only ? "mi" : "theory", opt);
  Sink sink(opt, rc);
  std::ostream& os = sink.stream();
  if (!mi_only) {
    adrm::write_theory_csv(os, curve);
    return kOk;
  }
  for (const auto& [k, v] : curve.metadata) os << "# " << k << " = " << v << '\n';
  os << "p_ap_dBm,mi,mi_stderr,rate\n";
  os.precision(17);
  const int r = rc.scheme.rate(rc.system);
  for (const auto& p : curve.points) {
    os << adrm::watt_to_dbm(p.p_ap) << ',' << p.mi << ',' << p.mi_std_error << ',' << r << '\n';
  }
  return kOk;
}

int cmd_baseline_compare(const Options& opt) {
  RunConfig rc = load(opt);
  rc.scheme.kind = adrm::SchemeKind::kAdrm;
  rc.scheme.mimo = false;
  rc.validate();
  std::vector<adrm::SchemeSpec> schemes{rc.scheme};
  for (auto kind : {adrm::SchemeKind::kPdrm, adrm::SchemeKind::kIm, adrm::SchemeKind::kSrpm}) {
    adrm::SchemeSpec s = rc.scheme;
    s.kind = kind;
    s.baseline = rc.baseline(kind);
    s.fixed_codebook.reset();
    adrm::check_rate(s.baseline, rc.scheme.rate(rc.system));
    schemes.push_back(s);
  }

  Sink sink(opt, rc);
  std::ostream& os = sink.stream();
  auto md = adrm::config_metadata(rc.system, rc.sweep, rc.scheme);
  add_source(md, "baseline-compare", opt);
  md.emplace_back("pdrm_index_bits", std::to_string(rc.pdrm_index_bits));
  md.emplace_back("im_active_groups", std::to_string(rc.im_active_groups));
  md.emplace_back("srpm_index_bits", std::to_string(rc.srpm_index_bits));
  for (const auto& [k, v] : md) os << "# " << k << " = " << v << '\n';
  os << "scheme,p_ap_dBm,ber,errors,trials,stderr,flag\n";
  os.precision(17);
  for (const auto& s : schemes) {
    const adrm::BerCurve curve = adrm::run_ber_sweep(rc.system, rc.sweep, s);
    for (const auto& p : curve.points) {
      os << s.name() << ',' << adrm::watt_to_dbm(p.p_ap) << ',' << p.ber() << ',' << p.errors << ','
         << p.frames << ',' << p.std_error() << ','
         << (p.failed_designs > 0 ? "design_failed" : p.low_confidence ? "low_confidence" : "ok") << '\n';
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active RIS amplitude-domain reflection modulation simulator"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", adrm::version_string());

  Options opt;
  auto common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output path (default: [output] path, else stdout)");
    sub->add_option("--seed", opt.seed, "Master seed, overrides [sweep] seed");
    sub->add_option("--workers", opt.workers, "Worker threads, overrides [sweep] workers")
        ->check(CLI::PositiveNumber);
  };

  auto* design = app.add_subcommand("design", "Design an AAP codebook on channel 0 at [system] p_ap");
  auto* ber = app.add_subcommand("ber", "Monte-Carlo BER sweep of the configured scheme");
  auto* theory = app.add_subcommand("theory", "ABEP bound and mutual information on the sweep grid");
  auto* mi = app.add_subcommand("mi", "Mutual information on the sweep grid");
  auto* mimo = app.add_subcommand("mimo-ber", "Monte-Carlo BER sweep of ADRM-MIMO");
  auto* compare = app.add_subcommand("baseline-compare", "BER of ADRM, PDRM, IM and SRPM on one grid");
  for (auto* sub : {design, ber, theory, mi, mimo, compare}) common(sub);
  for (auto* sub : {ber, theory, mi}) {
    sub->add_option("--codebook", opt.codebook, "Use this codebook on every channel")
        ->check(CLI::ExistingFile);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigFailure;
  }

  try {
    if (*design) return cmd_design(opt);
    if (*ber) return cmd_ber(opt, "ber", false);
    if (*mimo) return cmd_ber(opt, "mimo-ber", true);
    if (*theory) return cmd_theory(opt, false);
    if (*mi) return cmd_theory(opt, true);
    if (*compare) return cmd_baseline_compare(opt);
  } catch (const adrm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const adrm::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const adrm::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}
