#include "adrm/run_config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace adrm {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_count(const std::string& text) {
  const double v = parse_number(text);
  if (v != std::floor(v) || std::fabs(v) > 9e15) throw ConfigError("expected an integer, got '" + text + "'");
  return static_cast<long long>(v);
}

int parse_int(const std::string& text) {
  const long long v = parse_count(text);
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError("integer out of range: '" + text + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "yes" || t == "on" || t == "1") return true;
  if (t == "false" || t == "no" || t == "off" || t == "0") return false;
  throw ConfigError("expected a boolean, got '" + text + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

double parse_quantity(const std::string& text) {
  const std::string t = trim(text);
  const std::string l = lower(t);
  if (ends_with(l, "dbm")) return dbm_to_watt(parse_number(t.substr(0, t.size() - 3)));
  if (ends_with(l, "db")) return db_to_linear(parse_number(t.substr(0, t.size() - 2)));
  if (ends_with(l, "w") && !ends_with(l, "dbw")) return parse_number(t.substr(0, t.size() - 1));
  return parse_number(t);
}

std::vector<double> parse_power_grid(const std::string& text) {
  std::string body = trim(text);
  std::string unit;
  const std::string l = lower(body);
  if (body.find(':') != std::string::npos) {
    for (const char* u : {"dbm", "db", "w"}) {
      if (ends_with(l, u)) {
        unit = body.substr(body.size() - std::char_traits<char>::length(u));
        body = trim(body.substr(0, body.size() - unit.size()));
        break;
      }
    }
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw ConfigError("power range must be start:step:stop, got '" + text + "'");
    const double a = parse_number(parts[0]);
    const double step = parse_number(parts[1]);
    const double b = parse_number(parts[2]);
    if (!(step > 0.0) || b < a) throw ConfigError("power range needs step > 0 and stop >= start");
    std::vector<double> out;
    const int n = static_cast<int>(std::floor((b - a) / step + 1e-9)) + 1;
    for (int i = 0; i < n; ++i) {
      const double v = a + step * i;
      const std::string u = lower(unit);
      out.push_back(u == "dbm" ? dbm_to_watt(v) : u == "db" ? db_to_linear(v) : v);
    }
    return out;
  }
  std::vector<std::string> items;
  for (const auto& item : split(body, ',')) {
    if (!trim(item).empty()) items.push_back(trim(item));
  }
  if (items.empty()) throw ConfigError("empty power grid");
  const auto suffix = [](const std::string& item) -> std::string {
    const std::string li = lower(item);
    for (const char* u : {"dbm", "db", "w"}) {
      if (ends_with(li, u)) return item.substr(item.size() - std::char_traits<char>::length(u));
    }
    return {};
  };
  const std::string trailing = suffix(items.back());
  std::vector<double> out;
  for (const auto& item : items) {
    out.push_back(parse_quantity(suffix(item).empty() ? item + " " + trailing : item));
  }
  return out;
}

void RunConfig::validate() const {
  system.validate();
  sweep.validate();
  if (scheme.kind != SchemeKind::kAdrm) {
    if (im_active_groups > system.n_groups) {
      throw ConfigError("im_active_groups (" + std::to_string(im_active_groups) +
                        ") cannot exceed n_groups (" + std::to_string(system.n_groups) + ")");
    }
    check_rate(scheme.baseline, rate(system.mod_order, system.codebook_order));
  }
  if (scheme.mimo && scheme.kind != SchemeKind::kAdrm) throw ConfigError("MIMO runs support adrm only");
  if (!scheme.mimo && (system.nt != 1 || system.nr != 1)) {
    throw ConfigError("nt/nr other than 1 require scheme name = adrm-mimo");
  }
  if (scheme.mimo && !(scheme.correlation >= 0.0 && scheme.correlation < 1.0)) {
    throw ConfigError("correlation must lie in [0, 1)");
  }
  if (scheme.mbcd_iterations < 0) throw ConfigError("mbcd_iterations must be non-negative");
  if (scheme.sca.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
  if (!(scheme.sca.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (theory.mi_samples < 1 || theory.mi_channels < 1) throw ConfigError("MI sample counts must be positive");
}

BaselineScheme RunConfig::baseline(SchemeKind kind) const {
  BaselineScheme b;
  b.kind = kind;
  b.groups = system.n_groups;
  b.mod_order = system.mod_order;
  b.active_groups = im_active_groups;
  b.index_bits = kind == SchemeKind::kSrpm ? srpm_index_bits : pdrm_index_bits;
  return b;
}

RunConfig parse_run_config(std::istream& is, const std::string& source) {
  RunConfig rc;
  SystemConfig& s = rc.system;
  std::string scheme_name = "adrm";

  using Setter = std::function<void(const std::string&)>;
  std::map<std::string, std::map<std::string, Setter>> keys;
  auto& sys = keys["system"];
  sys["n_elements"] = [&](const std::string& v) { s.n_elements = parse_int(v); };
  sys["n_groups"] = [&](const std::string& v) { s.n_groups = parse_int(v); };
  sys["codebook_order"] = [&](const std::string& v) { s.codebook_order = parse_int(v); };
  sys["mod_order"] = [&](const std::string& v) { s.mod_order = parse_int(v); };
  sys["p_ap"] = [&](const std::string& v) { s.p_ap = parse_quantity(v); };
  sys["p_a"] = [&](const std::string& v) { s.p_a = parse_quantity(v); };
  sys["alpha_max"] = [&](const std::string& v) { s.alpha_max = parse_quantity(v); };
  sys["sigma_r_sq"] = [&](const std::string& v) { s.sigma_r_sq = parse_quantity(v); };
  sys["sigma_0_sq"] = [&](const std::string& v) { s.sigma_0_sq = parse_quantity(v); };
  sys["d0"] = [&](const std::string& v) { s.d0 = parse_quantity(v); };
  sys["d1"] = [&](const std::string& v) { s.d1 = parse_quantity(v); };
  sys["d2"] = [&](const std::string& v) { s.d2 = parse_quantity(v); };
  sys["k0"] = [&](const std::string& v) { s.k0 = parse_quantity(v); };
  sys["k1"] = [&](const std::string& v) { s.k1 = parse_quantity(v); };
  sys["k2"] = [&](const std::string& v) { s.k2 = parse_quantity(v); };
  sys["v0"] = [&](const std::string& v) { s.v0 = parse_quantity(v); };
  sys["v1"] = [&](const std::string& v) { s.v1 = parse_quantity(v); };
  sys["v2"] = [&](const std::string& v) { s.v2 = parse_quantity(v); };
  sys["rho_r"] = [&](const std::string& v) { s.rho_r = parse_quantity(v); };
  sys["lambda"] = [&](const std::string& v) { s.lambda = parse_quantity(v); };
  sys["nt"] = [&](const std::string& v) { s.nt = parse_int(v); };
  sys["nr"] = [&](const std::string& v) { s.nr = parse_int(v); };

  auto& sw = keys["sweep"];
  sw["p_ap"] = [&](const std::string& v) { rc.sweep.p_ap_grid = parse_power_grid(v); };
  sw["p_ap_dbm"] = [&](const std::string& v) {
    const std::string l = lower(trim(v));
    if (ends_with(l, "dbm")) {
      rc.sweep.p_ap_grid = parse_power_grid(v);
    } else if (l.find(':') != std::string::npos) {
      rc.sweep.p_ap_grid = parse_power_grid(v + " dBm");
    } else {
      rc.sweep.p_ap_grid.clear();
      for (const auto& item : split(v, ',')) rc.sweep.p_ap_grid.push_back(dbm_to_watt(parse_number(item)));
    }
  };
  sw["bits_per_point"] = [&](const std::string& v) { rc.sweep.bits_per_point = parse_count(v); };
  sw["channels_per_point"] = [&](const std::string& v) { rc.sweep.channels_per_point = parse_int(v); };
  sw["seed"] = [&](const std::string& v) { rc.sweep.master_seed = static_cast<std::uint64_t>(parse_count(v)); };
  sw["csi_delta"] = [&](const std::string& v) { rc.sweep.csi_delta = parse_number(v); };
  sw["workers"] = [&](const std::string& v) { rc.sweep.workers = parse_int(v); };
  sw["min_errors"] = [&](const std::string& v) { rc.sweep.min_errors = parse_count(v); };
  sw["noise_mode"] = [&](const std::string& v) {
    const std::string t = lower(trim(v));
    if (t == "clt") {
      rc.sweep.noise_mode = NoiseMode::kClt;
    } else if (t == "physical") {
      rc.sweep.noise_mode = NoiseMode::kPhysical;
    } else {
      throw ConfigError("noise_mode must be clt or physical");
    }
  };

  auto& sc = keys["scheme"];
  sc["name"] = [&](const std::string& v) { scheme_name = lower(trim(v)); };
  sc["pdrm_index_bits"] = [&](const std::string& v) { rc.pdrm_index_bits = parse_int(v); };
  sc["im_active_groups"] = [&](const std::string& v) { rc.im_active_groups = parse_int(v); };
  sc["srpm_index_bits"] = [&](const std::string& v) { rc.srpm_index_bits = parse_int(v); };
  sc["correlation"] = [&](const std::string& v) { rc.scheme.correlation = parse_number(v); };
  sc["mbcd_iterations"] = [&](const std::string& v) { rc.scheme.mbcd_iterations = parse_int(v); };
  sc["forward_ris_noise"] = [&](const std::string& v) { rc.scheme.forward_ris_noise = parse_bool(v); };

  auto& de = keys["design"];
  de["max_iterations"] = [&](const std::string& v) { rc.scheme.sca.max_iterations = parse_int(v); };
  de["rel_tol"] = [&](const std::string& v) { rc.scheme.sca.rel_tol = parse_number(v); };
  de["epsilon"] = [&](const std::string& v) { rc.scheme.sca.epsilon = parse_number(v); };
  de["start"] = [&](const std::string& v) {
    const std::string t = lower(trim(v));
    if (t == "staggered") {
      rc.scheme.sca.start = ScaStart::kStaggered;
    } else if (t == "uniform_max") {
      rc.scheme.sca.start = ScaStart::kUniformMax;
    } else {
      throw ConfigError("design start must be staggered or uniform_max");
    }
  };
  de["ga_population"] = [&](const std::string& v) { rc.ga.population = parse_int(v); };
  de["ga_generations"] = [&](const std::string& v) { rc.ga.generations = parse_int(v); };

  auto& th = keys["theory"];
  th["mi_samples"] = [&](const std::string& v) { rc.theory.mi_samples = parse_int(v); };
  th["mi_channels"] = [&](const std::string& v) { rc.theory.mi_channels = parse_int(v); };

  keys["output"]["path"] = [&](const std::string& v) { rc.output = trim(v); };

  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "malformed section header");
      section = lower(trim(line.substr(1, line.size() - 2)));
      if (!keys.count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    if (section.empty()) throw ConfigError(where + "key outside of any section");
    const std::string key = lower(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    const auto& table = keys[section];
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    try {
      it->second(value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }

  if (scheme_name == "adrm-mimo") {
    rc.scheme.kind = SchemeKind::kAdrm;
    rc.scheme.mimo = true;
  } else {
    rc.scheme.kind = parse_scheme(scheme_name);
  }
  if (rc.scheme.kind != SchemeKind::kAdrm) rc.scheme.baseline = rc.baseline(rc.scheme.kind);
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_run_config(in, path);
}

}  // namespace adrm
