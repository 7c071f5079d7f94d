#include "adrm/config.hpp"

#include "adrm/channel.hpp"

namespace adrm {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

void SystemConfig::validate() const {
  require(n_elements > 0, "n_elements must be positive");
  require(n_groups > 0, "n_groups must be positive");
  require(n_elements % n_groups == 0,
          "n_elements (" + std::to_string(n_elements) + ") must be divisible by n_groups (" +
              std::to_string(n_groups) + ")");
  require(is_power_of_two(codebook_order), "codebook_order must be a power of two");
  require(is_power_of_two(mod_order), "mod_order must be a power of two");
  require(p_ap > 0 && p_a > 0, "p_ap and p_a must be positive");
  require(sigma_r_sq >= 0 && sigma_0_sq >= 0, "noise powers must be non-negative");
  require(alpha_max > 1.0, "alpha_max must exceed 1");
  require(d0 > 0 && d1 > 0 && d2 > 0, "distances must be positive");
  require(k0 >= 0 && k1 >= 0 && k2 >= 0, "Rician factors must be non-negative");
  require(v0 > 0 && v1 > 0 && v2 > 0, "path-loss exponents must be positive");
  require(rho_r > 0, "rho_r must be positive");
  require(lambda > 0, "lambda must be positive");
  require(nt >= 1 && nr >= 1, "antenna counts must be at least 1");
}

double SystemConfig::rho0() const { return path_loss(d0, v0, rho_r); }
double SystemConfig::rho1() const { return path_loss(d1, v1, rho_r); }
double SystemConfig::rho2() const { return path_loss(d2, v2, rho_r); }

}  // namespace adrm
