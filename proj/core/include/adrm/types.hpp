#pragma once

#include <cmath>

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace adrm {

using cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Invalid scenario or run configuration. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Numerical failure during codebook design or another solver. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

inline int log2_exact(long long v) {
  int b = 0;
  while ((1LL << b) < v) ++b;
  return b;
}

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace adrm
