#include "adrm/special.hpp"

#include <cmath>

namespace adrm {

namespace {

constexpr double kSeriesTol = 1e-12;

// sum_k (x^2/4)^k / (k! (k+order)!) scaled by (x/2)^order
double bessel_series(double x, int order) {
  const double q = 0.25 * x * x;
  double term = (order == 0) ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
    sum += term;
    if (term <= kSeriesTol * sum) break;
  }
  return sum;
}

}  // namespace

double bessel_i0(double x) { return bessel_series(std::fabs(x), 0); }

double bessel_i1(double x) {
  const double v = bessel_series(std::fabs(x), 1);
  return x < 0 ? -v : v;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace adrm
