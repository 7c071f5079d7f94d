#pragma once

namespace adrm {

/// Modified Bessel function of the first kind, order 0, by its ascending
/// power series (relative truncation 1e-12). Intended for x in [0, 25].
double bessel_i0(double x);

/// Modified Bessel function of the first kind, order 1. Same series approach.
double bessel_i1(double x);

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double q_function(double x);

}  // namespace adrm
