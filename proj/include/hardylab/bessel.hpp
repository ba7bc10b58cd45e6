#pragma once

#include <vector>

namespace hardylab::spectral {

// J_nu(x) for 0 <= nu <= 2, 0 < x <= 60: power series for small x, normalized Miller recurrence otherwise.
double bessel_j(double nu, double x);

// First `count` positive zeros, bracketed by a sign scan on (0, 60] and bisected.
std::vector<double> bessel_zeros(double nu, int count);

}  // namespace hardylab::spectral
