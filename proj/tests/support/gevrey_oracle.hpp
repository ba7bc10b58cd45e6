#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <algorithm>
#include <vector>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;

// psi^{(k)}(tau) from Taylor arithmetic in 50 digits: psi = exp(c - g^{-2}), g = tau (T - tau) quadratic.
inline std::vector<double> recurrence_derivatives(double T, double tau, int k_max) {
  const int n = k_max + 1;
  const mp t(tau), TT(T);
  std::vector<mp> g(n, mp(0)), inv(n), p(n, mp(0)), phi(n), e(n);
  g[0] = t * (TT - t);
  if (n > 1) g[1] = TT - 2 * t;
  if (n > 2) g[2] = -1;
  inv[0] = 1 / g[0];
  for (int m = 1; m < n; ++m) {
    mp acc = 0;
    for (int j = 1; j <= std::min(m, 2); ++j) acc += g[j] * inv[m - j];
    inv[m] = -acc / g[0];
  }
  for (int m = 0; m < n; ++m)
    for (int j = 0; j <= m; ++j) p[m] += inv[j] * inv[m - j];
  const mp c = pow(mp(4) / (TT * TT), 2);
  for (int m = 0; m < n; ++m) phi[m] = (m == 0 ? c : mp(0)) - p[m];
  e[0] = exp(phi[0]);
  for (int m = 1; m < n; ++m) {
    mp acc = 0;
    for (int j = 1; j <= m; ++j) acc += j * phi[j] * e[m - j];
    e[m] = acc / m;
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  mp fact = 1;
  for (int m = 0; m < n; ++m) {
    if (m > 0) fact *= m;
    out[static_cast<std::size_t>(m)] = static_cast<double>(e[m] * fact);
  }
  return out;
}

}  // namespace oracle
