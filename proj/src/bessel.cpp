#include "hardylab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab::spectral {

namespace {

double series(double nu, double x) {
  const double q = -0.25 * x * x;
  double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
  double sum = term;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * (static_cast<double>(m) + nu));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Backward recurrence from a large order, normalized through
// (x/2)^nu / Gamma(nu+1) = sum_k d_k J_{nu+2k}(x).
double miller(double nu, double x) {
  int top = static_cast<int>(x + 50.0 + 5.0 * std::sqrt(x));
  if (top % 2) ++top;

  // d_0 = 1, d_k = (nu+2k) prod_{j<k}(nu+j) / k!
  std::vector<double> d(static_cast<std::size_t>(top / 2 + 1));
  d[0] = 1.0;
  double ratio = 1.0;  // prod_{j=1}^{k-1}(nu+j) / k!
  for (int k = 1; k <= top / 2; ++k) {
    ratio *= (k == 1 ? 1.0 : (nu + k - 1.0)) / static_cast<double>(k);
    d[static_cast<std::size_t>(k)] = (nu + 2.0 * k) * ratio;
  }

  double above = 0.0;  // J_{nu+n+1}
  double here = 1e-30; // J_{nu+n}
  double sum = 0.0;
  for (int n = top; n >= 0; --n) {
    if (n % 2 == 0) sum += d[static_cast<std::size_t>(n / 2)] * here;
    if (n == 0) break;
    const double below = 2.0 * (nu + n) / x * here - above;
    above = here;
    here = below;
    if (std::abs(here) > 1e200) {
      above *= 1e-200;
      here *= 1e-200;
      sum *= 1e-200;
    }
  }
  return here * std::pow(0.5 * x, nu) / (std::tgamma(nu + 1.0) * sum);
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!(nu >= 0.0 && nu <= 2.0)) throw std::invalid_argument("bessel_j: order must lie in [0, 2]");
  if (!(x > 0.0 && x <= 60.0)) throw std::invalid_argument("bessel_j: argument must lie in (0, 60]");
  return x < 4.0 ? series(nu, x) : miller(nu, x);
}

std::vector<double> bessel_zeros(double nu, int count) {
  if (count < 0) throw std::invalid_argument("bessel_zeros: negative count");
  std::vector<double> zeros;
  const double dx = 0.05;
  double a = dx;
  double fa = bessel_j(nu, a);
  while (static_cast<int>(zeros.size()) < count) {
    const double b = a + dx;
    if (b > 60.0 + 1e-12) throw std::invalid_argument("bessel_zeros: requested zero lies beyond the bracketing range x <= 60");
    const double fb = bessel_j(nu, b);
    if (fb == 0.0) {
      zeros.push_back(b);
    } else if (std::signbit(fa) != std::signbit(fb)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = bessel_j(nu, mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (std::signbit(fm) == std::signbit(flo)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      zeros.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace hardylab::spectral
