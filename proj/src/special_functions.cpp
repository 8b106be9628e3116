#include "evb/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace evb {

namespace {

constexpr double kNegativeClamp = -1e-12;
constexpr double kRescaleAbove = 1e250;
constexpr double kSeriesMaxArg = 1e-3;

double checked_argument(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("bessel_j: non-finite argument");
  }
  if (x < 0.0) {
    if (x < kNegativeClamp) {
      throw DomainError("bessel_j: negative argument " + std::to_string(x));
    }
    return 0.0;
  }
  return x;
}

// Leading terms of the power series; only used for tiny x where three
// terms already reach machine precision.
double series_small(int n, double x) {
  const double half = 0.5 * x;
  const double q = half * half;
  // (x/2)^n / n! accumulated in log space to avoid overflow of n!
  const double lead =
      std::exp(n * std::log(half) - std::lgamma(static_cast<double>(n) + 1.0));
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 6; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(n + k));
    sum += term;
  }
  return lead * sum;
}

int start_order(int n_max, double x) {
  // J_M(x) must be negligible against the values being normalized. Past the
  // turning point M ~ x the decay is Airy-like with scale x^(1/3).
  const double turning = std::max(static_cast<double>(n_max), x);
  const double extra = 14.0 * std::cbrt(turning) + 30.0 +
                       std::sqrt(40.0 * static_cast<double>(n_max));
  int m = static_cast<int>(turning + extra);
  return m + (m % 2); // even start keeps the normalization sum aligned
}

// Miller backward recurrence for J_0..J_{n_max}(x), x > 0, normalized with
// J_0 + 2 * sum_{k>=1} J_{2k} = 1.
std::vector<double> miller(int n_max, double x) {
  const int m = start_order(n_max, x);
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  const double two_over_x = 2.0 / x;
  double next = 0.0; // J_{k+1}
  double cur = 1e-300; // J_k
  double norm = 0.0;
  for (int k = m; k > 0; --k) {
    const double prev = k * two_over_x * cur - next; // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= 1.0 / kRescaleAbove;
      next *= 1.0 / kRescaleAbove;
      norm *= 1.0 / kRescaleAbove;
      for (auto& v : out) {
        v *= 1.0 / kRescaleAbove;
      }
    }
    const int order = k - 1;
    if (order <= n_max) {
      out[static_cast<std::size_t>(order)] = cur;
    }
    if (order > 0 && order % 2 == 0) {
      norm += 2.0 * cur;
    }
  }
  norm += cur;
  for (auto& v : out) {
    v /= norm;
  }
  return out;
}

double reflection_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

} // namespace

double bessel_j(int n, double x) {
  x = checked_argument(x);
  const int an = std::abs(n);
  const double sign = n < 0 ? reflection_sign(an) : 1.0;
  if (x == 0.0) {
    return an == 0 ? 1.0 : 0.0;
  }
  if (x < kSeriesMaxArg) {
    return sign * series_small(an, x);
  }
  return sign * miller(an, x)[static_cast<std::size_t>(an)];
}

std::vector<double> bessel_j_range(int n_lo, int n_hi, double x) {
  if (n_hi < n_lo) {
    throw std::invalid_argument("bessel_j_range: n_hi < n_lo");
  }
  x = checked_argument(x);
  const std::size_t count = static_cast<std::size_t>(n_hi - n_lo) + 1;
  std::vector<double> out(count, 0.0);
  const int n_abs_max = std::max(std::abs(n_lo), std::abs(n_hi));
  if (x == 0.0) {
    if (n_lo <= 0 && 0 <= n_hi) {
      out[static_cast<std::size_t>(-n_lo)] = 1.0;
    }
    return out;
  }
  if (x < kSeriesMaxArg) {
    for (int n = n_lo; n <= n_hi; ++n) {
      out[static_cast<std::size_t>(n - n_lo)] = bessel_j(n, x);
    }
    return out;
  }
  const auto table = miller(n_abs_max, x);
  for (int n = n_lo; n <= n_hi; ++n) {
    const int an = std::abs(n);
    const double sign = n < 0 ? reflection_sign(an) : 1.0;
    out[static_cast<std::size_t>(n - n_lo)] =
        sign * table[static_cast<std::size_t>(an)];
  }
  return out;
}

} // namespace evb
