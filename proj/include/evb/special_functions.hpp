#pragma once

#include <stdexcept>
#include <vector>

namespace evb {

/// Thrown for arguments outside a function's mathematical domain.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Cylindrical Bessel function of the first kind J_n(x), integer order.
///
/// Any integer order is accepted; negative orders reduce through
/// J_{-n}(x) = (-1)^n J_n(x). The argument must be finite and non-negative.
/// Values in [-1e-12, 0) are treated as round-off and clamped to zero.
/// Accuracy is ~1e-13 relative to max(1, |J_n(x)|) for x <= 1e3, |n| <= 200.
double bessel_j(int n, double x);

/// J_n(x) for all n in [n_lo, n_hi] from a single recurrence pass.
/// Element k of the result holds J_{n_lo + k}(x).
std::vector<double> bessel_j_range(int n_lo, int n_hi, double x);

} // namespace evb
