#pragma once
// Standard normal upper tail Q and its inverse.

namespace ratebal {

// Q(y) = P(Z > y) for Z ~ N(0,1). Exact at +-inf, symmetric: Q(-y) = 1 - Q(y).
double q_tail(double y);

// Inverse of q_tail on (0,1). Throws std::domain_error outside the open
// interval. Round-trips through q_tail to ~1e-16 absolute over [1e-12, 1-1e-12].
double q_tail_inv(double p);

}  // namespace ratebal
