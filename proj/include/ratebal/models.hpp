#pragma once
// Conditional observation models for the two-hypothesis testing problem.
// Under hypothesis h in {0,1} a sensor sees x = (2h-1)*m + noise with unit
// scale noise, so the conditional means sit at -m and +m.

#include <ratebal/numeric.hpp>

#include <string>

namespace ratebal {

enum class NoiseKind { laplacian, gaussian };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);  // throws std::invalid_argument

// Interval over the extended reals; endpoints may be infinite. Valid iff
// lo < hi and neither endpoint is NaN.
struct ExtendedInterval {
    double lo = -kInf;
    double hi = kInf;
};

bool valid(const ExtendedInterval& iv);
void require_valid(const ExtendedInterval& iv);  // throws std::invalid_argument

// Probability mass of [lo, hi] under a unit-scale density centered at mean.
// Both are branch-symmetric: mirroring (lo,hi,mean) -> (-hi,-lo,-mean)
// reproduces the same arithmetic, so mirrored masses match to the last bit.
double normal_interval_mass(double lo, double hi, double mean);
double laplace_interval_mass(double lo, double hi, double mean);

struct ObservationModel {
    NoiseKind kind = NoiseKind::gaussian;
    double m = 1.0;  // half the separation between the conditional means

    double mean(int h) const { return h ? m : -m; }

    double pdf(int h, double x) const;
    double cdf(int h, double x) const;
    double interval_prob(int h, const ExtendedInterval& iv) const;

    // log f(x|1) - log f(x|0); nondecreasing in x for both kinds.
    // Laplacian: clamp(2x, -2m, 2m). Gaussian: 2mx.
    double llr(double x) const;

    // Inverse conditional cdf, u strictly inside (0,1).
    double quantile(int h, double u) const;

    // Bhattacharyya distance of the unquantized observation.
    double b_infinity() const;

    // Chernoff information of the unquantized observation; equals
    // b_infinity for these symmetric pairs (optimal exponent 1/2).
    double chernoff_infinity() const;
};

// Validates kind and m (finite, strictly positive).
ObservationModel make_model(NoiseKind kind, double m);

}  // namespace ratebal
