#pragma once
// Parallel sensor networks: per-sensor rate allocations under a sum-rate
// budget, joint message statistics, exact fusion error, and majorization
// utilities for comparing allocations.

#include <ratebal/quantizer.hpp>

#include <cstddef>
#include <utility>
#include <vector>

namespace ratebal {

struct RateAllocation {
    std::vector<unsigned> rates;  // bits per sensor
    unsigned sum_rate_cap = 0;    // budget; sum(rates) must not exceed it

    unsigned sum() const;
};

void require_valid(const RateAllocation& a);  // throws std::invalid_argument

struct Priors {
    double pi0 = 0.5;
    double pi1 = 0.5;  // pi0 + pi1 == 1, both >= 0
};

void require_valid(const Priors& p);

struct NetworkDesign {
    ObservationModel model;
    RateAllocation allocation;
    std::vector<MonotoneQuantizer> quantizers;  // one per sensor, rates match
};

void require_valid(const NetworkDesign& d);

// Joint conditional pmfs over the product message lattice, sensor 0 the
// most significant index. Entry count is 2^(sum of rates); throws
// size_cap_error past entry_cap.
struct JointPmf {
    std::vector<double> p0, p1;
    std::size_t entries() const { return p0.size(); }
};

JointPmf joint_pmf(const NetworkDesign& d, std::size_t entry_cap = std::size_t{1} << 20);

// Network Bhattacharyya distance: the per-sensor distances sum, since the
// joint coefficient factorizes across independent sensors.
double network_bhattacharyya(const NetworkDesign& d);

// Exact error probability of the optimal (MAP) fusion rule over the joint
// message lattice: 1 - sum_u max(pi0 P0(u), pi1 P1(u)). Ties break to h=0.
double analytic_pe(const NetworkDesign& d, const Priors& priors,
                   std::size_t entry_cap = std::size_t{1} << 20);

// sqrt(pi0 pi1) e^{-b_network}; always >= analytic_pe.
double pe_upper_bound(double b_network, const Priors& priors);

enum class MajorizationOrder { equal, a_majorized_by_b, b_majorized_by_a, incomparable };

// Compares descending prefix sums. Requires equal lengths and equal totals
// (throws std::invalid_argument otherwise): majorization is only defined
// within one budget.
MajorizationOrder majorizes(const RateAllocation& a, const RateAllocation& b);

// The most even split of sum_rate over sensors (floor/ceil of the mean,
// descending). It is majorized by every allocation of the same total.
RateAllocation balanced_allocation(unsigned sensors, unsigned sum_rate);

// Evening out a pair of rates while keeping their sum: (r,r) or (r,r+1).
std::pair<unsigned, unsigned> rebalance_pair(unsigned r1, unsigned r2);

// Half-separation m giving the requested per-sensor SNR in dB for unit-scale
// noise: laplacian energy m^2/2, gaussian energy m^2.
double snr_to_m(NoiseKind kind, double snr_db);

}  // namespace ratebal
