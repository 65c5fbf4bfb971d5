#pragma once
// Monotone (threshold) scalar quantizers for one sensor, their conditional
// output pmfs, divergence measures, and threshold-design routines.

#include <ratebal/models.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ratebal {

// Rate-r quantizer: 2^r - 1 sorted finite thresholds splitting the real line
// into 2^r cells, cell i = (t_{i-1}, t_i] with t_{-1} = -inf, t_{2^r-1} = +inf.
struct MonotoneQuantizer {
    unsigned rate = 0;
    std::vector<double> thresholds;

    std::size_t cells() const { return thresholds.size() + 1; }
    ExtendedInterval cell(std::size_t i) const;
    std::size_t index_of(double x) const;
};

void require_valid(const MonotoneQuantizer& q);  // size vs rate, sorted, finite

// Conditional pmfs of the quantizer output; p0[i] = P(cell i | h=0).
struct QuantizerPmf {
    std::vector<double> p0, p1;
    std::size_t cells() const { return p0.size(); }
};

QuantizerPmf cell_pmf(const ObservationModel& model, const MonotoneQuantizer& q);

// sum_i sqrt(p0[i] p1[i]), in (0, 1].
double bhattacharyya_coefficient(const QuantizerPmf& pmf);

// Bhattacharyya distance -ln(coefficient), >= 0.
double bhattacharyya(const QuantizerPmf& pmf);

// Chernoff information: -min over alpha in [0,1] of ln sum p0^alpha p1^(1-alpha).
// Always >= bhattacharyya; equal when the pmf pair is mirror-symmetric.
double chernoff(const QuantizerPmf& pmf);

struct DesignConfig {
    unsigned restarts = 8;
    std::uint64_t seed = 0;
    unsigned max_passes = 500;
    double pass_tolerance = 1e-9;    // stop when a full pass improves B by less
    double inner_tolerance = 1e-10;  // golden-section bracket width
    double init_mass = 0.999;        // random init covers this much mixture mass
    std::size_t cell_cap = std::size_t{1} << 16;
};

struct DesignResult {
    MonotoneQuantizer quantizer;
    double bhattacharyya = 0.0;  // achieved distance
};

// Cyclic coordinate descent over thresholds, each maximized on the bracket
// formed by its neighbors; best of cfg.restarts random restarts.
// Deterministic given cfg.seed. Throws size_cap_error past cfg.cell_cap.
DesignResult design_coordinate_descent(const ObservationModel& model, unsigned rate,
                                       const DesignConfig& cfg = {});

// Closed-form compander thresholds (asymptotically optimal point densities):
// laplacian: uniform partition of [-m, m]; gaussian: t_i = sqrt(3) *
// q_tail_inv(1 - i/2^rate). Requires rate >= 1.
MonotoneQuantizer design_compander(const ObservationModel& model, unsigned rate);

// High-rate approximation beta_rate of the best achievable distance;
// converges to b_infinity as rate grows.
double beta_asymptotic(const ObservationModel& model, unsigned rate);

}  // namespace ratebal
