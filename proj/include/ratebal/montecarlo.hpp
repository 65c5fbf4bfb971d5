#pragma once
// Monte Carlo validation of the analytic fusion error: inverse-CDF sampling,
// quantization, and MAP decoding over independent per-batch substreams.

#include <ratebal/network.hpp>
#include <ratebal/numeric.hpp>

#include <cstdint>

namespace ratebal {

struct SimConfig {
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint32_t batch_size = 65536;  // substream granularity
    unsigned workers = 1;              // batch-parallel; result is worker-count invariant
};

struct SimResult {
    double pe_hat = 0.0;
    double std_err = 0.0;  // binomial sqrt(p(1-p)/trials)
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
};

// One observation under hypothesis h by inverse-CDF sampling.
double sample(const ObservationModel& model, int h, SplitMix64& rng);

// Empirical MAP fusion error. Deterministic given (d, priors, cfg): batch b
// uses substream seed_substream(cfg.seed, b), and error counts are integers,
// so any batch schedule reduces to the same result.
SimResult simulate_pe(const NetworkDesign& d, const Priors& priors, const SimConfig& cfg);

}  // namespace ratebal
