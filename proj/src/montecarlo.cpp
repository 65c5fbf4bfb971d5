#include <ratebal/montecarlo.hpp>

#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

namespace ratebal {

namespace {

struct BatchPlan {
    std::uint64_t first_trial = 0;
    std::uint64_t trials = 0;
    std::uint64_t index = 0;
};

std::uint64_t run_batch(const NetworkDesign& d, const Priors& priors,
                        const std::vector<QuantizerPmf>& pmfs, const BatchPlan& plan,
                        std::uint64_t seed) {
    SplitMix64 rng(seed_substream(seed, plan.index));
    std::uint64_t errors = 0;
    for (std::uint64_t t = 0; t < plan.trials; ++t) {
        int h = rng.uniform01() < priors.pi1 ? 1 : 0;
        double like0 = priors.pi0, like1 = priors.pi1;
        for (std::size_t n = 0; n < d.quantizers.size(); ++n) {
            std::size_t cell = d.quantizers[n].index_of(sample(d.model, h, rng));
            like0 *= pmfs[n].p0[cell];
            like1 *= pmfs[n].p1[cell];
        }
        int decision = like1 > like0 ? 1 : 0;  // MAP, ties to h=0
        if (decision != h) ++errors;
    }
    return errors;
}

}  // namespace

double sample(const ObservationModel& model, int h, SplitMix64& rng) {
    return model.quantile(h, rng.uniform01());
}

SimResult simulate_pe(const NetworkDesign& d, const Priors& priors, const SimConfig& cfg) {
    require_valid(d);
    require_valid(priors);
    if (cfg.trials == 0) throw std::invalid_argument("simulation needs at least one trial");
    if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be positive");

    std::vector<QuantizerPmf> pmfs;
    pmfs.reserve(d.quantizers.size());
    for (const auto& q : d.quantizers) pmfs.push_back(cell_pmf(d.model, q));

    std::vector<BatchPlan> plan;
    for (std::uint64_t first = 0, idx = 0; first < cfg.trials; first += cfg.batch_size, ++idx)
        plan.push_back({first, std::min<std::uint64_t>(cfg.batch_size, cfg.trials - first), idx});

    std::uint64_t errors = 0;
    unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1 || plan.size() == 1) {
        for (const auto& b : plan) errors += run_batch(d, priors, pmfs, b, cfg.seed);
    } else {
        // integer error counts make the reduction order irrelevant
        std::vector<std::future<std::uint64_t>> parts;
        for (unsigned w = 0; w < workers; ++w) {
            parts.push_back(std::async(std::launch::async, [&, w] {
                std::uint64_t sub = 0;
                for (std::size_t i = w; i < plan.size(); i += workers)
                    sub += run_batch(d, priors, pmfs, plan[i], cfg.seed);
                return sub;
            }));
        }
        for (auto& p : parts) errors += p.get();
    }

    SimResult r;
    r.trials = cfg.trials;
    r.errors = errors;
    r.pe_hat = static_cast<double>(errors) / static_cast<double>(cfg.trials);
    r.std_err = std::sqrt(r.pe_hat * (1.0 - r.pe_hat) / static_cast<double>(cfg.trials));
    return r;
}

}  // namespace ratebal
