#include <ratebal/network.hpp>

#include <ratebal/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace ratebal {

unsigned RateAllocation::sum() const {
    return std::accumulate(rates.begin(), rates.end(), 0u);
}

void require_valid(const RateAllocation& a) {
    if (a.rates.empty()) throw std::invalid_argument("allocation needs at least one sensor");
    if (a.sum() > a.sum_rate_cap)
        throw std::invalid_argument("allocation exceeds the sum-rate budget");
}

void require_valid(const Priors& p) {
    if (!(p.pi0 >= 0.0 && p.pi1 >= 0.0) || std::abs(p.pi0 + p.pi1 - 1.0) > 1e-12)
        throw std::invalid_argument("priors must be nonnegative and sum to 1");
}

void require_valid(const NetworkDesign& d) {
    require_valid(d.allocation);
    if (d.quantizers.size() != d.allocation.rates.size())
        throw std::invalid_argument("one quantizer per sensor required");
    for (std::size_t n = 0; n < d.quantizers.size(); ++n) {
        if (d.quantizers[n].rate != d.allocation.rates[n])
            throw std::invalid_argument("quantizer rate disagrees with the allocation");
        require_valid(d.quantizers[n]);
    }
}

JointPmf joint_pmf(const NetworkDesign& d, std::size_t entry_cap) {
    require_valid(d);
    unsigned total = d.allocation.sum();
    if (total >= 63 || (std::size_t{1} << total) > entry_cap)
        throw size_cap_error("joint message lattice exceeds the entry cap");

    JointPmf joint;
    joint.p0 = {1.0};
    joint.p1 = {1.0};
    for (const auto& q : d.quantizers) {
        QuantizerPmf pmf = cell_pmf(d.model, q);
        std::size_t cells = pmf.cells();
        std::vector<double> n0(joint.p0.size() * cells), n1(n0.size());
        for (std::size_t u = 0; u < joint.p0.size(); ++u) {
            for (std::size_t c = 0; c < cells; ++c) {
                n0[u * cells + c] = joint.p0[u] * pmf.p0[c];
                n1[u * cells + c] = joint.p1[u] * pmf.p1[c];
            }
        }
        joint.p0 = std::move(n0);
        joint.p1 = std::move(n1);
    }
    return joint;
}

double network_bhattacharyya(const NetworkDesign& d) {
    require_valid(d);
    double sum = 0.0;
    for (const auto& q : d.quantizers) sum += bhattacharyya(cell_pmf(d.model, q));
    return sum;
}

double analytic_pe(const NetworkDesign& d, const Priors& priors, std::size_t entry_cap) {
    require_valid(priors);
    JointPmf joint = joint_pmf(d, entry_cap);
    double correct = 0.0;
    for (std::size_t u = 0; u < joint.entries(); ++u)
        correct += std::max(priors.pi0 * joint.p0[u], priors.pi1 * joint.p1[u]);
    return std::max(1.0 - correct, 0.0);
}

double pe_upper_bound(double b_network, const Priors& priors) {
    require_valid(priors);
    return std::sqrt(priors.pi0 * priors.pi1) * std::exp(-b_network);
}

MajorizationOrder majorizes(const RateAllocation& a, const RateAllocation& b) {
    if (a.rates.size() != b.rates.size())
        throw std::invalid_argument("majorization needs equal sensor counts");
    std::vector<unsigned> sa = a.rates, sb = b.rates;
    std::sort(sa.begin(), sa.end(), std::greater<>());
    std::sort(sb.begin(), sb.end(), std::greater<>());
    if (std::accumulate(sa.begin(), sa.end(), 0ull) != std::accumulate(sb.begin(), sb.end(), 0ull))
        throw std::invalid_argument("majorization needs equal rate totals");

    bool a_below = true, b_below = true;  // prefix sums of one never exceed the other's
    unsigned long long pa = 0, pb = 0;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        pa += sa[i];
        pb += sb[i];
        if (pa > pb) a_below = false;
        if (pb > pa) b_below = false;
    }
    if (a_below && b_below) return MajorizationOrder::equal;
    if (a_below) return MajorizationOrder::a_majorized_by_b;
    if (b_below) return MajorizationOrder::b_majorized_by_a;
    return MajorizationOrder::incomparable;
}

RateAllocation balanced_allocation(unsigned sensors, unsigned sum_rate) {
    if (sensors == 0) throw std::invalid_argument("allocation needs at least one sensor");
    RateAllocation a;
    a.sum_rate_cap = sum_rate;
    a.rates.resize(sensors);
    unsigned q = sum_rate / sensors, rem = sum_rate % sensors;
    for (unsigned n = 0; n < sensors; ++n) a.rates[n] = q + (n < rem ? 1u : 0u);
    return a;
}

std::pair<unsigned, unsigned> rebalance_pair(unsigned r1, unsigned r2) {
    unsigned s = r1 + r2;
    return {s / 2, s - s / 2};
}

double snr_to_m(NoiseKind kind, double snr_db) {
    double energy = std::pow(10.0, snr_db / 10.0);
    return kind == NoiseKind::laplacian ? std::sqrt(2.0 * energy) : std::sqrt(energy);
}

}  // namespace ratebal
