#include <ratebal/quantizer.hpp>

#include <ratebal/errors.hpp>
#include <ratebal/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratebal {

namespace {

double interval_mass(const ObservationModel& model, int h, double lo, double hi) {
    if (model.kind == NoiseKind::laplacian) return laplace_interval_mass(lo, hi, model.mean(h));
    return normal_interval_mass(lo, hi, model.mean(h));
}

// Half-width W of the symmetric interval [-W, W] carrying `mass` of the
// equal-weight hypothesis mixture. By symmetry both conditionals assign it
// the same mass, so one conditional suffices.
double symmetric_mass_halfwidth(const ObservationModel& model, double mass) {
    auto covered = [&](double w) { return interval_mass(model, 1, -w, w) - mass; };
    double hi = model.m + 1.0;
    while (covered(hi) < 0.0 && hi < 1e6) hi *= 2.0;
    return bisect_root(covered, 0.0, hi, 1e-9);
}

void require_rate_within(unsigned rate, std::size_t cell_cap) {
    if (rate >= 63 || (std::size_t{1} << rate) > cell_cap)
        throw size_cap_error("quantizer rate " + std::to_string(rate) +
                             " exceeds the configured cell cap");
}

}  // namespace

ExtendedInterval MonotoneQuantizer::cell(std::size_t i) const {
    double lo = (i == 0) ? -kInf : thresholds[i - 1];
    double hi = (i >= thresholds.size()) ? kInf : thresholds[i];
    return {lo, hi};
}

std::size_t MonotoneQuantizer::index_of(double x) const {
    auto it = std::lower_bound(thresholds.begin(), thresholds.end(), x);
    return static_cast<std::size_t>(it - thresholds.begin());
}

void require_valid(const MonotoneQuantizer& q) {
    if (q.rate >= 63 || q.thresholds.size() + 1 != (std::size_t{1} << q.rate))
        throw std::invalid_argument("threshold count must be 2^rate - 1");
    for (double t : q.thresholds)
        if (!std::isfinite(t)) throw std::invalid_argument("thresholds must be finite");
    if (!std::is_sorted(q.thresholds.begin(), q.thresholds.end()))
        throw std::invalid_argument("thresholds must be sorted");
}

QuantizerPmf cell_pmf(const ObservationModel& model, const MonotoneQuantizer& q) {
    require_valid(q);
    QuantizerPmf pmf;
    std::size_t n = q.cells();
    pmf.p0.resize(n);
    pmf.p1.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto iv = q.cell(i);
        pmf.p0[i] = std::max(interval_mass(model, 0, iv.lo, iv.hi), 0.0);
        pmf.p1[i] = std::max(interval_mass(model, 1, iv.lo, iv.hi), 0.0);
    }
    return pmf;
}

double bhattacharyya_coefficient(const QuantizerPmf& pmf) {
    double s = 0.0;
    for (std::size_t i = 0; i < pmf.cells(); ++i) s += std::sqrt(pmf.p0[i] * pmf.p1[i]);
    return std::min(s, 1.0);
}

double bhattacharyya(const QuantizerPmf& pmf) {
    return -std::log(bhattacharyya_coefficient(pmf));
}

double chernoff(const QuantizerPmf& pmf) {
    auto log_sum = [&pmf](double alpha) {
        double s = 0.0;
        for (std::size_t i = 0; i < pmf.cells(); ++i) {
            double p0 = pmf.p0[i], p1 = pmf.p1[i];
            if (p0 > 0.0 && p1 > 0.0)
                s += std::exp(alpha * std::log(p0) + (1.0 - alpha) * std::log(p1));
        }
        return std::log(s);
    };
    return -ternary_min(log_sum, 0.0, 1.0, 1e-10).value;
}

DesignResult design_coordinate_descent(const ObservationModel& model, unsigned rate,
                                       const DesignConfig& cfg) {
    require_rate_within(rate, cfg.cell_cap);
    if (rate == 0) return {MonotoneQuantizer{0, {}}, 0.0};

    const std::size_t cells = std::size_t{1} << rate;
    const std::size_t nt = cells - 1;
    const double w_init = symmetric_mass_halfwidth(model, cfg.init_mass);
    // Finite stand-in for the unbounded outer brackets; no threshold of an
    // optimal design sits beyond the 1 - 1e-12 mass envelope.
    const double w_env = symmetric_mass_halfwidth(model, 1.0 - 1e-12);

    auto coefficient = [&](const std::vector<double>& t) {
        double s = 0.0;
        for (std::size_t i = 0; i <= nt; ++i) {
            double lo = (i == 0) ? -kInf : t[i - 1];
            double hi = (i == nt) ? kInf : t[i];
            s += std::sqrt(std::max(interval_mass(model, 0, lo, hi), 0.0) *
                           std::max(interval_mass(model, 1, lo, hi), 0.0));
        }
        return s;
    };

    MonotoneQuantizer best{rate, {}};
    double best_b = -1.0;

    for (unsigned restart = 0; restart < cfg.restarts; ++restart) {
        SplitMix64 rng(seed_substream(cfg.seed, restart));
        std::vector<double> t(nt);
        for (double& x : t) x = -w_init + 2.0 * w_init * rng.uniform01();
        std::sort(t.begin(), t.end());

        double prev = -std::log(coefficient(t));
        for (unsigned pass = 0; pass < cfg.max_passes; ++pass) {
            for (std::size_t i = 0; i < nt; ++i) {
                double edge_lo = (i == 0) ? -kInf : t[i - 1];
                double edge_hi = (i == nt - 1) ? kInf : t[i + 1];
                double blo = (i == 0) ? std::min(-w_env, t[i]) : t[i - 1];
                double bhi = (i == nt - 1) ? std::max(w_env, t[i]) : t[i + 1];
                auto local = [&](double x) {
                    return std::sqrt(std::max(interval_mass(model, 0, edge_lo, x), 0.0) *
                                     std::max(interval_mass(model, 1, edge_lo, x), 0.0)) +
                           std::sqrt(std::max(interval_mass(model, 0, x, edge_hi), 0.0) *
                                     std::max(interval_mass(model, 1, x, edge_hi), 0.0));
                };
                MinResult r = golden_min(local, blo, bhi, cfg.inner_tolerance);
                if (r.value <= local(t[i])) t[i] = r.x;
            }
            double cur = -std::log(coefficient(t));
            bool converged = cur - prev < cfg.pass_tolerance;
            prev = std::max(prev, cur);
            if (converged) break;
        }

        double achieved = -std::log(coefficient(t));
        if (achieved > best_b) {
            best_b = achieved;
            best.thresholds = t;
        }
    }

    return {std::move(best), best_b};
}

MonotoneQuantizer design_compander(const ObservationModel& model, unsigned rate) {
    if (rate < 1) throw std::invalid_argument("compander design needs rate >= 1");
    require_rate_within(rate, DesignConfig{}.cell_cap);
    const std::size_t cells = std::size_t{1} << rate;
    MonotoneQuantizer q{rate, {}};
    q.thresholds.reserve(cells - 1);
    for (std::size_t i = 1; i < cells; ++i) {
        double u = static_cast<double>(i) / static_cast<double>(cells);
        if (model.kind == NoiseKind::laplacian)
            q.thresholds.push_back(model.m * (2.0 * u - 1.0));
        else
            q.thresholds.push_back(std::sqrt(3.0) * q_tail_inv(1.0 - u));
    }
    return q;
}

double beta_asymptotic(const ObservationModel& model, unsigned rate) {
    double shrink = std::exp2(-2.0 * static_cast<double>(rate));
    if (model.kind == NoiseKind::laplacian) {
        double m = model.m;
        return m - std::log1p(m + (m * m * m / 6.0) * shrink);
    }
    double m2 = model.m * model.m;
    constexpr double kPiSqrt3Over4 = 1.3603495231756581;
    return 0.5 * m2 - std::log1p(kPiSqrt3Over4 * m2 * shrink);
}

}  // namespace ratebal
