#include <ratebal/conditions.hpp>

#include <ratebal/errors.hpp>
#include <ratebal/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratebal {

namespace {

struct IntervalMasses {
    double p0 = 0.0;
    double p1 = 0.0;
};

IntervalMasses conditional_masses(const ObservationModel& model, const ExtendedInterval& iv) {
    require_valid(iv);
    IntervalMasses mm{model.interval_prob(0, iv), model.interval_prob(1, iv)};
    if (!(mm.p0 > 0.0) || !(mm.p1 > 0.0))
        throw degenerate_interval_error("interval carries no mass under one hypothesis");
    return mm;
}

// Integral of sqrt(f0 f1) over [lo, hi] for the laplacian pair: the
// geometric mean is (1/2) e^{-max(|x|, m)}, elementary on each llr region.
double laplace_sqrt_ff_integral(double lo, double hi, double m) {
    double s = 0.0;
    double a = std::max(lo, -m), c = std::min(hi, m);
    if (a < c) s += 0.5 * std::exp(-m) * (c - a);
    if (hi > m) {
        double p = std::max(lo, m);
        s += 0.5 * (std::exp(-p) - (std::isinf(hi) ? 0.0 : std::exp(-hi)));
    }
    if (lo < -m) {
        double q = std::min(hi, -m);
        s += 0.5 * (std::exp(q) - (std::isinf(lo) ? 0.0 : std::exp(lo)));
    }
    return s;
}

double logit(double u) {
    if (u <= 0.0) return -kInf;
    if (u >= 1.0) return kInf;
    return std::log(u / (1.0 - u));
}

// Interior point of an interval that may be half-infinite.
double interior_point(const ExtendedInterval& iv) {
    if (std::isinf(iv.lo) && std::isinf(iv.hi)) return 0.0;
    if (std::isinf(iv.lo)) return iv.hi - 1.0;
    if (std::isinf(iv.hi)) return iv.lo + 1.0;
    return 0.5 * (iv.lo + iv.hi);
}

}  // namespace

std::string to_string(EtaRule rule) {
    switch (rule) {
        case EtaRule::likelihood: return "likelihood";
        case EtaRule::compander: return "compander";
        default: return "midpoint";
    }
}

EtaRule eta_rule_from_string(const std::string& name) {
    if (name == "likelihood") return EtaRule::likelihood;
    if (name == "compander") return EtaRule::compander;
    if (name == "midpoint") return EtaRule::midpoint;
    throw std::invalid_argument("unknown eta rule: " + name);
}

double b_inf_conditional(const ObservationModel& model, const ExtendedInterval& iv) {
    IntervalMasses mm = conditional_masses(model, iv);
    double num;
    if (model.kind == NoiseKind::laplacian) {
        num = laplace_sqrt_ff_integral(iv.lo, iv.hi, model.m);
    } else {
        // sqrt(f0 f1) = e^{-m^2/2} * standard normal pdf
        num = std::exp(-0.5 * model.m * model.m) * normal_interval_mass(iv.lo, iv.hi, 0.0);
    }
    return std::min(num / std::sqrt(mm.p0 * mm.p1), 1.0);
}

double b_1_conditional(const ObservationModel& model, const ExtendedInterval& iv, double eta) {
    if (!(eta >= iv.lo && eta <= iv.hi))
        throw std::invalid_argument("split point must lie inside the interval");
    IntervalMasses mm = conditional_masses(model, iv);
    double l0 = 0.0, l1 = 0.0, r0 = 0.0, r1 = 0.0;
    if (eta > iv.lo) {
        l0 = model.interval_prob(0, {iv.lo, eta}) / mm.p0;
        l1 = model.interval_prob(1, {iv.lo, eta}) / mm.p1;
    }
    if (eta < iv.hi) {
        r0 = model.interval_prob(0, {eta, iv.hi}) / mm.p0;
        r1 = model.interval_prob(1, {eta, iv.hi}) / mm.p1;
    }
    return std::min(std::sqrt(l0 * l1) + std::sqrt(r0 * r1), 1.0);
}

double eta_likelihood(const ObservationModel& model, const ExtendedInterval& iv) {
    IntervalMasses mm = conditional_masses(model, iv);
    double target = std::log(mm.p1 / mm.p0);
    if (model.kind == NoiseKind::gaussian)
        return std::clamp(target / (2.0 * model.m), iv.lo, iv.hi);

    // Laplacian llr is 2x clamped to [-2m, 2m]; the root lives where the llr
    // still moves. A cell inside a flat region has identical conditional
    // densities, so any interior split is equivalent.
    double lo = std::max(iv.lo, -model.m);
    double hi = std::min(iv.hi, model.m);
    if (!(lo < hi)) return std::clamp(interior_point(iv), iv.lo, iv.hi);
    auto g = [&](double x) { return model.llr(x) - target; };
    if (g(lo) >= 0.0) return lo;
    if (g(hi) <= 0.0) return hi;
    return bisect_root(g, lo, hi, 1e-12);
}

double eta_compander(const ObservationModel& model, const ExtendedInterval& iv) {
    require_valid(iv);
    if (model.kind == NoiseKind::laplacian) {
        double lo = std::clamp(iv.lo, -model.m, model.m);
        double hi = std::clamp(iv.hi, -model.m, model.m);
        return std::clamp(0.5 * (lo + hi), iv.lo, iv.hi);
    }
    constexpr double kSqrt3 = 1.7320508075688772;
    double qa = std::isinf(iv.lo) ? 1.0 : q_tail(iv.lo / kSqrt3);
    double qc = std::isinf(iv.hi) ? 0.0 : q_tail(iv.hi / kSqrt3);
    return std::clamp(kSqrt3 * q_tail_inv(0.5 * (qa + qc)), iv.lo, iv.hi);
}

double eta_for_rule(const ObservationModel& model, const ExtendedInterval& iv, EtaRule rule) {
    switch (rule) {
        case EtaRule::likelihood: return eta_likelihood(model, iv);
        case EtaRule::compander: return eta_compander(model, iv);
        default: {
            // midpoint of the interval clipped to the model's central range
            require_valid(iv);
            double reach = model.kind == NoiseKind::laplacian ? model.m : model.m + 8.0;
            double lo = std::clamp(iv.lo, -reach, reach);
            double hi = std::clamp(iv.hi, -reach, reach);
            return std::clamp(0.5 * (lo + hi), iv.lo, iv.hi);
        }
    }
}

SplitCondition check_split(const ObservationModel& model, const ExtendedInterval& iv, double eta) {
    SplitCondition sc;
    sc.interval = iv;
    sc.eta = eta;
    sc.b_inf = b_inf_conditional(model, iv);
    sc.b_1 = b_1_conditional(model, iv, eta);
    sc.margin = sc.b_inf - sc.b_1 * sc.b_1;
    return sc;
}

SplitCondition check_split(const ObservationModel& model, const ExtendedInterval& iv, EtaRule rule) {
    return check_split(model, iv, eta_for_rule(model, iv, rule));
}

ScanReport scan_conjecture(NoiseKind kind, const std::vector<double>& m_values, int grid,
                           EtaRule rule, const ScanSink& sink) {
    if (grid < 2) throw std::invalid_argument("scan grid needs at least 2 points");
    ScanReport report;
    report.kind = kind;
    report.rule = rule;
    report.grid = grid;
    report.min_margin = kInf;

    for (double m : m_values) {
        ObservationModel model = make_model(kind, m);
        for (int j = 0; j < grid; ++j) {
            double at = static_cast<double>(j) / (grid - 1);
            double a = logit(at);
            for (int k = j + 1; k < grid; ++k) {
                double ct = static_cast<double>(k) / (grid - 1);
                ExtendedInterval iv{a, logit(ct)};
                ScanCell cell{m, at, ct, 0.0};
                try {
                    cell.margin = check_split(model, iv, rule).margin;
                } catch (const degenerate_interval_error&) {
                    ++report.skipped;
                    continue;
                }
                ++report.cells;
                if (sink) sink(cell);
                if (cell.margin < report.min_margin) {
                    report.min_margin = cell.margin;
                    report.argmin = cell;
                }
            }
        }
    }
    if (report.cells == 0) report.min_margin = 0.0;
    return report;
}

ConcavityReport concavity_check(const std::vector<double>& seq, double tol) {
    std::ptrdiff_t n = static_cast<std::ptrdiff_t>(seq.size());
    for (std::ptrdiff_t r = 1; r + 1 < n; ++r)
        if (seq[r - 1] + seq[r + 1] > 2.0 * seq[r] + tol) return {false, r};
    // spread consequences compound k single steps, so slack scales with k
    for (std::ptrdiff_t r = 0; r < n; ++r) {
        for (std::ptrdiff_t k = 0; r - k >= 0; ++k) {
            double slack = tol * static_cast<double>(k + 1);
            if (r + k < n && seq[r + k] + seq[r - k] > 2.0 * seq[r] + slack) return {false, r};
            if (r + k + 1 < n && seq[r + k + 1] + seq[r - k] > seq[r + 1] + seq[r] + slack)
                return {false, r};
        }
    }
    return {true, -1};
}

bool residual_gap_check(const std::vector<double>& seq, double b_inf, double tol) {
    for (std::size_t r = 0; r + 1 < seq.size(); ++r)
        if (seq[r] + b_inf > 2.0 * seq[r + 1] + tol) return false;
    return true;
}

double CertificateReport::max_violation() const {
    return std::max({interior_max_violation, boundary_max_violation, one_bit_violation});
}

CertificateReport laplacian_certificate(double m, int grid) {
    if (!(std::isfinite(m) && m > 0.0)) throw std::invalid_argument("m must be positive");
    if (grid < 2) throw std::invalid_argument("certificate grid needs at least 2 points");
    CertificateReport rep;
    rep.m = m;
    rep.grid = grid;
    for (int j = 0; j < grid; ++j) {
        double y = m * static_cast<double>(j) / (grid - 1);
        double v = (2.0 - y) * std::exp(y) + (2.0 + y) * std::exp(-y) - 4.0;
        rep.interior_max_violation = std::max(rep.interior_max_violation, v);
    }
    for (int j = 1; j <= grid; ++j) {
        double y = static_cast<double>(j) / grid;
        double lhs = 1.0 - y + std::sqrt(2.0 - y);
        double v = lhs * lhs - (1.0 - 2.0 * std::log(y)) * std::sqrt(2.0 - y * y);
        rep.boundary_max_violation = std::max(rep.boundary_max_violation, v);
    }
    rep.one_bit_violation = 1.0 - m - std::exp(-m);
    return rep;
}

}  // namespace ratebal
