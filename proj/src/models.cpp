#include <ratebal/models.hpp>

#include <ratebal/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratebal {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143268;

// Log of the two-sided laplacian Chernoff integral at exponent alpha:
// ln of integral f0^alpha f1^(1-alpha). Piecewise exponentials integrate in
// closed form; the middle term needs a series near alpha = 1/2.
double laplace_log_chernoff_integral(double alpha, double m) {
    double w = 2.0 * alpha - 1.0;
    double mid;  // integral over [-m, m] of e^{-w x - m}
    if (std::abs(w) * m < 1e-6) {
        double z = w * m;
        mid = std::exp(-m) * m * (2.0 + z * z / 3.0);
    } else {
        mid = std::exp(-m) * 2.0 * std::sinh(w * m) / w;
    }
    double right = std::exp(-2.0 * alpha * m);        // integral over (m, inf)
    double left = std::exp(2.0 * (alpha - 1.0) * m);  // integral over (-inf, -m)
    return std::log(0.5 * (left + mid + right));
}

}  // namespace

std::string to_string(NoiseKind kind) {
    return kind == NoiseKind::laplacian ? "laplacian" : "gaussian";
}

NoiseKind noise_kind_from_string(const std::string& name) {
    if (name == "laplacian") return NoiseKind::laplacian;
    if (name == "gaussian") return NoiseKind::gaussian;
    throw std::invalid_argument("unknown noise kind: " + name);
}

bool valid(const ExtendedInterval& iv) {
    return !(std::isnan(iv.lo) || std::isnan(iv.hi)) && iv.lo < iv.hi;
}

void require_valid(const ExtendedInterval& iv) {
    if (!valid(iv)) throw std::invalid_argument("interval endpoints must satisfy lo < hi");
}

double normal_interval_mass(double lo, double hi, double mean) {
    double a = lo - mean, c = hi - mean;
    if (a >= 0.0) return q_tail(a) - q_tail(c);
    if (c <= 0.0) return q_tail(-c) - q_tail(-a);
    return 1.0 - q_tail(-a) - q_tail(c);  // straddles the mean
}

double laplace_interval_mass(double lo, double hi, double mean) {
    double a = lo - mean, c = hi - mean;
    if (c <= 0.0) return 0.5 * std::exp(c) * (-std::expm1(a - c));
    if (a >= 0.0) return 0.5 * std::exp(-a) * (-std::expm1(a - c));
    return 1.0 - 0.5 * std::exp(a) - 0.5 * std::exp(-c);
}

double ObservationModel::pdf(int h, double x) const {
    double d = x - mean(h);
    if (kind == NoiseKind::laplacian) return 0.5 * std::exp(-std::abs(d));
    return kInvSqrt2Pi * std::exp(-0.5 * d * d);
}

double ObservationModel::cdf(int h, double x) const {
    double d = x - mean(h);
    if (kind == NoiseKind::laplacian)
        return d <= 0.0 ? 0.5 * std::exp(d) : 1.0 - 0.5 * std::exp(-d);
    return q_tail(-d);
}

double ObservationModel::interval_prob(int h, const ExtendedInterval& iv) const {
    require_valid(iv);
    if (kind == NoiseKind::laplacian) return laplace_interval_mass(iv.lo, iv.hi, mean(h));
    return normal_interval_mass(iv.lo, iv.hi, mean(h));
}

double ObservationModel::llr(double x) const {
    if (kind == NoiseKind::laplacian) return std::clamp(2.0 * x, -2.0 * m, 2.0 * m);
    return 2.0 * m * x;
}

double ObservationModel::quantile(int h, double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("quantile: argument must lie strictly inside (0,1)");
    double mu = mean(h);
    if (kind == NoiseKind::laplacian)
        return u < 0.5 ? mu + std::log(2.0 * u) : mu - std::log(2.0 * (1.0 - u));
    return mu - q_tail_inv(u);
}

double ObservationModel::b_infinity() const {
    if (kind == NoiseKind::laplacian) return m - std::log1p(m);
    return 0.5 * m * m;
}

double ObservationModel::chernoff_infinity() const {
    if (kind == NoiseKind::gaussian) {
        // log-integral is -2 alpha (1-alpha) m^2, minimized at alpha = 1/2
        auto obj = [this](double a) { return -2.0 * a * (1.0 - a) * m * m; };
        return -ternary_min(obj, 0.0, 1.0, 1e-10).value;
    }
    auto obj = [this](double a) { return laplace_log_chernoff_integral(a, m); };
    return -ternary_min(obj, 0.0, 1.0, 1e-10).value;
}

ObservationModel make_model(NoiseKind kind, double m) {
    if (!(std::isfinite(m) && m > 0.0))
        throw std::invalid_argument("half-separation m must be finite and positive");
    return ObservationModel{kind, m};
}

}  // namespace ratebal
