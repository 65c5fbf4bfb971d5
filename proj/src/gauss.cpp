#include <ratebal/gauss.hpp>

#include <cmath>
#include <stdexcept>

namespace ratebal {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2Pi = 2.50662827463100050242;

// Rational approximation to the standard normal quantile (relative error
// ~1e-9), used only as the starting point for Halley refinement.
double norm_quantile_estimate(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - plow) {
        double q = p - 0.5;
        double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

double q_tail(double y) {
    return 0.5 * std::erfc(y * kInvSqrt2);
}

double q_tail_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("q_tail_inv: argument must lie strictly inside (0,1)");
    // Q^{-1}(p) = -Phi^{-1}(p)
    double x = -norm_quantile_estimate(p);
    for (int i = 0; i < 2; ++i) {
        double pdf = std::exp(-0.5 * x * x) / kSqrt2Pi;
        if (pdf <= 0.0) break;  // tail beyond double pdf range; estimate is enough
        double err = q_tail(x) - p;
        double u = err / pdf;
        x += u / (1.0 - 0.5 * x * u);  // Halley step for Q (Q' = -pdf)
    }
    return x;
}

}  // namespace ratebal
