#pragma once
// Small numeric building blocks: 1-D searches, adaptive quadrature, and a
// splittable RNG. Everything here is deterministic and allocation-free.

#include <cmath>
#include <cstdint>
#include <limits>

namespace ratebal {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Counter-based generator with period 2^64; cheap to fork into independent
// substreams, which keeps batched simulation reproducible under any worker
// count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform draw strictly inside (0,1), safe as a quantile argument.
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Derives the seed of substream `index` from a master seed.
inline std::uint64_t seed_substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g.next();
}

struct MinResult {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section minimization on [lo, hi] down to bracket width xtol,
// followed by one parabolic refinement through the three central points.
// Assumes f is unimodal on the bracket; on multimodal input it still
// returns the best point it evaluated.
template <typename F>
MinResult golden_min(F&& f, double lo, double hi, double xtol) {
    constexpr double invphi = 0.61803398874989485;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol && x1 < x2) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    MinResult best = (f1 <= f2) ? MinResult{x1, f1} : MinResult{x2, f2};
    double xm = 0.5 * (a + b);
    if (xm != x1 && xm != x2) {
        double fm = f(xm);
        if (fm < best.value) best = {xm, fm};
        // parabola through (x1,f1), (xm,fm), (x2,f2)
        double d1 = (xm - x1) * (fm - f2);
        double d2 = (xm - x2) * (fm - f1);
        double denom = 2.0 * (d1 - d2);
        if (denom != 0.0) {
            double v = xm - ((xm - x1) * d1 - (xm - x2) * d2) / denom;
            if (v > lo && v < hi && std::isfinite(v)) {
                double fv = f(v);
                if (fv < best.value) best = {v, fv};
            }
        }
    }
    return best;
}

// Ternary-section minimization for smooth convex objectives.
template <typename F>
MinResult ternary_min(F&& f, double lo, double hi, double xtol) {
    while (hi - lo > xtol) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

// Bisection for a sign change of f on [lo, hi]; returns the midpoint of the
// final bracket. Caller guarantees f(lo) and f(hi) straddle zero.
template <typename F>
double bisect_root(F&& f, double lo, double hi, double xtol) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    bool lo_neg = flo < 0.0;
    for (int i = 0; i < 200 && hi - lo > xtol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_neg)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

namespace detail {

template <typename F>
double simpson_rec(F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson quadrature on a finite interval.
template <typename F>
double integrate(F&& f, double a, double b, double tol = 1e-11, int max_depth = 48) {
    if (!(a < b)) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace ratebal
