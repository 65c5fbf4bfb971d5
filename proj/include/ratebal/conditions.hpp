#pragma once
// Interval-conditional divergence coefficients and the optimality conditions
// that justify balanced rate allocations: one-bit split margins, discrete
// concavity of the rate-distance sequence, and the closed-form laplacian
// split certificates.

#include <ratebal/models.hpp>

#include <cstddef>
#include <functional>
#include <vector>

namespace ratebal {

enum class EtaRule { likelihood, compander, midpoint };

std::string to_string(EtaRule rule);
EtaRule eta_rule_from_string(const std::string& name);  // throws std::invalid_argument

// Bhattacharyya coefficient of the observation conditioned on landing in iv:
// integral of sqrt(f0 f1) over iv, normalized by sqrt(P0(iv) P1(iv)).
// Throws degenerate_interval_error when either conditional mass vanishes.
double b_inf_conditional(const ObservationModel& model, const ExtendedInterval& iv);

// Coefficient of the one-bit split of iv at eta (in [iv.lo, iv.hi]):
// sqrt of the left-mass product plus sqrt of the right-mass product, both
// conditioned on iv. Equals 1 exactly for eta at either endpoint.
double b_1_conditional(const ObservationModel& model, const ExtendedInterval& iv, double eta);

// Split point where the conditional densities balance: the root of
// llr(x) = ln(P1(iv)/P0(iv)). Gaussian: closed form, clamped into iv.
// Laplacian: bisection on the piecewise-linear llr; on cells where the llr
// is flat every split is equivalent and an interior point is returned.
double eta_likelihood(const ObservationModel& model, const ExtendedInterval& iv);

// Split point of the compander construction: gaussian sqrt(3)-stretched
// tail-average, laplacian midpoint of iv intersected with [-m, m].
double eta_compander(const ObservationModel& model, const ExtendedInterval& iv);

double eta_for_rule(const ObservationModel& model, const ExtendedInterval& iv, EtaRule rule);

struct SplitCondition {
    ExtendedInterval interval;
    double eta = 0.0;
    double b_inf = 1.0;
    double b_1 = 1.0;
    double margin = 0.0;  // b_inf - b_1^2; >= 0 means the split pays for a bit
};

SplitCondition check_split(const ObservationModel& model, const ExtendedInterval& iv, double eta);
SplitCondition check_split(const ObservationModel& model, const ExtendedInterval& iv, EtaRule rule);

// Exhaustive margin scan over logit-grid intervals. The unit grid t_j =
// j/(grid-1) maps to endpoints a = ln(t/(1-t)), so the cells cover the whole
// extended line including half-infinite intervals.
struct ScanCell {
    double m = 0.0;
    double a_tilde = 0.0;  // unit-grid endpoints
    double c_tilde = 0.0;
    double margin = 0.0;
};

struct ScanReport {
    NoiseKind kind = NoiseKind::gaussian;
    EtaRule rule = EtaRule::likelihood;
    int grid = 0;
    std::size_t cells = 0;
    std::size_t skipped = 0;  // degenerate cells (mass underflow)
    double min_margin = 0.0;
    ScanCell argmin;
};

using ScanSink = std::function<void(const ScanCell&)>;

// Scans every pair j < k for every m; deterministic cell order (m outer,
// then a_tilde, then c_tilde), so the report does not depend on scheduling.
ScanReport scan_conjecture(NoiseKind kind, const std::vector<double>& m_values, int grid,
                           EtaRule rule, const ScanSink& sink = {});

// Discrete concavity of a rate-indexed sequence: seq[r-1] + seq[r+1] <=
// 2 seq[r] + tol for interior r. Also verifies the spread consequences
// seq[r+k] + seq[r-k] <= 2 seq[r] and seq[r+k+1] + seq[r-k] <= seq[r+1] +
// seq[r], with slack scaled by k since they compound k single steps.
struct ConcavityReport {
    bool concave = true;
    std::ptrdiff_t first_violation = -1;  // center index r of the first failure
};

ConcavityReport concavity_check(const std::vector<double>& seq, double tol);

// True iff seq[r] + b_inf <= 2 seq[r+1] + tol for every consecutive pair:
// the residual gap to the unquantized distance never exceeds the latest
// one-bit step. A sufficient condition for discrete concavity of optimal
// rate-distance sequences.
bool residual_gap_check(const std::vector<double>& seq, double b_inf, double tol);

// Closed-form certificates that the laplacian one-bit split margin is
// nonnegative on every compander cell. Violations are signed (<= 0 passes).
struct CertificateReport {
    double m = 0.0;
    int grid = 0;
    // interior cell [a,c] within [-m,m], midpoint split; reduces to
    // (2-y)e^y + (2+y)e^{-y} <= 4 for y = (c-a)/2 in [0, m]
    double interior_max_violation = -kInf;
    // tail cell [a, inf) with a in [-m,m], split at (a+m)/2; reduces to
    // (1-y+sqrt(2-y))^2 <= (1-2 ln y) sqrt(2-y^2) for y = e^{(a-m)/2} in (0,1]
    double boundary_max_violation = -kInf;
    // unsplit line (rate 0 -> 1): 1 - m - e^{-m} <= 0
    double one_bit_violation = 0.0;

    double max_violation() const;
};

CertificateReport laplacian_certificate(double m, int grid);

}  // namespace ratebal
