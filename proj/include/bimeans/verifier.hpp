#ifndef BIMEANS_VERIFIER_HPP
#define BIMEANS_VERIFIER_HPP

/*!
 * \file
 * \brief Numerical stress tests over the inequality catalog.
 *
 * falsify() searches a box for points of negative margin: seeded
 * log-uniform random samples, a full grid, then axis-halving refinement
 * around the best point. Any candidate with margin <= tolerance is
 * re-evaluated with the extended-precision path, so the reported minimum is
 * not rounding noise; a violation is kept only if it stays below -tolerance.
 * Results do not depend on the number of worker threads.
 */

#include "bimeans/catalog.hpp"
#include "bimeans/means.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bimeans {

/// Invalid search or scan configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct SearchBox
{
    Interval a{1e-3, 1e3};
    Interval b{1e-3, 1e3};
    /// Defaults to the entry's domain clipped to [-8, 8] (and |.| >= 1e-6 at
    /// an open zero endpoint).
    std::optional<Interval> k;
    std::optional<Interval> beta;
};

struct VerifierConfig
{
    std::uint64_t seed = 0;
    std::size_t n_random = 10000;
    std::size_t grid_per_axis = 8;
    std::size_t refine_steps = 20;
    double tolerance = kDefaultTolerance;
    unsigned threads = 1;
    /// Violations kept in the report (sorted lexicographically); the total
    /// is always in violation_count.
    std::size_t max_reported_violations = 32;
};

struct Violation
{
    Point point;
    double min_gap;
};

struct FalsificationReport
{
    std::string spec_id;
    std::uint64_t seed = 0;
    /// +inf when no non-degenerate in-domain point was evaluated.
    double min_gap = 0.0;
    std::optional<Point> argmin;
    std::size_t samples_evaluated = 0;
    std::size_t out_of_domain = 0;
    std::vector<Violation> violations;
    std::size_t violation_count = 0;
};

/// Magnitude clip for sampled orders and the offset used at open zero bounds.
inline constexpr double kOrderClip = 8.0;
inline constexpr double kZeroClip = 1e-6;

/// Effective sampling box for `s`; throws ConfigError if it is empty.
SearchBox effective_box(const InequalitySpec& s, const SearchBox& box);

FalsificationReport falsify(const InequalitySpec& s, const SearchBox& box,
                            const VerifierConfig& cfg);

// ---------------------------------------------------------------------------

enum class MonotoneTarget { F1, F2 };

struct MonotonicityReport
{
    MonotoneTarget target;
    std::vector<double> ks;
    /// f2 values out of double range are stored as +inf (k > 0) or 0 (k < 0).
    std::vector<double> values;
    /// Indices i for which (ks[i], ks[i+1]) breaks strict monotonicity.
    std::vector<std::size_t> failures;
    /// f1 of an equal pair is constant.
    bool degenerate = false;

    bool holds() const noexcept { return failures.empty(); }
};

/// f1 = A_k must increase and f2 = (a^k+b^k)^{1/k} decrease between adjacent
/// grid points, by more than `tolerance` relative. For f2 only neighbours of
/// equal sign are compared, in the log domain, and the grid must not contain
/// 0. At large |k| and b/a the true f2 step is far below 1e-12, so strictness
/// for f2 is meaningful only with tolerance 0.
MonotonicityReport monotonicity_scan(MonotoneTarget target, const PositivePair& p,
                                     const std::vector<double>& k_grid,
                                     double tolerance = kDefaultTolerance);

struct DerivativeComparison
{
    double analytic;
    double numeric;
    double abs_dev;
    double rel_dev;

    bool within(double rel_tol, double abs_tol) const noexcept;
};

struct DerivativeReport
{
    double k;
    double h;
    DerivativeComparison f1;
    DerivativeComparison f2;
};

/// Closed-form log-derivatives against (ln f(k+h) - ln f(k-h)) / (2h).
/// Requires k != 0 and 0 < h < |k|/4.
DerivativeReport derivative_consistency(const PositivePair& p, double k, double h = 1e-5);

// ---------------------------------------------------------------------------

enum class PathKind { ContractToDiagonal, BlowUpRatio };

std::string_view to_string(PathKind p) noexcept;

struct TightnessStep
{
    int j;
    Point point;
    std::vector<double> values;
    std::vector<double> gaps;
    double min_gap;
};

struct TightnessSeries
{
    std::string spec_id;
    PathKind path;
    std::vector<TightnessStep> steps;
    bool truncated = false;
    std::string cause;

    std::vector<double> min_gaps() const;
};

/// Margins along b = a(1 + 10^-j) or b = a 10^j for j = 1..steps. Free
/// parameters default to the entry's default_k / default_beta. Gaps come from
/// the extended-precision path, since near the diagonal many of them are far
/// below double resolution. A step that leaves the domain ends the series
/// with `truncated` set.
TightnessSeries tightness_scan(const InequalitySpec& s, PathKind path, int steps,
                               double a = 1.0, std::optional<double> k = std::nullopt,
                               std::optional<double> beta = std::nullopt);

// ---------------------------------------------------------------------------

/// max over n seeded log-uniform points of |eval_mean - extended_eval| / extended_eval.
double oracle_compare(const MeanKind& kind, const SearchBox& box, std::size_t n,
                      std::uint64_t seed);

} // namespace bimeans

#endif
