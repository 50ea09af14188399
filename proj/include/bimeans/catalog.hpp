#ifndef BIMEANS_CATALOG_HPP
#define BIMEANS_CATALOG_HPP

/*!
 * \file
 * \brief Declarative catalog of the mean inequalities under test.
 *
 * Each entry is a chain e_0 < e_1 < ... of mean expressions evaluated at a
 * point (a, b, k, beta). An expression is
 *
 *   scale(k, beta) * a^{c0 + c1 k} * sum_i w_i M_i(a', b')
 *
 * where (a', b') is either (a, b) or (a^k, b^k) and each M_i is a mean whose
 * order may be fixed or taken from k or beta. Entries with two free orders
 * (the monotonicity claims) store the smaller order in k and the larger in
 * beta.
 *
 * Margins are relative gaps g_i = (e_{i+1} - e_i) / e_{i+1}; positive means
 * the inequality holds at the point.
 */

#include "bimeans/means.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bimeans {

struct Interval
{
    double lo;
    double hi;
    bool lo_open = false;
    bool hi_open = false;

    bool contains(double v) const noexcept;
    std::string describe(std::string_view var) const;
};

/// Evaluation point; k and beta are present only when the entry uses them.
struct Point
{
    double a;
    double b;
    std::optional<double> k;
    std::optional<double> beta;
};

/// Lexicographic order on (a, b, k, beta) with absent < present.
bool lexicographically_less(const Point& lhs, const Point& rhs) noexcept;

enum class ParamSource { Fixed, K, Beta };

/// A mean whose order may be bound to a free parameter.
struct KindRule
{
    MeanKind kind;
    ParamSource order_from = ParamSource::Fixed;
};

struct MeanTerm
{
    int weight_num = 1;
    int weight_den = 1;
    KindRule mean;
};

/// coefficient * 2^(exp2_const + exp2_inv_k / k + exp2_inv_beta / beta)
struct Scale
{
    double coefficient = 1.0;
    double exp2_const = 0.0;
    double exp2_inv_k = 0.0;
    double exp2_inv_beta = 0.0;

    bool is_unit() const noexcept;
    double log_value(const Point& pt) const;
};

enum class ArgTransform { Identity, PowerLiftK };

/// Optional factor a^(constant + k_coeff * k), a being the first argument.
struct OuterPower
{
    bool enabled = false;
    double constant = 0.0;
    double k_coeff = 0.0;
};

struct MeanExpr
{
    std::string label;
    std::vector<MeanTerm> terms;
    Scale scale;
    ArgTransform transform = ArgTransform::Identity;
    OuterPower outer;
};

enum class ParamRelation {
    None,
    KLessThanBeta,
    KLessThanBetaSameSign, // both nonzero with equal sign
};

struct Domain
{
    bool b_greater_than_a = false;
    std::optional<Interval> k;
    std::optional<Interval> beta;
    ParamRelation relation = ParamRelation::None;

    bool uses_k() const noexcept { return k.has_value(); }
    bool uses_beta() const noexcept { return beta.has_value(); }
    bool contains(const Point& pt) const noexcept;
    std::string describe() const;
};

struct InequalitySpec
{
    std::string id;
    std::vector<MeanExpr> chain;
    Domain domain;
    std::string anchor;
    std::string note;
    /// Narrower domain as originally stated, checked as a separate sub-claim.
    std::optional<Domain> stated_domain;
    /// Parameters used by scans when the caller supplies none.
    std::optional<double> default_k;
    std::optional<double> default_beta;

    std::string describe() const;
};

enum class Verdict { Holds, Violated, Inconclusive, Degenerate, OutOfDomain };

std::string_view to_string(Verdict v) noexcept;

struct MarginReport
{
    Point point;
    std::vector<double> values;
    std::vector<double> gaps;
    double min_gap = 0.0;
    Verdict verdict = Verdict::OutOfDomain;
    std::string cause;
};

inline constexpr double kDefaultTolerance = 1e-12;

/// The eleven catalog entries, in a fixed order.
const std::vector<InequalitySpec>& catalog();

/// Deliberately false or widened entries used as negative controls.
const std::vector<InequalitySpec>& test_fixtures();

/// Looks up an id in the catalog, then in the fixtures. nullptr if unknown.
const InequalitySpec* find_spec(std::string_view id);

/// Catalog entry by id; throws std::out_of_range if unknown.
const InequalitySpec& spec(std::string_view id);

/// The sub-claim over `stated_domain`, with id "<id>:stated".
std::optional<InequalitySpec> stated_subclaim(const InequalitySpec& s);

/// Double-precision margin. Verdict: Degenerate if a == b, Violated if
/// min_gap < -tolerance, Holds if min_gap > 0, otherwise Inconclusive.
/// Throws std::invalid_argument if a free parameter of `s` is missing.
MarginReport margin(const InequalitySpec& s, const Point& pt,
                    double tolerance = kDefaultTolerance);

/// Same as margin() with every chain member evaluated by extended_eval().
MarginReport margin_extended(const InequalitySpec& s, const Point& pt,
                             double tolerance = kDefaultTolerance);

/// Three-valued decision with a noise band: Holds iff min_gap > tolerance,
/// Violated iff min_gap < -tolerance, Inconclusive in between. Degenerate and
/// OutOfDomain pass through from margin().
Verdict check(const InequalitySpec& s, const Point& pt,
              double tolerance = kDefaultTolerance);

} // namespace bimeans

#endif
