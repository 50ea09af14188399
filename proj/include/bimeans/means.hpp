#ifndef BIMEANS_MEANS_HPP
#define BIMEANS_MEANS_HPP

/*!
 * \file
 * \brief Bivariate means of two positive reals.
 *
 * Power means A_k (with A_0 = G and A_1 = A), the Heronian mean, the
 * identric mean, the S-mean a^{a/(a+b)} b^{b/(a+b)} and the unnormalized
 * power function (a^k + b^k)^{1/k}, together with the logarithmic
 * k-derivatives of the power-mean families.
 *
 * Every mean canonicalizes its arguments to (min, max) before evaluating,
 * so swapping a and b gives bit-identical results, and every mean of an
 * equal pair returns that value exactly.
 */

#include <string>
#include <variant>

namespace bimeans {

/// Pair of positive, finite reals. No ordering is imposed.
class PositivePair
{
public:
    /// Throws std::domain_error unless both values are finite and > 0.
    PositivePair(double a, double b);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double lo() const noexcept { return a_ < b_ ? a_ : b_; }
    double hi() const noexcept { return a_ < b_ ? b_ : a_; }
    bool equal() const noexcept { return a_ == b_; }

    PositivePair swapped() const noexcept { return PositivePair(b_, a_, Unchecked{}); }

private:
    struct Unchecked {};
    PositivePair(double a, double b, Unchecked) noexcept : a_(a), b_(b) {}

    double a_;
    double b_;
};

/// Real exponent of a power mean. Must be finite; zero is allowed.
class Order
{
public:
    explicit Order(double k);
    double value() const noexcept { return k_; }

private:
    double k_;
};

/// The pair (a^k, b^k).
class PowerTransformedPair
{
public:
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

    /// Builds (x, y) directly; both must be finite and positive.
    static PowerTransformedPair from_values(double x, double y);

private:
    PowerTransformedPair(double x, double y) noexcept : x_(x), y_(y) {}
    friend PowerTransformedPair power_transform(const PositivePair&, Order);

    double x_;
    double y_;
};

namespace kinds {
struct PowerMean { Order k; };
struct Heronian {};
struct Identric {};
struct SMean {};
struct UnnormalizedPower { Order k; };
} // namespace kinds

using MeanKind = std::variant<kinds::PowerMean, kinds::Heronian, kinds::Identric,
                              kinds::SMean, kinds::UnnormalizedPower>;

inline MeanKind arithmetic() { return kinds::PowerMean{Order(1.0)}; }
inline MeanKind geometric() { return kinds::PowerMean{Order(0.0)}; }
inline MeanKind power(double k) { return kinds::PowerMean{Order(k)}; }
inline MeanKind heronian_kind() { return kinds::Heronian{}; }
inline MeanKind identric_kind() { return kinds::Identric{}; }
inline MeanKind s_mean_kind() { return kinds::SMean{}; }
/// Throws std::domain_error for k == 0.
MeanKind unnormalized(double k);

/// Short human-readable name, e.g. "A_0.5", "He", "I", "S", "f2_2".
std::string to_string(const MeanKind& kind);

/// ((a^k + b^k)/2)^{1/k}, or sqrt(ab) for k == 0.
double power_mean(const PositivePair& p, Order k);
double heronian(const PositivePair& p);
/// exp((b ln b - a ln a)/(b - a) - 1), and a when a == b.
double identric(const PositivePair& p);
/// a^{a/(a+b)} b^{b/(a+b)}.
double s_mean(const PositivePair& p);
/// (a^k + b^k)^{1/k}; k == 0 is a domain error, overflow a range error.
double unnormalized_power(const PositivePair& p, Order k);

/// (a^k, b^k). Throws std::range_error if either over- or underflows.
PowerTransformedPair power_transform(const PositivePair& p, Order k);

/// d/dk ln A_k expressed through x = a^k, y = b^k. Zero iff x == y.
double log_derivative_f1(const PowerTransformedPair& t, Order k);
/// d/dk ln (a^k + b^k)^{1/k} expressed through x = a^k, y = b^k. Always < 0.
double log_derivative_f2(const PowerTransformedPair& t, Order k);

double eval_mean(const MeanKind& kind, const PositivePair& p);

} // namespace bimeans

#endif
