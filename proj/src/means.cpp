#include "bimeans/means.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bimeans {

namespace {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_order(double k)
{
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), k);
    return std::string(buf, res.ptr);
}

double clamp_between(double v, double lo, double hi)
{
    return std::min(std::max(v, lo), hi);
}

// Orders at or above this magnitude go through pow(); below it the
// cosh form keeps the error independent of 1/k.
constexpr double kPowRouteMinOrder = 0.125;

// ln(hi/lo) for 0 < lo < hi.
double log_ratio(double lo, double hi)
{
    const double d = (hi - lo) / lo;
    return d < 1.0 ? std::log1p(d) : std::log(hi / lo);
}

// ln cosh(x) for x >= 0, accurate for small x and overflow-free for large x.
double log_cosh(double x)
{
    if (x > 20.0)
        return x - std::numbers::ln2 + std::log1p(std::exp(-2.0 * x));
    const double m = std::expm1(x);
    return std::log1p(m * m / (2.0 * (1.0 + m)));
}

// sqrt(lo hi), split only when the product leaves the normal range.
double geometric_of(double lo, double hi)
{
    const double prod = lo * hi;
    if (std::isfinite(prod) && prod >= std::numeric_limits<double>::min())
        return std::sqrt(prod);
    return std::sqrt(lo) * std::sqrt(hi);
}

} // namespace

PositivePair::PositivePair(double a, double b) : a_(a), b_(b)
{
    if (!(std::isfinite(a) && std::isfinite(b)) || !(a > 0.0) || !(b > 0.0))
        throw std::domain_error("PositivePair requires finite a > 0 and b > 0");
}

Order::Order(double k) : k_(k)
{
    if (!std::isfinite(k))
        throw std::domain_error("order must be finite");
}

PowerTransformedPair PowerTransformedPair::from_values(double x, double y)
{
    if (!(std::isfinite(x) && std::isfinite(y)) || !(x > 0.0) || !(y > 0.0))
        throw std::domain_error("transformed pair requires finite x > 0 and y > 0");
    return PowerTransformedPair(x, y);
}

MeanKind unnormalized(double k)
{
    if (k == 0.0)
        throw std::domain_error("unnormalized power requires a nonzero order");
    return kinds::UnnormalizedPower{Order(k)};
}

std::string to_string(const MeanKind& kind)
{
    return std::visit(overloaded{
        [](const kinds::PowerMean& m) { return "A_" + format_order(m.k.value()); },
        [](const kinds::Heronian&) { return std::string("He"); },
        [](const kinds::Identric&) { return std::string("I"); },
        [](const kinds::SMean&) { return std::string("S"); },
        [](const kinds::UnnormalizedPower& m) { return "f2_" + format_order(m.k.value()); },
    }, kind);
}

double power_mean(const PositivePair& p, Order k)
{
    const double lo = p.lo();
    const double hi = p.hi();
    if (lo == hi)
        return lo;
    const double kv = k.value();
    if (kv == 0.0)
        return clamp_between(geometric_of(lo, hi), lo, hi);

    // A_k = m * ((1 + t)/2)^{1/k} with t = (lo/hi)^{|k|} <= 1, where m is the
    // argument whose k-th power dominates (hi for k > 0, lo for k < 0).
    const double ak = std::abs(kv);
    if (ak < kPowRouteMinOrder) {
        // (a^k + b^k)/2 = G^k cosh(k D / 2) with D = ln(hi/lo), so
        // A_k = G exp(ln cosh(k D / 2) / k); the exponent vanishes as k -> 0.
        const double x = 0.5 * ak * log_ratio(lo, hi);
        const double g = geometric_of(lo, hi);
        return clamp_between(g * std::exp(std::copysign(log_cosh(x), kv) / ak), lo, hi);
    }

    // A_k = m ((1 + t)/2)^{1/k} with t = (lo/hi)^{|k|} <= 1, where m is the
    // argument whose k-th power dominates (hi for k > 0, lo for k < 0). The
    // sum (1 + t)/2 is carried with its rounding error.
    const double base = kv > 0.0 ? hi : lo;
    const double half_t = 0.5 * std::pow(lo / hi, ak);
    const double s = 0.5 + half_t;
    const double s_err = half_t - (s - 0.5);
    const double scaled = std::pow(s, 1.0 / kv) * (1.0 + s_err / (s * kv));
    return clamp_between(base * scaled, lo, hi);
}

double heronian(const PositivePair& p)
{
    const double lo = p.lo();
    const double hi = p.hi();
    if (lo == hi)
        return lo;
    return clamp_between((lo + hi + geometric_of(lo, hi)) / 3.0, lo, hi);
}

double identric(const PositivePair& p)
{
    const double lo = p.lo();
    const double hi = p.hi();
    if (lo == hi)
        return lo;
    // ln I = ln hi + D / expm1(D) - 1 = ln G + y coth(y) - 1, with
    // D = ln(hi/lo) and y = D/2. Near the diagonal the G form (by series)
    // keeps I >= G under rounding.
    const double d = log_ratio(lo, hi);
    const double y = 0.5 * d;
    if (y < 1e-2) {
        const double y2 = y * y;
        const double e = y2 * (1.0 / 3.0 - y2 * (1.0 / 45.0 - y2 * (2.0 / 945.0)));
        return clamp_between(geometric_of(lo, hi) * std::exp(e), lo, hi);
    }
    return clamp_between(hi * std::exp(d / std::expm1(d) - 1.0), lo, hi);
}

double s_mean(const PositivePair& p)
{
    const double lo = p.lo();
    const double hi = p.hi();
    if (lo == hi)
        return lo;
    // ln S = ln hi + r ln r / (1 + r).
    const double r = lo / hi;
    return clamp_between(hi * std::exp(r * std::log(r) / (1.0 + r)), lo, hi);
}

double unnormalized_power(const PositivePair& p, Order k)
{
    const double kv = k.value();
    if (kv == 0.0)
        throw std::domain_error("unnormalized power requires a nonzero order");
    const double v = std::exp2(1.0 / kv) * power_mean(p, k);
    if (!std::isfinite(v) || !(v > 0.0))
        throw std::range_error("unnormalized power is not representable");
    return v;
}

PowerTransformedPair power_transform(const PositivePair& p, Order k)
{
    const double kv = k.value();
    if (kv == 0.0)
        return PowerTransformedPair(1.0, 1.0);
    const double x = std::pow(p.a(), kv);
    const double y = std::pow(p.b(), kv);
    constexpr double tiny = std::numeric_limits<double>::min();
    if (!std::isfinite(x) || !std::isfinite(y) || x < tiny || y < tiny)
        throw std::range_error("power transform leaves the normal double range");
    return PowerTransformedPair(x, y);
}

namespace {

struct Shares
{
    double p;     // min(x, y) / (x + y)
    double q;     // max(x, y) / (x + y)
    double delta; // |y - x| / (x + y)
};

Shares shares(double x, double y)
{
    if (std::max(x, y) > 0x1p1000) {
        x = std::ldexp(x, -4);
        y = std::ldexp(y, -4);
    }
    const double lo = std::min(x, y);
    const double hi = std::max(x, y);
    const double s = lo + hi;
    return {lo / s, hi / s, (hi - lo) / s};
}

// p ln p + q ln q = (x ln x + y ln y)/(x + y) - ln(x + y); always <= -0.
double neg_entropy(const Shares& sh)
{
    const double head = sh.p > 0.0 ? sh.p * std::log(sh.p) : 0.0;
    return head + sh.q * std::log1p(-sh.p);
}

void require_nonzero(Order k)
{
    if (k.value() == 0.0)
        throw std::domain_error("log-derivative formulas require k != 0");
}

} // namespace

double log_derivative_f1(const PowerTransformedPair& t, Order k)
{
    require_nonzero(k);
    if (t.x() == t.y())
        return 0.0;
    const Shares sh = shares(t.x(), t.y());
    // ln 2 + p ln p + q ln q = [(1+d) ln(1+d) + (1-d) ln(1-d)] / 2
    //                        = d atanh(d) + log1p(-d^2) / 2
    double numer;
    if (sh.delta < 0.5)
        numer = sh.delta * std::atanh(sh.delta) + 0.5 * std::log1p(-sh.delta * sh.delta);
    else
        numer = neg_entropy(sh) + std::numbers::ln2;
    const double kv = k.value();
    return numer / (kv * kv);
}

double log_derivative_f2(const PowerTransformedPair& t, Order k)
{
    require_nonzero(k);
    const double kv = k.value();
    return neg_entropy(shares(t.x(), t.y())) / (kv * kv);
}

double eval_mean(const MeanKind& kind, const PositivePair& p)
{
    return std::visit(overloaded{
        [&](const kinds::PowerMean& m) { return power_mean(p, m.k); },
        [&](const kinds::Heronian&) { return heronian(p); },
        [&](const kinds::Identric&) { return identric(p); },
        [&](const kinds::SMean&) { return s_mean(p); },
        [&](const kinds::UnnormalizedPower& m) { return unnormalized_power(p, m.k); },
    }, kind);
}

} // namespace bimeans
