#include "bimeans/catalog.hpp"

#include "bimeans/extended.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace bimeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_bound(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

} // namespace

bool Interval::contains(double v) const noexcept
{
    if (std::isnan(v))
        return false;
    const bool above = lo_open ? v > lo : v >= lo;
    const bool below = hi_open ? v < hi : v <= hi;
    return above && below;
}

std::string Interval::describe(std::string_view var) const
{
    std::string out;
    if (std::isfinite(lo))
        out += fmt_bound(lo) + (lo_open ? " < " : " <= ");
    out += var;
    if (std::isfinite(hi))
        out += std::string(hi_open ? " < " : " <= ") + fmt_bound(hi);
    if (!std::isfinite(lo) && !std::isfinite(hi))
        out += " real";
    return out;
}

bool lexicographically_less(const Point& lhs, const Point& rhs) noexcept
{
    return std::tie(lhs.a, lhs.b, lhs.k, lhs.beta) < std::tie(rhs.a, rhs.b, rhs.k, rhs.beta);
}

bool Scale::is_unit() const noexcept
{
    return coefficient == 1.0 && exp2_const == 0.0 && exp2_inv_k == 0.0 && exp2_inv_beta == 0.0;
}

double Scale::log_value(const Point& pt) const
{
    double e2 = exp2_const;
    if (exp2_inv_k != 0.0)
        e2 += exp2_inv_k / pt.k.value();
    if (exp2_inv_beta != 0.0)
        e2 += exp2_inv_beta / pt.beta.value();
    return std::log(coefficient) + e2 * std::numbers::ln2;
}

bool Domain::contains(const Point& pt) const noexcept
{
    if (b_greater_than_a && !(pt.b > pt.a))
        return false;
    if (k && !(pt.k && k->contains(*pt.k)))
        return false;
    if (beta && !(pt.beta && beta->contains(*pt.beta)))
        return false;
    switch (relation) {
    case ParamRelation::None:
        return true;
    case ParamRelation::KLessThanBeta:
        return *pt.k < *pt.beta;
    case ParamRelation::KLessThanBetaSameSign:
        return *pt.k < *pt.beta && *pt.k != 0.0 && *pt.beta != 0.0
               && std::signbit(*pt.k) == std::signbit(*pt.beta);
    }
    return false;
}

std::string Domain::describe() const
{
    std::string out;
    auto add = [&out](const std::string& part) {
        if (!out.empty())
            out += ", ";
        out += part;
    };
    if (b_greater_than_a)
        add("b > a");
    if (k)
        add(k->describe("k"));
    if (beta)
        add(beta->describe("beta"));
    if (relation == ParamRelation::KLessThanBeta)
        add("k < beta");
    else if (relation == ParamRelation::KLessThanBetaSameSign)
        add("0 < k < beta or k < beta < 0");
    return out.empty() ? "a, b > 0" : out;
}

std::string InequalitySpec::describe() const
{
    std::string out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (i)
            out += " < ";
        out += chain[i].label;
    }
    return out + "  [" + domain.describe() + "]";
}

std::string_view to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
    case Verdict::Degenerate: return "Degenerate";
    case Verdict::OutOfDomain: return "OutOfDomain";
    }
    return "?";
}

// --------------------------------------------------------------------------
// Catalog contents

namespace {

MeanTerm term(MeanKind kind, ParamSource from = ParamSource::Fixed, int num = 1, int den = 1)
{
    return MeanTerm{num, den, KindRule{std::move(kind), from}};
}

MeanExpr expr(std::string label, std::vector<MeanTerm> terms, Scale scale = {},
              ArgTransform transform = ArgTransform::Identity, OuterPower outer = {})
{
    return MeanExpr{std::move(label), std::move(terms), scale, transform, outer};
}

MeanExpr single(std::string label, MeanKind kind, ParamSource from = ParamSource::Fixed,
                Scale scale = {}, ArgTransform transform = ArgTransform::Identity)
{
    return expr(std::move(label), {term(std::move(kind), from)}, scale, transform);
}

Interval closed(double lo, double hi) { return {lo, hi, false, false}; }
Interval left_open(double lo, double hi) { return {lo, hi, true, false}; }
Interval open(double lo, double hi) { return {lo, hi, true, true}; }
Interval reals() { return open(-kInf, kInf); }

std::vector<InequalitySpec> build_catalog()
{
    const double two_thirds = 2.0 / 3.0;
    std::vector<InequalitySpec> out;

    {
        InequalitySpec s;
        s.id = "INEQ_1_1";
        s.chain = {
            expr("a^(1-k) I(a^k,b^k)", {term(identric_kind())}, {}, ArgTransform::PowerLiftK,
                 OuterPower{true, 1.0, -1.0}),
            single("A_k", power(1.0), ParamSource::K),
        };
        s.domain.b_greater_than_a = true;
        s.domain.k = left_open(0.0, 1.0);
        s.anchor = "A_k(a,b) > a^(1-k) I(a^k,b^k) for b > a";
        s.default_k = 1.0;
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_1_2";
        s.chain = {
            single("A_k", power(1.0), ParamSource::K),
            single("I", identric_kind()),
        };
        s.domain.k = left_open(0.0, 0.5);
        s.anchor = "A_k(a,b) < I(a,b)";
        s.default_k = 0.5;
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_1_3";
        s.chain = {
            single("He(a^k,b^k)", heronian_kind(), ParamSource::Fixed, {}, ArgTransform::PowerLiftK),
            single("A_beta(a^k,b^k)", power(1.0), ParamSource::Beta, {}, ArgTransform::PowerLiftK),
            single("3 2^(-1/beta) He(a^k,b^k)", heronian_kind(), ParamSource::Fixed,
                   Scale{3.0, 0.0, 0.0, -1.0}, ArgTransform::PowerLiftK),
        };
        s.domain.k = open(0.0, kInf);
        s.domain.beta = closed(two_thirds, kInf);
        s.anchor = "He(a^k,b^k) < A_beta(a^k,b^k) < 3/2^(1/beta) He(a^k,b^k)";
        s.default_k = 1.0;
        s.default_beta = two_thirds;
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_1_4";
        s.chain = {
            single("A_k", power(1.0), ParamSource::K),
            single("S", s_mean_kind()),
            single("2^(1/k) A_k", power(1.0), ParamSource::K, Scale{1.0, 0.0, 1.0, 0.0}),
        };
        s.domain.k = left_open(0.0, 2.0);
        Domain stated;
        stated.k = closed(1.0, 2.0);
        s.stated_domain = stated;
        s.anchor = "A_k < S < 2^(1/k) A_k";
        s.note = "stated for 1 <= k <= 2; checked on 0 < k <= 2 with the stated range as a sub-claim";
        s.default_k = 2.0;
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_2_3";
        s.chain = {
            expr("(A+G)/2", {term(arithmetic(), ParamSource::Fixed, 1, 2),
                             term(geometric(), ParamSource::Fixed, 1, 2)}),
            expr("(2A+G)/3", {term(arithmetic(), ParamSource::Fixed, 2, 3),
                              term(geometric(), ParamSource::Fixed, 1, 3)}),
            single("I", identric_kind()),
        };
        s.anchor = "I > (2A+G)/3 > (A+G)/2";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_2_4";
        s.chain = {
            single("A_2/3", power(two_thirds)),
            single("3/(2 sqrt2) He", heronian_kind(), ParamSource::Fixed, Scale{3.0, -1.5, 0.0, 0.0}),
        };
        s.anchor = "A_2/3 < 3/(2 sqrt2) He";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_2_5";
        s.chain = {
            single("A_2", power(2.0)),
            single("S", s_mean_kind()),
            single("sqrt2 A_2", power(2.0), ParamSource::Fixed, Scale{1.0, 0.5, 0.0, 0.0}),
        };
        s.anchor = "A_2 < S < sqrt2 A_2";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_I_LT_A";
        s.chain = {single("I", identric_kind()), single("A", arithmetic())};
        s.anchor = "I < A, the k = 1 case of INEQ_1_1";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_HE_LT_A23";
        s.chain = {single("He", heronian_kind()), single("A_2/3", power(two_thirds))};
        s.anchor = "He < A_2/3, the lower comparison of INEQ_1_3 at k = 1, beta = 2/3";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "MONO_F1";
        s.chain = {
            single("A_k1", power(1.0), ParamSource::K),
            single("A_k2", power(1.0), ParamSource::Beta),
        };
        s.domain.k = reals();
        s.domain.beta = reals();
        s.domain.relation = ParamRelation::KLessThanBeta;
        s.anchor = "f1(k) = A_k strictly increasing in k";
        s.note = "k holds k1 and beta holds k2";
        s.default_k = 0.5;
        s.default_beta = 1.0;
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "MONO_F2";
        s.chain = {
            single("f2(k2)", unnormalized(1.0), ParamSource::Beta),
            single("f2(k1)", unnormalized(1.0), ParamSource::K),
        };
        s.domain.k = reals();
        s.domain.beta = reals();
        s.domain.relation = ParamRelation::KLessThanBetaSameSign;
        s.anchor = "f2(k) = (a^k+b^k)^(1/k) strictly decreasing in k";
        s.note = "k holds k1 and beta holds k2; d ln f2/dk < 0 for all positive a, b, "
                 "so f2 decreases on each side of k = 0, where it jumps from 0+ to +inf";
        s.default_k = 1.0;
        s.default_beta = 2.0;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<InequalitySpec> build_fixtures()
{
    std::vector<InequalitySpec> out;
    {
        InequalitySpec s;
        s.id = "INEQ_TEST_FALSE";
        s.chain = {single("A_2/3", power(2.0 / 3.0)), single("1.0 He", heronian_kind())};
        s.anchor = "negative control: INEQ_2_4 with its constant lowered to 1";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_TEST_A_LT_I";
        s.chain = {single("A", arithmetic()), single("I", identric_kind())};
        s.anchor = "negative control: A < I, INEQ_1_2 at k = 1";
        out.push_back(std::move(s));
    }
    {
        InequalitySpec s;
        s.id = "INEQ_TEST_1_2_WIDE";
        s.chain = {single("A_k", power(1.0), ParamSource::K), single("I", identric_kind())};
        s.domain.k = left_open(0.0, 1.0);
        s.anchor = "negative control: INEQ_1_2 widened to 0 < k <= 1";
        s.default_k = 1.0;
        out.push_back(std::move(s));
    }
    return out;
}

// --------------------------------------------------------------------------
// Evaluation

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

MeanKind resolve(const KindRule& rule, const Point& pt)
{
    if (rule.order_from == ParamSource::Fixed)
        return rule.kind;
    const double order = rule.order_from == ParamSource::K ? pt.k.value() : pt.beta.value();
    return std::visit(overloaded{
        [&](const kinds::PowerMean&) -> MeanKind { return power(order); },
        [&](const kinds::UnnormalizedPower&) -> MeanKind { return unnormalized(order); },
        [&](const auto& k) -> MeanKind { return k; },
    }, rule.kind);
}

void require_params(const InequalitySpec& s, const Point& pt)
{
    if (s.domain.uses_k() && !pt.k)
        throw std::invalid_argument(s.id + " needs a value for k");
    if (s.domain.uses_beta() && !pt.beta)
        throw std::invalid_argument(s.id + " needs a value for beta");
}

// value = mantissa * exp(log_scale); the scale is kept in log form so that
// factors like 2^(1/k) for small k never overflow.
struct Scaled
{
    double mantissa;
    double log_scale;
};

Scaled eval_member(const MeanExpr& e, const Point& pt)
{
    const PositivePair raw(pt.a, pt.b);
    PositivePair pair = raw;
    if (e.transform == ArgTransform::PowerLiftK) {
        const auto t = power_transform(raw, Order(pt.k.value()));
        pair = PositivePair(t.x(), t.y());
    }
    double sum = 0.0;
    for (const auto& t : e.terms) {
        const double v = eval_mean(resolve(t.mean, pt), pair);
        sum += t.weight_num == t.weight_den ? v : v * t.weight_num / t.weight_den;
    }
    if (e.outer.enabled) {
        double ex = e.outer.constant;
        if (e.outer.k_coeff != 0.0)
            ex += e.outer.k_coeff * pt.k.value();
        sum *= std::pow(pt.a, ex);
    }
    if (!std::isfinite(sum) || !(sum > 0.0))
        throw std::range_error(e.label + " is not representable");
    return {sum, e.scale.is_unit() ? 0.0 : e.scale.log_value(pt)};
}

double relative_gap(const Scaled& lower, const Scaled& upper)
{
    const double dl = lower.log_scale - upper.log_scale;
    if (dl == 0.0)
        return (upper.mantissa - lower.mantissa) / upper.mantissa;
    return -std::expm1(std::log(lower.mantissa / upper.mantissa) + dl);
}

Wide wide_member(const MeanExpr& e, const Point& pt)
{
    Wide x(pt.a);
    Wide y(pt.b);
    if (e.transform == ArgTransform::PowerLiftK) {
        const Wide k(pt.k.value());
        x = pow(x, k);
        y = pow(y, k);
    }
    Wide sum = 0;
    for (const auto& t : e.terms)
        sum += extended_eval(resolve(t.mean, pt), x, y) * t.weight_num / t.weight_den;
    if (e.outer.enabled) {
        Wide ex(e.outer.constant);
        if (e.outer.k_coeff != 0.0)
            ex += Wide(e.outer.k_coeff) * Wide(pt.k.value());
        sum *= pow(Wide(pt.a), ex);
    }
    if (!e.scale.is_unit()) {
        Wide e2(e.scale.exp2_const);
        if (e.scale.exp2_inv_k != 0.0)
            e2 += Wide(e.scale.exp2_inv_k) / Wide(pt.k.value());
        if (e.scale.exp2_inv_beta != 0.0)
            e2 += Wide(e.scale.exp2_inv_beta) / Wide(pt.beta.value());
        sum *= Wide(e.scale.coefficient) * pow(Wide(2), e2);
    }
    return sum;
}

Verdict classify(const MarginReport& r, double tolerance)
{
    if (r.point.a == r.point.b)
        return Verdict::Degenerate;
    if (r.min_gap < -tolerance)
        return Verdict::Violated;
    if (r.min_gap > 0.0)
        return Verdict::Holds;
    return Verdict::Inconclusive;
}

// Shared prologue: parameter check, domain check. Returns false (with the
// report filled in) when evaluation must not proceed.
bool admit(const InequalitySpec& s, const Point& pt, MarginReport& r)
{
    require_params(s, pt);
    r.point = pt;
    if (!(std::isfinite(pt.a) && std::isfinite(pt.b) && pt.a > 0.0 && pt.b > 0.0)) {
        r.verdict = Verdict::OutOfDomain;
        r.cause = "a and b must be finite and positive";
        return false;
    }
    if (!s.domain.contains(pt)) {
        r.verdict = Verdict::OutOfDomain;
        r.cause = "point outside " + s.domain.describe();
        return false;
    }
    return true;
}

void finish(MarginReport& r, double tolerance)
{
    r.min_gap = std::numeric_limits<double>::infinity();
    for (double g : r.gaps)
        r.min_gap = std::min(r.min_gap, g);
    r.verdict = classify(r, tolerance);
}

} // namespace

const std::vector<InequalitySpec>& catalog()
{
    static const std::vector<InequalitySpec> entries = build_catalog();
    return entries;
}

const std::vector<InequalitySpec>& test_fixtures()
{
    static const std::vector<InequalitySpec> entries = build_fixtures();
    return entries;
}

const InequalitySpec* find_spec(std::string_view id)
{
    for (const auto* list : {&catalog(), &test_fixtures()})
        for (const auto& s : *list)
            if (s.id == id)
                return &s;
    return nullptr;
}

const InequalitySpec& spec(std::string_view id)
{
    for (const auto& s : catalog())
        if (s.id == id)
            return s;
    throw std::out_of_range("unknown inequality id: " + std::string(id));
}

std::optional<InequalitySpec> stated_subclaim(const InequalitySpec& s)
{
    if (!s.stated_domain)
        return std::nullopt;
    InequalitySpec sub = s;
    sub.id = s.id + ":stated";
    sub.domain = *s.stated_domain;
    sub.stated_domain.reset();
    return sub;
}

MarginReport margin(const InequalitySpec& s, const Point& pt, double tolerance)
{
    MarginReport r;
    if (!admit(s, pt, r))
        return r;
    std::vector<Scaled> members;
    members.reserve(s.chain.size());
    try {
        for (const auto& e : s.chain)
            members.push_back(eval_member(e, pt));
    } catch (const std::exception& ex) {
        r.verdict = Verdict::OutOfDomain;
        r.cause = ex.what();
        return r;
    }
    for (const auto& m : members)
        r.values.push_back(m.mantissa * std::exp(m.log_scale));
    for (std::size_t i = 0; i + 1 < members.size(); ++i)
        r.gaps.push_back(relative_gap(members[i], members[i + 1]));
    finish(r, tolerance);
    return r;
}

MarginReport margin_extended(const InequalitySpec& s, const Point& pt, double tolerance)
{
    MarginReport r;
    if (!admit(s, pt, r))
        return r;
    std::vector<Wide> members;
    members.reserve(s.chain.size());
    try {
        for (const auto& e : s.chain)
            members.push_back(wide_member(e, pt));
    } catch (const std::exception& ex) {
        r.verdict = Verdict::OutOfDomain;
        r.cause = ex.what();
        return r;
    }
    for (const auto& m : members)
        r.values.push_back(m.convert_to<double>());
    for (std::size_t i = 0; i + 1 < members.size(); ++i)
        r.gaps.push_back(((members[i + 1] - members[i]) / members[i + 1]).convert_to<double>());
    finish(r, tolerance);
    return r;
}

Verdict check(const InequalitySpec& s, const Point& pt, double tolerance)
{
    const MarginReport r = margin(s, pt, tolerance);
    if (r.verdict == Verdict::OutOfDomain || r.verdict == Verdict::Degenerate)
        return r.verdict;
    if (r.min_gap > tolerance)
        return Verdict::Holds;
    if (r.min_gap < -tolerance)
        return Verdict::Violated;
    return Verdict::Inconclusive;
}

} // namespace bimeans
