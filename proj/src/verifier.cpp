#include "bimeans/verifier.hpp"

#include "bimeans/extended.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace bimeans {

namespace {

void require_positive_range(const Interval& iv, const char* name)
{
    if (!(std::isfinite(iv.lo) && std::isfinite(iv.hi)) || !(iv.lo > 0.0) || !(iv.lo < iv.hi))
        throw ConfigError(std::string(name) + " range must satisfy 0 < lo < hi < inf");
}

// Intersects the requested range with the domain interval and the sampling
// clip. Open endpoints at zero move to +/-kZeroClip.
Interval sampling_range(const Interval& domain, const std::optional<Interval>& requested,
                        const char* name)
{
    double lo = std::max(domain.lo, -kOrderClip);
    double hi = std::min(domain.hi, kOrderClip);
    if (domain.lo_open && domain.lo == 0.0)
        lo = std::max(lo, kZeroClip);
    if (domain.hi_open && domain.hi == 0.0)
        hi = std::min(hi, -kZeroClip);
    if (requested) {
        if (!(std::isfinite(requested->lo) && std::isfinite(requested->hi)) || requested->lo > requested->hi)
            throw ConfigError(std::string(name) + " range must be finite with lo <= hi");
        lo = std::max(lo, requested->lo);
        hi = std::min(hi, requested->hi);
    }
    if (!(lo <= hi))
        throw ConfigError(std::string(name) + " range does not meet the inequality's domain");
    return Interval{lo, hi};
}

struct Sampler
{
    const InequalitySpec& spec;
    SearchBox box;

    Point from_unit(double ua, double ub, double uk, double ubeta) const
    {
        Point pt;
        pt.a = log_lerp(box.a, ua);
        pt.b = log_lerp(box.b, ub);
        if (box.k)
            pt.k = lerp(*box.k, uk);
        if (box.beta)
            pt.beta = lerp(*box.beta, ubeta);
        return repair(pt);
    }

    // Maps a point onto the ordered configuration the domain asks for.
    Point repair(Point pt) const
    {
        const Domain& d = spec.domain;
        if (d.b_greater_than_a && pt.a > pt.b)
            std::swap(pt.a, pt.b);
        if (d.relation == ParamRelation::KLessThanBetaSameSign && pt.k && pt.beta
            && std::signbit(*pt.k) != std::signbit(*pt.beta) && box.beta->contains(-*pt.beta))
            pt.beta = -*pt.beta;
        if (d.relation != ParamRelation::None && pt.k && pt.beta && *pt.k > *pt.beta)
            std::swap(*pt.k, *pt.beta);
        return pt;
    }

    static double log_lerp(const Interval& iv, double u)
    {
        if (u <= 0.0)
            return iv.lo;
        if (u >= 1.0)
            return iv.hi;
        return std::exp(std::log(iv.lo) + u * (std::log(iv.hi) - std::log(iv.lo)));
    }

    static double lerp(const Interval& iv, double u)
    {
        if (u <= 0.0)
            return iv.lo;
        if (u >= 1.0)
            return iv.hi;
        return iv.lo + u * (iv.hi - iv.lo);
    }
};

struct Best
{
    double gap = std::numeric_limits<double>::infinity();
    std::optional<Point> point;

    bool offer(double g, const Point& pt)
    {
        if (g < gap || (g == gap && point && lexicographically_less(pt, *point)) || (g == gap && !point)) {
            gap = g;
            point = pt;
            return true;
        }
        return false;
    }
};

struct Tally
{
    Best best;
    std::vector<Violation> violations;
    std::size_t evaluated = 0;
    std::size_t out_of_domain = 0;

    void merge(const Tally& other)
    {
        if (other.best.point)
            best.offer(other.best.gap, *other.best.point);
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
        evaluated += other.evaluated;
        out_of_domain += other.out_of_domain;
    }
};

// Adjudicated margin of one point; nullopt for out-of-domain or degenerate.
std::optional<double> probe(const InequalitySpec& s, const Point& pt, double tol, Tally& tally)
{
    ++tally.evaluated;
    const MarginReport r = margin(s, pt, tol);
    if (r.verdict == Verdict::OutOfDomain) {
        ++tally.out_of_domain;
        return std::nullopt;
    }
    if (r.verdict == Verdict::Degenerate)
        return std::nullopt;
    double gap = r.min_gap;
    // Within the noise band the double margin cannot be trusted either way.
    if (gap <= tol) {
        const MarginReport ext = margin_extended(s, pt, tol);
        if (ext.verdict != Verdict::OutOfDomain)
            gap = ext.min_gap;
        if (gap < -tol)
            tally.violations.push_back({pt, gap});
    }
    return gap;
}

Tally evaluate_all(const InequalitySpec& s, const std::vector<Point>& points, double tol,
                   unsigned threads)
{
    auto run_chunk = [&](std::size_t begin, std::size_t end) {
        Tally t;
        for (std::size_t i = begin; i < end; ++i)
            if (auto g = probe(s, points[i], tol, t))
                t.best.offer(*g, points[i]);
        return t;
    };
    const std::size_t n = points.size();
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (workers == 1)
        return run_chunk(0, n);

    std::vector<Tally> partial(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] { partial[w] = run_chunk(begin, end); });
        }
    }
    Tally total;
    for (const auto& t : partial)
        total.merge(t);
    return total;
}

std::vector<Point> grid_points(const Sampler& sampler, std::size_t per_axis)
{
    const bool has_k = sampler.box.k.has_value();
    const bool has_beta = sampler.box.beta.has_value();
    const std::size_t nk = has_k ? per_axis : 1;
    const std::size_t nb = has_beta ? per_axis : 1;
    const double denom = static_cast<double>(per_axis - 1);
    std::vector<Point> pts;
    pts.reserve(per_axis * per_axis * nk * nb);
    for (std::size_t ia = 0; ia < per_axis; ++ia)
        for (std::size_t ib = 0; ib < per_axis; ++ib)
            for (std::size_t ik = 0; ik < nk; ++ik)
                for (std::size_t ibeta = 0; ibeta < nb; ++ibeta)
                    pts.push_back(sampler.from_unit(ia / denom, ib / denom, ik / denom, ibeta / denom));
    return pts;
}

} // namespace

SearchBox effective_box(const InequalitySpec& s, const SearchBox& box)
{
    SearchBox out;
    require_positive_range(box.a, "a");
    require_positive_range(box.b, "b");
    out.a = Interval{box.a.lo, box.a.hi};
    out.b = Interval{box.b.lo, box.b.hi};
    if (s.domain.k)
        out.k = sampling_range(*s.domain.k, box.k, "k");
    if (s.domain.beta)
        out.beta = sampling_range(*s.domain.beta, box.beta, "beta");
    if (s.domain.b_greater_than_a && !(std::max(out.a.hi, out.b.hi) > std::min(out.a.lo, out.b.lo)))
        throw ConfigError(s.id + ": box contains no pair with b > a");
    if (s.domain.relation != ParamRelation::None && out.k && out.beta
        && !(std::max(out.k->hi, out.beta->hi) > std::min(out.k->lo, out.beta->lo)))
        throw ConfigError(s.id + ": box contains no orders with k < beta");
    return out;
}

FalsificationReport falsify(const InequalitySpec& s, const SearchBox& box, const VerifierConfig& cfg)
{
    if (cfg.grid_per_axis < 2)
        throw ConfigError("grid_per_axis must be at least 2");
    if (!(cfg.tolerance >= 0.0))
        throw ConfigError("tolerance must be nonnegative");
    const Sampler sampler{s, effective_box(s, box)};

    std::vector<Point> points;
    points.reserve(cfg.n_random);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < cfg.n_random; ++i) {
        const double ua = unit(rng);
        const double ub = unit(rng);
        const double uk = unit(rng);
        const double ubeta = unit(rng);
        points.push_back(sampler.from_unit(ua, ub, uk, ubeta));
    }
    const auto grid = grid_points(sampler, cfg.grid_per_axis);
    points.insert(points.end(), grid.begin(), grid.end());

    Tally tally = evaluate_all(s, points, cfg.tolerance, cfg.threads);

    // Axis-halving descent around the incumbent: a and b move in log space,
    // orders linearly.
    if (tally.best.point && cfg.refine_steps > 0) {
        double span_a = std::log(sampler.box.a.hi / sampler.box.a.lo);
        double span_b = std::log(sampler.box.b.hi / sampler.box.b.lo);
        double span_k = sampler.box.k ? sampler.box.k->hi - sampler.box.k->lo : 0.0;
        double span_beta = sampler.box.beta ? sampler.box.beta->hi - sampler.box.beta->lo : 0.0;
        auto clampv = [](double v, const Interval& iv) { return std::clamp(v, iv.lo, iv.hi); };
        for (std::size_t step = 0; step < cfg.refine_steps; ++step) {
            span_a *= 0.5;
            span_b *= 0.5;
            span_k *= 0.5;
            span_beta *= 0.5;
            for (int axis = 0; axis < 4; ++axis) {
                for (double dir : {-1.0, 1.0}) {
                    Point cand = *tally.best.point;
                    switch (axis) {
                    case 0:
                        cand.a = clampv(cand.a * std::exp(dir * span_a), sampler.box.a);
                        break;
                    case 1:
                        cand.b = clampv(cand.b * std::exp(dir * span_b), sampler.box.b);
                        break;
                    case 2:
                        if (!cand.k)
                            continue;
                        cand.k = clampv(*cand.k + dir * span_k, *sampler.box.k);
                        break;
                    default:
                        if (!cand.beta)
                            continue;
                        cand.beta = clampv(*cand.beta + dir * span_beta, *sampler.box.beta);
                        break;
                    }
                    cand = sampler.repair(cand);
                    if (auto g = probe(s, cand, cfg.tolerance, tally))
                        tally.best.offer(*g, cand);
                }
            }
        }
    }

    auto& v = tally.violations;
    std::sort(v.begin(), v.end(), [](const Violation& l, const Violation& r) {
        return lexicographically_less(l.point, r.point);
    });
    v.erase(std::unique(v.begin(), v.end(), [](const Violation& l, const Violation& r) {
        return !lexicographically_less(l.point, r.point) && !lexicographically_less(r.point, l.point);
    }), v.end());

    FalsificationReport rep;
    rep.spec_id = s.id;
    rep.seed = cfg.seed;
    rep.min_gap = tally.best.gap;
    rep.argmin = tally.best.point;
    rep.samples_evaluated = tally.evaluated;
    rep.out_of_domain = tally.out_of_domain;
    rep.violation_count = v.size();
    if (v.size() > cfg.max_reported_violations)
        v.resize(cfg.max_reported_violations);
    rep.violations = std::move(v);
    return rep;
}

// ---------------------------------------------------------------------------

namespace {

// ln f2(k) - ln m, where m = max(a, b) for k > 0 and min(a, b) for k < 0:
// f2 = m (1 + t)^{1/k} with t = (min/max)^{|k|}.
double log_f2_offset(const PositivePair& p, double k)
{
    const double t = std::pow(p.lo() / p.hi(), std::abs(k));
    return std::log1p(t) / k;
}

} // namespace

MonotonicityReport monotonicity_scan(MonotoneTarget target, const PositivePair& p,
                                     const std::vector<double>& k_grid, double tolerance)
{
    if (k_grid.empty())
        throw ConfigError("k grid is empty");
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        if (!std::isfinite(k_grid[i]))
            throw ConfigError("k grid values must be finite");
        if (i > 0 && !(k_grid[i - 1] < k_grid[i]))
            throw ConfigError("k grid must be strictly increasing");
        if (target == MonotoneTarget::F2 && k_grid[i] == 0.0)
            throw ConfigError("f2 is undefined at k = 0");
    }

    MonotonicityReport rep{target, k_grid, {}, {}, false};
    rep.values.reserve(k_grid.size());
    for (double k : k_grid) {
        if (target == MonotoneTarget::F1) {
            rep.values.push_back(power_mean(p, Order(k)));
            continue;
        }
        // 2^{1/k} leaves the double range for |k| < 1/1024; the comparison
        // below works in the log domain and does not need the value.
        try {
            rep.values.push_back(unnormalized_power(p, Order(k)));
        } catch (const std::range_error&) {
            rep.values.push_back(k > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        }
    }

    if (target == MonotoneTarget::F1 && p.equal()) {
        rep.degenerate = true;
        return rep;
    }
    for (std::size_t i = 0; i + 1 < k_grid.size(); ++i) {
        const double lo = rep.values[i];
        const double hi = rep.values[i + 1];
        bool ok;
        if (target == MonotoneTarget::F1) {
            ok = (hi - lo) / hi > tolerance;
        } else {
            // f2 jumps from 0+ to +inf across k = 0.
            if (std::signbit(k_grid[i]) != std::signbit(k_grid[i + 1]))
                continue;
            // The values themselves round together at large |k| and b/a.
            const double d = log_f2_offset(p, k_grid[i]) - log_f2_offset(p, k_grid[i + 1]);
            ok = -std::expm1(-d) > tolerance;
        }
        if (!ok)
            rep.failures.push_back(i);
    }
    return rep;
}

bool DerivativeComparison::within(double rel_tol, double abs_tol) const noexcept
{
    return abs_dev <= std::max(rel_tol * std::abs(analytic), abs_tol);
}

namespace {

DerivativeComparison compare(double analytic, double numeric)
{
    const double dev = std::abs(analytic - numeric);
    return {analytic, numeric, dev, analytic != 0.0 ? dev / std::abs(analytic) : dev};
}

} // namespace

DerivativeReport derivative_consistency(const PositivePair& p, double k, double h)
{
    if (!std::isfinite(k) || k == 0.0)
        throw ConfigError("derivative check requires a finite k != 0");
    if (!(h > 0.0) || !(h < std::abs(k) / 4.0))
        throw ConfigError("step h must satisfy 0 < h < |k|/4");

    const Order order(k);
    const auto t = power_transform(p, order);
    const double f1 = log_derivative_f1(t, order);
    const double f2 = log_derivative_f2(t, order);

    const Order up(k + h);
    const Order down(k - h);
    const double fd1 = (std::log(power_mean(p, up)) - std::log(power_mean(p, down))) / (2.0 * h);
    const double fd2 = (std::log(unnormalized_power(p, up)) - std::log(unnormalized_power(p, down))) / (2.0 * h);
    return {k, h, compare(f1, fd1), compare(f2, fd2)};
}

// ---------------------------------------------------------------------------

std::string_view to_string(PathKind p) noexcept
{
    return p == PathKind::ContractToDiagonal ? "diagonal" : "ratio";
}

std::vector<double> TightnessSeries::min_gaps() const
{
    std::vector<double> out;
    out.reserve(steps.size());
    for (const auto& s : steps)
        out.push_back(s.min_gap);
    return out;
}

TightnessSeries tightness_scan(const InequalitySpec& s, PathKind path, int steps, double a,
                               std::optional<double> k, std::optional<double> beta)
{
    if (steps < 1)
        throw ConfigError("tightness scan needs at least one step");
    if (!(std::isfinite(a) && a > 0.0))
        throw ConfigError("base point a must be finite and positive");
    if (s.domain.uses_k() && !k)
        k = s.default_k;
    if (s.domain.uses_beta() && !beta)
        beta = s.default_beta;
    if ((s.domain.uses_k() && !k) || (s.domain.uses_beta() && !beta))
        throw ConfigError(s.id + ": free parameters need values");

    TightnessSeries series{s.id, path, {}, false, {}};
    for (int j = 1; j <= steps; ++j) {
        const double b = path == PathKind::ContractToDiagonal ? a * (1.0 + std::pow(10.0, -j))
                                                              : a * std::pow(10.0, j);
        Point pt{a, b, s.domain.uses_k() ? k : std::nullopt,
                 s.domain.uses_beta() ? beta : std::nullopt};
        const MarginReport r = margin_extended(s, pt);
        if (r.verdict == Verdict::OutOfDomain) {
            series.truncated = true;
            series.cause = "step " + std::to_string(j) + ": " + r.cause;
            break;
        }
        series.steps.push_back({j, pt, r.values, r.gaps, r.min_gap});
    }
    return series;
}

// ---------------------------------------------------------------------------

double oracle_compare(const MeanKind& kind, const SearchBox& box, std::size_t n, std::uint64_t seed)
{
    require_positive_range(box.a, "a");
    require_positive_range(box.b, "b");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ua = unit(rng);
        const double ub = unit(rng);
        const PositivePair p(Sampler::log_lerp(box.a, ua), Sampler::log_lerp(box.b, ub));
        const Wide ref = extended_eval(kind, p);
        const Wide dev = abs(Wide(eval_mean(kind, p)) - ref) / ref;
        worst = std::max(worst, dev.convert_to<double>());
    }
    return worst;
}

} // namespace bimeans
