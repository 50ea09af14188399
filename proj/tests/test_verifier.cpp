#include "bimeans/verifier.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <algorithm>
#include <random>

using namespace bimeans;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

SearchBox box_ab(double lo, double hi)
{
    SearchBox box;
    box.a = Interval{lo, hi};
    box.b = Interval{lo, hi};
    return box;
}

void require_same(const FalsificationReport& x, const FalsificationReport& y)
{
    CHECK(x.min_gap == y.min_gap);
    REQUIRE(x.argmin.has_value() == y.argmin.has_value());
    if (x.argmin) {
        CHECK(x.argmin->a == y.argmin->a);
        CHECK(x.argmin->b == y.argmin->b);
        CHECK(x.argmin->k == y.argmin->k);
        CHECK(x.argmin->beta == y.argmin->beta);
    }
    CHECK(x.samples_evaluated == y.samples_evaluated);
    CHECK(x.out_of_domain == y.out_of_domain);
    CHECK(x.violation_count == y.violation_count);
    REQUIRE(x.violations.size() == y.violations.size());
    for (std::size_t i = 0; i < x.violations.size(); ++i) {
        CHECK(x.violations[i].min_gap == y.violations[i].min_gap);
        CHECK(x.violations[i].point.a == y.violations[i].point.a);
        CHECK(x.violations[i].point.b == y.violations[i].point.b);
    }
}

} // namespace

TEST_CASE("falsify: a true inequality has no violations")
{
    VerifierConfig cfg;
    cfg.seed = 42;
    cfg.n_random = 100000;
    const auto r = falsify(spec("INEQ_2_5"), box_ab(1e-3, 1e3), cfg);
    CHECK(r.spec_id == "INEQ_2_5");
    CHECK(r.seed == 42);
    CHECK(r.min_gap > 0.0);
    CHECK(r.violations.empty());
    CHECK(r.violation_count == 0);
    CHECK(r.argmin.has_value());
    CHECK(r.samples_evaluated >= 100000 + 64);
}

TEST_CASE("falsify: every catalog entry survives 10^4 samples")
{
    VerifierConfig cfg;
    cfg.seed = 5;
    for (const auto& s : catalog()) {
        CAPTURE(s.id);
        const auto r = falsify(s, SearchBox{}, cfg);
        CHECK(r.violations.empty());
        CHECK(r.min_gap >= -cfg.tolerance);
    }
}

TEST_CASE("falsify: the widened INEQ_1_2 claim is refuted")
{
    VerifierConfig cfg;
    cfg.seed = 3;
    const auto r = falsify(*find_spec("INEQ_TEST_1_2_WIDE"), box_ab(1.0, 1e6), cfg);
    CHECK(r.violation_count > 0);
    CHECK_FALSE(r.violations.empty());
    CHECK(r.min_gap < -cfg.tolerance);
    REQUIRE(r.argmin);
    CHECK(*r.argmin->k > 0.5);
}

TEST_CASE("falsify: violations are sound, sorted and capped")
{
    VerifierConfig cfg;
    cfg.seed = 1;
    cfg.n_random = 1000;
    const auto& s = *find_spec("INEQ_TEST_FALSE");
    const auto r = falsify(s, SearchBox{}, cfg);
    CHECK(r.violation_count > cfg.max_reported_violations);
    REQUIRE(r.violations.size() == cfg.max_reported_violations);
    for (std::size_t i = 0; i < r.violations.size(); ++i) {
        const auto& v = r.violations[i];
        CHECK(v.min_gap < -cfg.tolerance);
        CHECK(margin_extended(s, v.point).min_gap < -cfg.tolerance);
        if (i > 0)
            CHECK(lexicographically_less(r.violations[i - 1].point, v.point));
    }
    // violations nonempty iff minGap < -tolerance
    CHECK(r.min_gap < -cfg.tolerance);
}

TEST_CASE("falsify: corner grid accounting")
{
    VerifierConfig cfg;
    cfg.n_random = 0;
    cfg.grid_per_axis = 2;
    cfg.refine_steps = 0;
    CHECK(falsify(spec("INEQ_2_5"), SearchBox{}, cfg).samples_evaluated == 4);
    CHECK(falsify(spec("INEQ_1_2"), SearchBox{}, cfg).samples_evaluated == 8);
    CHECK(falsify(spec("INEQ_1_3"), SearchBox{}, cfg).samples_evaluated == 16);
    CHECK(falsify(spec("MONO_F2"), SearchBox{}, cfg).samples_evaluated == 16);
}

TEST_CASE("falsify: results do not depend on the thread count")
{
    for (const char* id : {"INEQ_1_3", "MONO_F1", "INEQ_TEST_FALSE"}) {
        CAPTURE(id);
        VerifierConfig cfg;
        cfg.seed = 42;
        cfg.n_random = 5000;
        const auto& s = *find_spec(id);
        const auto one = falsify(s, SearchBox{}, cfg);
        cfg.threads = 4;
        const auto four = falsify(s, SearchBox{}, cfg);
        cfg.threads = 3;
        const auto three = falsify(s, SearchBox{}, cfg);
        require_same(one, four);
        require_same(one, three);
    }
}

TEST_CASE("falsify: configuration errors")
{
    VerifierConfig cfg;
    SearchBox box;
    box.k = Interval{2.0, 3.0};
    CHECK_THROWS_AS(falsify(spec("INEQ_1_2"), box, cfg), ConfigError);
    CHECK_THROWS_AS(falsify(spec("INEQ_2_5"), box_ab(2.0, 1.0), cfg), ConfigError);
    CHECK_THROWS_AS(falsify(spec("INEQ_2_5"), box_ab(0.0, 1.0), cfg), ConfigError);
    cfg.grid_per_axis = 1;
    CHECK_THROWS_AS(falsify(spec("INEQ_2_5"), SearchBox{}, cfg), ConfigError);
    cfg.grid_per_axis = 8;
    cfg.tolerance = -1.0;
    CHECK_THROWS_AS(falsify(spec("INEQ_2_5"), SearchBox{}, cfg), ConfigError);
}

TEST_CASE("monotonicity_scan examples")
{
    const PositivePair p(1, 2);
    const auto f1 = monotonicity_scan(MonotoneTarget::F1, p, {-2, -1, -0.5, 0, 0.5, 1, 2});
    CHECK(f1.holds());
    CHECK_FALSE(f1.degenerate);
    REQUIRE(f1.values.size() == 7);
    CHECK(f1.values[3] == doctest::Approx(std::numbers::sqrt2).epsilon(1e-15));
    CHECK(f1.values[4] == doctest::Approx(1.4571067811865475).epsilon(1e-15));
    CHECK(f1.values[5] == 1.5);

    const auto f2 = monotonicity_scan(MonotoneTarget::F2, p, {0.5, 1, 2});
    CHECK(f2.holds());
    CHECK(f2.values[0] == doctest::Approx(5.8284271247461901).epsilon(1e-15));
    CHECK(f2.values[1] == 3.0);
    CHECK(f2.values[2] == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));

    // 411.26140919149884 -> 411.2614091914989 in double, yet still decreasing
    const PositivePair wide(1.0, 3480.0);
    CHECK(monotonicity_scan(MonotoneTarget::F2, wide, {4.5, 5.0, 5.4, 7.9}, 0.0).holds());
    CHECK_FALSE(monotonicity_scan(MonotoneTarget::F2, wide, {4.5, 5.0, 5.4, 7.9}).holds());

    const auto eq = monotonicity_scan(MonotoneTarget::F1, PositivePair(3, 3), {-1, 0, 1, 4});
    CHECK(eq.degenerate);
    for (double v : eq.values)
        CHECK(v == 3.0);

    // equal pair: f2 still decreases, 2^{1/k} * 3
    CHECK(monotonicity_scan(MonotoneTarget::F2, PositivePair(3, 3), {1, 2, 4}).holds());

    const auto tiny = monotonicity_scan(MonotoneTarget::F2, PositivePair(1e3, 2e3), {-1e-4, -5e-5, 5e-5, 1e-4}, 0.0);
    CHECK(tiny.holds());
    CHECK(tiny.values[1] == 0.0);
    CHECK(std::isinf(tiny.values[2]));

    CHECK_THROWS_AS(monotonicity_scan(MonotoneTarget::F1, p, {1, 0.5}), ConfigError);
    CHECK_THROWS_AS(monotonicity_scan(MonotoneTarget::F1, p, {1, 1}), ConfigError);
    CHECK_THROWS_AS(monotonicity_scan(MonotoneTarget::F2, p, {-1, 0, 1}), ConfigError);
}

TEST_CASE("monotonicity holds for 1000 seeded pairs on 16-point grids")
{
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> lg(-3.0, 3.0);
    std::uniform_real_distribution<double> order(-8.0, 8.0);
    for (int i = 0; i < 1000; ++i) {
        const PositivePair p(std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)));
        std::vector<double> grid(16);
        for (auto& k : grid)
            k = order(rng);
        std::sort(grid.begin(), grid.end());
        CHECK(monotonicity_scan(MonotoneTarget::F1, p, grid).holds());
        CHECK(monotonicity_scan(MonotoneTarget::F2, p, grid, 0.0).holds());
    }
}

TEST_CASE("derivative_consistency examples")
{
    const auto r = derivative_consistency(PositivePair(1, 2), 1.0, 1e-5);
    // 40-digit references for the closed forms.
    CHECK(r.f1.analytic == doctest::Approx(0.056633012265132491).epsilon(1e-14));
    CHECK(r.f2.analytic == doctest::Approx(-0.63651416829481282).epsilon(1e-14));
    CHECK(r.f1.abs_dev <= 1e-8);
    CHECK(r.f2.abs_dev <= 1e-8);
    CHECK(r.f1.within(1e-6, 1e-8));

    const auto eq = derivative_consistency(PositivePair(5, 5), 2.0, 1e-5);
    CHECK(std::abs(eq.f1.analytic) <= 1e-10);
    CHECK(std::abs(eq.f1.numeric) <= 1e-10);

    CHECK_THROWS_AS(derivative_consistency(PositivePair(1, 2), 1.0, 0.3), ConfigError);
    CHECK_THROWS_AS(derivative_consistency(PositivePair(1, 2), 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(derivative_consistency(PositivePair(1, 2), 0.0, 1e-5), ConfigError);
}

TEST_CASE("derivative consistency and signs over 1000 seeded draws")
{
    std::mt19937_64 rng(62);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    std::uniform_real_distribution<double> mag(0.1, 8.0);
    std::bernoulli_distribution neg(0.5);
    for (int i = 0; i < 1000; ++i) {
        double a = std::pow(10.0, lg(rng));
        double b = std::pow(10.0, lg(rng));
        const double k = neg(rng) ? -mag(rng) : mag(rng);
        const auto r = derivative_consistency(PositivePair(a, b), k);
        CHECK(r.f1.within(1e-6, 1e-8));
        CHECK(r.f2.within(1e-6, 1e-8));
        if (a != b) {
            CHECK(r.f1.analytic > 0.0);
            CHECK(r.f2.analytic < 0.0);
        }
    }
}

TEST_CASE("tightness_scan examples")
{
    const auto diag = tightness_scan(spec("INEQ_2_3"), PathKind::ContractToDiagonal, 6);
    REQUIRE(diag.steps.size() == 6);
    CHECK_FALSE(diag.truncated);
    const auto g = diag.min_gaps();
    for (std::size_t j = 1; j < g.size(); ++j)
        CHECK(g[j] < g[j - 1]);
    CHECK(g.back() > 0.0);
    CHECK(diag.steps[2].point.b == 1.0 + 1e-3);

    const auto r24 = tightness_scan(spec("INEQ_2_4"), PathKind::BlowUpRatio, 6);
    REQUIRE(r24.steps.size() == 6);
    CHECK(r24.steps.back().point.b == 1e6);
    const double constant = 3.0 / (2.0 * std::numbers::sqrt2);
    const auto& last = r24.steps.back();
    const double he = last.values[1] / constant;
    const double ratio = last.values[0] / he;
    // A_{2/3}(1, 10^6)/He(1, 10^6) from 40-digit references.
    CHECK(ratio == doctest::Approx(1.0597584565679731).epsilon(1e-13));
    CHECK(std::abs(ratio - constant) / constant <= 1e-3);

    const auto r25 = tightness_scan(spec("INEQ_2_5"), PathKind::BlowUpRatio, 6);
    const auto& v = r25.steps.back().values;
    CHECK(v[1] / v[2] == doctest::Approx(0.99998618459819108).epsilon(1e-13));
    CHECK(v[1] / v[2] >= 0.999);
    for (std::size_t j = 1; j < r25.steps.size(); ++j)
        CHECK(r25.steps[j].gaps[1] < r25.steps[j - 1].gaps[1]);

    const auto cut = tightness_scan(spec("INEQ_1_2"), PathKind::ContractToDiagonal, 4, 1.0, 0.7);
    CHECK(cut.truncated);
    CHECK(cut.steps.empty());
    CHECK_FALSE(cut.cause.empty());

    CHECK_THROWS_AS(tightness_scan(spec("INEQ_2_3"), PathKind::BlowUpRatio, 0), ConfigError);
    CHECK(to_string(PathKind::ContractToDiagonal) == "diagonal");
    CHECK(to_string(PathKind::BlowUpRatio) == "ratio");
}

TEST_CASE("oracle_compare examples")
{
    CHECK(oracle_compare(arithmetic(), SearchBox{}, 100, 1) <= kEps);
    CHECK(oracle_compare(identric_kind(), box_ab(1e-2, 1e2), 10000, 7) <= 1e-13);
    CHECK(oracle_compare(power(1e-9), box_ab(0.5, 2.0), 1000, 0) <= 1e-10);
    CHECK(oracle_compare(power(1e-9), box_ab(0.5, 2.0), 1000, 0)
          == oracle_compare(power(1e-9), box_ab(0.5, 2.0), 1000, 0));
}
