#include "bimeans/extended.hpp"

#include <doctest.h>

#include <random>

using namespace bimeans;

namespace {

double rel_diff(const Wide& x, const Wide& ref)
{
    return (abs(x - ref) / abs(ref)).convert_to<double>();
}

} // namespace

TEST_CASE("extended_eval closed forms")
{
    const PositivePair p(1, 2);
    CHECK(extended_eval(arithmetic(), p) == Wide(1.5));

    const Wide two(2);
    CHECK(rel_diff(extended_eval(identric_kind(), p), exp(2 * log(two) - 1)) < 1e-25);
    const Wide half_root = (1 + sqrt(two)) / 2;
    CHECK(rel_diff(extended_eval(power(0.5), p), half_root * half_root) < 1e-25);
    CHECK(rel_diff(extended_eval(s_mean_kind(), p), pow(two, Wide(2) / 3)) < 1e-25);
    CHECK(rel_diff(extended_eval(heronian_kind(), p), (3 + sqrt(two)) / 3) < 1e-25);
    CHECK(rel_diff(extended_eval(geometric(), p), sqrt(two)) < 1e-25);
    CHECK(rel_diff(extended_eval(unnormalized(0.5), p), (1 + sqrt(two)) * (1 + sqrt(two))) < 1e-25);
}

TEST_CASE("extended_eval matches 40-digit reference values")
{
    const PositivePair p(1, 2);
    // Reference digits from an independent arbitrary-precision evaluation.
    CHECK(rel_diff(extended_eval(power(2.0 / 3.0), p), Wide("1.47146735672566983269206172729613106053")) < 1e-16);
    CHECK(rel_diff(extended_eval(identric_kind(), PositivePair(1, 1e6)),
                   extended_eval(identric_kind(), PositivePair(1e6, 1)))
          < 1e-40);
    CHECK(rel_diff(extended_eval(s_mean_kind(), PositivePair(1, 1e6)),
                   Wide("999986.1845986910681011893828788758205193"))
          < 1e-30);
    // I(1, 1 + 1e-13): the direct formula loses ~13 digits and keeps > 30.
    const double b = 1.0 + 1e-13;
    CHECK(rel_diff(extended_eval(identric_kind(), PositivePair(1, b)),
                   Wide("1.000000000000049960036108131628318195437"))
          < 1e-30);
}

TEST_CASE("extended_eval errors")
{
    CHECK_THROWS_AS(extended_eval(heronian_kind(), Wide(0), Wide(1)), std::domain_error);
    CHECK(extended_eval(identric_kind(), PositivePair(3, 3)) == 3);
}

TEST_CASE("double path agrees with the oracle to 1e-13 on [1e-2, 1e2]^2, |k| <= 8")
{
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    std::uniform_real_distribution<double> order(-8.0, 8.0);
    double worst = 0.0;
    for (int i = 0; i < 3000; ++i) {
        const PositivePair p(std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng)));
        double k = order(rng);
        if (std::abs(k) < 0.01)
            k = 0.01; // f2 overflows for |k| < 1/1024
        for (const auto& kind : {power(k), power(k * 1e-6), power(0.0), heronian_kind(), identric_kind(),
                                 s_mean_kind(), unnormalized(k)}) {
            const double dev = rel_diff(Wide(eval_mean(kind, p)), extended_eval(kind, p));
            worst = std::max(worst, dev);
            CHECK(dev <= 1e-13);
        }
    }
    MESSAGE("worst relative deviation: " << worst);
}
