#include "bimeans/extended.hpp"

#include <stdexcept>

namespace bimeans {

namespace {

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Wide wide_power_mean(const Wide& a, const Wide& b, const Wide& k)
{
    if (k == 0)
        return sqrt(a * b);
    return pow((pow(a, k) + pow(b, k)) / 2, 1 / k);
}

} // namespace

Wide extended_eval(const MeanKind& kind, const Wide& a, const Wide& b)
{
    if (!(a > 0) || !(b > 0))
        throw std::domain_error("extended_eval requires positive arguments");
    return std::visit(overloaded{
        [&](const kinds::PowerMean& m) -> Wide {
            return wide_power_mean(a, b, Wide(m.k.value()));
        },
        [&](const kinds::Heronian&) -> Wide {
            return (a + b + sqrt(a * b)) / 3;
        },
        [&](const kinds::Identric&) -> Wide {
            if (a == b)
                return a;
            return exp((b * log(b) - a * log(a)) / (b - a) - 1);
        },
        [&](const kinds::SMean&) -> Wide {
            return exp((a * log(a) + b * log(b)) / (a + b));
        },
        [&](const kinds::UnnormalizedPower& m) -> Wide {
            const Wide k(m.k.value());
            if (k == 0)
                throw std::domain_error("unnormalized power requires a nonzero order");
            return pow(pow(a, k) + pow(b, k), 1 / k);
        },
    }, kind);
}

Wide extended_eval(const MeanKind& kind, const PositivePair& p)
{
    return extended_eval(kind, Wide(p.a()), Wide(p.b()));
}

} // namespace bimeans
