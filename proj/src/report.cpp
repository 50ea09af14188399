#include "bimeans/report.hpp"

#include <charconv>
#include <cmath>

namespace bimeans {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

nlohmann::json number_or_null(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json optional_number(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string optional_text(const std::optional<double>& v)
{
    return v ? format_double(*v) : std::string();
}

} // namespace

nlohmann::json to_json(const Point& pt)
{
    return {{"a", pt.a}, {"b", pt.b}, {"k", optional_number(pt.k)}, {"beta", optional_number(pt.beta)}};
}

nlohmann::json to_json(const FalsificationReport& rep)
{
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : rep.violations) {
        auto j = to_json(v.point);
        j["minGap"] = number_or_null(v.min_gap);
        violations.push_back(std::move(j));
    }
    return {
        {"specId", rep.spec_id},
        {"seed", rep.seed},
        {"minGap", number_or_null(rep.min_gap)},
        {"argmin", rep.argmin ? to_json(*rep.argmin) : nlohmann::json(nullptr)},
        {"samplesEvaluated", rep.samples_evaluated},
        {"outOfDomain", rep.out_of_domain},
        {"violationCount", rep.violation_count},
        {"violations", std::move(violations)},
    };
}

std::string check_csv_header()
{
    return "spec_id,seed,min_gap,argmin_a,argmin_b,argmin_k,argmin_beta,"
           "samples_evaluated,out_of_domain,violation_count";
}

std::string to_csv_row(const FalsificationReport& rep)
{
    std::string row = rep.spec_id + "," + std::to_string(rep.seed) + "," + format_double(rep.min_gap);
    if (rep.argmin) {
        row += "," + format_double(rep.argmin->a) + "," + format_double(rep.argmin->b) + ","
               + optional_text(rep.argmin->k) + "," + optional_text(rep.argmin->beta);
    } else {
        row += ",,,,";
    }
    row += "," + std::to_string(rep.samples_evaluated) + "," + std::to_string(rep.out_of_domain)
           + "," + std::to_string(rep.violation_count);
    return row;
}

} // namespace bimeans
