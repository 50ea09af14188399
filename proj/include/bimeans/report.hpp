#ifndef BIMEANS_REPORT_HPP
#define BIMEANS_REPORT_HPP

// Text encodings of verifier results. Field names are a stable interface:
// JSON objects use specId, seed, minGap, argmin, samplesEvaluated,
// outOfDomain, violationCount and violations[]; CSV uses the matching
// snake_case header.

#include "bimeans/verifier.hpp"

#include <json.hpp>

#include <string>

namespace bimeans {

/// 17 significant digits; the text re-parses to the same double.
std::string format_double(double v);

nlohmann::json to_json(const Point& pt);
nlohmann::json to_json(const FalsificationReport& rep);

std::string check_csv_header();
std::string to_csv_row(const FalsificationReport& rep);

} // namespace bimeans

#endif
