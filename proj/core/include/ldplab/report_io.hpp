#pragma once

#include <string>

#include "ldplab/rates.hpp"
#include "ldplab/verify.hpp"

namespace ldplab {

// Shortest-round-trip-safe decimal form (17 significant digits); "inf",
// "-inf" and "nan" for non-finite values.
std::string format_real(double x);

std::string rate_to_json(const RateValue& rate);
std::string truncation_report_to_json(const TruncationReport& report);
std::string slope_report_to_json(const SlopeReport& report);
// Header "n,log_prob,stderr", one row per n.
std::string slope_report_to_csv(const SlopeReport& report);
std::string distribution_report_to_json(const DistributionReport& report);

}  // namespace ldplab
