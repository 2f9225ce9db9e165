#include "ldplab/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace ldplab {

namespace {

using nlohmann::ordered_json;

// JSON has no infinities; non-finite reals become strings.
ordered_json real_json(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return format_real(x);
}

ordered_json rate_json(const RateValue& rate) {
    return ordered_json{{"value", real_json(rate.value)}, {"boundary", rate.boundary}};
}

ordered_json truncation_json(const TruncationReport& report) {
    ordered_json partial = ordered_json::array();
    for (double r : report.partial_rates) {
        partial.push_back(real_json(r));
    }
    return ordered_json{{"truncation_level", report.truncation_level},
                        {"partial_rates", partial},
                        {"converged", report.converged},
                        {"tail_bound", real_json(report.tail_bound)},
                        {"boundary", report.boundary},
                        {"monotone", report.monotone}};
}

}  // namespace

std::string format_real(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    std::ostringstream out;
    out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return out.str();
}

std::string rate_to_json(const RateValue& rate) {
    return rate_json(rate).dump(2);
}

std::string truncation_report_to_json(const TruncationReport& report) {
    return truncation_json(report).dump(2);
}

std::string slope_report_to_json(const SlopeReport& report) {
    ordered_json per_n = ordered_json::array();
    for (const auto& pt : report.per_n) {
        per_n.push_back(ordered_json{{"n", pt.n},
                                     {"log_prob", real_json(pt.log_prob)},
                                     {"stderr", real_json(pt.stderr_log_prob)},
                                     {"hits", pt.hits},
                                     {"samples", pt.samples}});
    }
    const ordered_json doc{{"per_n", per_n},
                           {"fitted_slope", real_json(report.fitted_slope)},
                           {"slope_stderr", real_json(report.slope_stderr)},
                           {"intercept", real_json(report.intercept)},
                           {"rate_reference", rate_json(report.rate_reference)},
                           {"relative_gap", real_json(report.relative_gap)}};
    return doc.dump(2);
}

std::string slope_report_to_csv(const SlopeReport& report) {
    std::ostringstream out;
    out << "n,log_prob,stderr\n";
    for (const auto& pt : report.per_n) {
        out << pt.n << ',' << format_real(pt.log_prob) << ',' << format_real(pt.stderr_log_prob) << '\n';
    }
    return out.str();
}

std::string distribution_report_to_json(const DistributionReport& report) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) {
        checks.push_back(ordered_json{{"label", c.label},
                                      {"statistic", real_json(c.ks.statistic)},
                                      {"p_value", real_json(c.ks.p_value)},
                                      {"effective_n", real_json(c.ks.effective_n)}});
    }
    return ordered_json{{"checks", checks}, {"min_p_value", real_json(report.min_p_value())}}.dump(2);
}

}  // namespace ldplab
