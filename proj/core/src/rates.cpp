#include "ldplab/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldplab/configurations.hpp"
#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void record_partial(TruncationReport& report, const RateValue& r) {
    if (!report.partial_rates.empty() &&
        r.value < report.partial_rates.back() - kMonotoneSlack) {
        report.monotone = false;
    }
    report.boundary = report.boundary || r.boundary;
    report.partial_rates.push_back(r.value);
}

}  // namespace

bool RateValue::is_infinite() const noexcept {
    return std::isinf(value);
}

RateValue rate_from_gram(const SymmetricPSD& s) {
    const double lambda = s.largest_eigenvalue();
    if (lambda >= 1.0 - kUnitLowerSlack) {
        return {kInf, lambda <= 1.0 + kUnitUpperSlack};
    }
    // Clamp -0.0 and roundoff below zero.
    return {std::max(0.0, -0.5 * log_det_complement(s)), false};
}

RateValue rate_finite(const DenseMatrix& a) {
    if (a.cols() == 0) {
        return {};
    }
    return rate_from_gram(gram(a));
}

TruncatedRate rate_truncated(const ColumnList& a, int max_level, double tol) {
    if (max_level < 0) {
        throw DomainError("rate_truncated: max_level must be non-negative");
    }
    TruncatedRate out;
    const std::size_t levels = std::min(a.size(), static_cast<std::size_t>(max_level));
    out.report.truncation_level = static_cast<int>(levels);

    const int k = a.dim();
    DenseMatrix s = DenseMatrix::Zero(k, k);
    for (std::size_t l = 0; l < levels; ++l) {
        const Vector& c = a.column(l);
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) {
                s(i, j) += c(i) * c(j);
            }
        }
        record_partial(out.report, rate_from_gram(SymmetricPSD(s)));
    }

    for (std::size_t l = levels; l < a.size(); ++l) {
        out.report.tail_bound += a.column(l).squaredNorm();
    }

    if (levels == 0) {
        out.rate = {};
    } else {
        out.rate.value = out.report.partial_rates.back();
        out.rate.boundary = std::isinf(out.rate.value) && out.report.boundary;
    }

    if (levels == a.size()) {
        out.report.converged = true;
    } else if (levels < 2) {
        out.report.converged = false;
    } else {
        const auto& p = out.report.partial_rates;
        const double step = p[levels - 1] - p[levels - 2];
        out.report.converged = std::isfinite(p.back()) && step <= tol;
    }
    return out;
}

TruncatedRate rate_truncated(const ColumnList& a) {
    return rate_truncated(a, static_cast<int>(a.size()), 0.0);
}

TruncationReport rate_orthogonal_truncated(const DenseMatrix& m, int k_max) {
    if (m.rows() != m.cols()) {
        throw DomainError("rate_orthogonal_truncated: matrix must be square");
    }
    if (k_max < 1) {
        throw DomainError("rate_orthogonal_truncated: k_max must be >= 1");
    }
    TruncationReport report;
    const int n = static_cast<int>(m.rows());
    const int levels = std::min(k_max, n);
    report.truncation_level = levels;
    bool infinite = false;
    for (int k = 1; k <= levels; ++k) {
        if (infinite) {
            report.partial_rates.push_back(kInf);
            continue;
        }
        const RateValue r = rate_finite(m.topRows(k));
        infinite = r.is_infinite();
        record_partial(report, r);
    }
    for (int i = levels; i < n; ++i) {
        report.tail_bound += m.row(i).squaredNorm();
    }
    report.converged = levels == n;
    return report;
}

RateValue rate_configuration(const PointConfiguration& mu) {
    return rate_truncated(config_to_matrix(mu)).rate;
}

RateValue rate_projected_measure(const ColumnList& a) {
    return rate_truncated(a).rate;
}

}  // namespace ldplab
