#pragma once

#include <vector>

#include "ldplab/linalg.hpp"

namespace ldplab {

class PointConfiguration;

/// Value in [0, +inf]. `boundary` marks lambda_1 inside the band
/// [1 - kUnitLowerSlack, 1 + kUnitUpperSlack], where the value is +inf.
struct RateValue {
    double value = 0.0;
    bool boundary = false;

    bool is_infinite() const noexcept;
};

struct TruncationReport {
    int truncation_level = 0;
    std::vector<double> partial_rates;
    bool converged = true;
    // Squared Frobenius mass of the entries beyond the truncation. Diagnostic
    // only; it is not an error bound on the rate.
    double tail_bound = 0.0;
    bool boundary = false;
    // Partial rates are non-decreasing up to kMonotoneSlack.
    bool monotone = true;
};

inline constexpr double kMonotoneSlack = 1e-12;

// -1/2 log det(Id - A A^T), or +inf once ||A A^T|| reaches 1.
RateValue rate_finite(const DenseMatrix& a);
RateValue rate_from_gram(const SymmetricPSD& s);

struct TruncatedRate {
    RateValue rate;
    TruncationReport report;
};

/// Partial rates I_l over the column prefixes l = 1..min(size, max_level).
/// When every column is consumed the last partial rate is the exact value.
/// Otherwise `converged` reports whether the last increment is below tol.
TruncatedRate rate_truncated(const ColumnList& a, int max_level, double tol);
TruncatedRate rate_truncated(const ColumnList& a);

/// Partial rates over the leading k-row blocks of a square matrix,
/// k = 1..k_max.
TruncationReport rate_orthogonal_truncated(const DenseMatrix& m, int k_max);

RateValue rate_configuration(const PointConfiguration& mu);

RateValue rate_projected_measure(const ColumnList& a);

}  // namespace ldplab
