#pragma once

#include <string>
#include <vector>

#include "ldplab/configurations.hpp"
#include "ldplab/linalg.hpp"
#include "ldplab/rates.hpp"
#include "ldplab/rng.hpp"
#include "ldplab/stats.hpp"

namespace ldplab {

enum class EstimationMethod { MonteCarlo, Quadrature };

/// Event {corner_{k x ell} of a Haar k x n Stiefel matrix lies in the closed
/// Frobenius ball B_r(target)} for each n in n_values.
struct LdpExperiment {
    int k = 1;
    int ell = 1;
    DenseMatrix target = DenseMatrix::Zero(1, 1);
    double radius = 0.1;
    std::vector<int> n_values;
    int samples_per_n = 100000;
    EstimationMethod method = EstimationMethod::Quadrature;
};

struct SlopePoint {
    int n = 0;
    // Natural log of the (estimated) probability.
    double log_prob = 0.0;
    // Standard error of log_prob; 0 for quadrature.
    double stderr_log_prob = 0.0;
    long long hits = 0;
    long long samples = 0;
};

struct SlopeReport {
    std::vector<SlopePoint> per_n;
    // Slope of -log P against n (intercept retained).
    double fitted_slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    RateValue rate_reference;
    // |fitted_slope - rate_reference| / rate_reference; 0 when both vanish.
    double relative_gap = 0.0;
};

// inf of I_ell over the closed Frobenius ball of radius r around target.
RateValue corner_rate_reference(const DenseMatrix& target, double radius);

SlopeReport run_ldp_corner(const SeededRng& rng, const LdpExperiment& exp);

/// Event: exactly target.pair_count() columns of V_{k,n} have norm >= r, and
/// for each target atom D the number of columns within rho of +D or -D
/// equals its multiplicity.
SlopeReport run_ldp_configuration(const SeededRng& rng, int k, const PointConfiguration& target,
                                  double r, double rho, const std::vector<int>& n_values,
                                  int samples_per_n);

// The event above for one sampled matrix.
bool configuration_event(const DenseMatrix& v, const PointConfiguration& target, double r,
                         double rho);

struct KsCheck {
    std::string label;
    KsResult ks;
};

struct DistributionReport {
    std::vector<KsCheck> checks;

    double min_p_value() const;
    bool passed(double alpha) const { return min_p_value() > alpha; }
};

/// Entry-wise two-sample KS between the k x m corner of Haar k x n Stiefel
/// matrices and the Wishart construction with N = n - m - k + 1 + dof_offset
/// degrees of freedom.
DistributionReport run_dickey_check(const SeededRng& rng, int k, int m, int n, int samples,
                                    int dof_offset = 0);

/// One Haar V, then each marginal of the projected ball law (p < inf) or of
/// the projected cube law (p = inf) against N(0, sigma_p^2).
DistributionReport run_clt_check(const SeededRng& rng, int k, double p, int n, int samples);

}  // namespace ldplab
