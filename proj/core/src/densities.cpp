#include "ldplab/densities.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "ldplab/errors.hpp"
#include "ldplab/special.hpp"

namespace ldplab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLogPi = std::log(std::numbers::pi);

// exponent * log det(Id - a a^T), with the support indicator folded in.
double weighted_log_det(const DenseMatrix& a, double exponent) {
    const double ld = log_det_complement(gram(a));
    if (ld == kNegInf) {
        return kNegInf;
    }
    return exponent * ld;
}

void require_finite_p(double p) {
    if (!(p >= 1.0) || std::isinf(p)) {
        throw DomainError("p must lie in [1, inf)");
    }
}

}  // namespace

double log_multivariate_gamma(int k, double x) {
    if (k < 1) {
        throw DomainError("log_multivariate_gamma: k must be >= 1");
    }
    if (!(x > 0.5 * (k - 1))) {
        throw DomainError("log_multivariate_gamma: x must exceed (k-1)/2");
    }
    double acc = 0.25 * k * (k - 1) * kLogPi;
    for (int i = 1; i <= k; ++i) {
        acc += log_gamma(x - 0.5 * (i - 1));
    }
    return acc;
}

double log_inverted_t_density(const DenseMatrix& a, int n_dof) {
    if (n_dof < 1) {
        throw DomainError("log_inverted_t_density: degrees of freedom must be >= 1");
    }
    const int k = static_cast<int>(a.rows());
    const int m = static_cast<int>(a.cols());
    const double body = weighted_log_det(a, 0.5 * (n_dof - 2));
    if (body == kNegInf) {
        return kNegInf;
    }
    return log_multivariate_gamma(k, 0.5 * (n_dof + m + k - 1)) - 0.5 * m * k * kLogPi -
           log_multivariate_gamma(k, 0.5 * (n_dof + k - 1)) + body;
}

double log_corner_density(const DenseMatrix& a, int k, int ell, int n) {
    if (k < 1 || ell < 1) {
        throw DomainError("log_corner_density: k and ell must be >= 1");
    }
    if (n < ell + k) {
        throw DomainError("log_corner_density: need n >= ell + k");
    }
    if (a.rows() != k || a.cols() != ell) {
        throw DimensionMismatch("log_corner_density: matrix must be k x ell");
    }
    const double body = weighted_log_det(a, 0.5 * (n - ell - k - 1));
    if (body == kNegInf) {
        return kNegInf;
    }
    return log_multivariate_gamma(k, 0.5 * n) - 0.5 * k * ell * kLogPi -
           log_multivariate_gamma(k, 0.5 * (n - ell)) + body;
}

double log_first_column_density(const Vector& x, int n) {
    const int k = static_cast<int>(x.size());
    return log_corner_density(DenseMatrix(x), k, 1, n);
}

double log_wishart_density(const SymmetricPSD& s, int k, int n) {
    if (s.dim() != k) {
        throw DimensionMismatch("log_wishart_density: matrix must be k x k");
    }
    if (n < k) {
        throw DomainError("log_wishart_density: need n >= k");
    }
    if (!(s.smallest_eigenvalue() > 0.0)) {
        return kNegInf;
    }
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) {
        log_det += std::log(s.eigenvalues()(i));
    }
    return 0.5 * (n - k - 1) * log_det - 0.5 * s.matrix().trace() -
           0.5 * n * k * std::numbers::ln2 - log_multivariate_gamma(k, 0.5 * n);
}

double log_p_gaussian_density(double x, double p) {
    require_finite_p(p);
    return -std::pow(std::abs(x), p) / p -
           (std::numbers::ln2 + std::log(p) / p + log_gamma(1.0 + 1.0 / p));
}

double log_pth_power_density(double x, double p) {
    require_finite_p(p);
    if (!(x > 0.0)) {
        return kNegInf;
    }
    const double log_gamma_p = -(std::log(p) / p + log_gamma(1.0 / p));
    return log_gamma_p + (1.0 / p - 1.0) * std::log(x) - x / p;
}

double sigma_p_squared(double p) {
    if (!(p >= 1.0)) {
        throw DomainError("sigma_p_squared: p must be >= 1");
    }
    if (std::isinf(p)) {
        return 1.0 / 3.0;
    }
    return std::exp(2.0 / p * std::log(p) + log_gamma(3.0 / p) - log_gamma(1.0 / p));
}

double p_gaussian_fourth_moment(double p) {
    if (!(p >= 1.0)) {
        throw DomainError("p_gaussian_fourth_moment: p must be >= 1");
    }
    if (std::isinf(p)) {
        return 1.0 / 5.0;
    }
    return std::exp(4.0 / p * std::log(p) + log_gamma(5.0 / p) - log_gamma(1.0 / p));
}

double stiefel_entry_cdf(double x, int n) {
    if (n < 2) {
        throw DomainError("stiefel_entry_cdf: need n >= 2");
    }
    if (x <= -1.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    const double tail = 0.5 * boost::math::ibeta(0.5, 0.5 * (n - 1), x * x);
    return x >= 0.0 ? 0.5 + tail : 0.5 - tail;
}

}  // namespace ldplab
