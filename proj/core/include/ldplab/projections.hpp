#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ldplab/linalg.hpp"
#include "ldplab/rng.hpp"
#include "ldplab/samplers.hpp"

namespace ldplab {

/// Equally weighted sample cloud in R^k, stored as a k x count matrix.
class EmpiricalMeasure {
public:
    explicit EmpiricalMeasure(DenseMatrix points);

    int dim() const noexcept { return static_cast<int>(points_.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    const DenseMatrix& points() const noexcept { return points_; }

    std::vector<double> coordinate(int i) const;
    Vector mean() const;
    // Unbiased sample covariance.
    DenseMatrix covariance() const;
    // Mean of exp(i <t, x>) over the cloud.
    std::complex<double> empirical_cf(const Vector& t) const;

private:
    DenseMatrix points_;
};

/// Symmetric law of the i.i.d. coefficients Y_j.
class ProductLaw {
public:
    enum class Kind { PGaussian, Rademacher, Custom };

    static ProductLaw p_gaussian(const PGaussianParams& params);
    static ProductLaw rademacher();
    // cf may be empty; characteristic_function then raises UnsupportedLaw.
    static ProductLaw custom(std::function<double(SeededRng&)> sampler, double variance,
                             std::function<double(double)> cf = {});

    Kind kind() const noexcept { return kind_; }
    std::optional<PGaussianParams> params() const noexcept { return params_; }

    double sample(SeededRng& rng) const;
    double variance() const noexcept { return variance_; }
    bool has_cf() const noexcept;
    // E cos(s Y); real because the law is symmetric.
    double cf(double s) const;

private:
    struct CfTable;

    ProductLaw(Kind kind, double variance);

    Kind kind_;
    double variance_;
    std::optional<PGaussianParams> params_;
    std::function<double(SeededRng&)> sampler_;
    std::function<double(double)> custom_cf_;
    std::shared_ptr<const CfTable> table_;
};

/// Law of sum_j C_j Y_j + sigma (Id - A A^T)^{1/2} N_k, where C_j are the
/// columns of A. ||A A^T|| = 1 is allowed.
class ProjectedLaw {
public:
    ProjectedLaw(ColumnList a, double noise_variance, ProductLaw law);

    const ColumnList& a() const noexcept { return a_; }
    double noise_variance() const noexcept { return noise_variance_; }
    const ProductLaw& law() const noexcept { return law_; }
    int dim() const noexcept { return a_.dim(); }
    // (Id - A A^T)^{1/2} with eigenvalues clamped into [0, 1].
    const DenseMatrix& gaussian_factor() const noexcept { return gaussian_factor_; }
    const SymmetricPSD& complement() const noexcept { return complement_; }

private:
    ColumnList a_;
    double noise_variance_;
    ProductLaw law_;
    SymmetricPSD complement_;
    DenseMatrix gaussian_factor_;
};

EmpiricalMeasure sample_projected_law(const SeededRng& rng, const ProjectedLaw& law, int count);

// Draws of V (Z_1, ..., Z_n) with Z_i i.i.d. from the p-Gaussian law.
EmpiricalMeasure project_product(const SeededRng& rng, const DenseMatrix& v,
                                 const PGaussianParams& law, int count);

// Draws of V X with X uniform on the ball n^{1/p} B_p^n.
EmpiricalMeasure project_lp_ball(const SeededRng& rng, const DenseMatrix& v, double p, int count);

/// Upper estimate of the Levy-Prokhorov distance over closed balls centred
/// at (up to 400) pooled sample points, with grid + 1 radii per centre.
/// Exact for point masses; symmetric in its arguments; capped at 1.
double levy_prokhorov(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, int grid);

inline constexpr int kLevyProkhorovMaxCenters = 400;

/// For each n, one Haar V and the estimated distance between the ball and
/// product projections under V. Both clouds share their p-Gaussian draws Z.
std::vector<std::pair<int, double>> compare_ball_vs_product(const SeededRng& rng, int k, double p,
                                                            const std::vector<int>& n_list,
                                                            int count, int grid = 50);

std::complex<double> characteristic_function(const ProjectedLaw& law, const Vector& t);

}  // namespace ldplab
