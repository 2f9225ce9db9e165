#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "doctest.h"
#include "helpers.hpp"
#include "ldplab/densities.hpp"
#include "ldplab/errors.hpp"

using namespace ldplab;

namespace {

double integrate_interval(const std::function<double(double)>& f, double a, double b) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(f, a, b);
}

// Integral over the real line of g(x) * density(x) for a symmetric density,
// split at the kink in 0.
double symmetric_moment(double p, int power) {
    boost::math::quadrature::exp_sinh<double> es;
    return 2 * es.integrate([p, power](double x) {
        const double d = std::exp(log_p_gaussian_density(x, p));
        return d == 0.0 ? 0.0 : std::pow(x, power) * d;
    });
}

DenseMatrix scalar(double x) {
    return DenseMatrix::Constant(1, 1, x);
}

}  // namespace

TEST_CASE("multivariate gamma examples") {
    CHECK(log_multivariate_gamma(1, 3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(log_multivariate_gamma(2, 1.5) == doctest::Approx(std::log(M_PI / 2)).epsilon(1e-14));
    for (int k = 1; k <= 4; ++k) {
        double direct = 0.25 * k * (k - 1) * std::log(M_PI);
        for (int j = 1; j <= k; ++j) {
            direct += std::lgamma(7.3 + (1 - j) / 2.0);
        }
        CHECK(log_multivariate_gamma(k, 7.3) == doctest::Approx(direct).epsilon(1e-13));
    }
}

TEST_CASE("normalizing constant ratio behaves like (n/2)^(k ell / 2)") {
    const int k = 2, ell = 3;
    double prev = INFINITY;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        const double gap = (log_multivariate_gamma(k, n / 2) - log_multivariate_gamma(k, (n - ell) / 2)) / n -
                           k * ell / (2 * n) * std::log(n / 2);
        CHECK(std::abs(gap) < prev);
        prev = std::abs(gap);
    }
    CHECK(prev < 1e-10);
}

TEST_CASE("inverted t density") {
    DenseMatrix edge(1, 2);
    edge << 0.6, 0.8;
    CHECK(log_inverted_t_density(edge, 3) == -INFINITY);
    const double mass = integrate_interval([](double a) { return std::exp(log_inverted_t_density(scalar(a), 3)); },
                                           -1, 1);
    CHECK(std::abs(mass - 1.0) < 1e-8);
    // k = 1, m = 2 over the unit disc in polar coordinates.
    const double disc = integrate_interval(
        [](double r) {
            DenseMatrix a(1, 2);
            a << r, 0.0;
            return 2 * M_PI * r * std::exp(log_inverted_t_density(a, 2));
        },
        0, 1);
    CHECK(std::abs(disc - 1.0) < 1e-6);
}

TEST_CASE("corner density") {
    CHECK(log_corner_density(scalar(0.0), 1, 1, 4) == doctest::Approx(std::log(2 / M_PI)).epsilon(1e-14));
    for (int n : {3, 4, 7, 50}) {
        const double mass =
            integrate_interval([n](double x) { return std::exp(log_corner_density(scalar(x), 1, 1, n)); }, -1, 1);
        CHECK(std::abs(mass - 1.0) < 1e-9);
    }
    // The first column of a Haar vector has density c_n (1 - x^2)^((n-3)/2).
    for (double x : {-0.7, 0.0, 0.2, 0.9}) {
        const double c = std::lgamma(2.5) - 0.5 * std::log(M_PI) - std::lgamma(2.0);
        CHECK(log_corner_density(scalar(x), 1, 1, 5) == doctest::Approx(c + std::log(1 - x * x)).epsilon(1e-13));
    }
}

TEST_CASE("corner and inverted t densities coincide under the dof substitution") {
    SeededRng rng(21);
    int tested = 0;
    while (tested < 50) {
        const int k = 1 + static_cast<int>(rng.next_u32() % 3);
        const int ell = 1 + static_cast<int>(rng.next_u32() % 3);
        const int n = k + ell + static_cast<int>(rng.next_u32() % 20);
        if (n - ell - k + 1 < 1) {
            continue;
        }
        const DenseMatrix a = testing::with_norm(testing::random_matrix(rng, k, ell), 0.2 + 0.7 * rng.uniform());
        const double lhs = log_corner_density(a, k, ell, n);
        const double rhs = log_inverted_t_density(a, n - ell - k + 1);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        ++tested;
    }
}

TEST_CASE("wishart density") {
    SymmetricPSD two(DenseMatrix::Constant(1, 1, 2.0));
    CHECK(log_wishart_density(two, 1, 2) == doctest::Approx(-1 - std::log(2.0)).epsilon(1e-14));
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    const double mass = gk.integrate(
        [](double s) { return std::exp(log_wishart_density(SymmetricPSD(DenseMatrix::Constant(1, 1, s)), 1, 3)); }, 0.0,
        50.0, 15, 1e-12);
    CHECK(std::abs(mass - 1.0) < 1e-6);
    DenseMatrix singular = DenseMatrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK(log_wishart_density(SymmetricPSD(singular), 2, 4) == -INFINITY);
}

TEST_CASE("p-Gaussian densities") {
    CHECK(log_p_gaussian_density(0.0, 2.0) == doctest::Approx(-0.5 * std::log(2 * M_PI)).epsilon(1e-14));
    CHECK(log_p_gaussian_density(1.0, 1.0) == doctest::Approx(-1 - std::log(2.0)).epsilon(1e-14));
    for (double p : {1.0, 1.5, 3.0}) {
        CHECK(std::abs(symmetric_moment(p, 0) - 1.0) < 1e-9);
    }
    CHECK(std::exp(log_pth_power_density(1.0, 2.0)) ==
          doctest::Approx(std::exp(-0.5) / std::sqrt(2 * M_PI)).epsilon(1e-13));
    boost::math::quadrature::exp_sinh<double> es;
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
        const double mass = es.integrate([p](double x) { return std::exp(log_pth_power_density(x, p)); });
        const double mean = es.integrate([p](double x) { return x * std::exp(log_pth_power_density(x, p)); });
        CHECK(std::abs(mass - 1.0) < 1e-8);
        CHECK(std::abs(mean - 1.0) < 1e-8);
    }
}

TEST_CASE("sigma_p_squared") {
    CHECK(sigma_p_squared(2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sigma_p_squared(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sigma_p_squared(INFINITY) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    for (double p : {1.5, 3.0}) {
        CHECK(sigma_p_squared(p) == doctest::Approx(symmetric_moment(p, 2)).epsilon(1e-9));
        CHECK(p_gaussian_fourth_moment(p) == doctest::Approx(symmetric_moment(p, 4)).epsilon(1e-9));
    }
}

TEST_CASE("entry cdf") {
    CHECK(stiefel_entry_cdf(0.0, 7) == doctest::Approx(0.5));
    CHECK(stiefel_entry_cdf(-1.0, 7) == 0.0);
    CHECK(stiefel_entry_cdf(1.0, 7) == 1.0);
    // n = 3: the first coordinate of a uniform point on S^2 is uniform.
    CHECK(stiefel_entry_cdf(0.3, 3) == doctest::Approx(0.65).epsilon(1e-13));
}
