#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "ldplab/parallel.hpp"
#include "ldplab/quadrature.hpp"
#include "ldplab/rng.hpp"
#include "ldplab/special.hpp"
#include "ldplab/stats.hpp"

using namespace ldplab;

TEST_CASE("philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    using A2 = std::array<std::uint32_t, 2>;
    CHECK(philox4x32(A4{0, 0, 0, 0}, A2{0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32(A4{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, A2{0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, A2{0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("seeded streams are reproducible and distinct") {
    SeededRng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs |= x != c.next_u64();
    }
    CHECK(differs);
    SeededRng s1 = SeededRng(42).substream(3);
    SeededRng s2 = SeededRng(42).substream(3);
    SeededRng s3 = SeededRng(42).substream(4);
    CHECK(s1.normal() == s2.normal());
    CHECK(s1.normal() != s3.normal());
}

TEST_CASE("uniform and gamma variates") {
    SeededRng rng(7);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo > 0.0);
    CHECK(hi < 1.0);
    for (double shape : {0.3, 1.0, 2.5, 40.0}) {
        std::vector<double> xs(200000);
        for (auto& x : xs) {
            x = rng.gamma(shape);
        }
        const auto m = sample_moments(xs);
        CHECK(std::abs(m.mean - shape) < 4 * m.stderr_mean);
        CHECK(std::abs(m.variance - shape) < 4 * m.stderr_variance);
    }
}

TEST_CASE("log_gamma against factorials and lgamma") {
    double log_fact = 0.0;
    for (int n = 1; n <= 170; ++n) {
        CHECK(std::abs(log_gamma(n) - log_fact) <= 1e-13 * std::max(1.0, std::abs(log_fact)));
        log_fact += std::log(static_cast<double>(n));
    }
    for (double x : {0.5, 0.75, 1.5, 3.3, 17.25, 1234.5, 1e6, 1e7}) {
        CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
    }
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
}

TEST_CASE("normal_cdf and log_add_exp") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
    CHECK(log_add_exp(-INFINITY, 1.0) == 1.0);
}

TEST_CASE("adaptive quadrature") {
    CHECK(integrate([](double x) { return std::exp(-x * x); }, -INFINITY, INFINITY).value ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-11));
    CHECK(integrate([](double x) { return std::sqrt(1 - x * x); }, -1, 1).value ==
          doctest::Approx(M_PI / 2).epsilon(1e-9));
}

TEST_CASE("kolmogorov tests") {
    SeededRng rng(1);
    std::vector<double> xs(20000), ys(20000);
    for (auto& x : xs) {
        x = rng.uniform();
    }
    for (auto& y : ys) {
        y = rng.uniform();
    }
    CHECK(ks_one_sample(xs, [](double x) { return std::clamp(x, 0.0, 1.0); }).p_value > 0.01);
    CHECK(ks_two_sample(xs, ys).p_value > 0.01);
    for (auto& y : ys) {
        y = y * y;
    }
    CHECK(ks_two_sample(xs, ys).p_value < 1e-10);
    CHECK(kolmogorov_survival(1.358) == doctest::Approx(0.05).epsilon(0.01));
}

TEST_CASE("weighted fit recovers a line") {
    const std::vector<double> x{1, 2, 3, 4};
    const std::vector<double> y{3, 5, 7, 9};
    const std::vector<double> w{1, 1, 1, 1};
    const auto fit = weighted_linear_fit(x, y, w);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
}

TEST_CASE("parallel reductions do not depend on the thread count") {
    const auto run = [](int threads) {
        set_thread_count(threads);
        std::vector<double> partial(16);
        parallel_for_chunks(partial.size(), [&](std::size_t c) {
            SeededRng rng = SeededRng(5).substream(c);
            for (int i = 0; i < 1000; ++i) {
                partial[c] += rng.normal();
            }
        });
        double total = 0.0;
        for (double p : partial) {
            total += p;
        }
        return total;
    };
    const double one = run(1);
    CHECK(run(4) == one);
    set_thread_count(0);
}
