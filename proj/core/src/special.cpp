#include "ldplab/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

constexpr std::array<double, 14> kLanczos{
    57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
    -0.491913816097620199,   0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5};

constexpr double kLanczosG = 671.0 / 128.0;
constexpr double kSqrtTwoPi = 2.5066282746310005;

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) {
        throw DomainError("log_gamma: argument must be positive");
    }
    if (std::isinf(x)) {
        return x;
    }
    double y = x;
    double tmp = x + kLanczosG;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double series = 0.999999999999997092;
    for (double c : kLanczos) {
        series += c / ++y;
    }
    return tmp + std::log(kSqrtTwoPi * series / x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double log_add_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) {
        return b;
    }
    if (b == -std::numeric_limits<double>::infinity()) {
        return a;
    }
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace ldplab
