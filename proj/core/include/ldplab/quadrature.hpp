#pragma once

#include <functional>

namespace ldplab {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_intervals = 4000;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Either bound may be infinite; infinite ranges are mapped onto finite ones
/// with x = a + t / (1 - t).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

}  // namespace ldplab
