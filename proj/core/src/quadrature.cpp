#include "ldplab/quadrature.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

// Kronrod abscissae (positive half, descending) and weights; every second
// node from index 1 is a Gauss-7 node.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = f(centre - dx) + f(centre + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * sum;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult integrate_finite(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureOptions& options) {
    std::priority_queue<Segment> heap;
    Segment first = kronrod15(f, a, b);
    double total = first.value;
    double error = first.error;
    heap.push(first);
    int intervals = 1;
    while (error > std::max(options.abs_tol, options.rel_tol * std::abs(total)) &&
           intervals < options.max_intervals) {
        const Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        const Segment left = kronrod15(f, worst.a, mid);
        const Segment right = kronrod15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    double value = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {value, err, err <= std::max(options.abs_tol, options.rel_tol * std::abs(value))};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options) {
    if (std::isnan(a) || std::isnan(b)) {
        throw DomainError("integrate: NaN bound");
    }
    if (a == b) {
        return {0.0, 0.0, true};
    }
    if (a > b) {
        QuadratureResult r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }
    const bool lower_inf = std::isinf(a);
    const bool upper_inf = std::isinf(b);
    if (lower_inf && upper_inf) {
        QuadratureResult left = integrate(f, a, 0.0, options);
        QuadratureResult right = integrate(f, 0.0, b, options);
        return {left.value + right.value, left.error_estimate + right.error_estimate,
                left.converged && right.converged};
    }
    if (upper_inf) {
        auto mapped = [&](double t) {
            if (t >= 1.0) {
                return 0.0;
            }
            const double s = 1.0 - t;
            return f(a + t / s) / (s * s);
        };
        return integrate_finite(mapped, 0.0, 1.0, options);
    }
    if (lower_inf) {
        auto mapped = [&](double t) {
            if (t >= 1.0) {
                return 0.0;
            }
            const double s = 1.0 - t;
            return f(b - t / s) / (s * s);
        };
        return integrate_finite(mapped, 0.0, 1.0, options);
    }
    return integrate_finite(f, a, b, options);
}

}  // namespace ldplab
