#include "ldplab/samplers.hpp"

#include <cmath>
#include <string>

#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

constexpr double kRefineThreshold = 1e-12;

DenseMatrix polar_factor(const DenseMatrix& g) {
    DenseMatrix v = inverse_sqrt(gram(g)) * g;
    // A second polar step is the identity in exact arithmetic; it removes the
    // roundoff left by an ill-conditioned G G^T.
    if (orthonormality_defect(v) > kRefineThreshold) {
        v = inverse_sqrt(gram(v)) * v;
    }
    return v;
}

void require_positive(int value, const char* name) {
    if (value < 1) {
        throw DomainError(std::string(name) + " must be >= 1");
    }
}

}  // namespace

PGaussianParams::PGaussianParams(double p) : p_(p) {
    if (std::isnan(p) || p < 1.0) {
        throw DomainError("PGaussianParams: p must be >= 1");
    }
}

DenseMatrix gaussian_matrix(SeededRng& rng, int k, int n) {
    require_positive(k, "k");
    require_positive(n, "n");
    DenseMatrix g(k, n);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) {
            g(i, j) = rng.normal();
        }
    }
    return g;
}

DenseMatrix haar_stiefel(SeededRng& rng, int k, int n) {
    require_positive(k, "k");
    if (k > n) {
        throw DomainError("haar_stiefel: k must be <= n");
    }
    try {
        return polar_factor(gaussian_matrix(rng, k, n));
    } catch (const NumericalFailure&) {
        // Singular G G^T has probability zero; one retry, then give up.
        return polar_factor(gaussian_matrix(rng, k, n));
    }
}

DenseMatrix haar_orthogonal(SeededRng& rng, int n) {
    return haar_stiefel(rng, n, n);
}

SymmetricPSD wishart(SeededRng& rng, int k, int n) {
    require_positive(k, "k");
    if (n < k) {
        throw DomainError("wishart: n must be >= k");
    }
    return gram(gaussian_matrix(rng, k, n));
}

double p_gaussian(SeededRng& rng, const PGaussianParams& params) {
    if (params.is_uniform()) {
        return rng.uniform(-1.0, 1.0);
    }
    const double p = params.p();
    // |Z|^p / p ~ Gamma(1/p, 1).
    const double magnitude = std::pow(p * rng.gamma(1.0 / p), 1.0 / p);
    return (rng.next_u32() & 1u) ? magnitude : -magnitude;
}

std::vector<double> p_gaussian(SeededRng& rng, const PGaussianParams& params, int count) {
    require_positive(count, "count");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (auto& x : out) {
        x = p_gaussian(rng, params);
    }
    return out;
}

SymmetricPSD wishart_bartlett(SeededRng& rng, int k, int n) {
    require_positive(k, "k");
    if (n < k) {
        throw DomainError("wishart_bartlett: n must be >= k");
    }
    DenseMatrix l = DenseMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        l(i, i) = std::sqrt(2.0 * rng.gamma(0.5 * (n - i)));
        for (int j = 0; j < i; ++j) {
            l(i, j) = rng.normal();
        }
    }
    return gram(l);
}

DenseMatrix stiefel_corner(SeededRng& rng, int k, int ell, int n) {
    require_positive(k, "k");
    require_positive(ell, "ell");
    if (ell > n || k > n) {
        throw DomainError("stiefel_corner: need k <= n and ell <= n");
    }
    if (n - ell < k) {
        return haar_stiefel(rng, k, n).leftCols(ell);
    }
    const DenseMatrix g = gaussian_matrix(rng, k, ell);
    if (k == 1) {
        const double rest = 2.0 * rng.gamma(0.5 * (n - ell));
        return g / std::sqrt(g.squaredNorm() + rest);
    }
    const SymmetricPSD w = wishart_bartlett(rng, k, n - ell);
    const SymmetricPSD total(w.matrix() + gram(g).matrix());
    return inverse_sqrt(total) * g;
}

double lp_norm(const Vector& x, double p) {
    if (std::isinf(p)) {
        return x.cwiseAbs().maxCoeff();
    }
    if (p == 2.0) {
        return x.norm();
    }
    const double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        acc += std::pow(std::abs(x(i)) / scale, p);
    }
    return scale * std::pow(acc, 1.0 / p);
}

Vector uniform_lp_ball(SeededRng& rng, double p, int n, double radius_scale) {
    require_positive(n, "n");
    if (!(p >= 1.0) || std::isinf(p)) {
        throw DomainError("uniform_lp_ball: p must lie in [1, inf)");
    }
    if (!(radius_scale > 0.0)) {
        throw DomainError("uniform_lp_ball: radius_scale must be positive");
    }
    const PGaussianParams params(p);
    Vector z(n);
    for (int i = 0; i < n; ++i) {
        z(i) = p_gaussian(rng, params);
    }
    const double radius = std::pow(rng.uniform(), 1.0 / n);
    return (radius_scale * radius / lp_norm(z, p)) * z;
}

DenseMatrix dickey_corner(SeededRng& rng, int k, int m, int dof) {
    require_positive(k, "k");
    require_positive(m, "m");
    require_positive(dof, "N");
    const SymmetricPSD s = wishart(rng, k, dof + k - 1);
    const DenseMatrix g = gaussian_matrix(rng, k, m);
    const SymmetricPSD total(s.matrix() + gram(g).matrix());
    return inverse_sqrt(total) * g;
}

}  // namespace ldplab
