#pragma once

#include <limits>
#include <vector>

#include "ldplab/linalg.hpp"
#include "ldplab/rng.hpp"

namespace ldplab {

/// Shape parameter of the p-generalized Gaussian density
/// exp(-|x|^p / p) / (2 p^{1/p} Gamma(1 + 1/p)). p = infinity stands for the
/// uniform law on [-1, 1].
class PGaussianParams {
public:
    explicit PGaussianParams(double p);
    static PGaussianParams uniform() { return PGaussianParams(std::numeric_limits<double>::infinity()); }

    double p() const noexcept { return p_; }
    bool is_uniform() const noexcept { return p_ == std::numeric_limits<double>::infinity(); }

private:
    double p_;
};

// k x n matrix of i.i.d. N(0, 1), filled row by row.
DenseMatrix gaussian_matrix(SeededRng& rng, int k, int n);

// (G G^T)^{-1/2} G for Gaussian G: a Haar-distributed k x n Stiefel matrix.
DenseMatrix haar_stiefel(SeededRng& rng, int k, int n);

DenseMatrix haar_orthogonal(SeededRng& rng, int n);

// W_k(n, Id) as H H^T for a k x n standard Gaussian H.
SymmetricPSD wishart(SeededRng& rng, int k, int n);

double p_gaussian(SeededRng& rng, const PGaussianParams& params);
std::vector<double> p_gaussian(SeededRng& rng, const PGaussianParams& params, int count);

// radius_scale * U^{1/n} Z / ||Z||_p with Z i.i.d. p-Gaussian.
Vector uniform_lp_ball(SeededRng& rng, double p, int n, double radius_scale);

// (S + G G^T)^{-1/2} G with S ~ W_k(N + k - 1, Id) and G a k x m Gaussian.
DenseMatrix dickey_corner(SeededRng& rng, int k, int m, int dof);

// W_k(n, Id) by the Bartlett decomposition; needs n >= k.
SymmetricPSD wishart_bartlett(SeededRng& rng, int k, int n);

// Leading k x ell block of a Haar k x n Stiefel matrix. Uses
// G G^T = G_ell G_ell^T + W with W ~ W_k(n - ell) when n - ell >= k, so the
// cost does not grow with n; falls back to haar_stiefel otherwise.
DenseMatrix stiefel_corner(SeededRng& rng, int k, int ell, int n);

double lp_norm(const Vector& x, double p);

}  // namespace ldplab
