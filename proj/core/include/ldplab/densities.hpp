#pragma once

#include "ldplab/linalg.hpp"

// Log-densities in nats. -infinity means "outside the support".
namespace ldplab {

// log Gamma_k(x) = k(k-1)/4 log(pi) + sum_{i=1..k} log Gamma(x - (i-1)/2).
double log_multivariate_gamma(int k, double x);

// Inverted matrix-variate t density IT_{k,m}(n, 0, Id, Id) at the k x m
// matrix a.
double log_inverted_t_density(const DenseMatrix& a, int n_dof);

// Density f_n of the leading k x ell block of a Haar k x n Stiefel matrix.
double log_corner_density(const DenseMatrix& a, int k, int ell, int n);

// Density of the first column of a Haar k x n Stiefel matrix (ell = 1).
double log_first_column_density(const Vector& x, int n);

// W_k(n, Id) density at s.
double log_wishart_density(const SymmetricPSD& s, int k, int n);

double log_p_gaussian_density(double x, double p);

// Density of |Z|^p for Z p-Gaussian: gamma_p x^{1/p - 1} e^{-x/p} on x > 0.
double log_pth_power_density(double x, double p);

// E[Z^2] for the p-Gaussian; 1/3 at p = infinity (uniform on [-1, 1]).
double sigma_p_squared(double p);

// E[Z^4]; 1/5 at p = infinity.
double p_gaussian_fourth_moment(double p);

// CDF of one entry of a Haar-distributed unit vector in R^n (equivalently of
// the 1 x 1 corner of a Haar k x n Stiefel matrix): x^2 ~ Beta(1/2, (n-1)/2).
double stiefel_entry_cdf(double x, int n);

}  // namespace ldplab
