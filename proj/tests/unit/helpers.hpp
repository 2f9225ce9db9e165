#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ldplab/linalg.hpp"
#include "ldplab/rng.hpp"

namespace testing {

inline ldplab::DenseMatrix random_matrix(ldplab::SeededRng& rng, int rows, int cols, double scale = 1.0) {
    ldplab::DenseMatrix a(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            a(i, j) = scale * rng.normal();
        }
    }
    return a;
}

// Rescales so that the operator norm of A A^T equals target.
inline ldplab::DenseMatrix with_norm(const ldplab::DenseMatrix& a, double target) {
    const double top = ldplab::operator_norm(ldplab::gram(a));
    return a * std::sqrt(target / top);
}

inline ldplab::DenseMatrix signed_permutation(ldplab::SeededRng& rng, int m) {
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        perm[static_cast<std::size_t>(i)] = i;
    }
    for (int i = m - 1; i > 0; --i) {
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.next_u32() % static_cast<unsigned>(i + 1))]);
    }
    ldplab::DenseMatrix p = ldplab::DenseMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
        p(i, perm[static_cast<std::size_t>(i)]) = (rng.next_u32() & 1u) ? 1.0 : -1.0;
    }
    return p;
}

inline double sample_mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) {
        s += x;
    }
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double m = sample_mean(xs);
    double s = 0.0;
    for (double x : xs) {
        s += (x - m) * (x - m);
    }
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace testing
