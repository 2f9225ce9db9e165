#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace ldplab {

// Real k x m matrix. Houses Stiefel samples, Gaussian matrices and finite
// corners of k x infinity matrices.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Negative eigenvalues of a Gram matrix down to this magnitude are treated as
// roundoff and clamped to zero.
inline constexpr double kPsdClampTolerance = 1e-10;

// lambda_1 >= 1 - kUnitLowerSlack is classified as "on or over the unit
// operator-norm boundary".
inline constexpr double kUnitLowerSlack = 1e-12;
// Boundary band [1 - kUnitLowerSlack, 1 + kUnitUpperSlack]; beyond it the
// matrix is strictly outside the unit ball.
inline constexpr double kUnitUpperSlack = 1e-10;

/// Finite ordered list of nonzero columns in R^k, standing for a k x infinity
/// matrix padded with zero columns. Zero columns are dropped on construction;
/// a column of norm above sqrt(k) (beyond roundoff) is rejected.
class ColumnList {
public:
    explicit ColumnList(int dim);
    ColumnList(int dim, std::vector<Vector> columns);

    static ColumnList from_matrix(const DenseMatrix& a);

    int dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return columns_.size(); }
    bool empty() const noexcept { return columns_.empty(); }
    const Vector& column(std::size_t j) const { return columns_.at(j); }
    const std::vector<Vector>& columns() const noexcept { return columns_; }

    // The first `count` columns (clamped to size()).
    ColumnList prefix(std::size_t count) const;

    // k x size() matrix; a k x 0 matrix when empty.
    DenseMatrix to_matrix() const;

private:
    int dim_;
    std::vector<Vector> columns_;
};

/// Symmetric positive semi-definite k x k matrix. The upper triangle of the
/// input is authoritative and mirrored, so the stored matrix is exactly
/// symmetric. Eigenvalues (non-increasing, clamped at zero) and matching
/// eigenvectors are computed once in the constructor.
class SymmetricPSD {
public:
    explicit SymmetricPSD(const DenseMatrix& m);

    int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
    const DenseMatrix& matrix() const noexcept { return matrix_; }
    const Vector& eigenvalues() const noexcept { return eigenvalues_; }
    const DenseMatrix& eigenvectors() const noexcept { return eigenvectors_; }

    double largest_eigenvalue() const;
    double smallest_eigenvalue() const;

private:
    DenseMatrix matrix_;
    Vector eigenvalues_;
    DenseMatrix eigenvectors_;
};

// A A^T with a fixed left-to-right accumulation order.
SymmetricPSD gram(const DenseMatrix& a);
SymmetricPSD gram(const ColumnList& a);

std::vector<double> sym_eigenvalues(const SymmetricPSD& s);

/// sum_i log(1 - lambda_i). Returns -infinity once lambda_1 reaches the unit
/// boundary band (lambda_1 >= 1 - kUnitLowerSlack).
double log_det_complement(const SymmetricPSD& s);

SymmetricPSD psd_sqrt(const SymmetricPSD& s);

// S^{-1/2}; throws NumericalFailure when S is numerically singular.
DenseMatrix inverse_sqrt(const SymmetricPSD& s);

double operator_norm(const SymmetricPSD& s);

// Id - S with eigenvalues clamped into [0, 1]; used for the Gaussian part of
// projected laws when ||S|| may sit exactly on 1.
SymmetricPSD complement_clamped(const SymmetricPSD& s);

/// True when the columns of p and q agree up to a permutation combined with
/// sign flips, each matched pair within Euclidean distance tol.
bool signed_permutation_equal(const ColumnList& p, const ColumnList& q, double tol);

// Frobenius norm of V V^T - Id.
double orthonormality_defect(const DenseMatrix& v);

}  // namespace ldplab
