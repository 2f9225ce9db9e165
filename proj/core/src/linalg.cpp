#include "ldplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

// Slack on column norms beyond sqrt(k); columns of Stiefel matrices sit at
// norm <= 1 up to roundoff.
constexpr double kColumnNormSlack = 1e-9;

bool all_finite(const DenseMatrix& m) {
    return m.allFinite();
}

}  // namespace

ColumnList::ColumnList(int dim) : dim_(dim) {
    if (dim < 1) {
        throw DomainError("ColumnList: dimension must be positive");
    }
}

ColumnList::ColumnList(int dim, std::vector<Vector> columns) : ColumnList(dim) {
    const double max_norm = std::sqrt(static_cast<double>(dim)) + kColumnNormSlack;
    columns_.reserve(columns.size());
    for (auto& c : columns) {
        if (c.size() != dim) {
            throw DimensionMismatch("ColumnList: column of length " + std::to_string(c.size()) +
                                    " in a list of dimension " + std::to_string(dim));
        }
        if (!c.allFinite()) {
            throw DomainError("ColumnList: non-finite entry");
        }
        if (c.isZero(0.0)) {
            continue;
        }
        if (c.norm() > max_norm) {
            throw DomainError("ColumnList: column norm exceeds sqrt(k)");
        }
        columns_.push_back(std::move(c));
    }
}

ColumnList ColumnList::from_matrix(const DenseMatrix& a) {
    std::vector<Vector> cols;
    cols.reserve(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        cols.emplace_back(a.col(j));
    }
    return ColumnList(static_cast<int>(a.rows()), std::move(cols));
}

ColumnList ColumnList::prefix(std::size_t count) const {
    count = std::min(count, columns_.size());
    return ColumnList(dim_, std::vector<Vector>(columns_.begin(),
                                                columns_.begin() + static_cast<std::ptrdiff_t>(count)));
}

DenseMatrix ColumnList::to_matrix() const {
    DenseMatrix m(dim_, static_cast<Eigen::Index>(columns_.size()));
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        m.col(static_cast<Eigen::Index>(j)) = columns_[j];
    }
    return m;
}

SymmetricPSD::SymmetricPSD(const DenseMatrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
        throw DimensionMismatch("SymmetricPSD: matrix must be square and non-empty");
    }
    if (!all_finite(m)) {
        throw DomainError("SymmetricPSD: non-finite entry");
    }
    const Eigen::Index k = m.rows();
    matrix_.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            matrix_(i, j) = m(i, j);
            matrix_(j, i) = m(i, j);
        }
    }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(matrix_, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("SymmetricPSD: eigensolver did not converge");
    }
    // Eigen returns ascending order.
    eigenvalues_ = solver.eigenvalues().reverse();
    eigenvectors_ = solver.eigenvectors().rowwise().reverse();

    const double scale = std::max(1.0, std::abs(eigenvalues_(0)));
    const double tolerance =
        std::max(kPsdClampTolerance, 64.0 * std::numeric_limits<double>::epsilon() * scale);
    for (Eigen::Index i = 0; i < k; ++i) {
        if (eigenvalues_(i) < 0.0) {
            if (eigenvalues_(i) < -tolerance) {
                throw DomainError("SymmetricPSD: matrix has a negative eigenvalue " +
                                  std::to_string(eigenvalues_(i)));
            }
            eigenvalues_(i) = 0.0;
        }
    }
}

double SymmetricPSD::largest_eigenvalue() const {
    return eigenvalues_(0);
}

double SymmetricPSD::smallest_eigenvalue() const {
    return eigenvalues_(eigenvalues_.size() - 1);
}

SymmetricPSD gram(const DenseMatrix& a) {
    if (a.rows() < 1) {
        throw DimensionMismatch("gram: matrix needs at least one row");
    }
    const Eigen::Index k = a.rows();
    const Eigen::Index m = a.cols();
    DenseMatrix s = DenseMatrix::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i; j < k; ++j) {
            double acc = 0.0;
            for (Eigen::Index l = 0; l < m; ++l) {
                acc += a(i, l) * a(j, l);
            }
            s(i, j) = acc;
        }
    }
    return SymmetricPSD(s);
}

SymmetricPSD gram(const ColumnList& a) {
    return gram(a.to_matrix());
}

std::vector<double> sym_eigenvalues(const SymmetricPSD& s) {
    const auto& ev = s.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double log_det_complement(const SymmetricPSD& s) {
    if (s.largest_eigenvalue() >= 1.0 - kUnitLowerSlack) {
        return -std::numeric_limits<double>::infinity();
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < s.eigenvalues().size(); ++i) {
        acc += std::log1p(-s.eigenvalues()(i));
    }
    return acc;
}

SymmetricPSD psd_sqrt(const SymmetricPSD& s) {
    const Vector root = s.eigenvalues().cwiseSqrt();
    const DenseMatrix& q = s.eigenvectors();
    return SymmetricPSD(q * root.asDiagonal() * q.transpose());
}

DenseMatrix inverse_sqrt(const SymmetricPSD& s) {
    const double smallest = s.smallest_eigenvalue();
    const double largest = s.largest_eigenvalue();
    if (!(smallest > 0.0) || smallest < 1e3 * std::numeric_limits<double>::epsilon() * largest) {
        throw NumericalFailure("inverse_sqrt: matrix is numerically singular");
    }
    const Vector inv_root = s.eigenvalues().cwiseSqrt().cwiseInverse();
    const DenseMatrix& q = s.eigenvectors();
    return q * inv_root.asDiagonal() * q.transpose();
}

double operator_norm(const SymmetricPSD& s) {
    return s.largest_eigenvalue();
}

SymmetricPSD complement_clamped(const SymmetricPSD& s) {
    const Vector ev = (1.0 - s.eigenvalues().array()).max(0.0).matrix();
    const DenseMatrix& q = s.eigenvectors();
    return SymmetricPSD(q * ev.asDiagonal() * q.transpose());
}

namespace {

// Norm descending, then lexicographic on absolute entries.
std::vector<std::size_t> canonical_order(const ColumnList& list, std::vector<double>& norms) {
    norms.resize(list.size());
    for (std::size_t j = 0; j < list.size(); ++j) {
        norms[j] = list.column(j).norm();
    }
    std::vector<std::size_t> order(list.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (norms[a] != norms[b]) {
            return norms[a] > norms[b];
        }
        const Vector& ca = list.column(a);
        const Vector& cb = list.column(b);
        for (Eigen::Index i = 0; i < ca.size(); ++i) {
            const double x = std::abs(ca(i));
            const double y = std::abs(cb(i));
            if (x != y) {
                return x > y;
            }
        }
        return false;
    });
    return order;
}

struct SignedMatcher {
    const ColumnList& p;
    const ColumnList& q;
    const std::vector<std::size_t>& p_order;
    const std::vector<std::size_t>& q_order;
    const std::vector<double>& p_norms;
    const std::vector<double>& q_norms;
    double tol;
    std::vector<bool> used;

    bool matches(std::size_t pi, std::size_t qj) const {
        if (std::abs(p_norms[pi] - q_norms[qj]) > tol) {
            return false;
        }
        const Vector& a = p.column(pi);
        const Vector& b = q.column(qj);
        return (a - b).norm() <= tol || (a + b).norm() <= tol;
    }

    bool assign(std::size_t pos) {
        if (pos == p_order.size()) {
            return true;
        }
        const std::size_t pi = p_order[pos];
        for (std::size_t slot = 0; slot < q_order.size(); ++slot) {
            const std::size_t qj = q_order[slot];
            if (used[slot]) {
                continue;
            }
            // q_order is norm-descending: once q's norm is below p's by more
            // than tol no later candidate can match.
            if (q_norms[qj] < p_norms[pi] - tol) {
                break;
            }
            if (!matches(pi, qj)) {
                continue;
            }
            used[slot] = true;
            if (assign(pos + 1)) {
                return true;
            }
            used[slot] = false;
        }
        return false;
    }
};

}  // namespace

bool signed_permutation_equal(const ColumnList& p, const ColumnList& q, double tol) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("signed_permutation_equal: column dimensions differ");
    }
    if (p.size() != q.size()) {
        return false;
    }
    std::vector<double> p_norms;
    std::vector<double> q_norms;
    const auto p_order = canonical_order(p, p_norms);
    const auto q_order = canonical_order(q, q_norms);
    SignedMatcher matcher{p, q, p_order, q_order, p_norms, q_norms, tol,
                          std::vector<bool>(q.size(), false)};
    return matcher.assign(0);
}

double orthonormality_defect(const DenseMatrix& v) {
    const DenseMatrix vvt = v * v.transpose();
    return (vvt - DenseMatrix::Identity(v.rows(), v.rows())).norm();
}

}  // namespace ldplab
