#include "ldplab/configurations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>

#include <Eigen/Eigenvalues>
#include "json.hpp"

#include "ldplab/errors.hpp"

namespace ldplab {

namespace {

constexpr double kEntrySlack = 1e-12;

// Norm descending, then lexicographically descending.
bool canonical_less(const Vector& a, const Vector& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na != nb) {
        return na > nb;
    }
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) != b(i)) {
            return a(i) > b(i);
        }
    }
    return false;
}

}  // namespace

Vector canonical_sign(const Vector& x) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x(i) != 0.0) {
            return x(i) > 0.0 ? x : Vector(-x);
        }
    }
    return x;
}

PointConfiguration::PointConfiguration(int dim) : dim_(dim) {
    if (dim < 1) {
        throw DomainError("PointConfiguration: dimension must be positive");
    }
}

PointConfiguration::PointConfiguration(int dim, std::vector<Atom> atoms) : PointConfiguration(dim) {
    for (auto& atom : atoms) {
        if (atom.point.size() != dim) {
            throw DimensionMismatch("PointConfiguration: atom of wrong dimension");
        }
        if (!atom.point.allFinite()) {
            throw DomainError("PointConfiguration: non-finite atom");
        }
        if (atom.point.cwiseAbs().maxCoeff() > 1.0 + kEntrySlack) {
            throw DomainError("PointConfiguration: atom outside [-1, 1]^k");
        }
        if (atom.point.isZero(0.0)) {
            throw DomainError("PointConfiguration: atom at the origin");
        }
        if (atom.multiplicity < 1) {
            throw DomainError("PointConfiguration: multiplicity must be >= 1");
        }
        atom.point = canonical_sign(atom.point);
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return canonical_less(a.point, b.point); });
    for (auto& atom : atoms) {
        if (!atoms_.empty() && atoms_.back().point == atom.point) {
            atoms_.back().multiplicity += atom.multiplicity;
        } else {
            atoms_.push_back(std::move(atom));
        }
    }

    DenseMatrix s = DenseMatrix::Zero(dim, dim);
    for (const auto& atom : atoms_) {
        s += atom.multiplicity * atom.point * atom.point.transpose();
    }
    for (int i = 0; i < dim; ++i) {
        if (s(i, i) > 1.0 + kUnitUpperSlack) {
            throw DomainError("PointConfiguration: row " + std::to_string(i) +
                              " has squared norm above 1");
        }
    }
    if (SymmetricPSD(s).largest_eigenvalue() > 1.0 + kUnitUpperSlack) {
        throw DomainError("PointConfiguration: ||V V^T|| exceeds 1");
    }
}

int PointConfiguration::pair_count() const noexcept {
    int n = 0;
    for (const auto& atom : atoms_) {
        n += atom.multiplicity;
    }
    return n;
}

PointConfiguration config_from_stiefel(const DenseMatrix& v, double drop_tol) {
    std::vector<Atom> atoms;
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
        const double norm = v.col(j).norm();
        if (norm == 0.0 || norm < drop_tol) {
            continue;
        }
        atoms.push_back({v.col(j), 1});
    }
    return PointConfiguration(static_cast<int>(v.rows()), std::move(atoms));
}

ColumnList config_to_matrix(const PointConfiguration& mu) {
    std::vector<Vector> cols;
    for (const auto& atom : mu.atoms()) {
        for (int m = 0; m < atom.multiplicity; ++m) {
            cols.push_back(atom.point);
        }
    }
    return ColumnList(mu.dim(), std::move(cols));
}

EmpiricalMeasure psi(const PointConfiguration& mu, const PGaussianParams& law, double sigma,
                     const SeededRng& rng, int count) {
    const ProductLaw product = ProductLaw::p_gaussian(law);
    const double variance = sigma * sigma;
    if (std::abs(variance - product.variance()) > 1e-9 * std::max(1.0, product.variance())) {
        throw DomainError("psi: sigma^2 must equal the variance of the product law");
    }
    return sample_projected_law(rng, ProjectedLaw(config_to_matrix(mu), variance, product), count);
}

std::vector<double> power_sums(const std::vector<double>& alpha, int k_min, int k_max) {
    if (k_min < 3) {
        throw DomainError("power_sums: k_min must be >= 3");
    }
    if (k_max < k_min) {
        throw DomainError("power_sums: k_max must be >= k_min");
    }
    for (double a : alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw DomainError("power_sums: entries must be finite and non-negative");
        }
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_max - k_min + 1));
    for (int k = k_min; k <= k_max; ++k) {
        long double acc = 0.0L;
        for (double a : alpha) {
            acc += std::pow(static_cast<long double>(a), k);
        }
        out.push_back(static_cast<double>(acc));
    }
    return out;
}

namespace {

constexpr int kFirstPower = 3;
// Relative residual below which a candidate reproduces the sums.
constexpr double kFitTolerance = 1e-9;

struct PeeledAtom {
    double value = 0.0;
    int multiplicity = 1;
    // Relative uncertainty of value, propagated into later residuals.
    double uncertainty = 0.0;
};

struct Candidate {
    std::vector<PeeledAtom> atoms;
    bool tail_declared = false;
};

double model_sum(const std::vector<PeeledAtom>& atoms, int k) {
    long double acc = 0.0L;
    for (const auto& a : atoms) {
        acc += a.multiplicity * std::pow(static_cast<long double>(a.value), k);
    }
    return static_cast<double>(acc);
}

// Dominant-term peeling: alpha from the ratio r_{k+1}/r_k at the top of the
// run of trustworthy residuals (Aitken-accelerated when the ratios still
// move), multiplicity from r_k / alpha^k.
std::optional<Candidate> peel(const std::vector<double>& s, int count_bound, double tol) {
    Candidate out;
    const std::size_t len = s.size();
    std::vector<double> r(len);
    for (;;) {
        for (std::size_t i = 0; i < len; ++i) {
            const int k = kFirstPower + static_cast<int>(i);
            r[i] = s[i] - model_sum(out.atoms, k);
        }
        std::size_t run = 0;
        while (run < len) {
            const int k = kFirstPower + static_cast<int>(run);
            double err = 1e-14 * s[run] * static_cast<double>(out.atoms.size() + 1);
            for (const auto& a : out.atoms) {
                err += a.multiplicity * std::pow(a.value, k) * k * a.uncertainty;
            }
            if (!(r[run] > 100.0 * err)) {
                break;
            }
            ++run;
        }
        if (run < 3) {
            break;
        }
        const std::size_t top = run - 1;
        const std::size_t lo = top >= 10 ? top - 10 : 0;
        std::vector<double> q;
        for (std::size_t i = lo; i < top; ++i) {
            q.push_back(r[i + 1] / r[i]);
        }
        const std::size_t nq = q.size();
        double alpha = q[nq - 1];
        double uncertainty = nq > 1 ? std::abs(q[nq - 1] - q[nq - 2]) / alpha : 1e-2;
        if (nq >= 3) {
            const double d1 = q[nq - 1] - q[nq - 2];
            const double d2 = q[nq - 1] - 2.0 * q[nq - 2] + q[nq - 3];
            if (std::abs(d1) > 1e-12 * alpha && d2 != 0.0) {
                const double aitken = q[nq - 1] - d1 * d1 / d2;
                if (aitken > 0.0 && aitken <= 1.0 + 1e-12) {
                    uncertainty = std::abs(aitken - q[nq - 1]) / alpha;
                    alpha = aitken;
                }
            }
        }
        const int k_top = kFirstPower + static_cast<int>(top);
        const double m_hat = r[top] / std::pow(alpha, k_top);
        const double m_round = std::round(m_hat);
        if (m_round < 1.0 || std::abs(m_round - m_hat) > 0.2) {
            return std::nullopt;
        }
        if (!out.atoms.empty() && alpha < tol * out.atoms.front().value) {
            out.tail_declared = true;
            break;
        }
        out.atoms.push_back({alpha, static_cast<int>(m_round), std::max(uncertainty, 1e-15)});
        int total = 0;
        for (const auto& a : out.atoms) {
            total += a.multiplicity;
        }
        if (total > count_bound) {
            return std::nullopt;
        }
    }
    return out;
}

// Hankel matrix-pencil estimate of the nodes and weights of
// s_k = sum_i w_i z_i^k.
std::optional<Candidate> pencil(const std::vector<double>& s, int count_bound, double tol) {
    const int len = std::min(static_cast<int>(s.size()), 4 * count_bound + 16);
    const int cols = len / 2 + 1;
    const int rows = len - cols + 1;
    if (rows < 2 || cols < 2) {
        return std::nullopt;
    }
    DenseMatrix y(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            y(i, j) = s[static_cast<std::size_t>(i + j)];
        }
    }
    Eigen::JacobiSVD<DenseMatrix> svd(y, Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    int order = 0;
    while (order < sv.size() && sv(order) > 1e-11 * sv(0)) {
        ++order;
    }
    order = std::min({order, count_bound, cols - 1});
    if (order < 1) {
        return std::nullopt;
    }
    const DenseMatrix v = svd.matrixV().leftCols(order);
    const DenseMatrix v1 = v.topRows(cols - 1);
    const DenseMatrix v2 = v.bottomRows(cols - 1);
    const DenseMatrix shift = v1.completeOrthogonalDecomposition().solve(v2);
    Eigen::EigenSolver<DenseMatrix> eig(shift, false);
    if (eig.info() != Eigen::Success) {
        return std::nullopt;
    }
    std::vector<double> nodes;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const auto z = eig.eigenvalues()(i);
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real())) || !(z.real() > 0.0)) {
            return std::nullopt;
        }
        nodes.push_back(std::min(z.real(), 1.0));
    }
    std::sort(nodes.rbegin(), nodes.rend());

    // Weights by least squares on the relatively scaled system.
    DenseMatrix a(len, order);
    Vector ones = Vector::Ones(len);
    for (int i = 0; i < len; ++i) {
        const int k = kFirstPower + i;
        for (int j = 0; j < order; ++j) {
            a(i, j) = std::pow(nodes[static_cast<std::size_t>(j)], k) / s[static_cast<std::size_t>(i)];
        }
    }
    const Vector w = a.colPivHouseholderQr().solve(ones);
    Candidate out;
    for (int j = 0; j < order; ++j) {
        const double node = nodes[static_cast<std::size_t>(j)];
        if (node < tol * nodes.front()) {
            out.tail_declared = true;
            continue;
        }
        const double m_round = std::round(w(j));
        if (m_round < 1.0 || std::abs(m_round - w(j)) > 0.2) {
            return std::nullopt;
        }
        out.atoms.push_back({node, static_cast<int>(m_round), 0.0});
    }
    return out;
}

// Levenberg-Marquardt on the relative residuals with multiplicities fixed.
void polish(const std::vector<double>& s, std::vector<PeeledAtom>& atoms) {
    const int n = static_cast<int>(atoms.size());
    if (n == 0) {
        return;
    }
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] > 0.0) {
            used.push_back(i);
        }
    }
    const auto cost = [&](const std::vector<PeeledAtom>& at) {
        double c = 0.0;
        for (std::size_t i : used) {
            const double e = model_sum(at, kFirstPower + static_cast<int>(i)) / s[i] - 1.0;
            c += e * e;
        }
        return c;
    };
    double lambda = 1e-3;
    double current = cost(atoms);
    for (int iter = 0; iter < 200 && lambda < 1e12; ++iter) {
        DenseMatrix normal = DenseMatrix::Zero(n, n);
        Vector grad = Vector::Zero(n);
        Vector row(n);
        for (std::size_t i : used) {
            const int k = kFirstPower + static_cast<int>(i);
            const double e = model_sum(atoms, k) / s[i] - 1.0;
            for (int j = 0; j < n; ++j) {
                const auto& a = atoms[static_cast<std::size_t>(j)];
                row(j) = a.multiplicity * k * std::pow(a.value, k - 1) / s[i];
            }
            normal += row * row.transpose();
            grad += e * row;
        }
        DenseMatrix damped = normal;
        damped.diagonal() *= 1.0 + lambda;
        const Vector step = damped.ldlt().solve(grad);
        if (!step.allFinite()) {
            break;
        }
        auto trial = atoms;
        for (int j = 0; j < n; ++j) {
            auto& a = trial[static_cast<std::size_t>(j)];
            a.value = std::clamp(a.value - step(j), 1e-300, 1.0);
        }
        const double next = cost(trial);
        if (next < current) {
            atoms = std::move(trial);
            current = next;
            lambda = std::max(lambda * 0.1, 1e-12);
            if (step.cwiseAbs().maxCoeff() < 1e-15) {
                break;
            }
        } else {
            lambda *= 10.0;
        }
    }
}

double max_relative_residual(const std::vector<double>& s, const std::vector<PeeledAtom>& atoms) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] > 0.0) {
            const double m = model_sum(atoms, kFirstPower + static_cast<int>(i));
            worst = std::max(worst, std::abs(m - s[i]) / s[i]);
        }
    }
    return worst;
}

bool accept(const std::vector<double>& s, Candidate& c) {
    polish(s, c.atoms);
    return c.tail_declared || max_relative_residual(s, c.atoms) <= kFitTolerance;
}

PowerSumRecovery finish(const std::vector<double>& s, const Candidate& c,
                        PowerSumRecovery::Method method, int count_bound) {
    PowerSumRecovery out;
    out.method = method;
    for (const auto& a : c.atoms) {
        for (int m = 0; m < a.multiplicity; ++m) {
            out.values.push_back(a.value);
        }
    }
    if (static_cast<int>(out.values.size()) > count_bound) {
        throw RecoveryFailure("recover_from_power_sums: more values than count_bound");
    }
    std::sort(out.values.rbegin(), out.values.rend());
    out.unresolved_tail_mass = std::max(0.0, s.front() - model_sum(c.atoms, kFirstPower));
    return out;
}

}  // namespace

PowerSumRecovery recover_from_power_sums(const std::vector<double>& sums, int count_bound,
                                         double tol) {
    if (count_bound < 1) {
        throw DomainError("recover_from_power_sums: count_bound must be >= 1");
    }
    if (sums.size() < 3) {
        throw DomainError("recover_from_power_sums: need at least three power sums");
    }
    for (double v : sums) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DomainError("recover_from_power_sums: sums must be finite and non-negative");
        }
    }
    if (sums.front() == 0.0) {
        return {};
    }
    if (auto c = peel(sums, count_bound, tol); c && accept(sums, *c)) {
        return finish(sums, *c, PowerSumRecovery::Method::Peeling, count_bound);
    }
    if (auto c = pencil(sums, count_bound, tol); c && accept(sums, *c)) {
        return finish(sums, *c, PowerSumRecovery::Method::Pencil, count_bound);
    }
    throw RecoveryFailure("recover_from_power_sums: power sums not reproduced within " +
                          std::to_string(sums.size()) + " indices");
}

bool identify_equivalent(const ColumnList& p, const ColumnList& q, int k_max, double tol) {
    if (p.dim() != q.dim()) {
        throw DimensionMismatch("identify_equivalent: column dimensions differ");
    }
    if (p.size() != q.size()) {
        return false;
    }
    const double n = static_cast<double>(p.size());
    for (int i = 0; i < p.dim(); ++i) {
        std::vector<double> row_p;
        std::vector<double> row_q;
        for (std::size_t j = 0; j < p.size(); ++j) {
            row_p.push_back(std::abs(p.column(j)(i)));
            row_q.push_back(std::abs(q.column(j)(i)));
        }
        for (int k = kFirstPower; k <= k_max; ++k) {
            const double sp = power_sums(row_p, k, k).front();
            const double sq = power_sums(row_q, k, k).front();
            // Entries within tol move each k-th power by at most k * tol.
            if (std::abs(sp - sq) > n * k * tol + 1e-12 * (sp + sq)) {
                return false;
            }
        }
    }
    return signed_permutation_equal(p, q, tol);
}

std::string config_to_json(const PointConfiguration& mu) {
    nlohmann::json doc;
    doc["dim"] = mu.dim();
    doc["atoms"] = nlohmann::json::array();
    for (const auto& atom : mu.atoms()) {
        std::vector<double> point(atom.point.data(), atom.point.data() + atom.point.size());
        doc["atoms"].push_back({{"point", point}, {"multiplicity", atom.multiplicity}});
    }
    return doc.dump(2);
}

PointConfiguration config_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("configuration JSON: ") + e.what());
    }
    const std::set<std::string> top_keys{"dim", "atoms"};
    const std::set<std::string> atom_keys{"point", "multiplicity"};
    try {
        for (const auto& [key, value] : doc.items()) {
            if (!top_keys.contains(key)) {
                throw DomainError("configuration JSON: unknown field '" + key + "'");
            }
        }
        const int dim = doc.at("dim").get<int>();
        std::vector<Atom> atoms;
        for (const auto& a : doc.at("atoms")) {
            for (const auto& [key, value] : a.items()) {
                if (!atom_keys.contains(key)) {
                    throw DomainError("configuration JSON: unknown atom field '" + key + "'");
                }
            }
            const auto point = a.at("point").get<std::vector<double>>();
            Atom atom;
            atom.point = Eigen::Map<const Vector>(point.data(), static_cast<Eigen::Index>(point.size()));
            atom.multiplicity = a.value("multiplicity", 1);
            atoms.push_back(std::move(atom));
        }
        return PointConfiguration(dim, std::move(atoms));
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("configuration JSON: ") + e.what());
    }
}

}  // namespace ldplab
