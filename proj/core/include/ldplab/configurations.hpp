#pragma once

#include <string>
#include <vector>

#include "ldplab/linalg.hpp"
#include "ldplab/projections.hpp"
#include "ldplab/rng.hpp"
#include "ldplab/samplers.hpp"

namespace ldplab {

struct Atom {
    Vector point;
    int multiplicity = 1;
};

/// Symmetric point configuration sum_j (delta_{C_j} + delta_{-C_j}) on
/// [-1, 1]^k minus the origin. Each +/- pair is stored once, with the
/// canonical sign (first nonzero coordinate positive); pairs with the same
/// canonical point are merged. Rows of V(mu) must be square-summable with
/// ||V(mu) V(mu)^T|| <= 1 (up to kUnitUpperSlack).
class PointConfiguration {
public:
    explicit PointConfiguration(int dim);
    PointConfiguration(int dim, std::vector<Atom> atoms);

    int dim() const noexcept { return dim_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    bool empty() const noexcept { return atoms_.empty(); }
    // Number of +/- pairs counted with multiplicity.
    int pair_count() const noexcept;

private:
    int dim_;
    std::vector<Atom> atoms_;
};

// Flip x so that its first nonzero coordinate is positive.
Vector canonical_sign(const Vector& x);

// Pairs +/- C_j(V), dropping columns with norm < drop_tol and zero columns.
PointConfiguration config_from_stiefel(const DenseMatrix& v, double drop_tol = 0.0);

// One column per pair (with multiplicity), canonical sign, ordered by norm
// descending then lexicographically descending.
ColumnList config_to_matrix(const PointConfiguration& mu);

// Samples from Psi(mu). sigma^2 must equal the variance of the law.
EmpiricalMeasure psi(const PointConfiguration& mu, const PGaussianParams& law, double sigma,
                     const SeededRng& rng, int count);

// (sum_i alpha_i^k) for k = k_min..k_max.
std::vector<double> power_sums(const std::vector<double>& alpha, int k_min, int k_max);

struct PowerSumRecovery {
    enum class Method { Peeling, Pencil };

    // Non-increasing, repeated according to multiplicity.
    std::vector<double> values;
    // Third power sum not explained by the recovered values.
    double unresolved_tail_mass = 0.0;
    Method method = Method::Peeling;
};

/// Recovers a finite non-increasing sequence in (0, 1] from its power sums
/// s_k, k = 3..K (sums[0] is s_3). Dominant terms are peeled off one at a
/// time; a Hankel matrix-pencil estimate takes over when the peeled fit does
/// not reproduce the sums. Values below tol * alpha_1 count as tail mass.
PowerSumRecovery recover_from_power_sums(const std::vector<double>& sums, int count_bound,
                                         double tol);

// Signed-permutation equivalence, screened by row-wise power sums of |entries|
// for k = 3..k_max.
bool identify_equivalent(const ColumnList& p, const ColumnList& q, int k_max, double tol);

// {"dim": k, "atoms": [{"point": [...], "multiplicity": m}, ...]}
std::string config_to_json(const PointConfiguration& mu);
PointConfiguration config_from_json(const std::string& text);

}  // namespace ldplab
