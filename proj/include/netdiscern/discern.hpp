#pragma once

// Discernibility analysis: given the nominal dynamics and the dynamics
// after a topology variation, which initial states evolve identically
// (the indiscernible set), which eigenvectors are invisible to a given
// variation (componentwise fast tests), and which sensor subsets keep
// the variation visible through partial measurements (output
// discernibility, sensor bound, placement search).
//
// The componentwise tests come from a simple fact: an eigenvector x of
// the nominal matrix (with eigenvalue lambda) is indiscernible exactly
// when it is also an eigenvector of the modified matrix for the same
// lambda, i.e. when (Phi_bar - Phi) x = 0.  Expanding the rank-one
// structure of each variation turns that into conditions on a handful
// of components of x.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/network.hpp"
#include "netdiscern/spectral.hpp"
#include "netdiscern/subspace.hpp"
#include "netdiscern/svd.hpp"
#include "netdiscern/tolerances.hpp"

namespace netdiscern {

/// Measured node subset; induces the row-selection output matrix M.
struct SensorSet {
    std::vector<int> nodes;   ///< 0-based, strictly increasing

    static SensorSet of(std::vector<int> nodes_in, std::size_t n) {
        std::sort(nodes_in.begin(), nodes_in.end());
        for (std::size_t i = 0; i < nodes_in.size(); ++i) {
            if (nodes_in[i] < 0 || static_cast<std::size_t>(nodes_in[i]) >= n)
                throw invalid_spec_error("sensor node index " + std::to_string(nodes_in[i]) +
                                         " out of range");
            if (i > 0 && nodes_in[i] == nodes_in[i - 1])
                throw invalid_spec_error("duplicate sensor node index " +
                                         std::to_string(nodes_in[i]));
        }
        return SensorSet{std::move(nodes_in)};
    }

    std::size_t count() const { return nodes.size(); }

    Matrix selection_matrix(std::size_t n) const {
        Matrix m(nodes.size(), n);
        for (std::size_t r = 0; r < nodes.size(); ++r)
            m(r, static_cast<std::size_t>(nodes[r])) = 1.0;
        return m;
    }
};

// --- componentwise eigenvector tests ---------------------------------------

/// Verdict of a componentwise test, with a marginality flag raised when
/// any decisive quantity fell within tolerances.marginal_band of the
/// decision threshold (either side).
struct ComponentVerdict {
    bool indiscernible = false;
    bool marginal = false;
};

namespace detail {

inline ComponentVerdict judge_quantities(const std::vector<std::pair<double, double>>& qs) {
    // Each entry is (|quantity|, threshold); indiscernible iff all are
    // under threshold.
    ComponentVerdict v;
    v.indiscernible = true;
    for (const auto& [q, threshold] : qs) {
        if (q > threshold) v.indiscernible = false;
        if (threshold > 0.0 && q > threshold / 10.0 && q <= threshold * 10.0) v.marginal = true;
    }
    return v;
}

inline double component_tol(const Vector& x, const Tolerances& tol) {
    return tol.component_rel * norm(x);
}

} // namespace detail

/// Link (i,j) drop without reconfiguration is invisible along x exactly
/// when both endpoint components vanish.
inline ComponentVerdict link_drop_test(const Vector& x, int i, int j,
                                       const Tolerances& tol = {}) {
    const double t = detail::component_tol(x, tol);
    return detail::judge_quantities({{std::abs(x[static_cast<std::size_t>(i)]), t},
                                     {std::abs(x[static_cast<std::size_t>(j)]), t}});
}

/// Link (i,j) drop with reconfiguration is invisible along x exactly
/// when the two endpoint components agree.
inline ComponentVerdict link_drop_reconfig_test(const Vector& x, int i, int j,
                                                const Tolerances& tol = {}) {
    const double t = detail::component_tol(x, tol);
    const double d = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
    return detail::judge_quantities({{std::abs(d), t}});
}

/// Node i drop without reconfiguration is invisible along x exactly
/// when x_i = 0 and the weighted neighbor sum  sum_j phi_ij x_j
/// vanishes.  With all weights positive the sum can only vanish when
/// every neighbor component does; signed weights may cancel instead,
/// which is why the sum — not the individual components — is the test.
inline ComponentVerdict node_drop_test(const NetworkModel& model, const Vector& x, int i,
                                       const Tolerances& tol = {}) {
    const auto neigh = model.neighbors(i);
    if (neigh.empty()) throw invalid_spec_error("node drop test on isolated node");
    const double t = detail::component_tol(x, tol);

    double weighted_sum = 0.0;
    double weight_scale = 0.0;
    for (int j : neigh) {
        const double w = model.weight(i, j);
        weighted_sum += w * x[static_cast<std::size_t>(j)];
        weight_scale += std::abs(w);
    }
    const double row_tol = t * std::max(1.0, weight_scale);
    return detail::judge_quantities({{std::abs(x[static_cast<std::size_t>(i)]), t},
                                     {std::abs(weighted_sum), row_tol}});
}

/// Node i drop with reconfiguration is invisible along x exactly when
/// every neighbor component equals x_i.
inline ComponentVerdict node_drop_reconfig_test(const NetworkModel& model, const Vector& x,
                                                int i, const Tolerances& tol = {}) {
    const auto neigh = model.neighbors(i);
    if (neigh.empty()) throw invalid_spec_error("node drop test on isolated node");
    const double t = detail::component_tol(x, tol);

    std::vector<std::pair<double, double>> qs;
    qs.reserve(neigh.size());
    const double xi = x[static_cast<std::size_t>(i)];
    for (int j : neigh) qs.push_back({std::abs(x[static_cast<std::size_t>(j)] - xi), t});
    return detail::judge_quantities(qs);
}

/// Dispatch the componentwise test matching the variation kind.
/// x must be an eigenvector of the model's dynamics matrix with the
/// stated eigenvalue; anything else is a contract violation.
inline ComponentVerdict eigenvector_indiscernible(const NetworkModel& model,
                                                  const VariationSpec& spec, const Vector& x,
                                                  double lambda, const Tolerances& tol = {}) {
    validate_variation(model, spec);
    if (x.size() != model.size())
        throw contract_violation("eigenvector length does not match model size");

    const Matrix phi = model.to_dense();
    Vector resid = phi * x;
    for (std::size_t k = 0; k < resid.size(); ++k) resid[k] -= lambda * x[k];
    const double gate = tol.component_rel * (1.0 + frobenius_norm(phi)) * norm(x);
    if (norm(resid) > gate)
        throw contract_violation("vector is not an eigenvector of the dynamics matrix "
                                 "for the stated eigenvalue");

    switch (spec.kind) {
        case VariationKind::link_no_reconfig: return link_drop_test(x, spec.i, spec.j, tol);
        case VariationKind::link_reconfig:
            return link_drop_reconfig_test(x, spec.i, spec.j, tol);
        case VariationKind::node_no_reconfig: return node_drop_test(model, x, spec.i, tol);
        case VariationKind::node_reconfig:
            return node_drop_reconfig_test(model, x, spec.i, tol);
    }
    throw contract_violation("unknown variation kind");
}

// --- the indiscernible set --------------------------------------------------

/// One eigenvalue shared by the nominal and modified spectra, with the
/// intersection of the two eigenspaces.
struct SharedMode {
    double lambda = 0.0;       ///< nominal representative
    double lambda_bar = 0.0;   ///< modified representative
    Matrix psi;                ///< n x d orthonormal basis of the eigenspace intersection
    bool marginal_match = false;  ///< |lambda - lambda_bar| close to the matching gap
};

struct DiscernibilityAnalysis {
    std::vector<SharedMode> shared;
    /// Eigenvalue pairs just outside the matching gap (within the
    /// marginal band); a verdict nearby may flip with the tolerance.
    std::vector<std::pair<double, double>> near_misses;
    Matrix indiscernible_basis;   ///< n x dim, orthonormal
    bool fully_discernible = false;
    double match_gap = 0.0;
};

namespace detail {

struct GroupMatch {
    std::vector<std::pair<std::size_t, std::size_t>> shared;  // (nominal idx, modified idx)
    std::vector<std::size_t> nominal_only;
    std::vector<std::size_t> modified_only;
    std::vector<std::pair<double, double>> near_misses;
    double gap = 0.0;
};

inline GroupMatch match_groups(const EigenStructure& nominal, const EigenStructure& modified,
                               const Tolerances& tol) {
    GroupMatch m;
    m.gap = std::max(nominal.cluster_gap(), modified.cluster_gap());
    const auto& ga = nominal.groups();
    const auto& gb = modified.groups();

    std::vector<bool> used(gb.size(), false);
    for (std::size_t a = 0; a < ga.size(); ++a) {
        std::size_t best = gb.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < gb.size(); ++b) {
            if (used[b]) continue;
            const double d = std::abs(ga[a].value - gb[b].value);
            if (d < best_d) {
                best_d = d;
                best = b;
            }
        }
        if (best < gb.size() && best_d <= m.gap) {
            used[best] = true;
            m.shared.push_back({a, best});
        } else {
            m.nominal_only.push_back(a);
            if (best < gb.size() && best_d <= tol.marginal_band * m.gap)
                m.near_misses.push_back({ga[a].value, gb[best].value});
        }
    }
    for (std::size_t b = 0; b < gb.size(); ++b)
        if (!used[b]) m.modified_only.push_back(b);
    return m;
}

} // namespace detail

/// The indiscernible set: the span, over every shared eigenvalue, of
/// the intersection of the two eigenspaces.  Disjoint spectra give the
/// trivial set.
inline DiscernibilityAnalysis indiscernible_set(const EigenStructure& nominal,
                                                const EigenStructure& modified,
                                                const Tolerances& tol = {}) {
    if (nominal.dimension() != modified.dimension())
        throw contract_violation("indiscernible_set: dimension mismatch");
    const std::size_t n = nominal.dimension();

    const detail::GroupMatch match = detail::match_groups(nominal, modified, tol);

    DiscernibilityAnalysis out;
    out.match_gap = match.gap;
    out.near_misses = match.near_misses;
    out.indiscernible_basis = Matrix(n, 0);
    for (const auto& [a, b] : match.shared) {
        const EigenGroup& g = nominal.groups()[a];
        const EigenGroup& gb = modified.groups()[b];
        SharedMode mode;
        mode.lambda = g.value;
        mode.lambda_bar = gb.value;
        mode.psi = intersection(g.basis, gb.basis, tol.rank_rel);
        mode.marginal_match =
            match.gap > 0.0 && std::abs(g.value - gb.value) > match.gap / tol.marginal_band;
        out.indiscernible_basis = hcat(out.indiscernible_basis, mode.psi);
        out.shared.push_back(std::move(mode));
    }
    out.fully_discernible = out.indiscernible_basis.cols() == 0;
    return out;
}

/// The indiscernible set computed the componentwise way: per nominal
/// eigenvalue cluster, the subspace of eigenvectors killed by the
/// variation's difference matrix.  Agrees with indiscernible_set; used
/// as an independent route and for per-mode reporting.
inline Matrix componentwise_indiscernible_set(const NetworkModel& model,
                                              const VariationSpec& spec,
                                              const EigenStructure& nominal,
                                              const Tolerances& tol = {}) {
    validate_variation(model, spec);
    const std::size_t n = model.size();

    // Rows of the constraint matrix R: x indiscernible <=> R x = 0.
    Matrix r(0, n);
    const auto unit_row = [&](int idx) {
        Matrix row(1, n);
        row(0, static_cast<std::size_t>(idx)) = 1.0;
        return row;
    };
    const auto diff_row = [&](int a, int b) {
        Matrix row(1, n);
        row(0, static_cast<std::size_t>(a)) = 1.0;
        row(0, static_cast<std::size_t>(b)) = -1.0;
        return row;
    };
    switch (spec.kind) {
        case VariationKind::link_no_reconfig:
            r = vcat(unit_row(spec.i), unit_row(spec.j));
            break;
        case VariationKind::link_reconfig:
            r = diff_row(spec.i, spec.j);
            break;
        case VariationKind::node_no_reconfig: {
            Matrix weighted(1, n);
            for (int j : model.neighbors(spec.i))
                weighted(0, static_cast<std::size_t>(j)) = model.weight(spec.i, j);
            r = vcat(unit_row(spec.i), weighted);
            break;
        }
        case VariationKind::node_reconfig: {
            for (int j : model.neighbors(spec.i)) r = vcat(r, diff_row(spec.i, j));
            break;
        }
    }

    // Constraint values are bounded by the row scale times the unit
    // basis columns, so rank decisions are anchored there: a constraint
    // row evaluating to pure rounding residue (e.g. x_i - x_j on the
    // stationary mode) must not count as an active constraint.
    double r_scale = 1.0;
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) r_scale = std::max(r_scale, std::abs(r(i, j)));

    Matrix basis(n, 0);
    for (const EigenGroup& g : nominal.groups()) {
        const Matrix constrained = r * g.basis;    // rows x mu
        const Matrix nul = null_space(constrained, tol.rank_rel, r_scale);
        if (nul.cols() > 0) basis = hcat(basis, g.basis * nul);
    }
    return basis;
}

// --- output discernibility ---------------------------------------------------

/// One rank condition evaluated for a sensor set.  index 1 covers
/// eigenvalues only in the nominal spectrum, 2 only in the modified
/// spectrum, 3 the shared ones.
struct RankCondition {
    int index = 0;
    double lambda = 0.0;
    double lambda_bar = std::numeric_limits<double>::quiet_NaN();  ///< set for index 3
    std::size_t required = 0;
    std::size_t achieved = 0;
    bool satisfied = false;
    bool marginal = false;   ///< a singular value sat near the rank threshold
};

/// A block of the joint indiscernible subspace in R^{2n}: pairs of
/// initial states (nominal; modified) whose measured outputs coincide.
struct JointBlock {
    enum class Kind { shared, nominal_only, modified_only };
    Kind kind = Kind::shared;
    double lambda = 0.0;
    Matrix basis;   ///< 2n x d, orthonormal
};

struct OutputDiscernibilityAnalysis {
    bool cond_i = true;
    bool cond_ii = true;
    bool cond_iii = true;
    bool output_discernible = false;
    std::vector<RankCondition> conditions;
    std::vector<JointBlock> blocks;
    Matrix i_of_m;                       ///< 2n x d orthonormal, span of all blocks
    std::size_t dim_indiscernible = 0;   ///< dim of the state-space indiscernible set
    std::size_t sensor_lower_bound = 0;
};

namespace detail {

struct RankReport {
    std::size_t rank = 0;
    bool marginal = false;
};

inline RankReport rank_with_margin(const Matrix& a, double rel, double band,
                                   double scale_floor = 0.0) {
    RankReport rep;
    if (a.empty()) return rep;
    const SvdResult r = svd(a);
    rep.rank = numerical_rank(r, a.rows(), a.cols(), rel, scale_floor);
    const double tau =
        rank_threshold(a.rows(), a.cols(), std::max(r.sigma.front(), scale_floor), rel);
    if (tau > 0.0)
        for (double s : r.sigma)
            if (s > tau / band && s <= tau * band) rep.marginal = true;
    return rep;
}

/// Part of span(basis) supported on the given node set: vectors whose
/// components vanish off the set.
inline Matrix restrict_support(const Matrix& basis, const std::vector<int>& keep_nodes,
                               double rel) {
    std::vector<char> keep(basis.rows(), 0);
    for (int node : keep_nodes) {
        if (node < 0 || static_cast<std::size_t>(node) >= basis.rows())
            throw invalid_spec_error("restriction node index " + std::to_string(node) +
                                     " out of range");
        keep[static_cast<std::size_t>(node)] = 1;
    }
    std::vector<int> outside;
    for (std::size_t i = 0; i < basis.rows(); ++i)
        if (!keep[i]) outside.push_back(static_cast<int>(i));
    if (outside.empty()) return basis;
    // The basis columns are unit vectors, so rank decisions on selected
    // rows are anchored at scale 1: rows made of rounding residue must
    // not count as constraints.
    const Matrix blocked = select_rows(basis, outside);
    const Matrix nul = null_space(blocked, rel, 1.0);
    return basis * nul;
}

} // namespace detail

/// Smallest sensor count any feasible placement can have, from the
/// rank requirements alone: every eigenvalue cluster needs as many
/// sensors as the rank its condition demands.  A lower bound only —
/// the conditions must hold simultaneously, which can require more.
inline std::size_t sensor_lower_bound(const EigenStructure& nominal,
                                      const EigenStructure& modified,
                                      const Tolerances& tol = {},
                                      const std::vector<int>& restrict_to = {}) {
    const detail::GroupMatch match = detail::match_groups(nominal, modified, tol);
    std::size_t bound = 1;
    for (std::size_t a : match.nominal_only)
        bound = std::max(bound, nominal.groups()[a].multiplicity());
    for (std::size_t b : match.modified_only) {
        const Matrix& basis = modified.groups()[b].basis;
        const std::size_t need =
            restrict_to.empty()
                ? basis.cols()
                : detail::restrict_support(basis, restrict_to, tol.rank_rel).cols();
        bound = std::max(bound, need);
    }
    for (const auto& [a, b] : match.shared) {
        const Matrix joint = hcat(nominal.groups()[a].basis, modified.groups()[b].basis);
        bound = std::max(bound, numerical_rank(joint, tol.rank_rel, 1.0));
    }
    return bound;
}

/// Evaluate the three rank conditions for a sensor set and build the
/// joint indiscernible subspace I(M) in R^{2n}.
///
/// Condition 1: eigenvalues only in the nominal spectrum keep full rank
/// through the sensors.  Condition 2: same for the modified spectrum
/// (optionally filtered to eigenvectors supported on restrict_to).
/// Condition 3: for shared eigenvalues the sensed joint eigenbasis
/// keeps the rank it has unsensed.  All three hold exactly when the
/// measurements lose nothing relative to full-state observation.
inline OutputDiscernibilityAnalysis output_discernibility(
    const EigenStructure& nominal, const EigenStructure& modified, const SensorSet& sensors,
    const Tolerances& tol = {}, const std::vector<int>& restrict_to = {}) {
    if (nominal.dimension() != modified.dimension())
        throw contract_violation("output_discernibility: dimension mismatch");
    const std::size_t n = nominal.dimension();
    const detail::GroupMatch match = detail::match_groups(nominal, modified, tol);

    OutputDiscernibilityAnalysis out;
    out.i_of_m = Matrix(2 * n, 0);

    const auto sensed = [&](const Matrix& basis) { return select_rows(basis, sensors.nodes); };
    const auto lift = [&](const Matrix& top, const Matrix& bottom) {
        // Stack an n x d top half over an n x d bottom half into 2n x d.
        const std::size_t d = std::max(top.cols(), bottom.cols());
        Matrix b(2 * n, d);
        for (std::size_t c = 0; c < top.cols(); ++c)
            for (std::size_t i = 0; i < n; ++i) b(i, c) = top(i, c);
        for (std::size_t c = 0; c < bottom.cols(); ++c)
            for (std::size_t i = 0; i < n; ++i) b(n + i, c) = bottom(i, c);
        return b;
    };

    // Every rank decision below concerns rows selected out of an
    // orthonormal basis, so thresholds are anchored at scale 1.0: a
    // sensed component that is pure rounding residue (a structural zero
    // stored as ~1e-16) must not count toward the sensed rank.
    for (std::size_t a : match.nominal_only) {
        const EigenGroup& g = nominal.groups()[a];
        const detail::RankReport rep =
            detail::rank_with_margin(sensed(g.basis), tol.rank_rel, tol.marginal_band, 1.0);
        RankCondition c;
        c.index = 1;
        c.lambda = g.value;
        c.required = g.multiplicity();
        c.achieved = rep.rank;
        c.satisfied = rep.rank == c.required;
        c.marginal = rep.marginal;
        out.cond_i = out.cond_i && c.satisfied;
        out.conditions.push_back(c);

        const Matrix invisible = g.basis * null_space(sensed(g.basis), tol.rank_rel, 1.0);
        if (invisible.cols() > 0)
            out.blocks.push_back(
                {JointBlock::Kind::nominal_only, g.value, lift(invisible, Matrix(n, 0))});
    }

    for (std::size_t b : match.modified_only) {
        const EigenGroup& g = modified.groups()[b];
        const Matrix tested = restrict_to.empty()
                                  ? g.basis
                                  : detail::restrict_support(g.basis, restrict_to, tol.rank_rel);
        const detail::RankReport rep =
            detail::rank_with_margin(sensed(tested), tol.rank_rel, tol.marginal_band, 1.0);
        RankCondition c;
        c.index = 2;
        c.lambda = g.value;
        c.required = tested.cols();
        c.achieved = rep.rank;
        c.satisfied = rep.rank == c.required;
        c.marginal = rep.marginal;
        out.cond_ii = out.cond_ii && c.satisfied;
        out.conditions.push_back(c);

        const Matrix invisible = g.basis * null_space(sensed(g.basis), tol.rank_rel, 1.0);
        if (invisible.cols() > 0)
            out.blocks.push_back(
                {JointBlock::Kind::modified_only, g.value, lift(Matrix(n, 0), invisible)});
    }

    for (const auto& [a, b] : match.shared) {
        const EigenGroup& g = nominal.groups()[a];
        const EigenGroup& gb = modified.groups()[b];
        const Matrix joint = hcat(g.basis, gb.basis);
        const std::size_t unsensed_rank = numerical_rank(joint, tol.rank_rel, 1.0);
        out.dim_indiscernible += g.multiplicity() + gb.multiplicity() - unsensed_rank;

        const detail::RankReport rep =
            detail::rank_with_margin(sensed(joint), tol.rank_rel, tol.marginal_band, 1.0);
        RankCondition c;
        c.index = 3;
        c.lambda = g.value;
        c.lambda_bar = gb.value;
        c.required = unsensed_rank;
        c.achieved = rep.rank;
        c.satisfied = rep.rank == c.required;
        c.marginal = rep.marginal;
        out.cond_iii = out.cond_iii && c.satisfied;
        out.conditions.push_back(c);

        // Pairs (S a; S_bar b) with matching sensed output: null space of
        // [M S(lambda), -M S_bar(lambda)] mapped back through the bases.
        const Matrix paired = hcat(sensed(g.basis), -1.0 * sensed(gb.basis));
        const Matrix nul = null_space(paired, tol.rank_rel, 1.0);
        if (nul.cols() > 0) {
            Matrix top(n, nul.cols());
            Matrix bottom(n, nul.cols());
            for (std::size_t col = 0; col < nul.cols(); ++col) {
                Vector ca(g.multiplicity()), cb(gb.multiplicity());
                for (std::size_t i = 0; i < ca.size(); ++i) ca[i] = nul(i, col);
                for (std::size_t i = 0; i < cb.size(); ++i) cb[i] = nul(ca.size() + i, col);
                top.set_column(col, g.basis * ca);
                bottom.set_column(col, gb.basis * cb);
            }
            out.blocks.push_back({JointBlock::Kind::shared, g.value, lift(top, bottom)});
        }
    }

    for (const JointBlock& blk : out.blocks) out.i_of_m = hcat(out.i_of_m, blk.basis);
    out.output_discernible = out.cond_i && out.cond_ii && out.cond_iii;
    out.sensor_lower_bound = sensor_lower_bound(nominal, modified, tol, restrict_to);
    return out;
}

/// Coordinate projections of I(M) onto the nominal (first n) and
/// modified (last n) state components.
inline std::pair<Matrix, Matrix> projections_of_im(const OutputDiscernibilityAnalysis& a,
                                                   double rank_rel = 1.0e-12) {
    const std::size_t n2 = a.i_of_m.rows();
    const std::size_t n = n2 / 2;
    Matrix top(n, a.i_of_m.cols());
    Matrix bottom(n, a.i_of_m.cols());
    for (std::size_t c = 0; c < a.i_of_m.cols(); ++c)
        for (std::size_t i = 0; i < n; ++i) {
            top(i, c) = a.i_of_m(i, c);
            bottom(i, c) = a.i_of_m(n + i, c);
        }
    return {span_of(top, rank_rel), span_of(bottom, rank_rel)};
}

// --- sensor placement --------------------------------------------------------

struct PlacementResult {
    bool feasible = false;
    std::vector<int> sensors;        ///< 0-based, ascending; empty when infeasible
    std::size_t lower_bound = 0;
    std::size_t sets_tested = 0;
    std::string message;
};

/// Exhaustive search for the smallest sensor set (ties broken
/// lexicographically) that makes the variation output-discernible.
/// Sizes below the rank lower bound are provably infeasible and are
/// skipped; a budget below the bound fails immediately.
inline PlacementResult sensor_placement(const EigenStructure& nominal,
                                        const EigenStructure& modified, std::size_t budget,
                                        const Tolerances& tol = {},
                                        const std::vector<int>& restrict_to = {}) {
    if (budget < 1) throw invalid_spec_error("sensor budget must be at least 1");
    const std::size_t n = nominal.dimension();

    PlacementResult result;
    result.lower_bound = sensor_lower_bound(nominal, modified, tol, restrict_to);
    if (budget < result.lower_bound) {
        result.message = "budget " + std::to_string(budget) +
                         " is below the sensor lower bound " +
                         std::to_string(result.lower_bound);
        return result;
    }

    for (std::size_t size = result.lower_bound; size <= std::min(budget, n); ++size) {
        std::vector<int> pick(size);
        for (std::size_t i = 0; i < size; ++i) pick[i] = static_cast<int>(i);
        while (true) {
            ++result.sets_tested;
            const SensorSet sensors{pick};
            const OutputDiscernibilityAnalysis a =
                output_discernibility(nominal, modified, sensors, tol, restrict_to);
            if (a.output_discernible) {
                result.feasible = true;
                result.sensors = pick;
                return result;
            }
            // Next lexicographic combination of {0..n-1}.
            std::size_t slot = size;
            while (slot > 0 &&
                   pick[slot - 1] == static_cast<int>(n - size + slot - 1))
                --slot;
            if (slot == 0) break;
            ++pick[slot - 1];
            for (std::size_t i = slot; i < size; ++i) pick[i] = pick[i - 1] + 1;
        }
    }
    result.message = "no sensor set within budget " + std::to_string(budget) +
                     " makes the variation output-discernible";
    return result;
}

} // namespace netdiscern
