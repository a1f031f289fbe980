#pragma once

// Closed-form analysis of the path graph P_n under the unit-weight
// consensus protocol.  The Laplacian eigenvalues and eigenvectors have
// explicit cosine formulas, which turn the link-disconnection
// indiscernibility question into an integer condition: mode k is
// indiscernible for the reconfigured drop of link (i, i+1), counting
// nodes from 1, exactly when k*i is a multiple of n.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "netdiscern/discern.hpp"
#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/network.hpp"

namespace netdiscern {

/// Analytic eigenpair of the path-graph Laplacian L(P_n).  The
/// consensus dynamics matrix is -L, so its eigenvalue is the negation.
struct PathEigenPair {
    std::size_t n = 0;
    std::size_t k = 0;          ///< mode index, 0..n-1; k = 0 is the constant vector
    double lambda_laplacian = 0.0;   ///< 2 - 2 cos(pi k / n)
    Vector components;          ///< x[i] for node index i (0-based storage)

    double lambda_dynamics() const { return -lambda_laplacian; }
};

/// Unit-weight consensus model of the path 0-1-...-(n-1).
inline NetworkModel path_model(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i)
        edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), 1.0});
    return build_consensus(n, edges);
}

/// Mode k of P_n: lambda = 2 - 2 cos(pi k / n), component at the
/// (0-based) node i equal to cos(pi k (2i + 1) / (2n)).
inline PathEigenPair path_eigenpair(std::size_t n, std::size_t k) {
    if (n < 2) throw invalid_spec_error("path graph needs at least 2 nodes");
    if (k >= n)
        throw invalid_spec_error("path mode index " + std::to_string(k) +
                                 " out of range for n = " + std::to_string(n));
    PathEigenPair pair;
    pair.n = n;
    pair.k = k;
    const double kd = static_cast<double>(k);
    const double nd = static_cast<double>(n);
    pair.lambda_laplacian = 2.0 - 2.0 * std::cos(std::numbers::pi * kd / nd);
    pair.components.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        pair.components[i] =
            std::cos(std::numbers::pi * kd * (2.0 * static_cast<double>(i) + 1.0) / (2.0 * nd));
    return pair;
}

/// Nontrivial modes indiscernible under the reconfigured drop of the
/// link between nodes left and left+1 (0-based): all k in 1..n-1 with
/// k * (left+1) divisible by n.  Empty for the two boundary links.
inline std::vector<std::size_t> path_link_indiscernible_modes(std::size_t n, int left) {
    if (left < 0 || static_cast<std::size_t>(left) + 1 >= n)
        throw invalid_spec_error("path link index out of range");
    const std::size_t i = static_cast<std::size_t>(left) + 1;   // 1-based label in the formula
    std::vector<std::size_t> modes;
    for (std::size_t k = 1; k < n; ++k)
        if ((k * i) % n == 0) modes.push_back(k);
    return modes;
}

/// Whether the reconfigured disconnection of a node is detectable on
/// P_n: checks every nonstationary analytic mode with the componentwise
/// neighbor-equality test.  The constant mode (k = 0) is indiscernible
/// under any reconfiguration and is excluded by definition.
inline bool path_node_disconnection_detectable(std::size_t n, int node,
                                               const Tolerances& tol = {}) {
    if (node < 0 || static_cast<std::size_t>(node) >= n)
        throw invalid_spec_error("path node index out of range");
    const NetworkModel model = path_model(n);
    const VariationSpec spec{VariationKind::node_reconfig, node, -1};
    for (std::size_t k = 1; k < n; ++k) {
        const PathEigenPair pair = path_eigenpair(n, k);
        const ComponentVerdict verdict =
            eigenvector_indiscernible(model, spec, pair.components, pair.lambda_dynamics(), tol);
        if (verdict.indiscernible) return false;
    }
    return true;
}

} // namespace netdiscern
