#pragma once

// Network models: an undirected weighted graph together with the
// symmetric dynamics matrix it induces, the consensus construction,
// and the four disconnection scenarios (link/node, with/without
// dynamics reconfiguration).
//
// Node indices are 0-based throughout the library; the CLI and all
// file formats translate to and from the 1-based convention used in
// reports.

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"

namespace netdiscern {

struct Edge {
    int a = 0;
    int b = 0;
    double weight = 1.0;
};

enum class VariationKind {
    link_no_reconfig,    ///< link (i,j) drops; diagonal dynamics stay put
    link_reconfig,       ///< link (i,j) drops; phi_ii, phi_jj absorb the loss
    node_no_reconfig,    ///< node i loses all links; diagonals stay put
    node_reconfig,       ///< node i loses all links; all affected diagonals update
};

inline const char* to_string(VariationKind k) {
    switch (k) {
        case VariationKind::link_no_reconfig: return "link-noreconfig";
        case VariationKind::link_reconfig: return "link-reconfig";
        case VariationKind::node_no_reconfig: return "node-noreconfig";
        case VariationKind::node_reconfig: return "node-reconfig";
    }
    return "?";
}

inline bool is_link_kind(VariationKind k) {
    return k == VariationKind::link_no_reconfig || k == VariationKind::link_reconfig;
}

inline bool is_reconfig_kind(VariationKind k) {
    return k == VariationKind::link_reconfig || k == VariationKind::node_reconfig;
}

/// One topology variation: which scenario, and the link (i,j) or node i
/// it hits.  Indices 0-based; j is ignored for node kinds.
struct VariationSpec {
    VariationKind kind = VariationKind::link_no_reconfig;
    int i = 0;
    int j = -1;
};

/// Immutable weighted network.  Off-diagonal couplings live exactly on
/// the edge set (one stored weight per unordered pair); the diagonal is
/// free.  The induced dynamics matrix is symmetric by construction.
class NetworkModel {
public:
    NetworkModel(std::size_t n, const std::vector<Edge>& edges, Vector diagonal)
        : n_(n), diag_(std::move(diagonal)) {
        if (n_ < 2) throw invalid_graph_error("network needs at least 2 nodes");
        if (diag_.size() != n_)
            throw invalid_graph_error("diagonal length does not match node count");
        for (const Edge& e : edges) {
            check_node(e.a);
            check_node(e.b);
            if (e.a == e.b)
                throw invalid_graph_error("self-loop at node index " + std::to_string(e.a));
            if (e.weight == 0.0)
                throw invalid_graph_error("zero weight on edge (" + std::to_string(e.a) +
                                          ", " + std::to_string(e.b) + ")");
            const auto key = ordered(e.a, e.b);
            if (!edges_.emplace(key, e.weight).second)
                throw invalid_graph_error("duplicate edge (" + std::to_string(e.a) + ", " +
                                          std::to_string(e.b) + ")");
        }
    }

    std::size_t size() const { return n_; }
    const Vector& diagonal() const { return diag_; }
    const std::map<std::pair<int, int>, double>& edge_map() const { return edges_; }

    bool has_edge(int a, int b) const { return edges_.count(ordered(a, b)) != 0; }

    double weight(int a, int b) const {
        const auto it = edges_.find(ordered(a, b));
        if (it == edges_.end())
            throw invalid_spec_error("no edge between node indices " + std::to_string(a) +
                                     " and " + std::to_string(b));
        return it->second;
    }

    std::vector<int> neighbors(int node) const {
        check_node(node);
        std::vector<int> out;
        for (const auto& [key, w] : edges_) {
            (void)w;
            if (key.first == node) out.push_back(key.second);
            else if (key.second == node) out.push_back(key.first);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edges_.size());
        for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
        return out;
    }

    /// Dense dynamics matrix; (i,j) and (j,i) are written from the same
    /// stored weight, so symmetry is exact.
    Matrix to_dense() const {
        Matrix phi(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) phi(i, i) = diag_[i];
        for (const auto& [key, w] : edges_) {
            phi(key.first, key.second) = w;
            phi(key.second, key.first) = w;
        }
        return phi;
    }

private:
    void check_node(int node) const {
        if (node < 0 || static_cast<std::size_t>(node) >= n_)
            throw invalid_graph_error("node index " + std::to_string(node) +
                                      " out of range for n = " + std::to_string(n_));
    }

    static std::pair<int, int> ordered(int a, int b) {
        return {std::min(a, b), std::max(a, b)};
    }

    std::size_t n_;
    std::map<std::pair<int, int>, double> edges_;
    Vector diag_;
};

/// Consensus dynamics over a weighted graph: phi_ii = -(sum of incident
/// weights), so the induced matrix is the negated weighted Laplacian.
inline NetworkModel build_consensus(std::size_t n, const std::vector<Edge>& edges) {
    Vector diag(n, 0.0);
    {
        // Validate structure first so degree accumulation can trust it.
        NetworkModel probe(n, edges, diag);
        for (const Edge& e : probe.edges()) {
            diag[static_cast<std::size_t>(e.a)] -= e.weight;
            diag[static_cast<std::size_t>(e.b)] -= e.weight;
        }
    }
    return NetworkModel(n, edges, diag);
}

/// Check a variation against a model; throws invalid_spec_error on
/// missing links, isolated nodes, or bad indices.
inline void validate_variation(const NetworkModel& model, const VariationSpec& spec) {
    const int n = static_cast<int>(model.size());
    if (spec.i < 0 || spec.i >= n)
        throw invalid_spec_error("variation node index " + std::to_string(spec.i) +
                                 " out of range");
    if (is_link_kind(spec.kind)) {
        if (spec.j < 0 || spec.j >= n)
            throw invalid_spec_error("variation node index " + std::to_string(spec.j) +
                                     " out of range");
        if (spec.i == spec.j)
            throw invalid_spec_error("link variation needs two distinct nodes");
        if (!model.has_edge(spec.i, spec.j))
            throw invalid_spec_error("variation targets a non-existent link (" +
                                     std::to_string(spec.i) + ", " + std::to_string(spec.j) +
                                     ")");
    } else {
        if (model.neighbors(spec.i).empty())
            throw invalid_spec_error("node variation targets isolated node " +
                                     std::to_string(spec.i));
    }
}

/// Apply one disconnection scenario, producing the modified model.
///
/// Link drop, no reconfiguration:   Phi' = Phi - w (e_i e_j' + e_j e_i')
/// Link drop, reconfiguration:      additionally phi_ii += w, phi_jj += w
/// Node drop, no reconfiguration:   every incident link removed as above
/// Node drop, reconfiguration:      additionally phi_jj += w_ij for each
///                                  former neighbor j and phi_ii += sum w_ij
///
/// The reconfiguration updates carry the stored weight, so a consensus
/// model stays a consensus model of the reduced graph.
inline NetworkModel apply_variation(const NetworkModel& model, const VariationSpec& spec) {
    validate_variation(model, spec);

    std::vector<Edge> kept;
    Vector diag = model.diagonal();
    const bool reconfig = is_reconfig_kind(spec.kind);

    const auto drops = [&](const Edge& e) {
        if (is_link_kind(spec.kind)) {
            return (e.a == std::min(spec.i, spec.j) && e.b == std::max(spec.i, spec.j));
        }
        return e.a == spec.i || e.b == spec.i;
    };

    for (const Edge& e : model.edges()) {
        if (!drops(e)) {
            kept.push_back(e);
            continue;
        }
        if (reconfig) {
            diag[static_cast<std::size_t>(e.a)] += e.weight;
            diag[static_cast<std::size_t>(e.b)] += e.weight;
        }
    }
    return NetworkModel(model.size(), kept, std::move(diag));
}

} // namespace netdiscern
