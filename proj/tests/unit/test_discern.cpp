#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "netdiscern/discern.hpp"
#include "netdiscern/network.hpp"
#include "netdiscern/spectral.hpp"
#include "netdiscern/subspace.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace netdiscern;

namespace {

NetworkModel k3() {
    return build_consensus(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
}

NetworkModel p3() {
    return build_consensus(3, {{0, 1, 1.0}, {1, 2, 1.0}});
}

NetworkModel p4() {
    return build_consensus(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
}

EigenStructure eig(const NetworkModel& m) { return spectral_decompose(m.to_dense()); }

EigenStructure eig_after(const NetworkModel& m, const VariationSpec& spec) {
    return spectral_decompose(apply_variation(m, spec).to_dense());
}

} // namespace

TEST_CASE("indiscernible set: identical dynamics, disjoint spectra, triangle rewire") {
    // Identical dynamics: every state is indiscernible.
    const EigenStructure e3 = eig(k3());
    const DiscernibilityAnalysis all = indiscernible_set(e3, e3);
    REQUIRE(all.indiscernible_basis.cols() == 3);
    REQUIRE_FALSE(all.fully_discernible);

    // Disjoint spectra: only the origin.
    Matrix d12(2, 2), d34(2, 2);
    d12(0, 0) = 1.0;
    d12(1, 1) = 2.0;
    d34(0, 0) = 3.0;
    d34(1, 1) = 4.0;
    const DiscernibilityAnalysis none =
        indiscernible_set(spectral_decompose(d12), spectral_decompose(d34));
    REQUIRE(none.fully_discernible);
    REQUIRE(none.indiscernible_basis.cols() == 0);
    REQUIRE(none.shared.empty());

    // Triangle with link (1,2) rewired: exactly the two directions that
    // the surviving dynamics treat the same way.
    const VariationSpec rewire{VariationKind::link_reconfig, 0, 1};
    const DiscernibilityAnalysis tri = indiscernible_set(e3, eig_after(k3(), rewire));
    REQUIRE(tri.indiscernible_basis.cols() == 2);
    REQUIRE(contains(tri.indiscernible_basis, Vector{1.0, 1.0, 1.0}));
    REQUIRE(contains(tri.indiscernible_basis, Vector{1.0, 1.0, -2.0}));
    REQUIRE_FALSE(contains(tri.indiscernible_basis, Vector{1.0, -1.0, 0.0}));
    // Shared eigenvalues are 0 (dim 1) and -3 (dim 1 of the 2-dim eigenspace).
    REQUIRE(tri.shared.size() == 2);
    REQUIRE(std::abs(tri.shared[0].lambda - (-3.0)) <= 1.0e-9);
    REQUIRE(tri.shared[0].psi.cols() == 1);
    REQUIRE(std::abs(tri.shared[1].lambda) <= 1.0e-9);
    REQUIRE(tri.shared[1].psi.cols() == 1);
}

TEST_CASE("componentwise tests: link drop without reconfiguration") {
    // Both endpoint components zero: invisible.
    REQUIRE(link_drop_test(Vector{0.0, 0.0, 1.0}, 0, 1).indiscernible);

    // Path mode k = 1 has nonzero components everywhere.
    const EigenStructure e = eig(p4());
    const Vector x = e.groups()[2].basis.column(0);   // lambda = -(2 - sqrt(2)), simple
    const ComponentVerdict v = eigenvector_indiscernible(
        p4(), {VariationKind::link_no_reconfig, 0, 1}, x, e.groups()[2].value);
    REQUIRE_FALSE(v.indiscernible);
}

TEST_CASE("componentwise tests: link drop with reconfiguration") {
    const Vector ones = normalized(Vector{1.0, 1.0, 1.0});
    for (const Edge& edge : k3().edges()) {
        const ComponentVerdict v = eigenvector_indiscernible(
            k3(), {VariationKind::link_reconfig, edge.a, edge.b}, ones, 0.0);
        REQUIRE(v.indiscernible);
    }

    // (1, 1, -2) has equal components across link (1,2) only.
    const Vector paired = normalized(Vector{1.0, 1.0, -2.0});
    REQUIRE(eigenvector_indiscernible(k3(), {VariationKind::link_reconfig, 0, 1}, paired, -3.0)
                .indiscernible);
    REQUIRE_FALSE(
        eigenvector_indiscernible(k3(), {VariationKind::link_reconfig, 0, 2}, paired, -3.0)
            .indiscernible);

    // Cross-check the two verdicts against the residual oracle.
    REQUIRE(testsupport::residual_indiscernible(
        k3(), {VariationKind::link_reconfig, 0, 1}, paired, -3.0));
    REQUIRE_FALSE(testsupport::residual_indiscernible(
        k3(), {VariationKind::link_reconfig, 0, 2}, paired, -3.0));
}

TEST_CASE("componentwise tests: node drop without reconfiguration") {
    // Zero at the node and at its neighbors: invisible.
    REQUIRE(node_drop_test(p3(), Vector{0.0, 0.0, 0.0}, 1).indiscernible);

    // The constant vector never is (the weighted neighbor sum is the degree).
    const Vector ones = normalized(Vector{1.0, 1.0, 1.0});
    REQUIRE_FALSE(
        eigenvector_indiscernible(k3(), {VariationKind::node_no_reconfig, 0, -1}, ones, 0.0)
            .indiscernible);

    // Signed weights can cancel: node 1 (0-based) couples to nodes 0 and 2
    // with weights +1 and -1, and x = (1, 0, 1, sqrt 2) is an eigenvector
    // with eigenvalue sqrt 2.  The weighted neighbor sum vanishes without
    // any neighbor component vanishing.
    const double r2 = std::sqrt(2.0);
    const NetworkModel signed_model(
        4, {{0, 1, 1.0}, {1, 2, -1.0}, {0, 3, 1.0}, {2, 3, 1.0}}, Vector{0.0, 0.0, 0.0, 0.0});
    const Vector x{1.0, 0.0, 1.0, r2};
    const VariationSpec drop{VariationKind::node_no_reconfig, 1, -1};
    REQUIRE(eigenvector_indiscernible(signed_model, drop, x, r2).indiscernible);
    REQUIRE(testsupport::residual_indiscernible(signed_model, drop, x, r2));

    // Dropping node 0 instead breaks both conditions: x_0 = 1 != 0 and
    // the weighted neighbor sum there is sqrt 2, not 0.
    const VariationSpec drop0{VariationKind::node_no_reconfig, 0, -1};
    REQUIRE_FALSE(eigenvector_indiscernible(signed_model, drop0, x, r2).indiscernible);
    REQUIRE_FALSE(testsupport::residual_indiscernible(signed_model, drop0, x, r2));

    // With both weights +1 the cancellation at node 1 is impossible; x
    // is then not an eigenvector at all, which the dispatcher rejects.
    const NetworkModel unsigned_model(
        4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}, {2, 3, 1.0}}, Vector{0.0, 0.0, 0.0, 0.0});
    REQUIRE_THROWS_AS(eigenvector_indiscernible(unsigned_model, drop, x, r2),
                      contract_violation);
}

TEST_CASE("componentwise tests: node drop with reconfiguration") {
    const Vector ones = normalized(Vector{1.0, 1.0, 1.0, 1.0});
    for (int node = 0; node < 4; ++node)
        REQUIRE(eigenvector_indiscernible(p4(), {VariationKind::node_reconfig, node, -1}, ones,
                                          0.0)
                    .indiscernible);

    // Path mode k = 2 at the second node: neighbor components differ.
    const EigenStructure e = eig(p4());
    const Vector x = e.groups()[1].basis.column(0);   // lambda = -2
    REQUIRE_FALSE(
        eigenvector_indiscernible(p4(), {VariationKind::node_reconfig, 1, -1}, x, -2.0)
            .indiscernible);
}

TEST_CASE("dispatcher rejects non-eigenvectors and bad targets") {
    REQUIRE_THROWS_AS(eigenvector_indiscernible(k3(), {VariationKind::link_reconfig, 0, 1},
                                                Vector{1.0, 0.0, 0.0}, 0.0),
                      contract_violation);
    REQUIRE_THROWS_AS(eigenvector_indiscernible(p3(), {VariationKind::link_reconfig, 0, 2},
                                                Vector{1.0, 1.0, 1.0}, 0.0),
                      invalid_spec_error);
}

TEST_CASE("consensus eigenvectors with equal neighborhoods must vanish there") {
    // For a nonzero Laplacian eigenvalue, neighbor equality at a node
    // forces the components themselves to zero.
    std::mt19937_64 rng(909);
    for (int trial = 0; trial < 10; ++trial) {
        const NetworkModel model = testsupport::random_connected_model(rng, 5, true);
        const EigenStructure e = eig(model);
        for (const EigenGroup& g : e.groups()) {
            if (std::abs(g.value) < 1.0e-9) continue;
            for (std::size_t c = 0; c < g.basis.cols(); ++c) {
                const Vector x = g.basis.column(c);
                for (std::size_t node = 0; node < model.size(); ++node) {
                    const auto verdict =
                        node_drop_reconfig_test(model, x, static_cast<int>(node));
                    if (!verdict.indiscernible) continue;
                    REQUIRE(std::abs(x[node]) <= 1.0e-7);
                    for (int j : model.neighbors(static_cast<int>(node)))
                        REQUIRE(std::abs(x[static_cast<std::size_t>(j)]) <= 1.0e-7);
                }
            }
        }
    }
}

TEST_CASE("fast tests agree with the residual oracle on random models") {
    std::mt19937_64 rng(1010);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng() % 4);
        const NetworkModel model =
            testsupport::random_connected_model(rng, n, trial % 2 == 0);
        const EigenStructure e = eig(model);
        for (const VariationSpec& spec : testsupport::all_variations(model)) {
            for (const EigenGroup& g : e.groups()) {
                for (std::size_t c = 0; c < g.basis.cols(); ++c) {
                    const Vector x = g.basis.column(c);
                    const bool fast =
                        eigenvector_indiscernible(model, spec, x, g.value).indiscernible;
                    const bool oracle =
                        testsupport::residual_indiscernible(model, spec, x, g.value);
                    REQUIRE(fast == oracle);
                }
            }
        }
    }
}

TEST_CASE("componentwise route to the indiscernible set matches the spectral route") {
    std::mt19937_64 rng(1111);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng() % 4);
        const NetworkModel model =
            testsupport::random_connected_model(rng, n, trial % 3 == 0);
        const EigenStructure e = eig(model);
        for (const VariationSpec& spec : testsupport::all_variations(model)) {
            const Matrix componentwise = componentwise_indiscernible_set(model, spec, e);
            const DiscernibilityAnalysis spectral =
                indiscernible_set(e, eig_after(model, spec));
            REQUIRE(componentwise.cols() == spectral.indiscernible_basis.cols());
            REQUIRE(same_subspace(componentwise, spectral.indiscernible_basis, 1.0e-7));
        }
    }
}

TEST_CASE("output discernibility: full measurement always qualifies") {
    std::mt19937_64 rng(1212);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng() % 4);
        const NetworkModel model = testsupport::random_connected_model(rng, n, false);
        const auto variations = testsupport::all_variations(model);
        const VariationSpec spec = variations[rng() % variations.size()];

        std::vector<int> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
        const OutputDiscernibilityAnalysis a = output_discernibility(
            eig(model), eig_after(model, spec), SensorSet::of(all, n));
        REQUIRE(a.output_discernible);
        REQUIRE(a.i_of_m.cols() == a.dim_indiscernible);
    }
}

TEST_CASE("output discernibility on the triangle link drop: singletons fail, a pair works") {
    const VariationSpec drop{VariationKind::link_no_reconfig, 0, 1};
    const EigenStructure nominal = eig(k3());
    const EigenStructure modified = eig_after(k3(), drop);

    for (int node = 0; node < 3; ++node) {
        const OutputDiscernibilityAnalysis a =
            output_discernibility(nominal, modified, SensorSet::of({node}, 3));
        REQUIRE_FALSE(a.output_discernible);
        REQUIRE_FALSE(a.cond_i);   // the double eigenvalue -3 needs two sensors
    }

    const OutputDiscernibilityAnalysis pair =
        output_discernibility(nominal, modified, SensorSet::of({0, 1}, 3));
    REQUIRE(pair.output_discernible);
    REQUIRE(pair.dim_indiscernible == 0);

    const PlacementResult placed = sensor_placement(nominal, modified, 3);
    REQUIRE(placed.feasible);
    REQUIRE(placed.sensors == std::vector<int>{0, 1});
    REQUIRE(placed.lower_bound == 2);
}

TEST_CASE("a post-variation component without sensors breaks the modified-side condition") {
    // Disconnecting the second path node (no reconfiguration) leaves
    // components {0}, {1}, {2,3}; sensors only in the last one cannot
    // see the modified-only modes supported elsewhere.
    const VariationSpec drop{VariationKind::node_no_reconfig, 1, -1};
    const OutputDiscernibilityAnalysis a =
        output_discernibility(eig(p4()), eig_after(p4(), drop), SensorSet::of({2, 3}, 4));
    REQUIRE_FALSE(a.cond_ii);
    REQUIRE_FALSE(a.output_discernible);
}

TEST_CASE("restricting the modified-side condition to chosen components") {
    // Center-node drop on the 3-path without reconfiguration.  The
    // modified-only eigenvector is the indicator of the dropped node,
    // so unrestricted placement is forced to put a sensor there; the
    // restriction waives exactly that requirement.
    const VariationSpec drop{VariationKind::node_no_reconfig, 1, -1};
    const EigenStructure nominal = eig(p3());
    const EigenStructure modified = eig_after(p3(), drop);

    const PlacementResult tight = sensor_placement(nominal, modified, 2);
    REQUIRE_FALSE(tight.feasible);
    REQUIRE(tight.lower_bound == 2);   // strictly below the true minimum of 3

    const PlacementResult full = sensor_placement(nominal, modified, 3);
    REQUIRE(full.feasible);
    REQUIRE(full.sensors == std::vector<int>{0, 1, 2});

    const PlacementResult restricted = sensor_placement(nominal, modified, 2, {}, {0, 2});
    REQUIRE(restricted.feasible);
    REQUIRE(restricted.sensors == std::vector<int>{0, 2});

    // The same contrast at the condition level.
    const OutputDiscernibilityAnalysis plain =
        output_discernibility(nominal, modified, SensorSet::of({0, 2}, 3));
    REQUIRE_FALSE(plain.cond_ii);
    const OutputDiscernibilityAnalysis waived =
        output_discernibility(nominal, modified, SensorSet::of({0, 2}, 3), {}, {0, 2});
    REQUIRE(waived.cond_ii);
    REQUIRE(waived.output_discernible);
}

TEST_CASE("joint indiscernible subspace matches the sampled observability oracle") {
    std::mt19937_64 rng(1313);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng() % 3);
        const NetworkModel model = testsupport::random_connected_model(rng, n, false);
        const auto variations = testsupport::all_variations(model);
        const VariationSpec spec = variations[rng() % variations.size()];

        std::vector<int> sensors;
        for (std::size_t i = 0; i < n; ++i)
            if (rng() % 2 == 0) sensors.push_back(static_cast<int>(i));
        if (sensors.empty()) sensors.push_back(0);

        const Matrix phi = model.to_dense();
        const Matrix phi_bar = apply_variation(model, spec).to_dense();
        const OutputDiscernibilityAnalysis a = output_discernibility(
            spectral_decompose(phi), spectral_decompose(phi_bar),
            SensorSet::of(sensors, n));

        const Matrix oracle =
            testsupport::oracle_joint_nullspace(phi, phi_bar, sensors, 0.37);
        REQUIRE(a.i_of_m.cols() == oracle.cols());
        REQUIRE(same_subspace(a.i_of_m, oracle, 1.0e-6));

        // Paired indiscernible states always sit inside the joint subspace.
        const DiscernibilityAnalysis di = indiscernible_set(
            spectral_decompose(phi), spectral_decompose(phi_bar));
        for (std::size_t c = 0; c < di.indiscernible_basis.cols(); ++c) {
            const Vector x = di.indiscernible_basis.column(c);
            Vector paired(2 * n);
            for (std::size_t i = 0; i < n; ++i) paired[i] = paired[n + i] = x[i];
            REQUIRE(contains(a.i_of_m, paired, 1.0e-7));
        }

        // And the verdict agrees with the oracle rank identity.
        REQUIRE(a.output_discernible ==
                testsupport::oracle_output_discernible(phi, phi_bar, sensors, 0.37));
    }
}

TEST_CASE("adding sensors never destroys output discernibility") {
    std::mt19937_64 rng(1414);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng() % 3);
        const NetworkModel model = testsupport::random_connected_model(rng, n, true);
        const auto variations = testsupport::all_variations(model);
        const VariationSpec spec = variations[rng() % variations.size()];
        const EigenStructure nominal = eig(model);
        const EigenStructure modified = eig_after(model, spec);

        std::vector<int> sensors;
        bool was_discernible = false;
        for (std::size_t i = 0; i < n; ++i) {
            sensors.push_back(static_cast<int>(i));
            const bool now = output_discernibility(nominal, modified,
                                                   SensorSet::of(sensors, n))
                                 .output_discernible;
            REQUIRE((!was_discernible || now));
            was_discernible = now;
        }
        REQUIRE(was_discernible);   // full measurement closes the sweep
    }
}

TEST_CASE("projections of the joint subspace") {
    // Identical dynamics under full measurement: both projections are
    // the whole space.
    const EigenStructure e3 = eig(k3());
    const OutputDiscernibilityAnalysis same =
        output_discernibility(e3, e3, SensorSet::of({0, 1, 2}, 3));
    const auto [nom_side, mod_side] = projections_of_im(same);
    REQUIRE(nom_side.cols() == 3);
    REQUIRE(mod_side.cols() == 3);

    // Disjoint spectra with all conditions satisfied: both are trivial.
    Matrix d12(2, 2), d34(2, 2);
    d12(0, 0) = 1.0;
    d12(1, 1) = 2.0;
    d34(0, 0) = 3.0;
    d34(1, 1) = 4.0;
    const OutputDiscernibilityAnalysis disjoint = output_discernibility(
        spectral_decompose(d12), spectral_decompose(d34), SensorSet::of({0, 1}, 2));
    REQUIRE(disjoint.output_discernible);
    const auto [none_nom, none_mod] = projections_of_im(disjoint);
    REQUIRE(none_nom.cols() == 0);
    REQUIRE(none_mod.cols() == 0);

    // Triangle rewire watched from the third node only: both projections
    // must match the oracle's.
    const VariationSpec rewire{VariationKind::link_reconfig, 0, 1};
    const Matrix phi = k3().to_dense();
    const Matrix phi_bar = apply_variation(k3(), rewire).to_dense();
    const OutputDiscernibilityAnalysis watched = output_discernibility(
        e3, spectral_decompose(phi_bar), SensorSet::of({2}, 3));
    const auto [from_nom, from_mod] = projections_of_im(watched);

    const Matrix oracle = testsupport::oracle_joint_nullspace(phi, phi_bar, {2}, 0.37);
    Matrix top(3, oracle.cols()), bottom(3, oracle.cols());
    for (std::size_t c = 0; c < oracle.cols(); ++c)
        for (std::size_t i = 0; i < 3; ++i) {
            top(i, c) = oracle(i, c);
            bottom(i, c) = oracle(3 + i, c);
        }
    REQUIRE(same_subspace(from_nom, span_of(top), 1.0e-6));
    REQUIRE(same_subspace(from_mod, span_of(bottom), 1.0e-6));
}

TEST_CASE("sensor bound and exhaustive minimum") {
    // Triangle rewire: bound 2, minimum 2 (equality instance).
    const VariationSpec rewire{VariationKind::link_reconfig, 0, 1};
    const EigenStructure nominal = eig(k3());
    const EigenStructure modified = eig_after(k3(), rewire);
    REQUIRE(sensor_lower_bound(nominal, modified) == 2);

    const PlacementResult placed = sensor_placement(nominal, modified, 3);
    REQUIRE(placed.feasible);
    REQUIRE(placed.sensors.size() == 2);
    const std::size_t oracle_min = testsupport::oracle_min_sensors(
        k3().to_dense(), apply_variation(k3(), rewire).to_dense(), 0.37);
    REQUIRE(placed.sensors.size() == oracle_min);

    // Bound never exceeds the brute-force minimum on random instances.
    std::mt19937_64 rng(1515);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng() % 3);
        const NetworkModel model = testsupport::random_connected_model(rng, n, true);
        const auto variations = testsupport::all_variations(model);
        const VariationSpec spec = variations[rng() % variations.size()];
        const std::size_t bound =
            sensor_lower_bound(eig(model), eig_after(model, spec));
        const std::size_t minimum = testsupport::oracle_min_sensors(
            model.to_dense(), apply_variation(model, spec).to_dense(), 0.37);
        REQUIRE(bound <= minimum);
    }
}

TEST_CASE("placement bookkeeping") {
    const VariationSpec drop{VariationKind::link_no_reconfig, 0, 1};
    const EigenStructure nominal = eig(k3());
    const EigenStructure modified = eig_after(k3(), drop);

    const PlacementResult under = sensor_placement(nominal, modified, 1);
    REQUIRE_FALSE(under.feasible);
    REQUIRE_FALSE(under.message.empty());
    REQUIRE(under.sets_tested == 0);   // rejected before the search

    REQUIRE_THROWS_AS(sensor_placement(nominal, modified, 0), invalid_spec_error);
}
