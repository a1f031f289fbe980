// A guided tour of the library: which topology changes a network's
// trajectories can hide, how sensor placement changes that, and what
// the sampled-data detector sees.  Run it with no arguments.

#include <cstdio>
#include <string>

#include "netdiscern/netdiscern.hpp"

using namespace netdiscern;

namespace {

void heading(const char* text) { std::printf("\n=== %s ===\n", text); }

std::string vec(const Vector& x) {
    std::string out = "[";
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%.3f", i ? ", " : " ", x[i]);
        out += buf;
    }
    return out + " ]";
}

} // namespace

int main() {
    std::printf("%s %s - discernibility tour\n", kToolName, kVersion);

    // ------------------------------------------------------------------
    heading("1. A hidden link drop on the 8-path");
    const NetworkModel p8 = path_model(8);
    const VariationSpec mid_link{VariationKind::link_reconfig, 3, 4};   // link (4,5)
    const EigenStructure p8_nominal = spectral_decompose(p8.to_dense());
    const DiscernibilityAnalysis mid = indiscernible_set(
        p8_nominal, spectral_decompose(apply_variation(p8, mid_link).to_dense()));

    std::printf("Dropping link (4,5) of the 8-path and folding its weight back\n"
                "into the endpoints preserves %zu independent directions:\n",
                mid.indiscernible_basis.cols());
    for (std::size_t c = 0; c < mid.indiscernible_basis.cols(); ++c)
        std::printf("  %s\n", vec(mid.indiscernible_basis.column(c)).c_str());
    std::printf("The closed form says modes k with k*4 divisible by 8 survive:");
    for (std::size_t k : path_link_indiscernible_modes(8, 3)) std::printf(" k=%zu", k);
    std::printf(" (plus the constant vector).\n");

    const VariationSpec end_link{VariationKind::link_reconfig, 0, 1};
    const DiscernibilityAnalysis end = indiscernible_set(
        p8_nominal, spectral_decompose(apply_variation(p8, end_link).to_dense()));
    std::printf("The boundary link (1,2) hides only the constant vector: dim = %zu.\n",
                end.indiscernible_basis.cols());

    // ------------------------------------------------------------------
    heading("2. Node drops on the path are always visible");
    bool all_visible = true;
    for (int node = 0; node < 8; ++node)
        all_visible = all_visible && path_node_disconnection_detectable(8, node);
    std::printf("Every reconfigured node disconnection on the 8-path disturbs every\n"
                "nonstationary mode: %s.\n", all_visible ? "confirmed" : "NOT confirmed");

    // ------------------------------------------------------------------
    heading("3. Sensors: how many, and where");
    const NetworkModel k3 = build_consensus(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    const VariationSpec k3_drop{VariationKind::link_no_reconfig, 0, 1};
    const EigenStructure k3_nominal = spectral_decompose(k3.to_dense());
    const EigenStructure k3_modified =
        spectral_decompose(apply_variation(k3, k3_drop).to_dense());

    const PlacementResult placement = sensor_placement(k3_nominal, k3_modified, 3);
    std::printf("Triangle, link (1,2) dropped without reconfiguration: the double\n"
                "eigenvalue forces at least %zu sensors; the search settles on nodes",
                placement.lower_bound);
    for (int v : placement.sensors) std::printf(" %d", v + 1);
    std::printf(" after testing %zu sets.\n", placement.sets_tested);

    const NetworkModel p3 = path_model(3);
    const VariationSpec center{VariationKind::node_no_reconfig, 1, -1};
    const EigenStructure p3_nominal = spectral_decompose(p3.to_dense());
    const EigenStructure p3_modified =
        spectral_decompose(apply_variation(p3, center).to_dense());
    const PlacementResult strict = sensor_placement(p3_nominal, p3_modified, 3);
    const PlacementResult waived = sensor_placement(p3_nominal, p3_modified, 2, {}, {0, 2});
    std::printf("3-path, center node dropped: watching the dropped node itself is\n"
                "unavoidable (%zu sensors), unless the modified-side requirement is\n"
                "restricted to the surviving components, where nodes",
                strict.sensors.size());
    for (int v : waived.sensors) std::printf(" %d", v + 1);
    std::printf(" suffice.\n");

    // ------------------------------------------------------------------
    heading("4. Detecting a variation from sampled measurements");
    const SensorSet sensors = SensorSet::of({0, 7}, 8);
    const SamplePlan plan{0.0, 0.4, 16};
    const EigenStructure p8_modified =
        spectral_decompose(apply_variation(p8, mid_link).to_dense());
    const Matrix obs_nom = observability_matrix(p8_nominal, sensors, plan);
    const Matrix obs_mod = observability_matrix(p8_modified, sensors, plan);

    Vector revealing(8, 0.0);
    revealing[0] = 1.0;   // a unit impulse at node 1 is not in the hidden set
    const SampleBatch clean =
        simulate_samples(p8_modified, revealing, sensors, plan, 0.0, 1);
    const DetectionReport hit = detect(clean, obs_nom, obs_mod, 0.0);
    std::printf("Variation active, x0 = impulse at node 1, sensors {1,8}, no noise:\n"
                "  pi = %.3e, pi' = %.3e -> %s\n", hit.pi, hit.pi_bar,
                to_string(hit.verdict));

    const Vector hidden_x0 = path_eigenpair(8, 2).components;
    const SampleBatch ghost =
        simulate_samples(p8_modified, hidden_x0, sensors, plan, 0.0, 2);
    const DetectionReport miss = detect(ghost, obs_nom, obs_mod, 1.0e-9);
    std::printf("Variation active, x0 = the surviving mode k=2:\n"
                "  pi = %.3e, pi' = %.3e -> %s (the change is invisible from here)\n",
                miss.pi, miss.pi_bar, to_string(miss.verdict));

    const SampleBatch noisy =
        simulate_samples(p8_modified, revealing, sensors, plan, 0.05, 3);
    const DetectionReport noisy_hit = detect(noisy, obs_nom, obs_mod, 0.05);
    std::printf("Same revealing state with noise energy 0.05:\n"
                "  pi = %.3e, pi' = %.3e, Ev = 0.05 -> %s\n",
                noisy_hit.pi, noisy_hit.pi_bar, to_string(noisy_hit.verdict));

    std::printf("\nDone.\n");
    return 0;
}
