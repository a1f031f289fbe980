// Command-line front end: analyze indiscernibility of a network
// variation, search sensor placements, simulate sampled measurements,
// run the least-squares detector, and print the path-graph closed-form
// table.  All node numbers on the command line and in files are
// 1-based; exit code 0 = success, 1 = error, 2 = infeasible placement,
// 3 = inconclusive detection.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "netdiscern/netdiscern.hpp"

namespace {

using namespace netdiscern;
using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json tolerances_json(const Tolerances& tol) {
    return {{"eigen_cluster_rel", tol.eigen_cluster_rel},
            {"component_rel", tol.component_rel},
            {"rank_rel", tol.rank_rel},
            {"jacobi_off_rel", tol.jacobi_off_rel},
            {"marginal_band", tol.marginal_band},
            {"detect_marginal_abs", tol.detect_marginal_abs}};
}

json report_skeleton(const std::string& command, const Tolerances& tol) {
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kVersion}};
    j["command"] = command;
    j["tolerances"] = tolerances_json(tol);
    return j;
}

json basis_to_json(const Matrix& basis) {
    json cols = json::array();
    for (std::size_t c = 0; c < basis.cols(); ++c) cols.push_back(basis.column(c));
    return cols;
}

json nodes_to_json(const std::vector<int>& nodes) {
    json out = json::array();
    for (int v : nodes) out.push_back(v + 1);
    return out;
}

void emit(json j) {
    round_json_numbers(j);
    std::cout << j.dump(2) << '\n';
}

std::string vector_text(const Vector& x) {
    std::string out = "[";
    for (std::size_t i = 0; i < x.size(); ++i) {
        out += (i == 0 ? " " : ", ");
        out += fmt(x[i]);
    }
    return out + " ]";
}

std::string eigenvalue_text(const EigenStructure& e) {
    std::string out;
    for (const EigenGroup& g : e.groups()) {
        if (!out.empty()) out += ", ";
        out += fmt(g.value);
        if (g.multiplicity() > 1) out += " (x" + std::to_string(g.multiplicity()) + ")";
    }
    return out;
}

// --- analyze -----------------------------------------------------------------

int cmd_analyze(const std::string& graph_path, const std::string& variation_token_str,
                const std::string& sensors_csv, const std::string& restrict_csv,
                bool as_json) {
    const Tolerances tol;
    const NetworkModel model = load_graph_file(graph_path);
    const VariationSpec spec = parse_variation_token(variation_token_str);
    validate_variation(model, spec);

    const NetworkModel modified_model = apply_variation(model, spec);
    if (max_abs_diff(model.to_dense(), modified_model.to_dense()) == 0.0)
        throw invalid_spec_error("variation leaves the dynamics unchanged (no-op)");

    const EigenStructure nominal = spectral_decompose(model.to_dense(), tol);
    const EigenStructure modified = spectral_decompose(modified_model.to_dense(), tol);
    const DiscernibilityAnalysis analysis = indiscernible_set(nominal, modified, tol);

    std::optional<OutputDiscernibilityAnalysis> output;
    std::vector<int> sensor_nodes;
    std::vector<int> restrict_nodes;
    if (!restrict_csv.empty()) restrict_nodes = parse_node_list(restrict_csv);
    if (!sensors_csv.empty()) {
        sensor_nodes = parse_node_list(sensors_csv);
        output = output_discernibility(nominal, modified,
                                       SensorSet::of(sensor_nodes, model.size()), tol,
                                       restrict_nodes);
    }

    if (as_json) {
        json j = report_skeleton("analyze", tol);
        j["network"] = graph_to_json(model);
        j["variation"] = variation_to_json(spec);
        json ind;
        ind["dimension"] = analysis.indiscernible_basis.cols();
        ind["fully_discernible"] = analysis.fully_discernible;
        ind["match_gap"] = analysis.match_gap;
        ind["shared"] = json::array();
        for (const SharedMode& mode : analysis.shared)
            ind["shared"].push_back({{"lambda", mode.lambda},
                                     {"lambda_modified", mode.lambda_bar},
                                     {"dimension", mode.psi.cols()},
                                     {"marginal_match", mode.marginal_match}});
        ind["near_misses"] = json::array();
        for (const auto& [a, b] : analysis.near_misses)
            ind["near_misses"].push_back({{"lambda", a}, {"lambda_modified", b}});
        ind["basis"] = basis_to_json(analysis.indiscernible_basis);
        j["indiscernible"] = ind;

        if (output) {
            json out;
            out["sensors"] = nodes_to_json(sensor_nodes);
            if (!restrict_nodes.empty()) out["restrict"] = nodes_to_json(restrict_nodes);
            out["output_discernible"] = output->output_discernible;
            out["dim_joint_indiscernible"] = output->dim_indiscernible;
            out["sensor_lower_bound"] = output->sensor_lower_bound;
            out["conditions"] = json::array();
            for (const RankCondition& c : output->conditions) {
                json jc = {{"condition", c.index},
                           {"required", c.required},
                           {"achieved", c.achieved},
                           {"satisfied", c.satisfied},
                           {"marginal", c.marginal}};
                if (c.index != 2) jc["lambda"] = c.lambda;
                if (c.index != 1) jc["lambda_modified"] = c.lambda_bar;
                out["conditions"].push_back(jc);
            }
            j["output"] = out;
        }
        emit(std::move(j));
    } else {
        std::cout << kToolName << ' ' << kVersion << " - analyze\n";
        std::cout << "network: " << model.size() << " nodes, " << model.edges().size()
                  << " links (" << graph_path << ")\n";
        std::cout << "variation: " << variation_token(spec) << '\n';
        std::cout << "nominal eigenvalues:  " << eigenvalue_text(nominal) << '\n';
        std::cout << "modified eigenvalues: " << eigenvalue_text(modified) << '\n';
        if (analysis.shared.empty()) {
            std::cout << "shared eigenvalues: none\n";
        } else {
            std::cout << "shared eigenvalues (lambda, lambda', dim):\n";
            for (const SharedMode& mode : analysis.shared)
                std::cout << "  " << fmt(mode.lambda) << "  " << fmt(mode.lambda_bar) << "  "
                          << mode.psi.cols() << (mode.marginal_match ? "  [marginal]" : "")
                          << '\n';
        }
        std::cout << "indiscernible subspace dimension: "
                  << analysis.indiscernible_basis.cols() << '\n';
        for (std::size_t c = 0; c < analysis.indiscernible_basis.cols(); ++c)
            std::cout << "  direction " << c + 1 << ": "
                      << vector_text(analysis.indiscernible_basis.column(c)) << '\n';
        std::cout << "verdict: "
                  << (analysis.fully_discernible
                          ? "every initial state reveals the variation"
                          : "states along the directions above hide the variation")
                  << '\n';
        if (output) {
            std::cout << "sensors:";
            for (int v : sensor_nodes) std::cout << ' ' << v + 1;
            std::cout << "\nrank conditions (condition, required, achieved, ok):\n";
            for (const RankCondition& c : output->conditions)
                std::cout << "  (" << c.index << ") lambda=" << fmt(c.index == 2 ? c.lambda_bar : c.lambda)
                          << "  " << c.required << "  " << c.achieved << "  "
                          << (c.satisfied ? "yes" : "NO")
                          << (c.marginal ? " [marginal]" : "") << '\n';
            std::cout << "output-discernible: " << (output->output_discernible ? "yes" : "no")
                      << '\n';
            std::cout << "joint indiscernible dimension: " << output->dim_indiscernible << '\n';
            std::cout << "sensor count lower bound: " << output->sensor_lower_bound << '\n';
        }
    }
    return 0;
}

// --- sensors -----------------------------------------------------------------

int cmd_sensors(const std::string& graph_path, const std::string& variation_token_str,
                std::size_t budget, const std::string& restrict_csv, bool as_json) {
    const Tolerances tol;
    const NetworkModel model = load_graph_file(graph_path);
    const VariationSpec spec = parse_variation_token(variation_token_str);
    validate_variation(model, spec);

    std::vector<int> restrict_nodes;
    if (!restrict_csv.empty()) restrict_nodes = parse_node_list(restrict_csv);

    const EigenStructure nominal = spectral_decompose(model.to_dense(), tol);
    const EigenStructure modified =
        spectral_decompose(apply_variation(model, spec).to_dense(), tol);
    const PlacementResult placement =
        sensor_placement(nominal, modified, budget, tol, restrict_nodes);

    if (as_json) {
        json j = report_skeleton("sensors", tol);
        j["network"] = graph_to_json(model);
        j["variation"] = variation_to_json(spec);
        j["budget"] = budget;
        if (!restrict_nodes.empty()) j["restrict"] = nodes_to_json(restrict_nodes);
        j["placement"] = {{"feasible", placement.feasible},
                          {"sensors", nodes_to_json(placement.sensors)},
                          {"lower_bound", placement.lower_bound},
                          {"sets_tested", placement.sets_tested},
                          {"message", placement.message}};
        emit(std::move(j));
    } else {
        std::cout << kToolName << ' ' << kVersion << " - sensors\n";
        std::cout << "network: " << model.size() << " nodes (" << graph_path << ")\n";
        std::cout << "variation: " << variation_token(spec) << '\n';
        std::cout << "budget: " << budget << ", lower bound: " << placement.lower_bound
                  << ", sets tested: " << placement.sets_tested << '\n';
        if (placement.feasible) {
            std::cout << "feasible placement:";
            for (int v : placement.sensors) std::cout << ' ' << v + 1;
            std::cout << '\n';
        } else {
            std::cout << "infeasible: " << placement.message << '\n';
        }
    }
    return placement.feasible ? 0 : 2;
}

// --- simulate ----------------------------------------------------------------

int cmd_simulate(const std::string& scenario_path, const std::string& out_path,
                 int switch_to, std::optional<std::uint64_t> seed,
                 std::optional<double> noise_energy) {
    const Tolerances tol;
    const Scenario sc = load_scenario_file(scenario_path);
    if (sc.x0.empty())
        throw invalid_spec_error("scenario provides no initial state \"x0\" to simulate");
    if (switch_to < 0 || static_cast<std::size_t>(switch_to) > sc.variations.size())
        throw invalid_spec_error("--switch-to must be 0 (nominal) or a 1-based variation index");

    NetworkModel dynamics = sc.network;
    if (switch_to > 0)
        dynamics = apply_variation(sc.network, sc.variations[static_cast<std::size_t>(switch_to) - 1]);

    const SensorSet sensors = SensorSet::of(sc.sensor_nodes, sc.network.size());
    const EigenStructure e = spectral_decompose(dynamics.to_dense(), tol);
    const SampleBatch batch =
        simulate_samples(e, sc.x0, sensors, sc.plan,
                         noise_energy.value_or(sc.noise_energy), seed.value_or(sc.seed));

    if (out_path.empty()) {
        std::cout << "k,node,value\n";
        char buf[40];
        for (std::size_t k = 0; k < batch.samples.size(); ++k)
            for (std::size_t r = 0; r < sensors.count(); ++r) {
                std::snprintf(buf, sizeof buf, "%.17g", batch.samples[k][r]);
                std::cout << k << ',' << sensors.nodes[r] + 1 << ',' << buf << '\n';
            }
    } else {
        save_batch_file(out_path, batch, sensors, sc.plan);
        std::cout << "wrote " << batch.samples.size() << " samples x " << sensors.count()
                  << " sensors to " << out_path << '\n';
    }
    return 0;
}

// --- detect ------------------------------------------------------------------

int cmd_detect(const std::string& scenario_path, const std::string& samples_path,
               std::optional<double> noise_energy, bool as_json) {
    const Tolerances tol;
    const Scenario sc = load_scenario_file(scenario_path);
    const SensorSet sensors = SensorSet::of(sc.sensor_nodes, sc.network.size());
    const SampleBatch batch = load_batch_file(samples_path, sensors);
    const double ev = noise_energy.value_or(sc.noise_energy);

    const EigenStructure nominal = spectral_decompose(sc.network.to_dense(), tol);
    const Matrix obs_nominal = observability_matrix(nominal, sensors, sc.plan);

    json reports = json::array();
    bool any_inconclusive = false;
    std::vector<std::string> human_lines;
    for (const VariationSpec& spec : sc.variations) {
        const EigenStructure modified =
            spectral_decompose(apply_variation(sc.network, spec).to_dense(), tol);
        const Matrix obs_modified = observability_matrix(modified, sensors, sc.plan);

        DetectionReport rep = detect(batch, obs_nominal, obs_modified, ev, tol);
        const SamplingCheck check =
            sampling_period_check(spectrum_union(nominal, modified), sc.plan.period);
        rep.sampling_ok = check.ok;
        rep.sampling_vacuous = check.vacuous;
        if (rep.verdict == Verdict::inconclusive) any_inconclusive = true;

        json jr;
        jr["variation"] = variation_to_json(spec);
        jr["pi"] = rep.pi;
        jr["pi_modified"] = rep.pi_bar;
        jr["noise_energy"] = rep.noise_energy;
        jr["verdict"] = to_string(rep.verdict);
        jr["marginal"] = rep.marginal;
        jr["sampling"] = {{"ok", rep.sampling_ok}, {"vacuous", rep.sampling_vacuous}};
        jr["rank_nominal"] = rep.rank_nominal;
        jr["rank_modified"] = rep.rank_modified;
        jr["x0_nominal"] = rep.x0_nominal;
        jr["x0_modified"] = rep.x0_modified;

        if (!sc.x0.empty()) {
            const OutputDiscernibilityAnalysis a =
                output_discernibility(nominal, modified, sensors, tol);
            const DetectionMargin margin =
                detection_margin(sc.x0, projections_of_im(a, tol.rank_rel).second,
                                 obs_nominal, obs_modified, sc.plan.count, rep.sampling_ok,
                                 tol.rank_rel);
            json jm = {{"guarantee_valid", margin.valid},
                       {"distance", margin.distance},
                       {"relative", margin.relative}};
            if (std::isfinite(margin.smallest_nonzero_angle))
                jm["smallest_nonzero_angle"] = margin.smallest_nonzero_angle;
            jr["margin"] = jm;
        }
        reports.push_back(jr);

        std::string line = variation_token(spec);
        line += ": pi=" + fmt(rep.pi) + " pi'=" + fmt(rep.pi_bar) + " Ev=" + fmt(ev) +
                " -> " + to_string(rep.verdict);
        if (rep.marginal) line += " [marginal]";
        if (!rep.sampling_ok) line += " [sampling period aliases eigenvalues]";
        human_lines.push_back(std::move(line));
    }

    if (as_json) {
        json j = report_skeleton("detect", tol);
        j["scenario"] = scenario_path;
        j["samples"] = samples_path;
        j["noise_energy"] = ev;
        j["plan"] = {{"t0", sc.plan.t0}, {"T", sc.plan.period}, {"N", sc.plan.count}};
        j["sensors"] = nodes_to_json(sc.sensor_nodes);
        j["reports"] = std::move(reports);
        emit(std::move(j));
    } else {
        std::cout << kToolName << ' ' << kVersion << " - detect\n";
        std::cout << "scenario: " << scenario_path << ", samples: " << samples_path << '\n';
        std::cout << "samples: " << batch.samples.size() << " x " << sensors.count()
                  << ", noise energy bound: " << fmt(ev) << '\n';
        for (const std::string& line : human_lines) std::cout << line << '\n';
    }
    return any_inconclusive ? 3 : 0;
}

// --- path-demo ---------------------------------------------------------------

int cmd_path_demo(std::size_t n_max, bool as_json) {
    if (n_max < 2) throw invalid_spec_error("--n-max must be at least 2");
    json rows = json::array();
    std::vector<std::string> lines;
    for (std::size_t n = 2; n <= n_max; ++n) {
        for (int left = 0; static_cast<std::size_t>(left) + 1 < n; ++left) {
            const std::size_t i = static_cast<std::size_t>(left) + 1;
            for (std::size_t k : path_link_indiscernible_modes(n, left)) {
                const std::size_t m = k * i / n;
                rows.push_back({{"k", k}, {"i", i}, {"n", n}, {"m", m}});
                char buf[64];
                std::snprintf(buf, sizeof buf, "%4zu %4zu %4zu %4zu", k, i, n, m);
                lines.emplace_back(buf);
            }
        }
    }
    if (as_json) {
        json j = report_skeleton("path-demo", Tolerances{});
        j["n_max"] = n_max;
        j["solutions"] = std::move(rows);
        emit(std::move(j));
    } else {
        std::cout << kToolName << ' ' << kVersion << " - path-demo\n";
        std::cout << "modes k of the n-path invisible to the reconfigured drop of link "
                     "(i, i+1); m is the integer with k*i = n*m\n";
        std::cout << "   k    i    n    m\n";
        for (const std::string& line : lines) std::cout << line << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"discernibility analysis and sampled-data detection of link/node "
                 "disconnections in linear network dynamics"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1);

    std::string graph_path, variation, sensors_csv, restrict_csv;
    std::string scenario_path, samples_path, out_path;
    bool as_json = false;
    std::size_t budget = 0;
    std::size_t n_max = 10;
    int switch_to = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> ev_override;

    CLI::App* analyze = app.add_subcommand(
        "analyze", "indiscernible directions of one variation, optionally through sensors");
    analyze->add_option("--graph", graph_path, "network JSON file")->required();
    analyze->add_option("--variation", variation, "kind:i[,j], e.g. link-reconfig:1,2")
        ->required();
    analyze->add_option("--sensors", sensors_csv, "sensor nodes, e.g. 1,3,5");
    analyze->add_option("--restrict", restrict_csv,
                        "restrict the modified-side rank condition to these nodes");
    analyze->add_flag("--json", as_json, "machine-readable report");

    CLI::App* sensors_cmd =
        app.add_subcommand("sensors", "smallest sensor set that keeps the variation visible");
    sensors_cmd->add_option("--graph", graph_path, "network JSON file")->required();
    sensors_cmd->add_option("--variation", variation, "kind:i[,j]")->required();
    sensors_cmd->add_option("--budget", budget, "maximum sensor count")->required();
    sensors_cmd->add_option("--restrict", restrict_csv,
                            "restrict the modified-side rank condition to these nodes");
    sensors_cmd->add_flag("--json", as_json, "machine-readable report");

    CLI::App* simulate =
        app.add_subcommand("simulate", "sample a trajectory into a CSV/JSON batch");
    simulate->add_option("scenario", scenario_path, "scenario JSON file")->required();
    simulate->add_option("output", out_path, "output .csv or .json (default: CSV on stdout)");
    simulate->add_option("--switch-to", switch_to,
                         "simulate variation K (1-based) instead of the nominal dynamics");
    simulate->add_option("--seed", seed, "override the scenario RNG seed");
    simulate->add_option("--Ev", ev_override, "override the scenario noise energy");

    CLI::App* detect_cmd =
        app.add_subcommand("detect", "least-squares detection from a sample batch");
    detect_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    detect_cmd->add_option("samples", samples_path, "sample batch (.csv or .json)")->required();
    detect_cmd->add_option("--Ev", ev_override, "override the scenario noise energy");
    detect_cmd->add_flag("--json", as_json, "machine-readable report");

    CLI::App* path_demo =
        app.add_subcommand("path-demo", "closed-form invisible link modes of the n-path");
    path_demo->add_option("--n-max", n_max, "largest path size to tabulate (default 10)");
    path_demo->add_flag("--json", as_json, "machine-readable report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed())
            return cmd_analyze(graph_path, variation, sensors_csv, restrict_csv, as_json);
        if (sensors_cmd->parsed())
            return cmd_sensors(graph_path, variation, budget, restrict_csv, as_json);
        if (simulate->parsed())
            return cmd_simulate(scenario_path, out_path, switch_to, seed, ev_override);
        if (detect_cmd->parsed())
            return cmd_detect(scenario_path, samples_path, ev_override, as_json);
        if (path_demo->parsed()) return cmd_path_demo(n_max, as_json);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 1;
}
