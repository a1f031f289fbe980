// End-to-end tests of the command-line tool: every case shells out to
// the built binary (path injected as NETDISCERN_CLI_PATH) and checks
// exit codes, JSON reports, and file round trips.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "netdiscern/netdiscern.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + NETDISCERN_CLI_PATH + "\" " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe))
        result.out.append(buf, got);
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path work_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "netdiscern_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const auto path = work_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::string write_json(const std::string& name, const json& j) {
    return write_file(name, j.dump(2));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json triangle_graph() {
    return {{"n", 3}, {"edges", {{1, 2}, {1, 3}, {2, 3}}}, {"consensus", true}};
}

json path_graph(int n) {
    json edges = json::array();
    for (int i = 1; i < n; ++i) edges.push_back({i, i + 1});
    return {{"n", n}, {"edges", edges}, {"consensus", true}};
}

json triangle_scenario() {
    json j;
    j["format"] = 1;
    j["network"] = triangle_graph();
    j["variations"] = {"link-reconfig:1,2"};
    j["sensors"] = {1, 2, 3};
    j["plan"] = {{"t0", 0.0}, {"T", 0.4}, {"N", 8}};
    j["noise_energy"] = 0.0;
    j["seed"] = 5;
    j["x0"] = {0.3, -0.7, 1.1};
    return j;
}

} // namespace

TEST_CASE("version flag") {
    const RunResult r = run_cli("--version");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find(netdiscern::kVersion) != std::string::npos);
}

TEST_CASE("analyze: triangle link rewire has a two-dimensional hidden subspace") {
    const std::string graph = write_json("k3.json", triangle_graph());
    const RunResult r =
        run_cli("analyze --graph " + graph + " --variation link-reconfig:1,2 --json");
    REQUIRE(r.code == 0);

    const json j = json::parse(r.out);
    REQUIRE(j["tool"]["name"] == "netdiscern");
    REQUIRE(j["tool"]["version"].is_string());
    REQUIRE(j["tolerances"].contains("rank_rel"));
    REQUIRE(j["indiscernible"]["dimension"] == 2);
    REQUIRE(j["indiscernible"]["fully_discernible"] == false);
    REQUIRE(j["indiscernible"]["basis"].size() == 2);

    // Human-readable mode reports the same dimension.
    const RunResult human =
        run_cli("analyze --graph " + graph + " --variation link-reconfig:1,2");
    REQUIRE(human.code == 0);
    REQUIRE(human.out.find("indiscernible subspace dimension: 2") != std::string::npos);
}

TEST_CASE("analyze: 8-path rewire of link (4,5) keeps a nonstationary shared mode") {
    const std::string graph = write_json("p8.json", path_graph(8));
    const RunResult r =
        run_cli("analyze --graph " + graph + " --variation link-reconfig:4,5 --json");
    REQUIRE(r.code == 0);

    const json j = json::parse(r.out);
    // Modes k = 2, 4, 6 survive in addition to the constant vector.
    REQUIRE(j["indiscernible"]["dimension"] == 4);
    bool found = false;
    for (const auto& mode : j["indiscernible"]["shared"])
        if (std::abs(mode["lambda"].get<double>() - (-0.5857864376269049)) < 1.0e-9)
            found = true;
    REQUIRE(found);
}

TEST_CASE("analyze: invalid variations are rejected") {
    const std::string graph = write_json("p3.json", path_graph(3));
    const RunResult non_edge =
        run_cli("analyze --graph " + graph + " --variation link-reconfig:1,3 --json");
    REQUIRE(non_edge.code == 1);
    REQUIRE(non_edge.out.find("error:") != std::string::npos);

    const RunResult bad_kind =
        run_cli("analyze --graph " + graph + " --variation teleport:1 --json");
    REQUIRE(bad_kind.code == 1);

    const RunResult missing =
        run_cli("analyze --graph " + std::string(work_dir() / "nope.json") +
                " --variation link-reconfig:1,2");
    REQUIRE(missing.code == 1);
}

TEST_CASE("analyze: sensor conditions appear when sensors are given") {
    const std::string graph = write_json("k3.json", triangle_graph());
    const RunResult r = run_cli("analyze --graph " + graph +
                                " --variation link-noreconfig:1,2 --sensors 1,2 --json");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["output"]["output_discernible"] == true);
    REQUIRE(j["output"]["dim_joint_indiscernible"] == 0);
    REQUIRE(j["output"]["sensors"] == json::array({1, 2}));
    REQUIRE(j["output"]["conditions"].size() >= 2);
}

TEST_CASE("sensors: budget below the requirement exits 2, enough budget succeeds") {
    const std::string graph = write_json("p3.json", path_graph(3));
    const std::string base = "sensors --graph " + graph + " --variation node-noreconfig:2";

    const RunResult tight = run_cli(base + " --budget 2 --json");
    REQUIRE(tight.code == 2);
    const json jt = json::parse(tight.out);
    REQUIRE(jt["placement"]["feasible"] == false);

    const RunResult full = run_cli(base + " --budget 3 --json");
    REQUIRE(full.code == 0);
    const json jf = json::parse(full.out);
    REQUIRE(jf["placement"]["feasible"] == true);
    REQUIRE(jf["placement"]["sensors"] == json::array({1, 2, 3}));

    // Restricting the modified-side condition to the surviving component
    // makes two sensors enough.
    const RunResult waived = run_cli(base + " --budget 2 --restrict 1,3 --json");
    REQUIRE(waived.code == 0);
    const json jw = json::parse(waived.out);
    REQUIRE(jw["placement"]["sensors"] == json::array({1, 3}));
}

TEST_CASE("simulate and detect: file round trip matches the in-process pipeline") {
    using namespace netdiscern;
    const std::string scenario = write_json("scenario_k3.json", triangle_scenario());
    const std::string batch_path = (work_dir() / "nominal.csv").string();

    const RunResult sim = run_cli("simulate " + scenario + " " + batch_path);
    REQUIRE(sim.code == 0);

    const RunResult det = run_cli("detect " + scenario + " " + batch_path + " --json");
    const json j = json::parse(det.out);
    REQUIRE(j["reports"].size() == 1);
    const json& rep = j["reports"][0];

    // In-process reference computation.
    const Scenario sc = load_scenario_file(scenario);
    const SensorSet sensors = SensorSet::of(sc.sensor_nodes, sc.network.size());
    const EigenStructure nominal = spectral_decompose(sc.network.to_dense());
    const EigenStructure modified =
        spectral_decompose(apply_variation(sc.network, sc.variations[0]).to_dense());
    const SampleBatch batch =
        simulate_samples(nominal, sc.x0, sensors, sc.plan, sc.noise_energy, sc.seed);
    const DetectionReport ref =
        detect(batch, observability_matrix(nominal, sensors, sc.plan),
               observability_matrix(modified, sensors, sc.plan), sc.noise_energy);

    REQUIRE(std::abs(rep["pi"].get<double>() - ref.pi) <= 1.0e-12);
    REQUIRE(std::abs(rep["pi_modified"].get<double>() - ref.pi_bar) <= 1.0e-12);
    REQUIRE(rep["verdict"].get<std::string>() == to_string(ref.verdict));
    REQUIRE(rep["sampling"]["vacuous"] == true);

    // Noise-free nominal data can never be declared a variation.
    REQUIRE(rep["verdict"].get<std::string>() != "VariationDetected");
}

TEST_CASE("detect: a switched trajectory from a revealing state is flagged") {
    json scenario = triangle_scenario();
    scenario["x0"] = {1.0, -1.0, 0.0};   // orthogonal to the hidden directions
    const std::string path = write_json("scenario_switch.json", scenario);
    const std::string batch_path = (work_dir() / "switched.csv").string();

    REQUIRE(run_cli("simulate " + path + " " + batch_path + " --switch-to 1").code == 0);
    const RunResult det = run_cli("detect " + path + " " + batch_path + " --json");
    REQUIRE(det.code == 0);
    const json j = json::parse(det.out);
    REQUIRE(j["reports"][0]["verdict"] == "VariationDetected");
    REQUIRE(j["reports"][0]["pi"].get<double>() > 1.0e-6);
}

TEST_CASE("detect: a hidden initial state leaves the verdict inconclusive (exit 3)") {
    json scenario = triangle_scenario();
    scenario["x0"] = {1.0, 1.0, 1.0};   // the stationary state survives the rewire
    scenario["noise_energy"] = 1.0e-9;
    const std::string path = write_json("scenario_hidden.json", scenario);
    const std::string batch_path = (work_dir() / "hidden.csv").string();

    REQUIRE(run_cli("simulate " + path + " " + batch_path + " --switch-to 1 --Ev 0").code == 0);
    const RunResult det = run_cli("detect " + path + " " + batch_path + " --json");
    REQUIRE(det.code == 3);
    REQUIRE(json::parse(det.out)["reports"][0]["verdict"] == "Inconclusive");
}

TEST_CASE("simulate: deterministic given the seed, and --switch-to is validated") {
    json scenario = triangle_scenario();
    scenario["noise_energy"] = 0.5;
    const std::string path = write_json("scenario_noise.json", scenario);
    const std::string a = (work_dir() / "noise_a.csv").string();
    const std::string b = (work_dir() / "noise_b.csv").string();
    const std::string c = (work_dir() / "noise_c.csv").string();

    REQUIRE(run_cli("simulate " + path + " " + a).code == 0);
    REQUIRE(run_cli("simulate " + path + " " + b).code == 0);
    REQUIRE(run_cli("simulate " + path + " " + c + " --seed 99").code == 0);
    REQUIRE(read_file(a) == read_file(b));
    REQUIRE(read_file(a) != read_file(c));

    REQUIRE(run_cli("simulate " + path + " --switch-to 2").code == 1);

    // Stdout CSV equals the file contents.
    const RunResult direct = run_cli("simulate " + path);
    REQUIRE(direct.code == 0);
    REQUIRE(direct.out == read_file(a));
}

TEST_CASE("path-demo: tabulates the integer solutions") {
    const RunResult r = run_cli("path-demo --n-max 10");
    REQUIRE(r.code == 0);

    // Collect the numeric rows and look for the two pinned solutions.
    std::vector<std::vector<long>> rows;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
        std::istringstream ss(line);
        std::vector<long> row;
        long v = 0;
        while (ss >> v) row.push_back(v);
        if (row.size() == 4) rows.push_back(row);
    }
    const std::vector<long> first{2, 4, 8, 1};
    const std::vector<long> second{8, 5, 10, 4};
    REQUIRE(std::find(rows.begin(), rows.end(), first) != rows.end());
    REQUIRE(std::find(rows.begin(), rows.end(), second) != rows.end());

    // Every row satisfies k*i = n*m with 0 < k,i < n.
    for (const auto& row : rows) {
        REQUIRE(row[0] * row[1] == row[2] * row[3]);
        REQUIRE(row[0] > 0);
        REQUIRE(row[0] < row[2]);
    }

    const RunResult js = run_cli("path-demo --n-max 10 --json");
    REQUIRE(js.code == 0);
    const json j = json::parse(js.out);
    bool found = false;
    for (const auto& sol : j["solutions"])
        if (sol["k"] == 2 && sol["i"] == 4 && sol["n"] == 8 && sol["m"] == 1) found = true;
    REQUIRE(found);
}
