#pragma once

// File formats: graph JSON, scenario JSON, sample batches (CSV or
// JSON), and the numeric-rounding convention for reports.
//
// Node indices are 1-based in every file and in all CLI output, and
// 0-based in the C++ API; the conversions happen here and nowhere
// else.  JSON output rounds every number to 15 significant digits so
// reports are bit-stable across runs; CSV sample batches are written
// with full %.17g precision so a round trip is exact.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "netdiscern/detector.hpp"
#include "netdiscern/discern.hpp"
#include "netdiscern/errors.hpp"
#include "netdiscern/matrix.hpp"
#include "netdiscern/network.hpp"

namespace netdiscern {

using nlohmann::json;

// --- numeric formatting -----------------------------------------------------

/// Round to the given count of significant decimal digits.
inline double round_sig(double v, int digits = 15) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double mag = std::floor(std::log10(std::abs(v)));
    const double factor = std::pow(10.0, digits - 1 - static_cast<int>(mag));
    return std::round(v * factor) / factor;
}

/// Round every number in a JSON document in place.
inline void round_json_numbers(json& j, int digits = 15) {
    if (j.is_number_float()) j = round_sig(j.get<double>(), digits);
    else if (j.is_object() || j.is_array())
        for (auto& item : j) round_json_numbers(item, digits);
}

// --- graphs -------------------------------------------------------------------

/// Parse the graph object: { "n": int, "edges": [[i, j, weight?]],
/// "diag": [..]?, "consensus": bool? }.  Indices are 1-based; when
/// "consensus" is true the diagonal (and any explicit zero diag) is
/// ignored and the consensus construction applies.
inline NetworkModel graph_from_json(const json& j) {
    if (!j.is_object()) throw io_error("graph: expected a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw io_error("graph: missing integer field \"n\"");
    const long long n_raw = j["n"].get<long long>();
    if (n_raw < 2) throw io_error("graph: \"n\" must be at least 2");
    const std::size_t n = static_cast<std::size_t>(n_raw);

    std::vector<Edge> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array()) throw io_error("graph: \"edges\" must be an array");
        for (const auto& item : j["edges"]) {
            if (!item.is_array() || item.size() < 2 || item.size() > 3)
                throw io_error("graph: each edge must be [i, j] or [i, j, weight]");
            Edge e;
            e.a = item[0].get<int>() - 1;
            e.b = item[1].get<int>() - 1;
            e.weight = item.size() == 3 ? item[2].get<double>() : 1.0;
            edges.push_back(e);
        }
    }

    const bool consensus = j.value("consensus", false);
    try {
        if (consensus) return build_consensus(n, edges);
        Vector diag(n, 0.0);
        if (j.contains("diag")) {
            if (!j["diag"].is_array() || j["diag"].size() != n)
                throw io_error("graph: \"diag\" must be an array of length n");
            for (std::size_t i = 0; i < n; ++i) diag[i] = j["diag"][i].get<double>();
        }
        return NetworkModel(n, edges, std::move(diag));
    } catch (const invalid_graph_error& ex) {
        throw io_error(std::string("graph: ") + ex.what());
    }
}

inline json graph_to_json(const NetworkModel& model) {
    json j;
    j["n"] = model.size();
    j["edges"] = json::array();
    for (const Edge& e : model.edges()) j["edges"].push_back({e.a + 1, e.b + 1, e.weight});
    j["diag"] = model.diagonal();
    return j;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& ex) {
        throw io_error(path + ": " + ex.what());
    }
}

inline NetworkModel load_graph_file(const std::string& path) {
    try {
        return graph_from_json(load_json_file(path));
    } catch (const io_error& ex) {
        throw io_error(path + ": " + ex.what());
    }
}

// --- variations -----------------------------------------------------------------

/// Parse "kind:i" or "kind:i,j" with 1-based node numbers, e.g.
/// "link-reconfig:1,2" or "node-noreconfig:3".
inline VariationSpec parse_variation_token(const std::string& token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
        throw io_error("variation \"" + token + "\": expected kind:i or kind:i,j");
    const std::string kind_str = token.substr(0, colon);
    VariationKind kind;
    if (kind_str == "link-noreconfig") kind = VariationKind::link_no_reconfig;
    else if (kind_str == "link-reconfig") kind = VariationKind::link_reconfig;
    else if (kind_str == "node-noreconfig") kind = VariationKind::node_no_reconfig;
    else if (kind_str == "node-reconfig") kind = VariationKind::node_reconfig;
    else
        throw io_error("variation \"" + token +
                       "\": unknown kind (expected link-noreconfig, link-reconfig, "
                       "node-noreconfig, or node-reconfig)");

    VariationSpec spec;
    spec.kind = kind;
    const std::string rest = token.substr(colon + 1);
    std::istringstream ss(rest);
    int i = 0;
    char comma = 0;
    if (!(ss >> i)) throw io_error("variation \"" + token + "\": missing node number");
    spec.i = i - 1;
    if (is_link_kind(kind)) {
        int jnum = 0;
        if (!(ss >> comma >> jnum) || comma != ',')
            throw io_error("variation \"" + token + "\": link kinds need two nodes i,j");
        spec.j = jnum - 1;
    } else if (ss >> comma) {
        throw io_error("variation \"" + token + "\": node kinds take a single node");
    }
    return spec;
}

inline std::string variation_token(const VariationSpec& spec) {
    std::string out = to_string(spec.kind);
    out += ':' + std::to_string(spec.i + 1);
    if (is_link_kind(spec.kind)) out += ',' + std::to_string(spec.j + 1);
    return out;
}

inline VariationSpec variation_from_json(const json& j) {
    if (j.is_string()) return parse_variation_token(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind"))
        throw io_error("variation: expected a token string or an object with \"kind\"");
    std::string token = j["kind"].get<std::string>();
    token += ':' + std::to_string(j.value("i", 0));
    if (j.contains("j")) token += ',' + std::to_string(j["j"].get<int>());
    return parse_variation_token(token);
}

inline json variation_to_json(const VariationSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["i"] = spec.i + 1;
    if (is_link_kind(spec.kind)) j["j"] = spec.j + 1;
    return j;
}

// --- comma-separated node lists (sensors, restriction sets) ---------------------

inline std::vector<int> parse_node_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        if (piece.empty()) throw io_error("node list \"" + text + "\": empty entry");
        std::size_t used = 0;
        int value = 0;
        try {
            value = std::stoi(piece, &used);
        } catch (const std::exception&) {
            throw io_error("node list \"" + text + "\": bad number \"" + piece + "\"");
        }
        if (used != piece.size())
            throw io_error("node list \"" + text + "\": bad number \"" + piece + "\"");
        out.push_back(value - 1);
    }
    if (out.empty()) throw io_error("node list \"" + text + "\": no entries");
    return out;
}

// --- scenarios -------------------------------------------------------------------

/// A reproducible analysis bundle: the network, candidate variations,
/// sensors, sampling plan, noise bound, initial state, seed.
struct Scenario {
    NetworkModel network;
    std::vector<VariationSpec> variations;
    std::vector<int> sensor_nodes;   // 0-based
    SamplePlan plan;
    double noise_energy = 0.0;
    Vector x0;                       // empty = not provided
    std::uint64_t seed = 0;
};

inline Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw io_error("scenario: expected a JSON object");
    if (j.value("format", 0) != 1)
        throw io_error("scenario: missing or unsupported \"format\" (expected 1)");
    if (!j.contains("network")) throw io_error("scenario: missing \"network\"");

    Scenario sc{graph_from_json(j["network"]), {}, {}, {}, 0.0, {}, 0};
    const std::size_t n = sc.network.size();

    if (!j.contains("variations") || !j["variations"].is_array() || j["variations"].empty())
        throw io_error("scenario: needs a nonempty \"variations\" array");
    for (const auto& v : j["variations"]) {
        VariationSpec spec = variation_from_json(v);
        validate_variation(sc.network, spec);
        sc.variations.push_back(spec);
    }

    if (!j.contains("sensors") || !j["sensors"].is_array() || j["sensors"].empty())
        throw io_error("scenario: needs a nonempty \"sensors\" array");
    for (const auto& s : j["sensors"]) sc.sensor_nodes.push_back(s.get<int>() - 1);
    SensorSet::of(sc.sensor_nodes, n);   // validates; throws invalid_spec_error

    if (!j.contains("plan") || !j["plan"].is_object())
        throw io_error("scenario: missing \"plan\" object");
    const json& plan = j["plan"];
    sc.plan.t0 = plan.value("t0", 0.0);
    if (!plan.contains("T") || !plan.contains("N"))
        throw io_error("scenario: plan needs \"T\" and \"N\"");
    sc.plan.period = plan["T"].get<double>();
    sc.plan.count = plan["N"].get<std::size_t>();
    sc.plan.validate();

    sc.noise_energy = j.value("noise_energy", 0.0);
    if (sc.noise_energy < 0.0) throw io_error("scenario: negative noise energy");
    sc.seed = j.value("seed", std::uint64_t{0});

    if (j.contains("x0")) {
        if (!j["x0"].is_array() || j["x0"].size() != n)
            throw io_error("scenario: \"x0\" must be an array of length n");
        for (const auto& v : j["x0"]) sc.x0.push_back(v.get<double>());
    }
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    try {
        return scenario_from_json(load_json_file(path));
    } catch (const io_error& ex) {
        throw io_error(path + ": " + ex.what());
    } catch (const invalid_spec_error& ex) {
        throw io_error(path + ": " + ex.what());
    }
}

// --- sample batches ---------------------------------------------------------------

/// CSV layout: header "k,node,value", one row per (sample index k,
/// 1-based sensor node, measured value), full %.17g precision.
inline void save_batch_csv(const std::string& path, const SampleBatch& batch,
                           const SensorSet& sensors) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write file: " + path);
    out << "k,node,value\n";
    char buf[40];
    for (std::size_t k = 0; k < batch.samples.size(); ++k) {
        const Vector& z = batch.samples[k];
        if (z.size() != sensors.count())
            throw io_error("sample width does not match sensor count");
        for (std::size_t r = 0; r < z.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%.17g", z[r]);
            out << k << ',' << sensors.nodes[r] + 1 << ',' << buf << '\n';
        }
    }
}

inline SampleBatch load_batch_csv(const std::string& path, const SensorSet& sensors) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "k,node,value")
        throw io_error(path + ": expected header \"k,node,value\"");

    std::vector<std::vector<double>> rows;      // rows[k][sensor position]
    std::vector<std::vector<char>> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        long long k = 0;
        int node = 0;
        double value = 0.0;
        char c1 = 0, c2 = 0;
        if (!(ss >> k >> c1 >> node >> c2 >> value) || c1 != ',' || c2 != ',')
            throw io_error(path + ": line " + std::to_string(lineno) + ": malformed row");
        if (k < 0) throw io_error(path + ": line " + std::to_string(lineno) + ": negative k");

        std::size_t pos = sensors.count();
        for (std::size_t r = 0; r < sensors.count(); ++r)
            if (sensors.nodes[r] == node - 1) pos = r;
        if (pos == sensors.count())
            throw io_error(path + ": line " + std::to_string(lineno) + ": node " +
                           std::to_string(node) + " is not a sensor of this scenario");

        if (rows.size() <= static_cast<std::size_t>(k)) {
            rows.resize(static_cast<std::size_t>(k) + 1,
                        std::vector<double>(sensors.count(), 0.0));
            seen.resize(static_cast<std::size_t>(k) + 1,
                        std::vector<char>(sensors.count(), 0));
        }
        if (seen[static_cast<std::size_t>(k)][pos])
            throw io_error(path + ": line " + std::to_string(lineno) + ": duplicate sample");
        rows[static_cast<std::size_t>(k)][pos] = value;
        seen[static_cast<std::size_t>(k)][pos] = 1;
    }
    for (std::size_t k = 0; k < seen.size(); ++k)
        for (std::size_t r = 0; r < sensors.count(); ++r)
            if (!seen[k][r])
                throw io_error(path + ": missing value for k = " + std::to_string(k) +
                               ", node " + std::to_string(sensors.nodes[r] + 1));

    SampleBatch batch;
    for (auto& row : rows) batch.samples.push_back(std::move(row));
    return batch;
}

inline json batch_to_json(const SampleBatch& batch, const SensorSet& sensors,
                          const SamplePlan& plan) {
    json j;
    j["format"] = 1;
    j["sensors"] = json::array();
    for (int node : sensors.nodes) j["sensors"].push_back(node + 1);
    j["plan"] = {{"t0", plan.t0}, {"T", plan.period}, {"N", plan.count}};
    j["noise_energy"] = batch.noise_energy;
    j["samples"] = json::array();
    for (const Vector& z : batch.samples) j["samples"].push_back(z);
    return j;
}

inline SampleBatch batch_from_json(const json& j, const SensorSet& sensors) {
    if (!j.is_object() || j.value("format", 0) != 1)
        throw io_error("batch: missing or unsupported \"format\" (expected 1)");
    SampleBatch batch;
    batch.noise_energy = j.value("noise_energy", 0.0);
    if (!j.contains("samples") || !j["samples"].is_array())
        throw io_error("batch: missing \"samples\" array");
    for (const auto& row : j["samples"]) {
        if (!row.is_array() || row.size() != sensors.count())
            throw io_error("batch: sample width does not match sensor count");
        Vector z;
        for (const auto& v : row) z.push_back(v.get<double>());
        batch.samples.push_back(std::move(z));
    }
    return batch;
}

inline bool ends_with(const std::string& text, const std::string& suffix) {
    return text.size() >= suffix.size() &&
           text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Write a batch as CSV or JSON depending on the file extension.
inline void save_batch_file(const std::string& path, const SampleBatch& batch,
                            const SensorSet& sensors, const SamplePlan& plan) {
    if (ends_with(path, ".csv")) {
        save_batch_csv(path, batch, sensors);
        return;
    }
    if (ends_with(path, ".json")) {
        json j = batch_to_json(batch, sensors, plan);
        round_json_numbers(j);
        std::ofstream out(path);
        if (!out) throw io_error("cannot write file: " + path);
        out << j.dump(2) << '\n';
        return;
    }
    throw io_error("sample file needs a .csv or .json extension: " + path);
}

inline SampleBatch load_batch_file(const std::string& path, const SensorSet& sensors) {
    if (ends_with(path, ".csv")) return load_batch_csv(path, sensors);
    if (ends_with(path, ".json")) {
        try {
            return batch_from_json(load_json_file(path), sensors);
        } catch (const io_error& ex) {
            throw io_error(path + ": " + ex.what());
        }
    }
    throw io_error("sample file needs a .csv or .json extension: " + path);
}

} // namespace netdiscern
