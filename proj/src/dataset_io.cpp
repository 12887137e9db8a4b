#include "phgcl/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace phgcl {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(std::size_t record, const std::string& what) {
    throw std::runtime_error("record " + std::to_string(record) + ": " + what);
}

json graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const Edge& e : g.edges) {
        if (!std::isfinite(e.w)) {
            throw std::invalid_argument("dataset: non-finite edge weight cannot be serialized");
        }
        edges.push_back(json::array({e.u, e.v, e.w}));
    }
    json feats = json::array();
    for (int i = 0; i < g.features.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < g.features.cols; ++j) {
            double x = g.features.at(i, j);
            if (!std::isfinite(x)) {
                throw std::invalid_argument("dataset: non-finite feature cannot be serialized");
            }
            row.push_back(x);
        }
        feats.push_back(std::move(row));
    }
    json j;
    j["n_nodes"] = g.n_nodes;
    j["edges"] = std::move(edges);
    j["features"] = std::move(feats);
    if (g.label) {
        j["label"] = *g.label;
    } else {
        j["label"] = nullptr;
    }
    return j;
}

Graph graph_from_json(const json& j, std::size_t record) {
    if (!j.is_object()) parse_fail(record, "not a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "n_nodes" && key != "edges" && key != "features" && key != "label") {
            parse_fail(record, "unknown field '" + key + "'");
        }
    }
    if (!j.contains("n_nodes") || !j.contains("edges") || !j.contains("features") ||
        !j.contains("label")) {
        parse_fail(record, "missing one of the required fields n_nodes/edges/features/label");
    }
    if (!j["n_nodes"].is_number_integer()) parse_fail(record, "n_nodes must be an integer");
    Graph g;
    g.n_nodes = j["n_nodes"].get<int>();
    if (g.n_nodes < 0) parse_fail(record, "n_nodes must be non-negative");

    if (!j["edges"].is_array()) parse_fail(record, "edges must be an array");
    for (const json& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_number()) {
            parse_fail(record, "edge must be [u, v, w] with integer endpoints");
        }
        g.edges.push_back(Edge{e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }

    if (!j["features"].is_array()) parse_fail(record, "features must be an array");
    if (static_cast<int>(j["features"].size()) != g.n_nodes) {
        parse_fail(record, "features must have exactly n_nodes rows");
    }
    int d_f = -1;
    for (const json& row : j["features"]) {
        if (!row.is_array()) parse_fail(record, "feature row must be an array");
        if (d_f < 0) d_f = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != d_f) {
            parse_fail(record, "ragged feature rows");
        }
    }
    if (d_f < 0) d_f = 0;  // zero-node graph
    g.features = Matrix(g.n_nodes, d_f);
    for (int i = 0; i < g.n_nodes; ++i) {
        const json& row = j["features"][i];
        for (int k = 0; k < d_f; ++k) {
            if (!row[k].is_number()) parse_fail(record, "feature entries must be numbers");
            g.features.at(i, k) = row[k].get<double>();
        }
    }

    const json& lbl = j["label"];
    if (lbl.is_null()) {
        g.label.reset();
    } else if (lbl.is_number_integer() && (lbl.get<int>() == 0 || lbl.get<int>() == 1)) {
        g.label = lbl.get<int>();
    } else {
        parse_fail(record, "label must be 0, 1 or null");
    }

    try {
        g.validate();
    } catch (const std::invalid_argument& e) {
        parse_fail(record, e.what());
    }
    return g;
}

}  // namespace

std::string serialize_dataset(const Dataset& d) {
    d.validate();
    std::ostringstream out;
    for (const Graph& g : d.graphs) {
        out << graph_to_json(g).dump() << '\n';
    }
    return out.str();
}

std::string serialize_graph(const Graph& g) {
    g.validate();
    return graph_to_json(g).dump();
}

Dataset parse_dataset(std::istream& in) {
    Dataset d;
    std::string line;
    std::size_t record = 0;
    int d_f = -1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++record;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            parse_fail(record, std::string("malformed JSON (") + e.what() + ")");
        }
        Graph g = graph_from_json(j, record);
        if (d_f < 0) {
            d_f = g.feature_dim();
        } else if (g.feature_dim() != d_f) {
            parse_fail(record, "inconsistent feature dimension (expected " +
                                   std::to_string(d_f) + ", got " +
                                   std::to_string(g.feature_dim()) + ")");
        }
        d.graphs.push_back(std::move(g));
    }
    d.d_f = d_f < 0 ? 0 : d_f;
    d.validate();
    return d;
}

void save_dataset(const Dataset& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << serialize_dataset(d);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return parse_dataset(in);
}

}  // namespace phgcl
