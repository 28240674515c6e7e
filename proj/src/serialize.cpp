#include "mirnet/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace mirnet {

namespace {

json adjacency_to_json(const std::vector<uint8_t>& adj, std::size_t n) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(int(adj[i * n + j]));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<uint8_t> adjacency_from_json(const json& rows, std::size_t n) {
    if (!rows.is_array() || rows.size() != n)
        throw Error("adjacency must be an array of " + std::to_string(n) + " rows");
    std::vector<uint8_t> adj(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != n)
            throw Error("adjacency row " + std::to_string(i) + " must have " +
                        std::to_string(n) + " entries");
        for (std::size_t j = 0; j < n; ++j) {
            const int v = row[j].get<int>();
            if (v != 0 && v != 1) throw Error("adjacency entries must be 0 or 1");
            adj[i * n + j] = static_cast<uint8_t>(v);
        }
    }
    return adj;
}

}  // namespace

json meta_to_json(const DatasetMeta& meta) {
    json j;
    j["kind"] = meta.kind;
    j["seed"] = meta.seed;
    j["params"] = meta.params;
    j["labels"] = meta.labels;
    if (meta.truth_adjacency) {
        j["truth_nodes"] = meta.truth_nodes;
        j["truth_adjacency"] = adjacency_to_json(*meta.truth_adjacency, meta.truth_nodes);
    }
    return j;
}

DatasetMeta meta_from_json(const json& j) {
    DatasetMeta meta;
    meta.kind = j.at("kind").get<std::string>();
    meta.seed = j.at("seed").get<uint64_t>();
    if (j.contains("params")) meta.params = j.at("params");
    meta.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("truth_adjacency")) {
        meta.truth_nodes = j.at("truth_nodes").get<std::size_t>();
        meta.truth_adjacency = adjacency_from_json(j.at("truth_adjacency"), meta.truth_nodes);
    }
    return meta;
}

json sweep_to_json(const SweepResult& sweep) {
    const std::size_t m = sweep.n_channels();
    json j;
    j["labels"] = sweep.labels;
    json refs = json::array();
    for (std::size_t c = 0; c < m; ++c)
        if (sweep.is_reference[c]) refs.push_back(sweep.labels[c]);
    j["reference_channels"] = refs;
    j["n_max"] = sweep.n_max;
    j["grid_sizes"] = sweep.grid_sizes;
    j["horizon"] = sweep.horizon;

    // Full symmetric weight matrix, diagonal zero.
    json bar_rows = json::array();
    for (std::size_t i = 0; i < m; ++i) {
        json row = json::array();
        for (std::size_t jj = 0; jj < m; ++jj)
            row.push_back(i == jj ? 0.0 : sweep.bar_at(i, jj));
        bar_rows.push_back(std::move(row));
    }
    j["mir_bar"] = bar_rows;

    json per_pair = json::object();
    for (std::size_t p = 0; p < sweep.pairs.size(); ++p) {
        const PairSweep& ps = sweep.pairs[p];
        json entry;
        entry["labels"] = {sweep.labels[ps.a], sweep.labels[ps.b]};
        entry["mir"] = ps.mir;
        entry["mir_hat"] = ps.mir_hat;
        entry["sum"] = ps.sum;
        entry["bar"] = sweep.bar[p];
        per_pair[std::to_string(ps.a) + "," + std::to_string(ps.b)] = std::move(entry);
    }
    j["per_pair"] = per_pair;
    if (!sweep.warnings.empty()) j["warnings"] = sweep.warnings;
    return j;
}

json network_to_json(const NetworkResult& network) {
    const std::size_t n = network.labels.size();
    json j;
    j["labels"] = network.labels;
    j["adjacency"] = adjacency_to_json(network.adjacency, n);
    json edges = json::array();
    for (const auto& [a, b] : network.edges) {
        json e;
        e["a"] = network.labels[a];
        e["b"] = network.labels[b];
        edges.push_back(std::move(e));
    }
    j["edges"] = edges;
    j["tau"] = network.tau;
    j["method"] = threshold_method_name(network.method);
    j["evidence"] = network.evidence;
    j["excluded_channels"] = network.excluded_channels;
    return j;
}

NetworkResult network_from_json(const json& j) {
    NetworkResult network;
    network.labels = j.at("labels").get<std::vector<std::string>>();
    const std::size_t n = network.labels.size();
    network.adjacency = adjacency_from_json(j.at("adjacency"), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jj = i + 1; jj < n; ++jj)
            if (network.adjacency[i * n + jj]) network.edges.emplace_back(i, jj);
    network.tau = j.at("tau").get<double>();
    network.method = threshold_method_from_name(j.at("method").get<std::string>());
    if (j.contains("evidence")) network.evidence = j.at("evidence").get<std::string>();
    if (j.contains("excluded_channels"))
        network.excluded_channels = j.at("excluded_channels").get<std::vector<std::string>>();
    return network;
}

std::string ordered_pairs_tsv(const SweepResult& sweep) {
    std::string out = "a\tb\tweight\n";
    const auto ranked = order_pairs(sweep);
    for (const RankedPair& rp : ranked) {
        out += sweep.labels[rp.a];
        out += '\t';
        out += sweep.labels[rp.b];
        out += '\t';
        out += format_double(rp.value);
        out += '\n';
    }
    return out;
}

json metrics_to_json(const BasicStats& stats, const ClusteringPath& cp,
                     const SmallWorldResult& sw, const AssortativityResult& assort,
                     const PartitionResult& partition,
                     const std::vector<std::string>& labels) {
    json j;
    j["nodes"] = stats.nodes;
    j["edges"] = stats.edges;
    j["degrees"] = stats.degrees;
    j["density"] = stats.density;
    j["components"] = stats.n_components;
    j["component_sizes"] = stats.component_sizes;
    j["clustering"] = cp.clustering;
    j["path_length"] = cp.path_length;
    j["largest_component"] = cp.largest_component;

    json sigma;
    sigma["defined"] = sw.defined;
    if (sw.defined) {
        sigma["value"] = sw.sigma;
        sigma["random_clustering"] = sw.random_clustering;
        sigma["random_path"] = sw.random_path;
    } else {
        sigma["reason"] = sw.reason;
    }
    j["small_world_sigma"] = sigma;

    json r;
    r["defined"] = assort.defined;
    if (assort.defined)
        r["value"] = assort.r;
    else
        r["reason"] = assort.reason;
    j["assortativity"] = r;

    json q;
    q["value"] = partition.q;
    json communities = json::array();
    for (const auto& comm : partition.communities) {
        json names = json::array();
        for (std::size_t v : comm) names.push_back(labels.at(v));
        communities.push_back(std::move(names));
    }
    q["communities"] = communities;
    j["modularity"] = q;
    return j;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::string out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return out;
}

std::string to_json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace mirnet
