#include "mirnet/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "mirnet/datagen.hpp"
#include "mirnet/error.hpp"
#include "mirnet/graphmetrics.hpp"
#include "mirnet/inference.hpp"
#include "mirnet/serialize.hpp"
#include "mirnet/series.hpp"
#include "mirnet/sha256.hpp"

namespace mirnet {

namespace {

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 2;
}

void print_warnings(const Warnings& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string strip_suffix(const std::string& s, const std::string& suffix) {
    return ends_with(s, suffix) ? s.substr(0, s.size() - suffix.size()) : s;
}

/// Base path for a dataset's sidecars: "runs/a.csv" -> "runs/a".
std::string dataset_base(const std::string& csv_path) {
    return strip_suffix(csv_path, ".csv");
}

std::string two_decimals(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Reads a JSON array-of-arrays 0/1 matrix, e.g. [[0,1],[1,0]].
std::vector<uint8_t> load_adjacency_file(const std::string& path, std::size_t* n_out) {
    json j = json::parse(read_text(path));
    if (!j.is_array() || j.empty())
        throw Error("adjacency file " + path + ": expected a non-empty array of rows");
    const std::size_t n = j.size();
    std::vector<uint8_t> a(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw Error("adjacency file " + path + ": row " + std::to_string(i + 1) +
                        " is not an array of length " + std::to_string(n));
        for (std::size_t k = 0; k < n; ++k) {
            int v = j[i][k].get<int>();
            if (v != 0 && v != 1)
                throw Error("adjacency file " + path + ": entries must be 0 or 1");
            a[i * n + k] = static_cast<uint8_t>(v);
        }
    }
    *n_out = n;
    return a;
}

json adjacency_to_json(const std::vector<uint8_t>& a, std::size_t n) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) row.push_back(static_cast<int>(a[i * n + k]));
        rows.push_back(row);
    }
    return rows;
}

/// Undirected ground truth from possibly directed generator wiring:
/// an edge wherever either direction carries coupling.
std::vector<uint8_t> symmetrised(const std::vector<uint8_t>& a, std::size_t n) {
    std::vector<uint8_t> s(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (i != k && (a[i * n + k] != 0 || a[k * n + i] != 0)) {
                s[i * n + k] = 1;
                s[k * n + i] = 1;
            }
    return s;
}

std::size_t count_edges(const std::vector<uint8_t>& a, std::size_t n) {
    std::size_t edges = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            if (a[i * n + k] != 0) ++edges;
    return edges;
}

/// The two 3-chains preset: 0-1-2 and 3-4-5.
std::vector<uint8_t> chain_triplets_adjacency() {
    std::vector<uint8_t> a(36, 0);
    const std::size_t pairs[4][2] = {{0, 1}, {1, 2}, {3, 4}, {4, 5}};
    for (const auto& p : pairs) {
        a[p[0] * 6 + p[1]] = 1;
        a[p[1] * 6 + p[0]] = 1;
    }
    return a;
}

/// Built-in covariances for the Gaussian preset: three independent blocks of
/// three channels. The third block is the nearest positive-semidefinite
/// matrix (negative eigenvalue clipped to zero) to a slightly indefinite
/// target with strong negative cross-correlations; the sampler rejects the
/// raw target, the projection keeps its correlation pattern
/// (-0.69, -0.59, -0.18) intact.
std::vector<CovarianceBlock> builtin_gaussian_blocks() {
    return {
        CovarianceBlock{3,
                        {3.40, -2.75, -2.00,  //
                         -2.75, 5.50, 1.50,   //
                         -2.00, 1.50, 1.25}},
        CovarianceBlock{3,
                        {1.0, 0.5, 0.3,  //
                         0.5, 0.5, 0.3,  //
                         0.3, 0.3, 0.3}},
        CovarianceBlock{3,
                        {2.1115161652603023, -2.3931299385969016, -1.5930080466077343,  //
                         -2.3931299385969016, 5.678992757921755, -0.7958679640897146,   //
                         -1.5930080466077343, -0.7958679640897146, 3.482802089697364}},
    };
}

/// Block-diagonal truth: channels in the same block are all mutually linked.
std::vector<uint8_t> block_truth_adjacency(const std::vector<CovarianceBlock>& blocks) {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.dim;
    std::vector<uint8_t> a(n * n, 0);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.dim; ++i)
            for (std::size_t k = 0; k < b.dim; ++k)
                if (i != k) a[(offset + i) * n + (offset + k)] = 1;
        offset += b.dim;
    }
    return a;
}

json blocks_to_json(const std::vector<CovarianceBlock>& blocks) {
    json out = json::array();
    for (const auto& b : blocks) {
        json m = json::array();
        for (std::size_t i = 0; i < b.dim; ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < b.dim; ++k) row.push_back(b.values[i * b.dim + k]);
            m.push_back(row);
        }
        out.push_back(m);
    }
    return out;
}

MapKind map_kind_from_name(const std::string& name) {
    if (name == "circle") return MapKind::circle;
    if (name == "logistic") return MapKind::logistic;
    throw Error("unknown map kind '" + name + "' (expected circle or logistic)");
}

const char* map_kind_name(MapKind map) {
    return map == MapKind::circle ? "circle" : "logistic";
}

}  // namespace

json generate_options_to_json(const GenerateOptions& o) {
    return json{{"kind", o.kind},
                {"output", o.output},
                {"seed", o.seed},
                {"length", o.length},
                {"transient", o.transient},
                {"alpha", o.alpha},
                {"nodes", o.nodes},
                {"adjacency_file", o.adjacency_file},
                {"map_kind", o.map_kind},
                {"map_r", o.map_r},
                {"map_k", o.map_k}};
}

GenerateOptions generate_options_from_json(const json& j) {
    GenerateOptions o;
    o.kind = j.value("kind", std::string());
    o.output = j.value("output", std::string());
    o.seed = j.value("seed", uint64_t{1});
    o.length = j.value("length", std::size_t{0});
    o.transient = j.value("transient", std::size_t{1000});
    o.alpha = j.value("alpha", -1.0);
    o.nodes = j.value("nodes", std::size_t{0});
    o.adjacency_file = j.value("adjacency_file", std::string());
    o.map_kind = j.value("map_kind", std::string());
    o.map_r = j.value("map_r", 0.0);
    o.map_k = j.value("map_k", 6.9115);
    return o;
}

json infer_options_to_json(const InferOptions& o) {
    return json{{"input", o.input},
                {"output_prefix", o.output_prefix},
                {"has_header", o.has_header},
                {"log_returns", o.use_log_returns},
                {"reference", o.reference},
                {"ref_seed", o.ref_seed},
                {"gap", o.gap},
                {"grid_cap", o.grid_cap},
                {"horizon", o.horizon},
                {"threads", o.threads}};
}

InferOptions infer_options_from_json(const json& j) {
    InferOptions o;
    o.input = j.value("input", std::string());
    o.output_prefix = j.value("output_prefix", std::string());
    o.has_header = j.value("has_header", true);
    o.use_log_returns = j.value("log_returns", false);
    o.reference = j.value("reference", std::string("none"));
    o.ref_seed = j.value("ref_seed", uint64_t{101});
    o.gap = j.value("gap", 0.1);
    o.grid_cap = j.value("grid_cap", 0);
    o.horizon = j.value("horizon", 1);
    o.threads = j.value("threads", 0);
    return o;
}

json metrics_options_to_json(const MetricsOptions& o) {
    return json{{"network", o.network},
                {"output", o.output},
                {"ensemble", o.ensemble},
                {"seed", o.seed}};
}

MetricsOptions metrics_options_from_json(const json& j) {
    MetricsOptions o;
    o.network = j.value("network", std::string());
    o.output = j.value("output", std::string());
    o.ensemble = j.value("ensemble", std::size_t{20});
    o.seed = j.value("seed", uint64_t{1});
    return o;
}

int cmd_generate(const GenerateOptions& options) {
    static const std::set<std::string> kinds = {"cmn",       "logistic",     "triplets",
                                                "gaussians", "uniform-pair", "directed-pair"};
    if (options.output.empty()) return usage_error("generate needs an --output CSV path");
    if (kinds.find(options.kind) == kinds.end())
        return usage_error("unknown dataset kind '" + options.kind +
                           "' (expected cmn, logistic, triplets, gaussians, uniform-pair, or "
                           "directed-pair)");

    const bool is_map_kind =
        options.kind == "cmn" || options.kind == "logistic" || options.kind == "triplets";
    if (!is_map_kind) {
        if (!options.adjacency_file.empty())
            return usage_error("--adjacency only applies to map-network kinds");
        if (!options.map_kind.empty() || options.map_r != 0.0)
            return usage_error("--map and --map-r only apply to map-network kinds");
        if (options.kind == "gaussians" || options.kind == "uniform-pair") {
            if (options.alpha >= 0.0)
                return usage_error("--alpha does not apply to kind " + options.kind);
        }
        if (options.nodes != 0)
            return usage_error("--nodes does not apply to kind " + options.kind +
                               " (its channel count is fixed)");
    }
    if (options.kind == "triplets" && !options.adjacency_file.empty())
        return usage_error("the triplets preset fixes its wiring; --adjacency does not apply");
    if (options.kind == "triplets" && options.nodes != 0 && options.nodes != 6)
        return usage_error("the triplets preset has exactly 6 nodes");

    RunManifest manifest;
    manifest.command = "generate";
    manifest.params = generate_options_to_json(options);
    manifest.started_at = iso_utc_now();

    const std::size_t length = options.length != 0 ? options.length : 100000;
    const std::string base = dataset_base(options.output);
    const std::string meta_path = base + ".meta.json";
    const std::string manifest_path = base + ".manifest.json";

    Warnings warnings;
    SeriesMatrix data;
    DatasetMeta meta;
    meta.kind = options.kind;
    meta.seed = options.seed;

    if (is_map_kind) {
        CouplingSpec spec;
        spec.length = length;
        spec.transient = options.transient;
        spec.seed = options.seed;
        spec.map_k = options.map_k;
        if (options.map_r != 0.0) spec.map_r = options.map_r;

        if (options.kind == "cmn") {
            spec.nodes = options.nodes != 0 ? options.nodes : 16;
            spec.alpha = options.alpha >= 0.0 ? options.alpha : 0.03;
            spec.map = MapKind::circle;
            spec.adjacency = ring_with_chords_adjacency(spec.nodes);
        } else if (options.kind == "logistic") {
            spec.nodes = options.nodes != 0 ? options.nodes : 6;
            spec.alpha = options.alpha >= 0.0 ? options.alpha : 0.0;
            spec.map = MapKind::logistic;
            spec.adjacency.assign(spec.nodes * spec.nodes, 0);
        } else {  // triplets
            spec.nodes = 6;
            spec.alpha = options.alpha >= 0.0 ? options.alpha : 0.1;
            spec.map = MapKind::logistic;
            spec.adjacency = chain_triplets_adjacency();
        }
        if (!options.adjacency_file.empty()) {
            std::size_t n = 0;
            spec.adjacency = load_adjacency_file(options.adjacency_file, &n);
            spec.nodes = n;
            manifest.inputs.push_back(
                {options.adjacency_file, sha256_file(options.adjacency_file)});
        }
        if (!options.map_kind.empty()) spec.map = map_kind_from_name(options.map_kind);

        data = gen_coupled_map_network(spec, &warnings);

        meta.truth_nodes = spec.nodes;
        meta.truth_adjacency = symmetrised(spec.adjacency, spec.nodes);
        meta.params = json{{"nodes", spec.nodes},
                           {"alpha", spec.alpha},
                           {"map", map_kind_name(spec.map)},
                           {"map_r", spec.map_r ? *spec.map_r
                                                : (spec.map == MapKind::circle ? 0.35 : 4.0)},
                           {"map_k", spec.map_k},
                           {"length", spec.length},
                           {"transient", spec.transient},
                           {"adjacency", adjacency_to_json(spec.adjacency, spec.nodes)}};
    } else if (options.kind == "gaussians") {
        GaussianBlockSpec spec;
        spec.blocks = builtin_gaussian_blocks();
        spec.length = length;
        spec.seed = options.seed;
        data = gen_correlated_gaussians(spec);

        std::size_t n = 0;
        for (const auto& b : spec.blocks) n += b.dim;
        meta.truth_nodes = n;
        meta.truth_adjacency = block_truth_adjacency(spec.blocks);
        meta.params = json{{"length", spec.length}, {"blocks", blocks_to_json(spec.blocks)}};
    } else if (options.kind == "uniform-pair") {
        data = gen_uniform_pair(length, options.seed);
        meta.truth_nodes = 2;
        meta.truth_adjacency = std::vector<uint8_t>{0, 0, 0, 0};
        meta.params = json{{"length", length}};
    } else {  // directed-pair
        const double alpha = options.alpha >= 0.0 ? options.alpha : 0.1;
        data = gen_directed_logistic_pair(length, options.transient, alpha, options.seed);
        meta.truth_nodes = 2;
        meta.truth_adjacency = std::vector<uint8_t>{0, 1, 1, 0};
        meta.params =
            json{{"length", length}, {"transient", options.transient}, {"alpha", alpha}};
    }

    meta.labels = data.labels;

    save_csv(options.output, data);
    write_text_atomic(meta_path, to_json_text(meta_to_json(meta)));

    manifest.outputs = {options.output, meta_path};
    manifest.finished_at = iso_utc_now();
    save_manifest(manifest_path, manifest);

    print_warnings(warnings);
    const std::size_t edges =
        meta.truth_adjacency ? count_edges(*meta.truth_adjacency, meta.truth_nodes) : 0;
    std::cout << "wrote " << options.output << ": " << data.cols << " channels x " << data.rows
              << " rows (kind " << options.kind << ", seed " << options.seed << ")\n";
    std::cout << "ground truth: " << edges << " edge" << (edges == 1 ? "" : "s") << ", recorded in "
              << meta_path << "\n";
    return 0;
}

int cmd_infer(const InferOptions& options) {
    if (options.input.empty()) return usage_error("infer needs an input CSV");
    if (options.output_prefix.empty()) return usage_error("infer needs an --output prefix");
    if (options.reference != "none" && options.reference != "uniform" &&
        options.reference != "directed")
        return usage_error("unknown reference kind '" + options.reference +
                           "' (expected none, uniform, or directed)");
    if (options.horizon < 1) return usage_error("--horizon must be at least 1");
    if (!(options.gap > 0.0)) return usage_error("--gap must be positive");
    if (options.grid_cap < 0) return usage_error("--grid-cap must be 0 or a grid size");
    if (options.threads < 0) return usage_error("--threads must be 0 or a thread count");

    RunManifest manifest;
    manifest.command = "infer";
    manifest.params = infer_options_to_json(options);
    manifest.started_at = iso_utc_now();
    manifest.inputs.push_back({options.input, sha256_file(options.input)});

    Warnings warnings;
    SeriesMatrix data = load_csv(options.input, options.has_header);
    for (std::size_t c = 0; c < data.cols; ++c)
        if (data.labels[c] == "_ref1" || data.labels[c] == "_ref2") data.is_reference[c] = 1;

    if (options.use_log_returns) data = log_returns(data);

    if (options.reference == "uniform") {
        data = attach_reference_pair(data, gen_uniform_pair(data.rows, options.ref_seed),
                                     &warnings);
    } else if (options.reference == "directed") {
        data = attach_reference_pair(
            data, gen_directed_logistic_pair(data.rows, 1000, 0.1, options.ref_seed), &warnings);
    }

    const std::size_t n_refs = data.reference_channels().size();
    if (n_refs != 0 && n_refs != 2)
        throw Error("expected exactly 2 reference channels, found " + std::to_string(n_refs));
    const ThresholdMethod method =
        n_refs == 2 ? ThresholdMethod::reference : ThresholdMethod::jump;

    SweepOptions sweep_options;
    sweep_options.horizon = options.horizon;
    sweep_options.grid_cap = options.grid_cap;
    sweep_options.threads = options.threads;
    SweepResult sweep = sweep_all_pairs(data, sweep_options);

    NetworkResult network = infer_network(sweep, method, options.gap);

    const std::string mir_path = options.output_prefix + ".mir.json";
    const std::string pairs_path = options.output_prefix + ".pairs.tsv";
    const std::string network_path = options.output_prefix + ".network.json";
    write_text_atomic(mir_path, to_json_text(sweep_to_json(sweep)));
    write_text_atomic(pairs_path, ordered_pairs_tsv(sweep));
    write_text_atomic(network_path, to_json_text(network_to_json(network)));

    manifest.outputs = {mir_path, pairs_path, network_path};
    manifest.finished_at = iso_utc_now();
    save_manifest(options.output_prefix + ".manifest.json", manifest);

    print_warnings(warnings);
    print_warnings(sweep.warnings);
    std::cout << "channels: " << network.labels.size() << " data";
    if (n_refs != 0) std::cout << " + " << n_refs << " reference";
    std::cout << ", rows: " << data.rows << "\n";
    std::cout << "grids: " << sweep.grid_sizes.front() << ".." << sweep.grid_sizes.back() << " ("
              << sweep.grid_sizes.size() << " sizes), horizon: " << sweep.horizon << "\n";
    std::cout << "threshold: " << format_double(network.tau) << " ("
              << threshold_method_name(network.method) << " method, " << network.evidence
              << ")\n";
    std::cout << "edges: " << network.edges.size() << "\n";
    for (const auto& e : network.edges)
        std::cout << "  " << network.labels[e.first] << " -- " << network.labels[e.second] << "\n";
    std::cout << "wrote " << mir_path << ", " << pairs_path << ", " << network_path << "\n";
    return 0;
}

int cmd_metrics(const MetricsOptions& options) {
    if (options.network.empty()) return usage_error("metrics needs a network JSON file");

    RunManifest manifest;
    manifest.command = "metrics";
    manifest.params = metrics_options_to_json(options);
    manifest.started_at = iso_utc_now();
    manifest.inputs.push_back({options.network, sha256_file(options.network)});

    NetworkResult network = network_from_json(json::parse(read_text(options.network)));
    Graph g = Graph::from_adjacency(network.adjacency, network.labels.size());

    BasicStats stats = basic_stats(g);
    ClusteringPath cp = clustering_and_path(g);
    SmallWorldResult sw = small_world_sigma(g, options.ensemble, options.seed);
    AssortativityResult assort = assortativity(g);
    PartitionResult partition = modularity_partition(g);

    std::string output = options.output;
    if (output.empty())
        output = ends_with(options.network, ".network.json")
                     ? strip_suffix(options.network, ".network.json") + ".metrics.json"
                     : options.network + ".metrics.json";

    write_text_atomic(output, to_json_text(metrics_to_json(stats, cp, sw, assort, partition,
                                                           network.labels)));
    manifest.outputs = {output};
    manifest.finished_at = iso_utc_now();
    save_manifest(strip_suffix(output, ".json") + ".manifest.json", manifest);

    std::cout << "nodes: " << stats.nodes << ", edges: " << stats.edges
              << ", density: " << two_decimals(stats.density) << "\n";
    std::cout << "components: " << stats.n_components
              << " (largest: " << cp.largest_component << ")\n";
    std::cout << "clustering: " << format_double(cp.clustering)
              << ", path length: " << format_double(cp.path_length) << "\n";
    if (sw.defined)
        std::cout << "small-world sigma: " << format_double(sw.sigma) << "\n";
    else
        std::cout << "small-world sigma: undefined (" << sw.reason << ")\n";
    if (assort.defined)
        std::cout << "assortativity: " << format_double(assort.r) << "\n";
    else
        std::cout << "assortativity: undefined (" << assort.reason << ")\n";
    std::cout << "modularity: " << format_double(partition.q) << " over "
              << partition.communities.size() << " communities\n";
    std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_compare(const CompareOptions& options) {
    if (options.inferred.empty() || options.truth.empty())
        return usage_error("compare needs an inferred network and a truth file");

    NetworkResult inferred = network_from_json(json::parse(read_text(options.inferred)));

    json truth_json = json::parse(read_text(options.truth));
    std::vector<std::string> truth_labels;
    std::vector<uint8_t> truth_adjacency;
    if (truth_json.contains("truth_adjacency") || truth_json.contains("kind")) {
        DatasetMeta meta = meta_from_json(truth_json);
        if (!meta.truth_adjacency) {
            std::cerr << "error: " << options.truth << " carries no ground-truth wiring\n";
            return 2;
        }
        truth_labels = meta.labels;
        truth_adjacency = *meta.truth_adjacency;
    } else if (truth_json.contains("adjacency")) {
        NetworkResult other = network_from_json(truth_json);
        truth_labels = other.labels;
        truth_adjacency = other.adjacency;
    } else {
        std::cerr << "error: " << options.truth
                  << " is neither a dataset metadata file nor a network file\n";
        return 2;
    }

    if (truth_labels != inferred.labels) {
        std::cerr << "error: channel labels differ, networks are not comparable\n";
        std::cerr << "  inferred:";
        for (const auto& l : inferred.labels) std::cerr << " " << l;
        std::cerr << "\n  truth:   ";
        for (const auto& l : truth_labels) std::cerr << " " << l;
        std::cerr << "\n";
        return 2;
    }

    const std::size_t n = truth_labels.size();
    AccuracyReport report = inference_accuracy(truth_adjacency, inferred.adjacency, n);
    const std::size_t total = n * (n - 1) / 2;
    const std::size_t wrong = report.missed.size() + report.spurious.size();
    std::cout << "agreement: " << two_decimals(report.percent) << "% (" << (total - wrong)
              << " of " << total << " pairs)\n";
    for (const auto& p : report.missed)
        std::cout << "missed:   " << truth_labels[p.first] << " -- " << truth_labels[p.second]
                  << "\n";
    for (const auto& p : report.spurious)
        std::cout << "spurious: " << truth_labels[p.first] << " -- " << truth_labels[p.second]
                  << "\n";
    return wrong == 0 ? 0 : 1;
}

int cmd_rerun(const RerunOptions& options) {
    if (options.manifest.empty()) return usage_error("rerun needs a manifest file");

    RunManifest manifest = load_manifest(options.manifest);
    for (const auto& input : manifest.inputs) {
        const std::string now = sha256_file(input.path);
        if (now != input.sha256)
            throw Error("input " + input.path + " changed since the run was recorded (expected " +
                        input.sha256 + ", found " + now + ")");
    }

    if (manifest.command == "generate") {
        GenerateOptions o = generate_options_from_json(manifest.params);
        if (!options.output.empty()) o.output = options.output;
        return cmd_generate(o);
    }
    if (manifest.command == "infer") {
        InferOptions o = infer_options_from_json(manifest.params);
        if (!options.output.empty()) o.output_prefix = options.output;
        return cmd_infer(o);
    }
    if (manifest.command == "metrics") {
        MetricsOptions o = metrics_options_from_json(manifest.params);
        if (!options.output.empty()) o.output = options.output;
        return cmd_metrics(o);
    }
    throw Error("manifest records a command this tool cannot rerun: '" + manifest.command + "'");
}

}  // namespace mirnet
