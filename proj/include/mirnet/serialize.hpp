#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mirnet/estimator.hpp"
#include "mirnet/graphmetrics.hpp"
#include "mirnet/inference.hpp"
#include "mirnet/series.hpp"

namespace mirnet {

using nlohmann::json;

/// Sidecar metadata written next to generated datasets: what was generated,
/// from which seed, and (when the generator knows it) the ground-truth
/// wiring the inference should recover.
struct DatasetMeta {
    std::string kind;
    uint64_t seed = 0;
    json params;  ///< generator-specific knobs, for the record
    std::vector<std::string> labels;
    std::size_t truth_nodes = 0;
    std::optional<std::vector<uint8_t>> truth_adjacency;  ///< row-major truth_nodes^2
};

json meta_to_json(const DatasetMeta& meta);
DatasetMeta meta_from_json(const json& j);

json sweep_to_json(const SweepResult& sweep);

json network_to_json(const NetworkResult& network);
NetworkResult network_from_json(const json& j);

/// Ordered-pairs table: one "label_a<TAB>label_b<TAB>weight" line per pair,
/// ascending by weight (canonical pair order on ties).
std::string ordered_pairs_tsv(const SweepResult& sweep);

/// Structural-metrics report for one network.
json metrics_to_json(const BasicStats& stats, const ClusteringPath& cp,
                     const SmallWorldResult& sw, const AssortativityResult& assort,
                     const PartitionResult& partition,
                     const std::vector<std::string>& labels);

/// Shortest decimal form of `v` that parses back to the same double.
std::string format_double(double v);

/// Writes `content` to `path` atomically (temp file + rename), so readers
/// never observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

/// json.dump(2) plus a trailing newline; the one serialisation used for
/// every JSON file this tool writes, so byte-identical reruns stay easy to
/// reason about (keys sorted, shortest round-trip doubles).
std::string to_json_text(const json& j);

}  // namespace mirnet
