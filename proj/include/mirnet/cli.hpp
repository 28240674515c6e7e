#pragma once

#include <cstdint>
#include <string>

#include "mirnet/manifest.hpp"

namespace mirnet {

/// `generate` subcommand: synthetic datasets with known ground truth.
/// Built-in kinds (defaults in parentheses):
///   cmn           16 circle maps on a ring with chords (alpha 0.03)
///   logistic      6 uncoupled logistic maps (alpha 0)
///   triplets      6 logistic maps wired as two 3-chains (alpha 0.1)
///   gaussians     9 channels in 3 independent Gaussian blocks
///   uniform-pair  2 channels of uniform noise
///   directed-pair 2 logistic maps with one-way coupling (alpha 0.1)
struct GenerateOptions {
    std::string kind;
    std::string output;  ///< CSV path; .meta.json / .manifest.json sit next to it
    uint64_t seed = 1;
    std::size_t length = 0;     ///< 0 = kind default (100000)
    std::size_t transient = 1000;
    double alpha = -1.0;        ///< negative = kind default
    std::size_t nodes = 0;      ///< 0 = kind default
    std::string adjacency_file; ///< optional JSON 0/1 matrix for map networks
    std::string map_kind;       ///< "", "circle", or "logistic" (map kinds only)
    double map_r = 0.0;         ///< 0 = map default (0.35 circle, 4.0 logistic)
    double map_k = 6.9115;
};

/// `infer` subcommand: CSV in, weighted pair ranking and thresholded
/// network out.
struct InferOptions {
    std::string input;
    std::string output_prefix;  ///< writes <p>.mir.json, <p>.pairs.tsv, <p>.network.json
    bool has_header = true;
    bool use_log_returns = false;
    std::string reference = "none";  ///< none (jump rule) | uniform | directed
    uint64_t ref_seed = 101;
    double gap = 0.1;
    int grid_cap = 0;
    int horizon = 1;
    int threads = 0;
};

/// `metrics` subcommand: structural metrics of an inferred network.
struct MetricsOptions {
    std::string network;  ///< <p>.network.json from `infer`
    std::string output;   ///< report path; "" derives it from the input name
    std::size_t ensemble = 20;
    uint64_t seed = 1;
};

/// `compare` subcommand: inferred network vs ground truth (a dataset's
/// .meta.json, or another network file).
struct CompareOptions {
    std::string inferred;
    std::string truth;
};

/// `rerun` subcommand: repeat a recorded run against fresh output paths.
struct RerunOptions {
    std::string manifest;
    std::string output;  ///< replaces the original output path/prefix; "" keeps it
};

// Exit codes: 0 success (compare: networks identical), 1 failure (compare:
// mismatch), 2 usage error or incomparable inputs.
int cmd_generate(const GenerateOptions& options);
int cmd_infer(const InferOptions& options);
int cmd_metrics(const MetricsOptions& options);
int cmd_compare(const CompareOptions& options);
int cmd_rerun(const RerunOptions& options);

json generate_options_to_json(const GenerateOptions& options);
GenerateOptions generate_options_from_json(const json& j);
json infer_options_to_json(const InferOptions& options);
InferOptions infer_options_from_json(const json& j);
json metrics_options_to_json(const MetricsOptions& options);
MetricsOptions metrics_options_from_json(const json& j);

}  // namespace mirnet
