#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mirnet/error.hpp"
#include "mirnet/estimator.hpp"

namespace mirnet {

/// One channel pair with its final weight.
struct RankedPair {
    std::size_t a = 0, b = 0;  ///< channel indices, a < b
    double value = 0.0;
};

/// Every unordered pair sorted by ascending weight; ties keep the canonical
/// pair order, so the ranking is fully deterministic.
std::vector<RankedPair> order_pairs(const SweepResult& sweep);

/// Threshold found at the first abrupt step of the ascending weights.
struct JumpThreshold {
    double tau = 0.0;
    std::size_t below_index = 0;  ///< last ranked index under the threshold
    double gap = 0.0;             ///< size of the step that was found
};

/// Scans consecutive gaps of the ascending weights and places the threshold
/// at the midpoint of the first gap exceeding `min_gap`. Errors (mentioning
/// the reference method as the fallback) when no such gap exists.
JumpThreshold jump_threshold(const std::vector<RankedPair>& ranked, double min_gap = 0.1);

/// Threshold taken verbatim from the weight of the attached reference pair.
/// Errors unless the sweep carries exactly two reference channels.
double reference_threshold(const SweepResult& sweep);

/// 0/1 adjacency over all sweep channels: edge where the pair weight exceeds
/// `tau` (strictly when `strictly_above`, else >=). Row-major M x M,
/// symmetric, zero diagonal.
std::vector<uint8_t> reconstruct_adjacency(const SweepResult& sweep, double tau,
                                           bool strictly_above);

/// Agreement between an inferred adjacency and the ground truth, as the
/// percentage of all M(M-1)/2 pairs classified identically, plus the
/// mismatches by name.
struct AccuracyReport {
    double percent = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> missed;    ///< in truth, not inferred
    std::vector<std::pair<std::size_t, std::size_t>> spurious;  ///< inferred, not in truth
};

AccuracyReport inference_accuracy(const std::vector<uint8_t>& truth,
                                  const std::vector<uint8_t>& inferred, std::size_t n);

enum class ThresholdMethod { jump, reference };

/// Final inferred network over the data channels. Reference channels inform
/// the threshold but never appear in the result.
struct NetworkResult {
    std::vector<std::string> labels;  ///< surviving channels, original order
    std::vector<uint8_t> adjacency;   ///< row-major over surviving channels
    std::vector<std::pair<std::size_t, std::size_t>> edges;  ///< indices into labels
    double tau = 0.0;
    ThresholdMethod method = ThresholdMethod::jump;
    std::string evidence;  ///< where the threshold came from, human-readable
    std::vector<std::string> excluded_channels;
};

/// Applies one of the two threshold rules to a finished sweep. The jump rule
/// keeps pairs with weight >= tau; the reference rule keeps weights strictly
/// above the reference pair's own weight.
NetworkResult infer_network(const SweepResult& sweep, ThresholdMethod method,
                            double min_gap = 0.1);

const char* threshold_method_name(ThresholdMethod method);
ThresholdMethod threshold_method_from_name(const std::string& name);

}  // namespace mirnet
