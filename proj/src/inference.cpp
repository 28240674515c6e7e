#include "mirnet/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mirnet {

std::vector<RankedPair> order_pairs(const SweepResult& sweep) {
    std::vector<RankedPair> ranked;
    ranked.reserve(sweep.pairs.size());
    for (std::size_t p = 0; p < sweep.pairs.size(); ++p)
        ranked.push_back({sweep.pairs[p].a, sweep.pairs[p].b, sweep.bar[p]});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedPair& x, const RankedPair& y) { return x.value < y.value; });
    return ranked;
}

JumpThreshold jump_threshold(const std::vector<RankedPair>& ranked, double min_gap) {
    if (ranked.size() < 2)
        throw Error("no abrupt change can be found among " + std::to_string(ranked.size()) +
                    " pair(s); use the reference method");
    if (!(min_gap > 0.0)) throw Error("minimum gap must be positive");
    for (std::size_t i = 0; i + 1 < ranked.size(); ++i) {
        const double gap = ranked[i + 1].value - ranked[i].value;
        if (gap > min_gap) {
            JumpThreshold out;
            out.tau = 0.5 * (ranked[i].value + ranked[i + 1].value);
            out.below_index = i;
            out.gap = gap;
            return out;
        }
    }
    throw Error("no abrupt change in the ordered pair weights (no gap above " +
                std::to_string(min_gap) + "); use the reference method");
}

double reference_threshold(const SweepResult& sweep) {
    std::vector<std::size_t> refs;
    for (std::size_t c = 0; c < sweep.is_reference.size(); ++c)
        if (sweep.is_reference[c]) refs.push_back(c);
    if (refs.size() != 2)
        throw Error("reference threshold needs exactly 2 reference channels, found " +
                    std::to_string(refs.size()));
    return sweep.bar_at(refs[0], refs[1]);
}

std::vector<uint8_t> reconstruct_adjacency(const SweepResult& sweep, double tau,
                                           bool strictly_above) {
    const std::size_t m = sweep.n_channels();
    std::vector<uint8_t> adj(m * m, 0);
    for (std::size_t p = 0; p < sweep.pairs.size(); ++p) {
        const double v = sweep.bar[p];
        const bool edge = strictly_above ? v > tau : v >= tau;
        if (edge) {
            adj[sweep.pairs[p].a * m + sweep.pairs[p].b] = 1;
            adj[sweep.pairs[p].b * m + sweep.pairs[p].a] = 1;
        }
    }
    return adj;
}

AccuracyReport inference_accuracy(const std::vector<uint8_t>& truth,
                                  const std::vector<uint8_t>& inferred, std::size_t n) {
    if (truth.size() != n * n || inferred.size() != n * n)
        throw Error("adjacency matrices must both be " + std::to_string(n) + "x" +
                    std::to_string(n));
    if (n < 2) throw Error("accuracy needs at least 2 channels");
    AccuracyReport report;
    std::size_t correct = 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            ++total;
            const bool t = truth[i * n + j] != 0;
            const bool f = inferred[i * n + j] != 0;
            if (t == f)
                ++correct;
            else if (t)
                report.missed.emplace_back(i, j);
            else
                report.spurious.emplace_back(i, j);
        }
    }
    report.percent = 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    return report;
}

namespace {

std::string format_weight(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

NetworkResult infer_network(const SweepResult& sweep, ThresholdMethod method, double min_gap) {
    NetworkResult out;
    out.method = method;

    bool strictly_above = false;
    if (method == ThresholdMethod::jump) {
        const auto ranked = order_pairs(sweep);
        const JumpThreshold jump = jump_threshold(ranked, min_gap);
        out.tau = jump.tau;
        out.evidence = "gap of " + format_weight(jump.gap) + " between weights " +
                       format_weight(ranked[jump.below_index].value) + " and " +
                       format_weight(ranked[jump.below_index + 1].value);
    } else {
        out.tau = reference_threshold(sweep);
        out.evidence = "weight of the reference pair";
        strictly_above = true;
    }

    const std::size_t m = sweep.n_channels();
    const std::vector<uint8_t> full = reconstruct_adjacency(sweep, out.tau, strictly_above);

    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < m; ++c) {
        if (sweep.is_reference[c])
            out.excluded_channels.push_back(sweep.labels[c]);
        else
            keep.push_back(c);
    }
    const std::size_t k = keep.size();
    out.labels.reserve(k);
    for (std::size_t c : keep) out.labels.push_back(sweep.labels[c]);
    out.adjacency.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (full[keep[i] * m + keep[j]]) {
                out.adjacency[i * k + j] = 1;
                out.adjacency[j * k + i] = 1;
                out.edges.emplace_back(i, j);
            }
        }
    }
    return out;
}

const char* threshold_method_name(ThresholdMethod method) {
    return method == ThresholdMethod::jump ? "jump" : "reference";
}

ThresholdMethod threshold_method_from_name(const std::string& name) {
    if (name == "jump") return ThresholdMethod::jump;
    if (name == "reference") return ThresholdMethod::reference;
    throw Error("unknown threshold method '" + name + "' (expected jump or reference)");
}

}  // namespace mirnet
