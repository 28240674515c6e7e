#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mirnet/error.hpp"

namespace mirnet {

/// Simple undirected graph backed by a dense adjacency matrix; the node
/// counts this library meets are small (channels of a multivariate series).
struct Graph {
    std::size_t n = 0;
    std::vector<uint8_t> adj;  ///< row-major n*n, symmetric, zero diagonal

    /// Validates symmetry, zero diagonal, and 0/1 entries.
    static Graph from_adjacency(std::vector<uint8_t> a, std::size_t n);
    static Graph from_edges(std::size_t n,
                            const std::vector<std::pair<std::size_t, std::size_t>>& edges);

    bool has_edge(std::size_t i, std::size_t j) const { return adj[i * n + j] != 0; }
    void set_edge(std::size_t i, std::size_t j, bool present);
    std::size_t degree(std::size_t i) const;
    std::size_t edge_count() const;
    std::vector<std::pair<std::size_t, std::size_t>> edge_list() const;  ///< i < j, sorted
};

struct BasicStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::vector<std::size_t> degrees;
    double density = 0.0;  ///< edges / (n choose 2)
    std::size_t n_components = 0;
    std::vector<std::size_t> component_sizes;  ///< descending
};

BasicStats basic_stats(const Graph& g);

struct ClusteringPath {
    double clustering = 0.0;   ///< mean local clustering; degree < 2 counts as 0
    double path_length = 0.0;  ///< mean shortest path over the largest component
    std::size_t largest_component = 0;
};

ClusteringPath clustering_and_path(const Graph& g);

/// Small-world coefficient (C/C_rand)/(L/L_rand) against a degree-preserving
/// randomised ensemble. Undefined (with a reason) when the ensemble cannot
/// be formed or its clustering averages to zero.
struct SmallWorldResult {
    double sigma = 0.0;
    double clustering = 0.0;
    double path_length = 0.0;
    double random_clustering = 0.0;
    double random_path = 0.0;
    bool defined = false;
    std::string reason;  ///< set when !defined
};

SmallWorldResult small_world_sigma(const Graph& g, std::size_t ensemble = 20, uint64_t seed = 1);

/// One degree-preserving randomisation of `g` (repeated double-edge swaps).
/// Graphs with no legal swap (e.g. complete graphs) come back unchanged.
Graph rewire_preserving_degrees(const Graph& g, uint64_t seed);

/// Pearson correlation of the degrees at the two ends of every edge
/// (each edge counted in both orientations). Undefined when the degree
/// variance over edge ends is zero.
struct AssortativityResult {
    double r = 0.0;
    bool defined = false;
    std::string reason;
};

AssortativityResult assortativity(const Graph& g);

/// Modularity of a node-to-community assignment:
/// Q = sum_c [ intra_c / E - (deg_c / 2E)^2 ]. Errors on an edgeless graph.
double modularity(const Graph& g, const std::vector<std::size_t>& community);

/// Community structure found by greedy agglomeration: start from singletons
/// and repeatedly merge the connected community pair with the largest
/// positive modularity gain (ties broken toward the lowest community
/// labels). The edgeless graph yields singletons with q = 0.
struct PartitionResult {
    std::vector<std::size_t> community;                  ///< node -> community id
    std::vector<std::vector<std::size_t>> communities;   ///< sorted by smallest member
    double q = 0.0;
};

PartitionResult modularity_partition(const Graph& g);

/// Best modularity over every partition, by exhaustive enumeration.
/// Exponential: guarded to n <= 12. Exists to validate the greedy search.
double max_modularity_exhaustive(const Graph& g);

}  // namespace mirnet
