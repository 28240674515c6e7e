#include "mirnet/graphmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "mirnet/kahan.hpp"
#include "mirnet/rng.hpp"

namespace mirnet {

Graph Graph::from_adjacency(std::vector<uint8_t> a, std::size_t n) {
    if (a.size() != n * n)
        throw Error("adjacency has " + std::to_string(a.size()) + " entries, expected " +
                    std::to_string(n * n));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i * n + i] != 0)
            throw Error("adjacency diagonal must be zero (node " + std::to_string(i) + ")");
        for (std::size_t j = 0; j < n; ++j) {
            if (a[i * n + j] != 0 && a[i * n + j] != 1)
                throw Error("adjacency entries must be 0 or 1");
            if (a[i * n + j] != a[j * n + i])
                throw Error("adjacency must be symmetric (differs at " + std::to_string(i) + "," +
                            std::to_string(j) + ")");
        }
    }
    Graph g;
    g.n = n;
    g.adj = std::move(a);
    return g;
}

Graph Graph::from_edges(std::size_t n,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Graph g;
    g.n = n;
    g.adj.assign(n * n, 0);
    for (const auto& [i, j] : edges) {
        if (i >= n || j >= n || i == j)
            throw Error("invalid edge " + std::to_string(i) + "-" + std::to_string(j));
        g.adj[i * n + j] = 1;
        g.adj[j * n + i] = 1;
    }
    return g;
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
    adj[i * n + j] = present ? 1 : 0;
    adj[j * n + i] = present ? 1 : 0;
}

std::size_t Graph::degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n; ++j) d += adj[i * n + j];
    return d;
}

std::size_t Graph::edge_count() const {
    std::size_t twice = 0;
    for (uint8_t v : adj) twice += v;
    return twice / 2;
}

std::vector<std::pair<std::size_t, std::size_t>> Graph::edge_list() const {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (adj[i * n + j]) edges.emplace_back(i, j);
    return edges;
}

namespace {

/// Connected components by BFS in node order; returns node -> component id,
/// ids assigned in order of discovery.
std::vector<std::size_t> components(const Graph& g, std::size_t& count) {
    std::vector<std::size_t> comp(g.n, SIZE_MAX);
    count = 0;
    std::queue<std::size_t> queue;
    for (std::size_t start = 0; start < g.n; ++start) {
        if (comp[start] != SIZE_MAX) continue;
        comp[start] = count;
        queue.push(start);
        while (!queue.empty()) {
            std::size_t u = queue.front();
            queue.pop();
            for (std::size_t v = 0; v < g.n; ++v) {
                if (g.adj[u * g.n + v] && comp[v] == SIZE_MAX) {
                    comp[v] = count;
                    queue.push(v);
                }
            }
        }
        ++count;
    }
    return comp;
}

}  // namespace

BasicStats basic_stats(const Graph& g) {
    BasicStats s;
    s.nodes = g.n;
    s.edges = g.edge_count();
    s.degrees.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) s.degrees[i] = g.degree(i);
    s.density = g.n < 2 ? 0.0
                        : static_cast<double>(s.edges) /
                              (static_cast<double>(g.n) * (g.n - 1) / 2.0);
    if (g.n == 0) return s;
    std::size_t count = 0;
    auto comp = components(g, count);
    s.n_components = count;
    s.component_sizes.assign(count, 0);
    for (std::size_t c : comp) ++s.component_sizes[c];
    std::sort(s.component_sizes.rbegin(), s.component_sizes.rend());
    return s;
}

ClusteringPath clustering_and_path(const Graph& g) {
    ClusteringPath out;
    if (g.n == 0) return out;

    KahanSum c_acc;
    for (std::size_t i = 0; i < g.n; ++i) {
        const std::size_t d = g.degree(i);
        if (d < 2) continue;  // contributes 0 to the mean
        std::size_t links = 0;
        for (std::size_t a = 0; a < g.n; ++a) {
            if (!g.adj[i * g.n + a]) continue;
            for (std::size_t b = a + 1; b < g.n; ++b)
                if (g.adj[i * g.n + b] && g.adj[a * g.n + b]) ++links;
        }
        c_acc.add(2.0 * static_cast<double>(links) / (static_cast<double>(d) * (d - 1)));
    }
    out.clustering = c_acc.value() / static_cast<double>(g.n);

    // Mean shortest path over the largest component (first such component in
    // node order when sizes tie). Single-node components have no pairs; 0.
    std::size_t count = 0;
    auto comp = components(g, count);
    std::vector<std::size_t> sizes(count, 0);
    for (std::size_t c : comp) ++sizes[c];
    std::size_t best = 0;
    for (std::size_t c = 1; c < count; ++c)
        if (sizes[c] > sizes[best]) best = c;
    out.largest_component = sizes.empty() ? 0 : sizes[best];

    if (out.largest_component >= 2) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < g.n; ++i)
            if (comp[i] == best) members.push_back(i);
        KahanSum l_acc;
        std::vector<int> dist(g.n);
        std::queue<std::size_t> queue;
        for (std::size_t src : members) {
            std::fill(dist.begin(), dist.end(), -1);
            dist[src] = 0;
            queue.push(src);
            while (!queue.empty()) {
                std::size_t u = queue.front();
                queue.pop();
                for (std::size_t v = 0; v < g.n; ++v) {
                    if (g.adj[u * g.n + v] && dist[v] < 0) {
                        dist[v] = dist[u] + 1;
                        queue.push(v);
                    }
                }
            }
            for (std::size_t dst : members)
                if (dst > src) l_acc.add(static_cast<double>(dist[dst]));
        }
        const double n_pairs =
            static_cast<double>(out.largest_component) * (out.largest_component - 1) / 2.0;
        out.path_length = l_acc.value() / n_pairs;
    }
    return out;
}

Graph rewire_preserving_degrees(const Graph& g, uint64_t seed) {
    Graph out = g;
    auto edges = out.edge_list();
    const std::size_t m = edges.size();
    if (m < 2) return out;

    Rng rng(seed);
    // Maslov-Sneppen double-edge swaps: aim for 4 successful swaps per edge,
    // giving up after 100 attempts per edge (complete graphs allow none).
    const std::size_t target = 4 * m;
    const std::size_t max_attempts = 100 * m;
    std::size_t done = 0;
    for (std::size_t attempt = 0; attempt < max_attempts && done < target; ++attempt) {
        const std::size_t e1 = rng.below(m);
        const std::size_t e2 = rng.below(m);
        if (e1 == e2) continue;
        auto [a, b] = edges[e1];
        auto [c, d] = edges[e2];
        if (rng.next_u64() & 1) std::swap(c, d);
        // Proposed: a-d and c-b replace a-b and c-d.
        if (a == d || c == b) continue;
        if (out.has_edge(a, d) || out.has_edge(c, b)) continue;
        out.set_edge(a, b, false);
        out.set_edge(c, d, false);
        out.set_edge(a, d, true);
        out.set_edge(c, b, true);
        edges[e1] = {std::min(a, d), std::max(a, d)};
        edges[e2] = {std::min(c, b), std::max(c, b)};
        ++done;
    }
    return out;
}

SmallWorldResult small_world_sigma(const Graph& g, std::size_t ensemble, uint64_t seed) {
    SmallWorldResult out;
    const ClusteringPath cp = clustering_and_path(g);
    out.clustering = cp.clustering;
    out.path_length = cp.path_length;

    if (g.edge_count() == 0) {
        out.reason = "graph has no edges";
        return out;
    }
    if (ensemble == 0) {
        out.reason = "ensemble size is zero";
        return out;
    }

    KahanSum c_acc, l_acc;
    for (std::size_t s = 0; s < ensemble; ++s) {
        const Graph sample = rewire_preserving_degrees(g, derive_seed(seed, s));
        const ClusteringPath scp = clustering_and_path(sample);
        c_acc.add(scp.clustering);
        l_acc.add(scp.path_length);
    }
    out.random_clustering = c_acc.value() / static_cast<double>(ensemble);
    out.random_path = l_acc.value() / static_cast<double>(ensemble);

    if (out.random_clustering == 0.0) {
        out.reason = "randomised ensemble has zero clustering";
        return out;
    }
    if (out.path_length == 0.0 || out.random_path == 0.0) {
        out.reason = "path length undefined (largest component has no pairs)";
        return out;
    }
    out.sigma = (out.clustering / out.random_clustering) / (out.path_length / out.random_path);
    out.defined = true;
    return out;
}

AssortativityResult assortativity(const Graph& g) {
    AssortativityResult out;
    const auto edges = g.edge_list();
    if (edges.empty()) {
        out.reason = "graph has no edges";
        return out;
    }
    std::vector<std::size_t> deg(g.n);
    for (std::size_t i = 0; i < g.n; ++i) deg[i] = g.degree(i);

    // Pearson correlation over the 2E ordered edge ends.
    KahanSum sx, sxx, sxy;
    for (const auto& [i, j] : edges) {
        const double di = static_cast<double>(deg[i]);
        const double dj = static_cast<double>(deg[j]);
        sx.add(di);
        sx.add(dj);
        sxx.add(di * di);
        sxx.add(dj * dj);
        sxy.add(di * dj);
        sxy.add(dj * di);
    }
    const double m = 2.0 * static_cast<double>(edges.size());
    const double mean = sx.value() / m;
    const double var = sxx.value() / m - mean * mean;
    if (var <= 0.0) {
        out.reason = "degree variance over edge ends is zero";
        return out;
    }
    out.r = (sxy.value() / m - mean * mean) / var;
    out.defined = true;
    return out;
}

double modularity(const Graph& g, const std::vector<std::size_t>& community) {
    if (community.size() != g.n)
        throw Error("community assignment covers " + std::to_string(community.size()) +
                    " nodes, expected " + std::to_string(g.n));
    const double e = static_cast<double>(g.edge_count());
    if (e == 0.0) throw Error("modularity is undefined for a graph with no edges");

    std::size_t n_comm = 0;
    for (std::size_t c : community) n_comm = std::max(n_comm, c + 1);
    std::vector<double> intra(n_comm, 0.0), deg(n_comm, 0.0);
    for (std::size_t i = 0; i < g.n; ++i) {
        deg[community[i]] += static_cast<double>(g.degree(i));
        for (std::size_t j = i + 1; j < g.n; ++j)
            if (g.adj[i * g.n + j] && community[i] == community[j]) intra[community[i]] += 1.0;
    }
    KahanSum q;
    for (std::size_t c = 0; c < n_comm; ++c) {
        const double frac = deg[c] / (2.0 * e);
        q.add(intra[c] / e - frac * frac);
    }
    return q.value();
}

PartitionResult modularity_partition(const Graph& g) {
    PartitionResult out;
    out.community.resize(g.n);
    for (std::size_t i = 0; i < g.n; ++i) out.community[i] = i;

    const double e = static_cast<double>(g.edge_count());
    if (e == 0.0) {
        // No edges: modularity cannot be evaluated; keep singletons.
        out.communities.resize(g.n);
        for (std::size_t i = 0; i < g.n; ++i) out.communities[i] = {i};
        out.q = 0.0;
        return out;
    }

    // Greedy agglomeration on the community graph. Communities are labelled
    // by their smallest member so tie-breaking is stable under relabelling.
    // State per live community: total degree, internal edges, and the edge
    // counts toward other live communities.
    const std::size_t n = g.n;
    std::vector<bool> alive(n, true);
    std::vector<double> deg(n, 0.0), intra(n, 0.0);
    std::vector<std::vector<double>> between(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) deg[i] = static_cast<double>(g.degree(i));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.adj[i * n + j]) {
                between[i][j] += 1.0;
                between[j][i] += 1.0;
            }

    std::vector<std::size_t> assign(n);
    for (std::size_t i = 0; i < n; ++i) assign[i] = i;

    for (;;) {
        // Scanning pairs in ascending (i, j) order and replacing only on a
        // strictly larger gain makes ties resolve toward the lowest labels.
        double best_gain = 0.0;
        std::size_t best_i = n, best_j = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j] || between[i][j] == 0.0) continue;
                const double gain = between[i][j] / e - deg[i] * deg[j] / (2.0 * e * e);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_i >= n || !(best_gain > 0.0)) break;

        // Merge j into i (i < j, so labels stay "smallest member").
        intra[best_i] += intra[best_j] + between[best_i][best_j];
        deg[best_i] += deg[best_j];
        alive[best_j] = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == best_i) continue;
            between[best_i][k] += between[best_j][k];
            between[k][best_i] += between[k][best_j];
            between[best_j][k] = 0.0;
            between[k][best_j] = 0.0;
        }
        between[best_i][best_j] = 0.0;
        between[best_j][best_i] = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (assign[v] == best_j) assign[v] = best_i;
    }

    // Renumber communities in order of their smallest member.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < n; ++i)
        if (alive[i]) order.push_back(i);
    std::vector<std::size_t> renumber(n, SIZE_MAX);
    for (std::size_t k = 0; k < order.size(); ++k) renumber[order[k]] = k;
    out.communities.assign(order.size(), {});
    for (std::size_t v = 0; v < n; ++v) {
        out.community[v] = renumber[assign[v]];
        out.communities[out.community[v]].push_back(v);
    }
    out.q = modularity(g, out.community);
    return out;
}

double max_modularity_exhaustive(const Graph& g) {
    if (g.n == 0 || g.n > 12)
        throw Error("exhaustive modularity search supports 1..12 nodes, got " +
                    std::to_string(g.n));
    if (g.edge_count() == 0) throw Error("modularity is undefined for a graph with no edges");

    // Enumerate set partitions via restricted growth strings.
    std::vector<std::size_t> assign(g.n, 0);
    double best = -1.0;
    for (;;) {
        best = std::max(best, modularity(g, assign));
        // Next restricted growth string.
        std::size_t i = g.n;
        for (; i-- > 1;) {
            std::size_t max_prefix = 0;
            for (std::size_t k = 0; k < i; ++k) max_prefix = std::max(max_prefix, assign[k]);
            if (assign[i] <= max_prefix) {
                ++assign[i];
                for (std::size_t k = i + 1; k < g.n; ++k) assign[k] = 0;
                break;
            }
        }
        if (i == 0) break;
    }
    return best;
}

}  // namespace mirnet
