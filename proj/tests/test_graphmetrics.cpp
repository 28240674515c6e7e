#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "mirnet/error.hpp"
#include "mirnet/graphmetrics.hpp"
#include "mirnet/rng.hpp"

using namespace mirnet;

namespace {

Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }

Graph complete(std::size_t n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

Graph two_triangles() {
    return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

Graph random_graph(std::size_t n, double p, uint64_t seed) {
    Rng rng(seed);
    Graph g;
    g.n = n;
    g.adj.assign(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.uniform01() < p) g.set_edge(i, j, true);
    return g;
}

/// Applies a node permutation: node i of `g` becomes node perm[i].
Graph relabel(const Graph& g, const std::vector<std::size_t>& perm) {
    Graph out;
    out.n = g.n;
    out.adj.assign(g.n * g.n, 0);
    for (std::size_t i = 0; i < g.n; ++i)
        for (std::size_t j = 0; j < g.n; ++j)
            out.adj[perm[i] * g.n + perm[j]] = g.adj[i * g.n + j];
    return out;
}

}  // namespace

TEST_CASE("adjacency validation rejects malformed matrices") {
    CHECK_THROWS_AS(Graph::from_adjacency(std::vector<uint8_t>(8, 0), 3), Error);
    std::vector<uint8_t> diag(9, 0);
    diag[0] = 1;  // nonzero diagonal
    CHECK_THROWS_AS(Graph::from_adjacency(diag, 3), Error);
    std::vector<uint8_t> asym(9, 0);
    asym[0 * 3 + 1] = 1;  // edge in one direction only
    try {
        Graph::from_adjacency(asym, 3);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("symmetric") != std::string::npos);
    }
    std::vector<uint8_t> big(9, 0);
    big[1] = big[3] = 2;  // symmetric but not 0/1
    CHECK_THROWS_AS(Graph::from_adjacency(big, 3), Error);

    // A valid matrix round-trips through edge_list.
    Graph g = triangle();
    Graph h = Graph::from_adjacency(g.adj, 3);
    CHECK(h.edge_list() == g.edge_list());
}

TEST_CASE("edge construction and bookkeeping") {
    Graph g = Graph::from_edges(4, {{0, 1}, {2, 1}, {0, 1}});  // duplicates collapse
    CHECK(g.edge_count() == 2);
    CHECK(g.edge_list() ==
          std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 2}});
    CHECK(g.degree(1) == 2);
    CHECK(g.degree(3) == 0);
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(0, 2));
    g.set_edge(0, 1, false);
    CHECK(g.edge_count() == 1);
    CHECK_THROWS_AS(Graph::from_edges(3, {{0, 3}}), Error);
    CHECK_THROWS_AS(Graph::from_edges(3, {{1, 1}}), Error);
}

TEST_CASE("basic stats: triangle plus an isolated node") {
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}});
    BasicStats s = basic_stats(g);
    CHECK(s.nodes == 4);
    CHECK(s.edges == 3);
    CHECK(s.degrees == std::vector<std::size_t>{2, 2, 2, 0});
    CHECK(s.density == doctest::Approx(0.5).epsilon(1e-12));  // 3 of 6 pairs
    CHECK(s.n_components == 2);
    CHECK(s.component_sizes == std::vector<std::size_t>{3, 1});
}

TEST_CASE("clustering and path length on hand-checked graphs") {
    // Triangle: every neighbourhood is complete, every distance is 1.
    ClusteringPath cp = clustering_and_path(triangle());
    CHECK(cp.clustering == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.path_length == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.largest_component == 3);

    // Path 0-1-2: no triangles; distances 1, 1, 2 average to 4/3.
    cp = clustering_and_path(path3());
    CHECK(cp.clustering == 0.0);
    CHECK(cp.path_length == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // Complete graph on 4 nodes.
    cp = clustering_and_path(complete(4));
    CHECK(cp.clustering == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.path_length == doctest::Approx(1.0).epsilon(1e-12));

    // Two triangles: the path average covers only the largest component
    // (the first one in node order on a size tie).
    cp = clustering_and_path(two_triangles());
    CHECK(cp.clustering == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.path_length == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cp.largest_component == 3);

    // Triangle plus isolated node: the mean spreads over all 4 nodes.
    Graph g = Graph::from_edges(4, {{0, 1}, {1, 2}, {0, 2}});
    cp = clustering_and_path(g);
    CHECK(cp.clustering == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(cp.largest_component == 3);
}

TEST_CASE("assortativity on a star is -1; regular graphs leave it undefined") {
    // Star with centre 0: every edge joins degree 3 to degree 1.
    Graph star = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
    AssortativityResult a = assortativity(star);
    CHECK(a.defined);
    CHECK(a.r == doctest::Approx(-1.0).epsilon(1e-12));

    // All degrees equal: zero variance over edge ends.
    a = assortativity(complete(4));
    CHECK_FALSE(a.defined);
    CHECK(a.reason.find("variance") != std::string::npos);

    // No edges at all.
    Graph empty;
    empty.n = 3;
    empty.adj.assign(9, 0);
    a = assortativity(empty);
    CHECK_FALSE(a.defined);
    CHECK(a.reason.find("no edges") != std::string::npos);
}

TEST_CASE("modularity of hand-checked assignments") {
    // Two triangles split into their natural communities:
    // Q = 2 * (3/6 - (6/12)^2) = 1/2.
    Graph g = two_triangles();
    CHECK(modularity(g, {0, 0, 0, 1, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
    // Everything in one community is always 0.
    CHECK(modularity(g, {0, 0, 0, 0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    // A single edge with each end in its own community: Q = -1/2, the minimum.
    Graph pair = Graph::from_edges(2, {{0, 1}});
    CHECK(modularity(pair, {0, 1}) == doctest::Approx(-0.5).epsilon(1e-12));

    CHECK_THROWS_AS(modularity(g, {0, 0, 0}), Error);  // wrong length
    Graph empty;
    empty.n = 2;
    empty.adj.assign(4, 0);
    try {
        modularity(empty, {0, 0});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("no edges") != std::string::npos);
    }
}

TEST_CASE("greedy partition recovers separated communities") {
    PartitionResult p = modularity_partition(two_triangles());
    CHECK(p.q == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.community == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
    REQUIRE(p.communities.size() == 2);
    CHECK(p.communities[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(p.communities[1] == std::vector<std::size_t>{3, 4, 5});

    // A complete graph has no community structure: one community, q = 0.
    p = modularity_partition(complete(4));
    CHECK(p.q == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.communities.size() == 1);
    CHECK(p.communities[0] == std::vector<std::size_t>{0, 1, 2, 3});

    // A single edge also collapses to one community at q = 0.
    p = modularity_partition(Graph::from_edges(2, {{0, 1}}));
    CHECK(p.q == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(p.communities.size() == 1);

    // The edgeless graph keeps singletons and reports q = 0.
    Graph empty;
    empty.n = 3;
    empty.adj.assign(9, 0);
    p = modularity_partition(empty);
    CHECK(p.q == 0.0);
    REQUIRE(p.communities.size() == 3);
    CHECK(p.community == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("greedy modularity never beats the exhaustive optimum") {
    for (uint64_t seed = 1; seed <= 30; ++seed) {
        const std::size_t n = 4 + static_cast<std::size_t>(seed % 5);
        Graph g = random_graph(n, 0.5, seed);
        if (g.edge_count() == 0) continue;
        PartitionResult greedy = modularity_partition(g);
        const double best = max_modularity_exhaustive(g);
        CAPTURE(seed);
        CAPTURE(n);
        CHECK(greedy.q <= best + 1e-12);
        // The reported q must be the modularity of the reported assignment.
        CHECK(modularity(g, greedy.community) == greedy.q);
        // And within the known global bounds.
        CHECK(best <= 1.0);
        CHECK(greedy.q >= -0.5 - 1e-12);
    }
}

TEST_CASE("exhaustive search is guarded") {
    Graph g;
    g.n = 13;
    g.adj.assign(13 * 13, 0);
    g.set_edge(0, 1, true);
    CHECK_THROWS_AS(max_modularity_exhaustive(g), Error);
    Graph empty;
    empty.n = 3;
    empty.adj.assign(9, 0);
    CHECK_THROWS_AS(max_modularity_exhaustive(empty), Error);
    // Two triangles: the optimum is the natural split.
    CHECK(max_modularity_exhaustive(two_triangles()) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("degree-preserving rewiring preserves every degree") {
    std::size_t changed = 0;
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = random_graph(12, 0.3, 1000 + seed);
        Graph r = rewire_preserving_degrees(g, seed);
        REQUIRE(r.n == g.n);
        CHECK(r.edge_count() == g.edge_count());
        for (std::size_t i = 0; i < g.n; ++i) {
            CAPTURE(seed);
            CAPTURE(i);
            CHECK(r.degree(i) == g.degree(i));
        }
        // Result is still a simple symmetric graph.
        CHECK_NOTHROW(Graph::from_adjacency(r.adj, r.n));
        if (r.adj != g.adj) ++changed;
        // Same seed, same answer.
        Graph r2 = rewire_preserving_degrees(g, seed);
        CHECK(r2.adj == r.adj);
    }
    // With ~20 edges and dozens of swap attempts, nearly every sample moves.
    CHECK(changed >= 15);
}

TEST_CASE("a complete graph is its own randomisation, so sigma is 1") {
    SmallWorldResult sw = small_world_sigma(complete(5), 10, 42);
    CHECK(sw.defined);
    CHECK(sw.sigma == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sw.clustering == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sw.random_clustering == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sw.path_length == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sigma is undefined when it cannot be formed, with a reason") {
    Graph empty;
    empty.n = 3;
    empty.adj.assign(9, 0);
    SmallWorldResult sw = small_world_sigma(empty);
    CHECK_FALSE(sw.defined);
    CHECK(sw.reason.find("no edges") != std::string::npos);

    // One edge: both ends have degree 1, so clustering is zero everywhere.
    sw = small_world_sigma(Graph::from_edges(2, {{0, 1}}));
    CHECK_FALSE(sw.defined);
    CHECK(sw.reason.find("clustering") != std::string::npos);

    sw = small_world_sigma(triangle(), 0);
    CHECK_FALSE(sw.defined);
    CHECK(sw.reason.find("ensemble") != std::string::npos);
}

TEST_CASE("metrics are invariant under node relabelling") {
    Graph g = random_graph(8, 0.4, 7);
    REQUIRE(g.edge_count() > 0);
    std::vector<std::size_t> perm = {3, 6, 0, 7, 1, 5, 2, 4};
    Graph h = relabel(g, perm);

    ClusteringPath cg = clustering_and_path(g);
    ClusteringPath ch = clustering_and_path(h);
    CHECK(ch.clustering == doctest::Approx(cg.clustering).epsilon(1e-12));
    CHECK(ch.path_length == doctest::Approx(cg.path_length).epsilon(1e-12));
    CHECK(ch.largest_component == cg.largest_component);

    AssortativityResult ag = assortativity(g);
    AssortativityResult ah = assortativity(h);
    CHECK(ag.defined == ah.defined);
    if (ag.defined) CHECK(ah.r == doctest::Approx(ag.r).epsilon(1e-9));

    CHECK(max_modularity_exhaustive(h) ==
          doctest::Approx(max_modularity_exhaustive(g)).epsilon(1e-9));

    BasicStats sg = basic_stats(g);
    BasicStats sh = basic_stats(h);
    CHECK(sg.edges == sh.edges);
    std::vector<std::size_t> dg = sg.degrees, dh = sh.degrees;
    std::sort(dg.begin(), dg.end());
    std::sort(dh.begin(), dh.end());
    CHECK(dg == dh);
    CHECK(sg.component_sizes == sh.component_sizes);
}
