#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "mirnet/datagen.hpp"
#include "mirnet/error.hpp"

using namespace mirnet;

namespace {

double sample_correlation(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

CouplingSpec small_ring_spec() {
    CouplingSpec spec;
    spec.nodes = 16;
    spec.adjacency = ring_with_chords_adjacency(16);
    spec.alpha = 0.03;
    spec.map = MapKind::circle;
    spec.length = 2000;
    spec.transient = 200;
    spec.seed = 5;
    return spec;
}

}  // namespace

TEST_CASE("ring-with-chords topology has the expected wiring") {
    auto a = ring_with_chords_adjacency(16);
    REQUIRE(a.size() == 256);
    // Symmetric with zero diagonal.
    for (int i = 0; i < 16; ++i) {
        CHECK(a[i * 16 + i] == 0);
        for (int j = 0; j < 16; ++j) CHECK(a[i * 16 + j] == a[j * 16 + i]);
    }
    std::size_t edges = 0;
    for (int i = 0; i < 16; ++i)
        for (int j = i + 1; j < 16; ++j) edges += a[i * 16 + j];
    CHECK(edges == 20);  // 16 ring edges + 4 chords
    // The four chords.
    CHECK(a[0 * 16 + 8] == 1);
    CHECK(a[0 * 16 + 4] == 1);
    CHECK(a[8 * 16 + 12] == 1);
    CHECK(a[2 * 16 + 10] == 1);
    // Plain cycle for other sizes.
    auto c = ring_with_chords_adjacency(5);
    std::size_t cycle_edges = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) cycle_edges += c[i * 5 + j];
    CHECK(cycle_edges == 5);
    CHECK_THROWS_AS(ring_with_chords_adjacency(2), Error);
}

TEST_CASE("coupled map network is deterministic per seed") {
    auto spec = small_ring_spec();
    SeriesMatrix a = gen_coupled_map_network(spec);
    SeriesMatrix b = gen_coupled_map_network(spec);
    CHECK(a.values == b.values);
    spec.seed = 6;
    SeriesMatrix c = gen_coupled_map_network(spec);
    CHECK(a.values != c.values);
}

TEST_CASE("circle map trajectories stay in [0,1) and are labelled n1..nM") {
    SeriesMatrix m = gen_coupled_map_network(small_ring_spec());
    REQUIRE(m.rows == 2000);
    REQUIRE(m.cols == 16);
    CHECK(m.labels.front() == "n1");
    CHECK(m.labels.back() == "n16");
    for (double v : m.values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
}

TEST_CASE("logistic map trajectories stay in [0,1]") {
    CouplingSpec spec;
    spec.nodes = 3;
    spec.adjacency.assign(9, 0);
    spec.map = MapKind::logistic;
    spec.length = 5000;
    spec.seed = 2;
    SeriesMatrix m = gen_coupled_map_network(spec);
    double lo = 1.0, hi = 0.0;
    for (double v : m.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    // r = 4 fills the whole interval.
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("an input-free node under nonzero coupling is warned about") {
    CouplingSpec spec;
    spec.nodes = 2;
    // Node 0 receives from node 1; node 1 receives nothing.
    spec.adjacency = {0, 1, 0, 0};
    spec.alpha = 0.1;
    spec.map = MapKind::logistic;
    spec.length = 100;
    Warnings warnings;
    gen_coupled_map_network(spec, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("node 2") != std::string::npos);

    // With alpha = 0 the missing inputs change nothing, so no warning.
    spec.alpha = 0.0;
    Warnings quiet;
    gen_coupled_map_network(spec, &quiet);
    CHECK(quiet.empty());
}

TEST_CASE("coupled map network rejects ill-formed specs") {
    CouplingSpec spec;
    spec.nodes = 0;
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);

    spec = small_ring_spec();
    spec.adjacency.pop_back();
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);

    spec = small_ring_spec();
    spec.adjacency[3] = 2;
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);

    spec = small_ring_spec();
    spec.adjacency[0] = 1;  // diagonal
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);

    spec = small_ring_spec();
    spec.alpha = 1.5;
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);

    spec = small_ring_spec();
    spec.length = 0;
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);
}

TEST_CASE("a circle map pushed out of its domain is reported") {
    CouplingSpec spec;
    spec.nodes = 2;
    spec.adjacency = {0, 0, 0, 0};
    spec.map = MapKind::circle;
    spec.map_r = 1e9;  // wrecks the mod-1 arithmetic on purpose? no: mod keeps it in range
    spec.length = 10;
    // mod-1 keeps the circle map in range for any finite r, so this must run.
    CHECK_NOTHROW(gen_coupled_map_network(spec));

    // The logistic map with r far above 4 leaves [0,1] almost immediately.
    spec.map = MapKind::logistic;
    spec.map_r = 8.0;
    CHECK_THROWS_AS(gen_coupled_map_network(spec), Error);
}

TEST_CASE("correlated gaussians reproduce their block covariance") {
    GaussianBlockSpec spec;
    spec.blocks = {CovarianceBlock{2, {1.0, 0.9, 0.9, 1.0}}, CovarianceBlock{1, {2.0}}};
    spec.length = 40000;
    spec.seed = 7;
    SeriesMatrix m = gen_correlated_gaussians(spec);
    REQUIRE(m.cols == 3);
    REQUIRE(m.rows == 40000);
    CHECK(m.labels == std::vector<std::string>{"x1", "x2", "x3"});

    CHECK(sample_correlation(m.channel(0), m.channel(1)) == doctest::Approx(0.9).epsilon(0.02));
    // Across blocks: independent.
    CHECK(std::abs(sample_correlation(m.channel(0), m.channel(2))) < 0.03);
    CHECK(std::abs(sample_correlation(m.channel(1), m.channel(2))) < 0.03);

    // Variance of the third channel is 2.
    double var = 0, mean = 0;
    for (double v : m.channel(2)) mean += v;
    mean /= m.rows;
    for (double v : m.channel(2)) var += (v - mean) * (v - mean);
    var /= m.rows;
    CHECK(var == doctest::Approx(2.0).epsilon(0.05));

    SeriesMatrix again = gen_correlated_gaussians(spec);
    CHECK(m.values == again.values);
}

TEST_CASE("a singular but consistent covariance still samples") {
    GaussianBlockSpec spec;
    spec.blocks = {CovarianceBlock{2, {1.0, 1.0, 1.0, 1.0}}};  // rank 1
    spec.length = 5000;
    SeriesMatrix m = gen_correlated_gaussians(spec);
    CHECK(sample_correlation(m.channel(0), m.channel(1)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("an indefinite covariance block is rejected") {
    // Pairwise entries that no joint distribution can have: two strong
    // negative correlations force the third to be positive.
    GaussianBlockSpec spec;
    spec.blocks = {CovarianceBlock{
        3, {1.40, -2.75, -2.00, -2.75, 5.50, -1.00, -2.00, -1.00, 3.25}}};
    spec.length = 100;
    try {
        gen_correlated_gaussians(spec);
        FAIL("expected a rejection");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("positive semidefinite") != std::string::npos);
    }
}

TEST_CASE("an asymmetric covariance block is rejected") {
    GaussianBlockSpec spec;
    spec.blocks = {CovarianceBlock{2, {1.0, 0.5, 0.4, 1.0}}};
    spec.length = 100;
    CHECK_THROWS_AS(gen_correlated_gaussians(spec), Error);
}

TEST_CASE("uniform pair covers [0,1) on both channels") {
    SeriesMatrix m = gen_uniform_pair(10000, 3);
    REQUIRE(m.cols == 2);
    CHECK(m.labels == std::vector<std::string>{"u1", "u2"});
    for (double v : m.values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
    }
    CHECK(std::abs(sample_correlation(m.channel(0), m.channel(1))) < 0.05);
    CHECK(gen_uniform_pair(10000, 3).values == m.values);
    CHECK(gen_uniform_pair(10000, 4).values != m.values);
}

TEST_CASE("directed logistic pair stays in range and is deterministic") {
    SeriesMatrix m = gen_directed_logistic_pair(5000, 500, 0.1, 9);
    REQUIRE(m.cols == 2);
    REQUIRE(m.rows == 5000);
    CHECK(m.labels == std::vector<std::string>{"d1", "d2"});
    for (double v : m.values) {
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
    }
    CHECK(gen_directed_logistic_pair(5000, 500, 0.1, 9).values == m.values);
}

TEST_CASE("only the driven half of the directed pair feels the coupling") {
    const double alpha = 0.1;
    SeriesMatrix m = gen_directed_logistic_pair(500, 100, alpha, 9);
    auto f = [](double x) { return 4.0 * x * (1.0 - x); };
    for (std::size_t t = 0; t + 1 < m.rows; ++t) {
        const double d1 = m.at(t, static_cast<std::size_t>(0));
        const double d2 = m.at(t, static_cast<std::size_t>(1));
        // d2 has no inputs: a pure r=4 logistic orbit, no damping.
        CHECK(m.at(t + 1, static_cast<std::size_t>(1)) == f(d2));
        // d1 mixes its own map with its single input.
        CHECK(m.at(t + 1, static_cast<std::size_t>(0)) ==
              (1.0 - alpha) * f(d1) + (alpha / 1.0) * f(d2));
    }
}

TEST_CASE("attaching a reference pair flags and labels it") {
    SeriesMatrix data = gen_uniform_pair(1000, 1);
    SeriesMatrix ref = gen_directed_logistic_pair(1000, 100, 0.1, 2);
    SeriesMatrix joined = attach_reference_pair(data, ref);
    REQUIRE(joined.cols == 4);
    CHECK(joined.labels == std::vector<std::string>{"u1", "u2", "_ref1", "_ref2"});
    CHECK(joined.is_reference == std::vector<uint8_t>{0, 0, 1, 1});
    CHECK(joined.data_channels() == std::vector<std::size_t>{0, 1});
    CHECK(joined.reference_channels() == std::vector<std::size_t>{2, 3});
    // Channel data is carried over verbatim.
    CHECK(std::vector<double>(joined.channel(2).begin(), joined.channel(2).end()) ==
          std::vector<double>(ref.channel(0).begin(), ref.channel(0).end()));

    // A second attachment is refused.
    CHECK_THROWS_AS(attach_reference_pair(joined, ref), Error);
}

TEST_CASE("attaching truncates to the shorter length with a warning") {
    SeriesMatrix data = gen_uniform_pair(1000, 1);
    SeriesMatrix ref = gen_uniform_pair(800, 2);
    Warnings warnings;
    SeriesMatrix joined = attach_reference_pair(data, ref, &warnings);
    CHECK(joined.rows == 800);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("800") != std::string::npos);
}

TEST_CASE("a reference pair must have exactly two channels") {
    SeriesMatrix data = gen_uniform_pair(100, 1);
    SeriesMatrix bad(100, 3);
    bad.labels = {"a", "b", "c"};
    CHECK_THROWS_AS(attach_reference_pair(data, bad), Error);
}
