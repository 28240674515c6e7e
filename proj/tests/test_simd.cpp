#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "mirnet/rng.hpp"
#include "mirnet/simd.hpp"

using mirnet::Rng;
using namespace mirnet::simd;

namespace {

// Sizes chosen to hit every tail-handling branch: below one vector width,
// exactly aligned, one past, and large.
const std::vector<std::size_t> kSizes = {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 100, 1001};

std::vector<Lane> available_vector_lanes() {
    std::vector<Lane> lanes;
    for (Lane lane : {Lane::avx2, Lane::neon})
        if (lane_available(lane)) lanes.push_back(lane);
    return lanes;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("the scalar lane is always available and named") {
    CHECK(lane_available(Lane::scalar));
    CHECK(std::string(lane_name(Lane::scalar)) == "scalar");
    CHECK(std::string(lane_name(Lane::avx2)) == "avx2");
    CHECK(std::string(lane_name(Lane::neon)) == "neon");
}

TEST_CASE("the active lane is one this CPU can run") {
    Lane active = active_lane();
    CHECK(lane_available(active));
    // The kernel table for the active lane must be fully populated.
    const KernelTable& k = kernels(active);
    CHECK(k.rescale01 != nullptr);
    CHECK(k.bin_indices != nullptr);
    CHECK(k.minmax != nullptr);
    CHECK(k.max_pair_dist2 != nullptr);
}

TEST_CASE("vector lanes reproduce the scalar rescale bit for bit") {
    auto lanes = available_vector_lanes();
    if (lanes.empty()) {
        MESSAGE("no vector lane available on this CPU; nothing to compare");
        return;
    }
    const KernelTable& ref = kernels(Lane::scalar);
    Rng rng(101);
    for (Lane lane : lanes) {
        const KernelTable& k = kernels(lane);
        for (std::size_t n : kSizes) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform(-1e3, 1e3);
            double lo = -1e3, inv = 1.0 / 2e3;
            std::vector<double> want(n), got(n);
            ref.rescale01(x.data(), n, lo, inv, want.data());
            k.rescale01(x.data(), n, lo, inv, got.data());
            REQUIRE(bitwise_equal(want, got));
        }
    }
}

TEST_CASE("vector lanes reproduce the scalar bin indices exactly") {
    auto lanes = available_vector_lanes();
    if (lanes.empty()) {
        MESSAGE("no vector lane available on this CPU; nothing to compare");
        return;
    }
    const KernelTable& ref = kernels(Lane::scalar);
    Rng rng(102);
    for (Lane lane : lanes) {
        const KernelTable& k = kernels(lane);
        for (int grid : {2, 3, 17, 100, 255}) {
            for (std::size_t n : kSizes) {
                std::vector<double> unit(n);
                for (auto& v : unit) v = rng.uniform01();
                // Force the edge cases into every array.
                unit[0] = 1.0;
                if (n > 1) unit[1] = 0.0;
                if (n > 2) unit[2] = 0.9999999999999999;
                std::vector<uint8_t> want(n), got(n);
                ref.bin_indices(unit.data(), n, grid, want.data());
                k.bin_indices(unit.data(), n, grid, got.data());
                REQUIRE(want == got);
            }
        }
    }
}

TEST_CASE("bin index upper edge is closed") {
    const KernelTable& ref = kernels(Lane::scalar);
    double one = 1.0;
    uint8_t idx = 255;
    ref.bin_indices(&one, 1, 7, &idx);
    CHECK(idx == 6);
    double zero = 0.0;
    ref.bin_indices(&zero, 1, 7, &idx);
    CHECK(idx == 0);
}

TEST_CASE("vector lanes reproduce the scalar min/max exactly") {
    auto lanes = available_vector_lanes();
    if (lanes.empty()) {
        MESSAGE("no vector lane available on this CPU; nothing to compare");
        return;
    }
    const KernelTable& ref = kernels(Lane::scalar);
    Rng rng(103);
    for (Lane lane : lanes) {
        const KernelTable& k = kernels(lane);
        for (std::size_t n : kSizes) {
            std::vector<double> x(n);
            for (auto& v : x) v = rng.uniform(-5.0, 5.0);
            double wlo = 0, whi = 0, glo = 0, ghi = 0;
            ref.minmax(x.data(), n, &wlo, &whi);
            k.minmax(x.data(), n, &glo, &ghi);
            REQUIRE(std::memcmp(&wlo, &glo, sizeof wlo) == 0);
            REQUIRE(std::memcmp(&whi, &ghi, sizeof whi) == 0);
        }
    }
}

TEST_CASE("minmax of a single element returns it twice") {
    const KernelTable& ref = kernels(Lane::scalar);
    double v = -3.75, lo = 0, hi = 0;
    ref.minmax(&v, 1, &lo, &hi);
    CHECK(lo == -3.75);
    CHECK(hi == -3.75);
}

TEST_CASE("vector lanes reproduce the scalar pair diameter bit for bit") {
    auto lanes = available_vector_lanes();
    if (lanes.empty()) {
        MESSAGE("no vector lane available on this CPU; nothing to compare");
        return;
    }
    const KernelTable& ref = kernels(Lane::scalar);
    Rng rng(104);
    for (Lane lane : lanes) {
        const KernelTable& k = kernels(lane);
        for (std::size_t n : kSizes) {
            std::vector<double> xs(n), ys(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = rng.uniform01();
                ys[i] = rng.uniform01();
            }
            double want = ref.max_pair_dist2(xs.data(), ys.data(), n);
            double got = k.max_pair_dist2(xs.data(), ys.data(), n);
            REQUIRE(std::memcmp(&want, &got, sizeof want) == 0);
        }
    }
}

TEST_CASE("pair diameter degenerate cases") {
    const KernelTable& ref = kernels(Lane::scalar);
    double x = 0.5, y = 0.5;
    CHECK(ref.max_pair_dist2(&x, &y, 0) == 0.0);
    CHECK(ref.max_pair_dist2(&x, &y, 1) == 0.0);
    double xs[2] = {0.0, 3.0}, ys[2] = {0.0, 4.0};
    CHECK(ref.max_pair_dist2(xs, ys, 2) == 25.0);
}

TEST_CASE("scalar pair diameter matches a naive double loop") {
    const KernelTable& ref = kernels(Lane::scalar);
    Rng rng(105);
    for (std::size_t n : {2u, 3u, 17u, 64u}) {
        std::vector<double> xs(n), ys(n);
        for (std::size_t i = 0; i < n; ++i) {
            xs[i] = rng.uniform(-2.0, 2.0);
            ys[i] = rng.uniform(-2.0, 2.0);
        }
        double naive = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
                double d2 = dx * dx + dy * dy;
                if (d2 > naive) naive = d2;
            }
        CHECK(ref.max_pair_dist2(xs.data(), ys.data(), n) == naive);
    }
}
