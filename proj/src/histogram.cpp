#include "mirnet/histogram.hpp"

#include <cmath>

#include "mirnet/kahan.hpp"
#include "mirnet/simd.hpp"

namespace mirnet {

JointHistogram build_joint_histogram(std::span<const double> x, std::span<const double> y,
                                     int grid) {
    if (x.size() != y.size())
        throw Error("channel lengths differ: " + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()));
    if (x.empty()) throw Error("cannot build a histogram from empty channels");
    if (grid < 2 || grid > 255)
        throw Error("grid size must lie in [2, 255], got " + std::to_string(grid));

    const std::size_t n = x.size();
    JointHistogram hist;
    hist.grid = grid;

    // The min/max kernels skip NaN (comparisons are false), so the range
    // alone cannot prove the data clean; scan explicitly.
    for (double v : x)
        if (!std::isfinite(v)) throw Error("first channel contains non-finite values");
    for (double v : y)
        if (!std::isfinite(v)) throw Error("second channel contains non-finite values");

    double lo_x, hi_x, lo_y, hi_y;
    simd::minmax(x.data(), n, &lo_x, &hi_x);
    simd::minmax(y.data(), n, &lo_y, &hi_y);
    hist.degenerate_x = (hi_x == lo_x);
    hist.degenerate_y = (hi_y == lo_y);

    std::vector<double> unit(n);
    std::vector<uint8_t> bx(n, 0), by(n, 0);
    if (!hist.degenerate_x) {
        simd::rescale01(x.data(), n, lo_x, 1.0 / (hi_x - lo_x), unit.data());
        simd::bin_indices(unit.data(), n, grid, bx.data());
    }
    if (!hist.degenerate_y) {
        simd::rescale01(y.data(), n, lo_y, 1.0 / (hi_y - lo_y), unit.data());
        simd::bin_indices(unit.data(), n, grid, by.data());
    }
    fill_from_bins(hist, bx.data(), by.data(), n, grid);
    return hist;
}

void fill_from_bins(JointHistogram& hist, const uint8_t* bx, const uint8_t* by, std::size_t n,
                    int grid) {
    hist.grid = grid;
    hist.counts.assign(static_cast<std::size_t>(grid) * grid, 0);
    hist.total = n;
    for (std::size_t i = 0; i < n; ++i)
        ++hist.counts[static_cast<std::size_t>(bx[i]) * grid + by[i]];
}

double entropy_of_counts(std::span<const uint64_t> counts, uint64_t total) {
    if (total == 0) throw Error("entropy of an empty distribution is undefined");
    // H = ln(T) - (sum c ln c) / T, with 0 ln 0 = 0.
    KahanSum acc;
    for (uint64_t c : counts) {
        if (c == 0) continue;
        const double cd = static_cast<double>(c);
        acc.add(cd * std::log(cd));
    }
    const double t = static_cast<double>(total);
    return std::log(t) - acc.value() / t;
}

namespace {

std::vector<uint64_t> margin(const JointHistogram& hist, int axis) {
    const int g = hist.grid;
    std::vector<uint64_t> sums(g, 0);
    for (int ix = 0; ix < g; ++ix)
        for (int iy = 0; iy < g; ++iy)
            sums[axis == 0 ? ix : iy] += hist.at(ix, iy);
    return sums;
}

}  // namespace

double marginal_entropy(const JointHistogram& hist, int axis) {
    if (axis != 0 && axis != 1) throw Error("axis must be 0 or 1");
    auto sums = margin(hist, axis);
    return entropy_of_counts(sums, hist.total);
}

double joint_entropy(const JointHistogram& hist) {
    return entropy_of_counts(hist.counts, hist.total);
}

double mutual_information(const JointHistogram& hist) {
    return marginal_entropy(hist, 0) + marginal_entropy(hist, 1) - joint_entropy(hist);
}

double mutual_information_direct(const JointHistogram& hist) {
    if (hist.total == 0) throw Error("mutual information of an empty histogram is undefined");
    const int g = hist.grid;
    auto row = margin(hist, 0);
    auto col = margin(hist, 1);
    std::vector<double> log_row(g, 0.0), log_col(g, 0.0);
    for (int i = 0; i < g; ++i) {
        if (row[i] > 0) log_row[i] = std::log(static_cast<double>(row[i]));
        if (col[i] > 0) log_col[i] = std::log(static_cast<double>(col[i]));
    }
    const double t = static_cast<double>(hist.total);
    const double log_t = std::log(t);
    KahanSum acc;
    for (int ix = 0; ix < g; ++ix) {
        for (int iy = 0; iy < g; ++iy) {
            const uint64_t c = hist.at(ix, iy);
            if (c == 0) continue;
            const double cd = static_cast<double>(c);
            acc.add(cd * (std::log(cd) + log_t - log_row[ix] - log_col[iy]));
        }
    }
    return acc.value() / t;
}

}  // namespace mirnet
