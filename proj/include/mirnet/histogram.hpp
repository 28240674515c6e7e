#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mirnet/error.hpp"

namespace mirnet {

/// Two-dimensional occupancy histogram on a grid x grid partition of the
/// (rescaled) sample plane. Bins are equal-width over [min, max] per axis,
/// with the upper edge closed so the maximum lands in the last bin.
struct JointHistogram {
    int grid = 0;
    std::vector<uint64_t> counts;  ///< row-major grid*grid; counts[ix*grid + iy]
    uint64_t total = 0;
    bool degenerate_x = false;  ///< x-axis had max == min; everything in bin 0
    bool degenerate_y = false;

    uint64_t at(int ix, int iy) const { return counts[static_cast<std::size_t>(ix) * grid + iy]; }
};

/// Builds the joint histogram of two equally long channels on a grid x grid
/// partition. grid must lie in [2, 255]. Errors on length mismatch, empty
/// channels, or non-finite values.
JointHistogram build_joint_histogram(std::span<const double> x, std::span<const double> y,
                                     int grid);

/// Low-level fill from precomputed per-sample bin indices (both in [0, grid)).
/// Reuses the histogram's storage; used by the estimator's grid sweep.
void fill_from_bins(JointHistogram& hist, const uint8_t* bx, const uint8_t* by, std::size_t n,
                    int grid);

/// Shannon entropy (natural log) of an arbitrary count vector.
double entropy_of_counts(std::span<const uint64_t> counts, uint64_t total);

/// Entropy of one margin of the joint histogram; axis 0 = x, 1 = y.
double marginal_entropy(const JointHistogram& hist, int axis);

/// Entropy of the joint distribution.
double joint_entropy(const JointHistogram& hist);

/// Mutual information as H(X) + H(Y) - H(X,Y), in nats.
double mutual_information(const JointHistogram& hist);

/// Mutual information summed directly over cells as p * log(p / (px * py)).
/// Algebraically identical to mutual_information(); kept as an independent
/// formulation so the two can be cross-checked.
double mutual_information_direct(const JointHistogram& hist);

}  // namespace mirnet
