#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mirnet/error.hpp"
#include "mirnet/series.hpp"

namespace mirnet {

/// Largest grid size whose occupancy stays informative for this channel
/// pair: scanning N = 2, 3, ..., the mean occupation T / N_oc of the N_oc
/// occupied cells must stay >= N_oc. Returns the last N satisfying that
/// (capped at `cap` when cap > 0, and at 255 always). Errors with
/// "insufficient data" if even N = 2 fails.
int max_grid_size(std::span<const double> x, std::span<const double> y, int cap = 0);

/// Mean expansion rate of the pair's delay-plane dynamics at one grid size:
/// for every cell holding at least two points, the largest pairwise distance
/// delta among its points is compared with the largest pairwise distance
/// Delta among the same points `horizon` steps later, contributing
/// ln(Delta/delta) / horizon. Cells with delta = 0 or Delta = 0 are skipped.
/// Coordinates are the two channels rescaled to [0,1] by their min/max.
/// Errors with "expansion undefined" when no cell qualifies.
double expansion_rate(std::span<const double> x, std::span<const double> y, int grid, int horizon);

/// Time for correlations to decay below the grid's resolution: ln(grid) / rate.
/// Errors if grid < 2 or rate <= 0.
double correlation_decay_time(int grid, double rate);

/// Full per-pair estimate at one grid size.
struct PairMir {
    double mutual_information = 0.0;
    double expansion = 0.0;
    double decay_time = 0.0;
    double mir = 0.0;  ///< mutual_information / decay_time
};

PairMir pair_mir(std::span<const double> x, std::span<const double> y, int grid, int horizon);

/// Min-max normalisation of one grid's values across pairs. A degenerate
/// grid (all values equal) normalises to all zeros and records a warning.
std::vector<double> mir_hat_per_grid(std::span<const double> values, Warnings* warnings = nullptr);

/// Final cross-grid normalisation: each pair's sum of normalised values is
/// divided by the largest sum, so the strongest pair scores exactly 1.
/// All-zero sums normalise to all zeros and record a warning.
std::vector<double> mir_bar(std::span<const double> pair_sums, Warnings* warnings = nullptr);

struct SweepOptions {
    int horizon = 1;   ///< expansion look-ahead in steps
    int grid_cap = 0;  ///< optional upper bound on the grid scan (0 = none)
    int threads = 0;   ///< worker threads; 0 = MIRNET_THREADS env, else all cores
};

/// One channel pair's trajectory through the sweep.
struct PairSweep {
    std::size_t a = 0, b = 0;      ///< channel indices, a < b
    std::vector<double> mir;       ///< raw value per grid size
    std::vector<double> mir_hat;   ///< per-grid normalised value
    double sum = 0.0;              ///< sum of mir_hat over grids
};

/// Result of the all-pairs sweep: per-grid estimates, their normalisation,
/// and the final pair weights in [0, 1].
struct SweepResult {
    std::vector<std::string> labels;
    std::vector<uint8_t> is_reference;
    int n_max = 0;
    std::vector<int> grid_sizes;  ///< ceil(0.2 * n_max) .. n_max
    int horizon = 1;
    std::vector<PairSweep> pairs;  ///< canonical order: (0,1), (0,2), ..., (M-2,M-1)
    std::vector<double> bar;       ///< final weight per pair, same order
    Warnings warnings;

    std::size_t n_channels() const { return labels.size(); }
    std::size_t pair_index(std::size_t i, std::size_t j) const;
    double bar_at(std::size_t i, std::size_t j) const { return bar[pair_index(i, j)]; }
};

/// Runs the full estimate over every unordered channel pair: one shared
/// grid range (the minimum over pairs of max_grid_size), raw values per
/// grid, then the two-stage normalisation. Deterministic for a given input
/// regardless of thread count.
SweepResult sweep_all_pairs(const SeriesMatrix& data, const SweepOptions& options = {});

}  // namespace mirnet
