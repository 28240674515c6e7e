#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace mirnet::simd {

/// Kernel implementation lanes. `scalar` is the reference; vector lanes must
/// produce bitwise-identical results (enforced by the equivalence tests, and
/// by construction: no FMA contraction, and only exact ops — sub/mul/add in
/// fixed order per element, min/max reductions).
enum class Lane { scalar, avx2, neon };

/// Lane selected for this process: best available, unless the MIRNET_SIMD
/// environment variable ("scalar", "avx2", "neon") forces one. Requesting an
/// unavailable lane falls back to scalar with a warning on stderr.
Lane active_lane();

const char* lane_name(Lane lane);

/// True if `lane` can run on this CPU.
bool lane_available(Lane lane);

/// out[i] = (x[i] - lo) * inv_range. Maps a channel into [0,1] given its
/// min and 1/(max-min); the caller guarantees inv_range is finite.
void rescale01(const double* x, std::size_t n, double lo, double inv_range, double* out);

/// out[i] = min(int(unit[i] * grid), grid - 1): equal-width bin index over
/// [0,1] with a closed upper edge. Preconditions: unit[i] in [0,1], 2 <= grid <= 255.
void bin_indices(const double* unit, std::size_t n, int grid, std::uint8_t* out);

/// Minimum and maximum of x[0..n). n >= 1.
void minmax(const double* x, std::size_t n, double* lo, double* hi);

/// Largest squared Euclidean distance over all point pairs (xs[i], ys[i]),
/// by exhaustive O(n^2) scan. Returns 0 for n < 2.
double max_pair_dist2(const double* xs, const double* ys, std::size_t n);

/// Direct per-lane entry points, for equivalence tests and the kernel
/// benchmark. Calling a lane that lane_available() rejects is undefined.
struct KernelTable {
    void (*rescale01)(const double*, std::size_t, double, double, double*);
    void (*bin_indices)(const double*, std::size_t, int, std::uint8_t*);
    void (*minmax)(const double*, std::size_t, double*, double*);
    double (*max_pair_dist2)(const double*, const double*, std::size_t);
};

const KernelTable& kernels(Lane lane);

}  // namespace mirnet::simd
