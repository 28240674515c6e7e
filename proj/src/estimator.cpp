#include "mirnet/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

#include "mirnet/histogram.hpp"
#include "mirnet/kahan.hpp"
#include "mirnet/simd.hpp"

namespace mirnet {

namespace {

constexpr int kHardGridLimit = 255;  // bin indices are stored as uint8_t

/// Rescales one channel to [0,1] by its min/max. A constant channel maps to
/// all zeros (its axis carries no information either way).
void rescale_channel(std::span<const double> x, double* out, const std::string& label) {
    double lo, hi;
    simd::minmax(x.data(), x.size(), &lo, &hi);
    if (!std::isfinite(lo) || !std::isfinite(hi))
        throw Error("channel '" + label + "' contains non-finite values");
    if (hi == lo) {
        std::fill(out, out + x.size(), 0.0);
        return;
    }
    simd::rescale01(x.data(), x.size(), lo, 1.0 / (hi - lo), out);
}

/// Largest squared pairwise distance of lexicographically sorted points.
/// Small sets go straight to the exhaustive kernel; larger ones first reduce
/// to their convex hull (Andrew's monotone chain), whose vertices contain
/// the diameter endpoints.
double diameter2_sorted(const double* xs, const double* ys, std::size_t m, std::vector<double>& hx,
                        std::vector<double>& hy) {
    if (m < 2) return 0.0;
    if (m <= 24) return simd::max_pair_dist2(xs, ys, m);

    if (hx.size() < 2 * m + 1) {
        hx.resize(2 * m + 1);
        hy.resize(2 * m + 1);
    }
    auto cross = [](double ox, double oy, double ax, double ay, double bx, double by) {
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
    };
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (k >= 2 && cross(hx[k - 2], hy[k - 2], hx[k - 1], hy[k - 1], xs[i], ys[i]) <= 0.0)
            --k;
        hx[k] = xs[i];
        hy[k] = ys[i];
        ++k;
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = m - 1; i-- > 0;) {
        while (k >= lower_end &&
               cross(hx[k - 2], hy[k - 2], hx[k - 1], hy[k - 1], xs[i], ys[i]) <= 0.0)
            --k;
        hx[k] = xs[i];
        hy[k] = ys[i];
        ++k;
    }
    // Last hull point duplicates the first.
    return simd::max_pair_dist2(hx.data(), hy.data(), k - 1);
}

/// Scratch buffers reused across grids (and across pairs within a worker).
struct CellScratch {
    std::vector<uint32_t> cell_size;
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> cursor;
    std::vector<double> origin_x, origin_y;  // cell-grouped points at time 0
    std::vector<double> image_x, image_y;    // the same points `horizon` steps later
    std::vector<double> hull_x, hull_y;
    JointHistogram hist;
};

/// Expansion rate over one pair at one grid, from precomputed rescaled
/// coordinates, bin indices, and the lexicographic order of the points.
/// `order` sorts points by (x, y, index); both the origin points of a cell
/// and their forward images are materialised in that order, so each group
/// feeds the hull-based diameter directly.
double expansion_core(const double* sx, const double* sy, const uint8_t* bx, const uint8_t* by,
                      std::size_t n, int grid, int horizon, const uint32_t* order,
                      CellScratch& scratch) {
    const std::size_t h = static_cast<std::size_t>(horizon);
    const std::size_t n_origins = n - h;  // callers guarantee n > h
    const std::size_t n_cells = static_cast<std::size_t>(grid) * grid;

    auto& size = scratch.cell_size;
    auto& offs = scratch.offsets;
    auto& cur = scratch.cursor;
    if (size.size() < n_cells) {
        size.resize(n_cells);
        offs.resize(n_cells + 1);
        cur.resize(n_cells);
    }
    std::fill(size.begin(), size.begin() + n_cells, 0u);
    for (std::size_t i = 0; i < n_origins; ++i)
        ++size[static_cast<std::size_t>(bx[i]) * grid + by[i]];

    offs[0] = 0;
    for (std::size_t c = 0; c < n_cells; ++c) offs[c + 1] = offs[c] + size[c];

    auto& ox = scratch.origin_x;
    auto& oy = scratch.origin_y;
    auto& imx = scratch.image_x;
    auto& imy = scratch.image_y;
    if (ox.size() < n_origins) {
        ox.resize(n_origins);
        oy.resize(n_origins);
        imx.resize(n_origins);
        imy.resize(n_origins);
    }

    std::copy(offs.begin(), offs.begin() + n_cells, cur.begin());
    for (std::size_t k = 0; k < n; ++k) {
        const uint32_t i = order[k];
        if (i >= n_origins) continue;
        const std::size_t c = static_cast<std::size_t>(bx[i]) * grid + by[i];
        const uint32_t p = cur[c]++;
        ox[p] = sx[i];
        oy[p] = sy[i];
    }
    std::copy(offs.begin(), offs.begin() + n_cells, cur.begin());
    for (std::size_t k = 0; k < n; ++k) {
        const uint32_t j = order[k];
        if (j < h) continue;
        const uint32_t i = j - static_cast<uint32_t>(h);  // origin whose image j is
        const std::size_t c = static_cast<std::size_t>(bx[i]) * grid + by[i];
        const uint32_t p = cur[c]++;
        imx[p] = sx[j];
        imy[p] = sy[j];
    }

    KahanSum acc;
    std::size_t qualifying = 0;
    for (std::size_t c = 0; c < n_cells; ++c) {
        const std::size_t m = size[c];
        if (m < 2) continue;
        const std::size_t off = offs[c];
        const double d2 = diameter2_sorted(ox.data() + off, oy.data() + off, m, scratch.hull_x,
                                           scratch.hull_y);
        if (d2 <= 0.0) continue;
        const double big2 = diameter2_sorted(imx.data() + off, imy.data() + off, m,
                                             scratch.hull_x, scratch.hull_y);
        if (big2 <= 0.0) continue;
        acc.add(std::log(big2 / d2));  // = 2 ln(Delta/delta)
        ++qualifying;
    }
    if (qualifying == 0)
        throw Error("expansion undefined: no grid cell holds two distinct points at grid size " +
                    std::to_string(grid));
    return acc.value() / (2.0 * static_cast<double>(horizon) * static_cast<double>(qualifying));
}

void lexicographic_order(const double* sx, const double* sy, std::size_t n,
                         std::vector<uint32_t>& order) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (sx[a] != sx[b]) return sx[a] < sx[b];
        if (sy[a] != sy[b]) return sy[a] < sy[b];
        return a < b;
    });
}

void validate_pair_inputs(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw Error("channel lengths differ: " + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()));
    if (x.empty()) throw Error("channels are empty");
}

int resolve_thread_count(int requested, std::size_t jobs) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("MIRNET_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

int max_grid_size(std::span<const double> x, std::span<const double> y, int cap) {
    validate_pair_inputs(x, y);
    const std::size_t n = x.size();
    const int limit = cap > 0 ? std::min(cap, kHardGridLimit) : kHardGridLimit;
    if (limit < 2) throw Error("grid cap must be at least 2");

    std::vector<double> sx(n), sy(n);
    rescale_channel(x, sx.data(), "x");
    rescale_channel(y, sy.data(), "y");
    std::vector<uint8_t> bx(n), by(n);
    std::vector<uint8_t> seen(static_cast<std::size_t>(limit) * limit);

    for (int g = 2; g <= limit; ++g) {
        simd::bin_indices(sx.data(), n, g, bx.data());
        simd::bin_indices(sy.data(), n, g, by.data());
        std::fill(seen.begin(), seen.begin() + static_cast<std::size_t>(g) * g, uint8_t{0});
        uint64_t occupied = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = static_cast<std::size_t>(bx[i]) * g + by[i];
            if (!seen[c]) {
                seen[c] = 1;
                ++occupied;
            }
        }
        if (occupied * occupied > n) {
            if (g == 2)
                throw Error("insufficient data: the occupancy condition fails already at grid "
                            "size 2 (" +
                            std::to_string(n) + " samples over " + std::to_string(occupied) +
                            " occupied cells)");
            return g - 1;
        }
    }
    return limit;
}

double expansion_rate(std::span<const double> x, std::span<const double> y, int grid,
                      int horizon) {
    validate_pair_inputs(x, y);
    if (grid < 2 || grid > kHardGridLimit)
        throw Error("grid size must lie in [2, 255], got " + std::to_string(grid));
    if (horizon < 1) throw Error("horizon must be at least 1, got " + std::to_string(horizon));
    const std::size_t n = x.size();
    if (n <= static_cast<std::size_t>(horizon))
        throw Error("series of length " + std::to_string(n) +
                    " is too short for horizon " + std::to_string(horizon));

    std::vector<double> sx(n), sy(n);
    rescale_channel(x, sx.data(), "x");
    rescale_channel(y, sy.data(), "y");
    std::vector<uint8_t> bx(n), by(n);
    simd::bin_indices(sx.data(), n, grid, bx.data());
    simd::bin_indices(sy.data(), n, grid, by.data());
    std::vector<uint32_t> order;
    lexicographic_order(sx.data(), sy.data(), n, order);
    CellScratch scratch;
    return expansion_core(sx.data(), sy.data(), bx.data(), by.data(), n, grid, horizon,
                          order.data(), scratch);
}

double correlation_decay_time(int grid, double rate) {
    if (grid < 2) throw Error("grid size must be at least 2, got " + std::to_string(grid));
    if (!(rate > 0.0))
        throw Error("expansion rate must be positive to define a correlation decay time, got " +
                    std::to_string(rate));
    return std::log(static_cast<double>(grid)) / rate;
}

PairMir pair_mir(std::span<const double> x, std::span<const double> y, int grid, int horizon) {
    PairMir out;
    JointHistogram hist = build_joint_histogram(x, y, grid);
    out.mutual_information = mutual_information(hist);
    out.expansion = expansion_rate(x, y, grid, horizon);
    out.decay_time = correlation_decay_time(grid, out.expansion);
    out.mir = out.mutual_information / out.decay_time;
    return out;
}

std::vector<double> mir_hat_per_grid(std::span<const double> values, Warnings* warnings) {
    if (values.empty()) throw Error("cannot normalise an empty value set");
    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> out(values.size(), 0.0);
    if (hi == lo) {
        warn(warnings, "all pairs share the same value at this grid; normalised values set to 0");
        return out;
    }
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) * inv;
    return out;
}

std::vector<double> mir_bar(std::span<const double> pair_sums, Warnings* warnings) {
    if (pair_sums.empty()) throw Error("cannot normalise an empty value set");
    double hi = pair_sums[0];
    for (double v : pair_sums) hi = std::max(hi, v);
    std::vector<double> out(pair_sums.size(), 0.0);
    if (!(hi > 0.0)) {
        warn(warnings, "every pair sums to zero; final weights set to 0");
        return out;
    }
    for (std::size_t i = 0; i < pair_sums.size(); ++i) out[i] = pair_sums[i] / hi;
    return out;
}

std::size_t SweepResult::pair_index(std::size_t i, std::size_t j) const {
    const std::size_t m = labels.size();
    if (i == j || i >= m || j >= m) throw Error("invalid channel pair");
    if (i > j) std::swap(i, j);
    return i * (2 * m - i - 1) / 2 + (j - i - 1);
}

SweepResult sweep_all_pairs(const SeriesMatrix& data, const SweepOptions& options) {
    const std::size_t m = data.cols;
    const std::size_t n = data.rows;
    if (m < 2) throw Error("need at least 2 channels, got " + std::to_string(m));
    if (options.horizon < 1)
        throw Error("horizon must be at least 1, got " + std::to_string(options.horizon));
    if (n <= static_cast<std::size_t>(options.horizon) + 1)
        throw Error("series of length " + std::to_string(n) + " is too short for horizon " +
                    std::to_string(options.horizon));

    SweepResult result;
    result.labels = data.labels;
    result.is_reference = data.is_reference;
    result.horizon = options.horizon;

    // Rescale every channel to [0,1] once; bins and distances both live there.
    std::vector<double> scaled(m * n);
    for (std::size_t c = 0; c < m; ++c) {
        rescale_channel(data.channel(c), scaled.data() + c * n, data.labels[c]);
        double lo, hi;
        simd::minmax(data.channel(c).data(), n, &lo, &hi);
        if (hi == lo)
            warn(&result.warnings, "channel '" + data.labels[c] + "' is constant");
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) pairs.emplace_back(i, j);
    const std::size_t n_pairs = pairs.size();

    // Shared grid range: scan sizes upward until any pair's occupancy breaks
    // the informativeness condition (occupied^2 > samples); the largest size
    // every pair supports wins. Identical to min-over-pairs of max_grid_size.
    const int limit = options.grid_cap > 0 ? std::min(options.grid_cap, kHardGridLimit)
                                           : kHardGridLimit;
    if (limit < 2) throw Error("grid cap must be at least 2");
    int n_max = limit;
    {
        std::vector<uint8_t> bins(m * n);
        std::vector<uint8_t> seen(static_cast<std::size_t>(limit) * limit);
        for (int g = 2; g <= limit; ++g) {
            for (std::size_t c = 0; c < m; ++c)
                simd::bin_indices(scaled.data() + c * n, n, g, bins.data() + c * n);
            bool violated = false;
            for (const auto& [a, b] : pairs) {
                const uint8_t* bx = bins.data() + a * n;
                const uint8_t* by = bins.data() + b * n;
                std::fill(seen.begin(), seen.begin() + static_cast<std::size_t>(g) * g,
                          uint8_t{0});
                uint64_t occupied = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t cell = static_cast<std::size_t>(bx[i]) * g + by[i];
                    if (!seen[cell]) {
                        seen[cell] = 1;
                        ++occupied;
                    }
                }
                if (occupied * occupied > n) {
                    violated = true;
                    break;
                }
            }
            if (violated) {
                n_max = g - 1;
                break;
            }
        }
    }
    if (n_max < 2)
        throw Error("insufficient data: the occupancy condition fails already at grid size 2");
    result.n_max = n_max;

    const int n_lo = std::max(2, (n_max + 4) / 5);  // ceil(n_max / 5), in integers
    for (int g = n_lo; g <= n_max; ++g) result.grid_sizes.push_back(g);
    const std::size_t n_grids = result.grid_sizes.size();

    // Bin every channel once per grid size; pairs reuse these.
    std::vector<std::vector<uint8_t>> grid_bins(n_grids);
    for (std::size_t gi = 0; gi < n_grids; ++gi) {
        grid_bins[gi].resize(m * n);
        for (std::size_t c = 0; c < m; ++c)
            simd::bin_indices(scaled.data() + c * n, n, result.grid_sizes[gi],
                              grid_bins[gi].data() + c * n);
    }

    result.pairs.resize(n_pairs);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        result.pairs[p].a = pairs[p].first;
        result.pairs[p].b = pairs[p].second;
        result.pairs[p].mir.assign(n_grids, 0.0);
    }

    // Pairs are independent; each worker owns its scratch and writes only its
    // slot, so the result is identical for any thread count.
    const int n_threads = resolve_thread_count(options.threads, n_pairs);
    std::atomic<std::size_t> next_pair{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto run_pair = [&](std::size_t p, std::vector<uint32_t>& order, CellScratch& scratch) {
        PairSweep& ps = result.pairs[p];
        const double* sx = scaled.data() + ps.a * n;
        const double* sy = scaled.data() + ps.b * n;
        lexicographic_order(sx, sy, n, order);
        for (std::size_t gi = 0; gi < n_grids; ++gi) {
            const int g = result.grid_sizes[gi];
            const uint8_t* bx = grid_bins[gi].data() + ps.a * n;
            const uint8_t* by = grid_bins[gi].data() + ps.b * n;
            fill_from_bins(scratch.hist, bx, by, n, g);
            const double mi = mutual_information(scratch.hist);
            const double e1 =
                expansion_core(sx, sy, bx, by, n, g, options.horizon, order.data(), scratch);
            const double decay = correlation_decay_time(g, e1);
            ps.mir[gi] = mi / decay;
        }
    };

    auto worker = [&]() {
        std::vector<uint32_t> order;
        CellScratch scratch;
        for (;;) {
            const std::size_t p = next_pair.fetch_add(1);
            if (p >= n_pairs) return;
            try {
                run_pair(p, order, scratch);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Two-stage normalisation: min-max across pairs at each grid, then each
    // pair's sum over grids divided by the largest sum.
    std::vector<double> column(n_pairs);
    for (std::size_t gi = 0; gi < n_grids; ++gi) {
        for (std::size_t p = 0; p < n_pairs; ++p) column[p] = result.pairs[p].mir[gi];
        std::vector<double> normalised = mir_hat_per_grid(column, &result.warnings);
        for (std::size_t p = 0; p < n_pairs; ++p) {
            if (result.pairs[p].mir_hat.empty()) result.pairs[p].mir_hat.assign(n_grids, 0.0);
            result.pairs[p].mir_hat[gi] = normalised[p];
        }
    }
    std::vector<double> sums(n_pairs);
    for (std::size_t p = 0; p < n_pairs; ++p) {
        KahanSum acc;
        for (double v : result.pairs[p].mir_hat) acc.add(v);
        result.pairs[p].sum = acc.value();
        sums[p] = result.pairs[p].sum;
    }
    result.bar = mir_bar(sums, &result.warnings);
    return result;
}

}  // namespace mirnet
