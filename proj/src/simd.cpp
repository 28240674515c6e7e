// Kernel lanes for the per-element hot loops. This translation unit is
// compiled with -ffp-contract=off so the scalar lane performs the same
// sub/mul/add sequence as the vector lanes (no FMA fusion); together with
// order-insensitive min/max reductions that makes every lane bitwise equal.

#include "mirnet/simd.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#define MIRNET_X86 1
#include <immintrin.h>
#endif

#if defined(__aarch64__)
#define MIRNET_NEON 1
#include <arm_neon.h>
#endif

namespace mirnet::simd {

namespace {

// ---------------------------------------------------------------- scalar

void rescale01_scalar(const double* x, std::size_t n, double lo, double inv_range, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - lo) * inv_range;
}

void bin_indices_scalar(const double* unit, std::size_t n, int grid, std::uint8_t* out) {
    const double g = static_cast<double>(grid);
    const int top = grid - 1;
    for (std::size_t i = 0; i < n; ++i) {
        int idx = static_cast<int>(unit[i] * g);
        if (idx > top) idx = top;
        out[i] = static_cast<std::uint8_t>(idx);
    }
}

void minmax_scalar(const double* x, std::size_t n, double* lo, double* hi) {
    double mn = x[0];
    double mx = x[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] < mn) mn = x[i];
        if (x[i] > mx) mx = x[i];
    }
    *lo = mn;
    *hi = mx;
}

double max_pair_dist2_scalar(const double* xs, const double* ys, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double xi = xs[i];
        const double yi = ys[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = xs[j] - xi;
            const double dy = ys[j] - yi;
            const double d2 = dx * dx + dy * dy;
            if (d2 > best) best = d2;
        }
    }
    return best;
}

#if MIRNET_X86

// ----------------------------------------------------------------- AVX2
// Each element undergoes the identical sub/mul/add sequence as the scalar
// lane; reductions use min/max only, so lane outputs match bit for bit.

__attribute__((target("avx2"))) void rescale01_avx2(const double* x, std::size_t n, double lo,
                                                    double inv_range, double* out) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vinv = _mm256_set1_pd(inv_range);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        v = _mm256_mul_pd(_mm256_sub_pd(v, vlo), vinv);
        _mm256_storeu_pd(out + i, v);
    }
    for (; i < n; ++i) out[i] = (x[i] - lo) * inv_range;
}

__attribute__((target("avx2"))) void bin_indices_avx2(const double* unit, std::size_t n, int grid,
                                                      std::uint8_t* out) {
    const __m256d vg = _mm256_set1_pd(static_cast<double>(grid));
    const __m128i vtop = _mm_set1_epi32(grid - 1);
    const double g = static_cast<double>(grid);
    const int top = grid - 1;
    std::size_t i = 0;
    alignas(16) int lanes[4];
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_mul_pd(_mm256_loadu_pd(unit + i), vg);
        __m128i idx = _mm256_cvttpd_epi32(v);  // truncates toward zero, like (int) cast
        idx = _mm_min_epi32(idx, vtop);
        _mm_store_si128(reinterpret_cast<__m128i*>(lanes), idx);
        out[i + 0] = static_cast<std::uint8_t>(lanes[0]);
        out[i + 1] = static_cast<std::uint8_t>(lanes[1]);
        out[i + 2] = static_cast<std::uint8_t>(lanes[2]);
        out[i + 3] = static_cast<std::uint8_t>(lanes[3]);
    }
    for (; i < n; ++i) {
        int idx = static_cast<int>(unit[i] * g);
        if (idx > top) idx = top;
        out[i] = static_cast<std::uint8_t>(idx);
    }
}

__attribute__((target("avx2"))) void minmax_avx2(const double* x, std::size_t n, double* lo,
                                                 double* hi) {
    if (n < 8) {
        minmax_scalar(x, n, lo, hi);
        return;
    }
    __m256d vmn = _mm256_loadu_pd(x);
    __m256d vmx = vmn;
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(x + i);
        vmn = _mm256_min_pd(vmn, v);
        vmx = _mm256_max_pd(vmx, v);
    }
    alignas(32) double mns[4];
    alignas(32) double mxs[4];
    _mm256_store_pd(mns, vmn);
    _mm256_store_pd(mxs, vmx);
    double mn = mns[0];
    double mx = mxs[0];
    for (int k = 1; k < 4; ++k) {
        if (mns[k] < mn) mn = mns[k];
        if (mxs[k] > mx) mx = mxs[k];
    }
    for (; i < n; ++i) {
        if (x[i] < mn) mn = x[i];
        if (x[i] > mx) mx = x[i];
    }
    *lo = mn;
    *hi = mx;
}

__attribute__((target("avx2"))) double max_pair_dist2_avx2(const double* xs, const double* ys,
                                                           std::size_t n) {
    double best = 0.0;
    __m256d vbest = _mm256_setzero_pd();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const __m256d xi = _mm256_set1_pd(xs[i]);
        const __m256d yi = _mm256_set1_pd(ys[i]);
        std::size_t j = i + 1;
        for (; j + 4 <= n; j += 4) {
            const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + j), xi);
            const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + j), yi);
            const __m256d d2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
            vbest = _mm256_max_pd(vbest, d2);
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            const double d2 = dx * dx + dy * dy;
            if (d2 > best) best = d2;
        }
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vbest);
    for (int k = 0; k < 4; ++k)
        if (lanes[k] > best) best = lanes[k];
    return best;
}

#endif  // MIRNET_X86

#if MIRNET_NEON

// ----------------------------------------------------------------- NEON
// Same op-for-op structure as the AVX2 lane, two doubles per vector.

void rescale01_neon(const double* x, std::size_t n, double lo, double inv_range, double* out) {
    const float64x2_t vlo = vdupq_n_f64(lo);
    const float64x2_t vinv = vdupq_n_f64(inv_range);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        v = vmulq_f64(vsubq_f64(v, vlo), vinv);
        vst1q_f64(out + i, v);
    }
    for (; i < n; ++i) out[i] = (x[i] - lo) * inv_range;
}

void bin_indices_neon(const double* unit, std::size_t n, int grid, std::uint8_t* out) {
    const float64x2_t vg = vdupq_n_f64(static_cast<double>(grid));
    const int64x2_t vtop = vdupq_n_s64(grid - 1);
    const double g = static_cast<double>(grid);
    const int top = grid - 1;
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vmulq_f64(vld1q_f64(unit + i), vg);
        int64x2_t idx = vcvtq_s64_f64(v);  // rounds toward zero, like (int) cast
        // NEON has no 64-bit integer min; clamp via compare-and-select.
        idx = vbslq_s64(vcgtq_s64(idx, vtop), vtop, idx);
        out[i + 0] = static_cast<std::uint8_t>(vgetq_lane_s64(idx, 0));
        out[i + 1] = static_cast<std::uint8_t>(vgetq_lane_s64(idx, 1));
    }
    for (; i < n; ++i) {
        int idx = static_cast<int>(unit[i] * g);
        if (idx > top) idx = top;
        out[i] = static_cast<std::uint8_t>(idx);
    }
}

void minmax_neon(const double* x, std::size_t n, double* lo, double* hi) {
    if (n < 4) {
        minmax_scalar(x, n, lo, hi);
        return;
    }
    float64x2_t vmn = vld1q_f64(x);
    float64x2_t vmx = vmn;
    std::size_t i = 2;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        vmn = vminq_f64(vmn, v);
        vmx = vmaxq_f64(vmx, v);
    }
    double mn = vgetq_lane_f64(vmn, 0);
    double mx = vgetq_lane_f64(vmx, 0);
    if (vgetq_lane_f64(vmn, 1) < mn) mn = vgetq_lane_f64(vmn, 1);
    if (vgetq_lane_f64(vmx, 1) > mx) mx = vgetq_lane_f64(vmx, 1);
    for (; i < n; ++i) {
        if (x[i] < mn) mn = x[i];
        if (x[i] > mx) mx = x[i];
    }
    *lo = mn;
    *hi = mx;
}

double max_pair_dist2_neon(const double* xs, const double* ys, std::size_t n) {
    double best = 0.0;
    float64x2_t vbest = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const float64x2_t xi = vdupq_n_f64(xs[i]);
        const float64x2_t yi = vdupq_n_f64(ys[i]);
        std::size_t j = i + 1;
        for (; j + 2 <= n; j += 2) {
            const float64x2_t dx = vsubq_f64(vld1q_f64(xs + j), xi);
            const float64x2_t dy = vsubq_f64(vld1q_f64(ys + j), yi);
            const float64x2_t d2 = vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy));
            vbest = vmaxq_f64(vbest, d2);
        }
        for (; j < n; ++j) {
            const double dx = xs[j] - xs[i];
            const double dy = ys[j] - ys[i];
            const double d2 = dx * dx + dy * dy;
            if (d2 > best) best = d2;
        }
    }
    if (vgetq_lane_f64(vbest, 0) > best) best = vgetq_lane_f64(vbest, 0);
    if (vgetq_lane_f64(vbest, 1) > best) best = vgetq_lane_f64(vbest, 1);
    return best;
}

#endif  // MIRNET_NEON

const KernelTable kScalarTable = {rescale01_scalar, bin_indices_scalar, minmax_scalar,
                                  max_pair_dist2_scalar};
#if MIRNET_X86
const KernelTable kAvx2Table = {rescale01_avx2, bin_indices_avx2, minmax_avx2,
                                max_pair_dist2_avx2};
#endif
#if MIRNET_NEON
const KernelTable kNeonTable = {rescale01_neon, bin_indices_neon, minmax_neon,
                                max_pair_dist2_neon};
#endif

Lane detect_lane() {
    const char* forced = std::getenv("MIRNET_SIMD");
    if (forced != nullptr) {
        if (std::strcmp(forced, "scalar") == 0) return Lane::scalar;
        Lane want;
        if (std::strcmp(forced, "avx2") == 0) {
            want = Lane::avx2;
        } else if (std::strcmp(forced, "neon") == 0) {
            want = Lane::neon;
        } else {
            std::fprintf(stderr, "warning: unknown MIRNET_SIMD value '%s'; auto-detecting\n",
                         forced);
            want = Lane::scalar;  // fall through to auto-detect below
            forced = nullptr;
        }
        if (forced != nullptr) {
            if (lane_available(want)) return want;
            std::fprintf(stderr, "warning: MIRNET_SIMD=%s not available on this CPU; using scalar\n",
                         forced);
            return Lane::scalar;
        }
    }
#if MIRNET_X86
    if (lane_available(Lane::avx2)) return Lane::avx2;
#endif
#if MIRNET_NEON
    return Lane::neon;
#endif
    return Lane::scalar;
}

}  // namespace

bool lane_available(Lane lane) {
    switch (lane) {
        case Lane::scalar:
            return true;
        case Lane::avx2:
#if MIRNET_X86
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Lane::neon:
#if MIRNET_NEON
            return true;
#else
            return false;
#endif
    }
    return false;
}

Lane active_lane() {
    static const Lane lane = detect_lane();
    return lane;
}

const char* lane_name(Lane lane) {
    switch (lane) {
        case Lane::scalar: return "scalar";
        case Lane::avx2: return "avx2";
        case Lane::neon: return "neon";
    }
    return "?";
}

const KernelTable& kernels(Lane lane) {
    switch (lane) {
#if MIRNET_X86
        case Lane::avx2:
            return kAvx2Table;
#endif
#if MIRNET_NEON
        case Lane::neon:
            return kNeonTable;
#endif
        default:
            return kScalarTable;
    }
}

void rescale01(const double* x, std::size_t n, double lo, double inv_range, double* out) {
    kernels(active_lane()).rescale01(x, n, lo, inv_range, out);
}

void bin_indices(const double* unit, std::size_t n, int grid, std::uint8_t* out) {
    kernels(active_lane()).bin_indices(unit, n, grid, out);
}

void minmax(const double* x, std::size_t n, double* lo, double* hi) {
    kernels(active_lane()).minmax(x, n, lo, hi);
}

double max_pair_dist2(const double* xs, const double* ys, std::size_t n) {
    return kernels(active_lane()).max_pair_dist2(xs, ys, n);
}

}  // namespace mirnet::simd
