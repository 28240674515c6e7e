#include "mirnet/datagen.hpp"

#include <cmath>
#include <string>

#include "mirnet/rng.hpp"

namespace mirnet {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

double circle_map(double x, double r, double k) {
    double v = x + r - (k / kTwoPi) * std::sin(kTwoPi * x);
    v = std::fmod(v, 1.0);
    if (v < 0.0) v += 1.0;
    return v;
}

double logistic_map(double x, double r) { return r * x * (1.0 - x); }

void validate_coupling(const CouplingSpec& spec) {
    const std::size_t n = spec.nodes;
    if (n == 0) throw Error("coupled map network needs at least 1 node");
    if (spec.adjacency.size() != n * n)
        throw Error("adjacency has " + std::to_string(spec.adjacency.size()) +
                    " entries, expected " + std::to_string(n * n) + " for " + std::to_string(n) +
                    " nodes");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            uint8_t a = spec.adjacency[i * n + j];
            if (a != 0 && a != 1)
                throw Error("adjacency entries must be 0 or 1 (found " + std::to_string(int(a)) +
                            " at " + std::to_string(i) + "," + std::to_string(j) + ")");
        }
        if (spec.adjacency[i * n + i] != 0)
            throw Error("adjacency diagonal must be zero (node " + std::to_string(i) +
                        " couples to itself)");
    }
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0))
        throw Error("coupling strength alpha must lie in [0,1], got " +
                    std::to_string(spec.alpha));
    if (spec.length == 0) throw Error("series length must be positive");
}

}  // namespace

std::vector<uint8_t> ring_with_chords_adjacency(std::size_t n) {
    if (n < 3) throw Error("ring topology needs at least 3 nodes");
    std::vector<uint8_t> a(n * n, 0);
    auto link = [&](std::size_t i, std::size_t j) {
        a[i * n + j] = 1;
        a[j * n + i] = 1;
    };
    for (std::size_t i = 0; i < n; ++i) link(i, (i + 1) % n);
    if (n == 16) {
        link(0, 8);
        link(0, 4);
        link(8, 12);
        link(2, 10);
    }
    return a;
}

SeriesMatrix gen_coupled_map_network(const CouplingSpec& spec, Warnings* warnings) {
    validate_coupling(spec);
    const std::size_t n = spec.nodes;
    const double alpha = spec.alpha;
    const double r = spec.map_r.value_or(spec.map == MapKind::circle ? 0.35 : 4.0);
    const double k = spec.map_k;

    std::vector<double> degree(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) d += spec.adjacency[i * n + j];
        degree[i] = d;
        if (d == 0.0 && alpha > 0.0)
            warn(warnings, "node " + std::to_string(i + 1) +
                               " has no inputs and runs its map autonomously");
    }

    Rng rng(spec.seed);
    std::vector<double> x(n), fx(n), next(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = rng.uniform01();
        // 0 is a fixed point of the logistic map; nudge the measure-zero draw.
        if (spec.map == MapKind::logistic && v == 0.0) v = 0.5;
        x[i] = v;
    }

    SeriesMatrix out(spec.length, n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = "n" + std::to_string(i + 1);

    const std::size_t total = spec.transient + spec.length;
    for (std::size_t step = 0; step < total; ++step) {
        for (std::size_t i = 0; i < n; ++i)
            fx[i] = spec.map == MapKind::circle ? circle_map(x[i], r, k) : logistic_map(x[i], r);
        for (std::size_t i = 0; i < n; ++i) {
            // A node with no inputs runs its map autonomously; damping it by
            // (1 - alpha) would change its effective map parameter.
            double v = fx[i];
            if (degree[i] > 0.0) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (spec.adjacency[i * n + j]) s += fx[j];
                v = (1.0 - alpha) * fx[i] + (alpha / degree[i]) * s;
            }
            if (spec.map == MapKind::circle) {
                if (!(v >= 0.0 && v < 1.0))
                    throw Error("circle-map iterate left [0,1) at step " + std::to_string(step) +
                                ", node " + std::to_string(i + 1) + ": " + std::to_string(v));
            } else {
                if (!(v >= 0.0 && v <= 1.0))
                    throw Error("logistic-map iterate left [0,1] at step " + std::to_string(step) +
                                ", node " + std::to_string(i + 1) + ": " + std::to_string(v));
            }
            next[i] = v;
        }
        x.swap(next);
        if (step >= spec.transient)
            for (std::size_t i = 0; i < n; ++i) out.at(step - spec.transient, i) = x[i];
    }
    return out;
}

namespace {

/// Jacobi eigen-decomposition of a symmetric matrix (column eigenvectors).
/// Plenty for the small covariance blocks this generator accepts.
void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& eigvals,
                  std::vector<double>& eigvecs) {
    eigvecs.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) eigvecs[i * n + i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double app = a[p * n + p];
                double aqq = a[q * n + q];
                double theta = (aqq - app) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a[i * n + p];
                    double aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = a[p * n + i];
                    double aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = eigvecs[i * n + p];
                    double viq = eigvecs[i * n + q];
                    eigvecs[i * n + p] = c * vip - s * viq;
                    eigvecs[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    eigvals.resize(n);
    for (std::size_t i = 0; i < n; ++i) eigvals[i] = a[i * n + i];
}

}  // namespace

SeriesMatrix gen_correlated_gaussians(const GaussianBlockSpec& spec) {
    if (spec.blocks.empty()) throw Error("at least one covariance block is required");
    if (spec.length < 2) throw Error("series length must be at least 2");

    std::size_t total_dim = 0;
    for (const auto& b : spec.blocks) {
        if (b.dim == 0) throw Error("covariance block has zero dimension");
        if (b.values.size() != b.dim * b.dim)
            throw Error("covariance block has " + std::to_string(b.values.size()) +
                        " entries, expected " + std::to_string(b.dim * b.dim));
        total_dim += b.dim;
    }

    // Factor each block as L = V diag(sqrt(max(lambda,0))) so that x = L z
    // has covariance V diag(lambda+) V^T. Eigenfactorisation (not Cholesky)
    // so that exactly singular blocks are accepted.
    std::vector<std::vector<double>> factors;
    for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
        const auto& b = spec.blocks[bi];
        const std::size_t d = b.dim;
        double max_abs = 1.0;
        for (double v : b.values) max_abs = std::max(max_abs, std::abs(v));
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                if (std::abs(b.values[i * d + j] - b.values[j * d + i]) > 1e-9 * max_abs)
                    throw Error("covariance block " + std::to_string(bi + 1) +
                                " is not symmetric");

        std::vector<double> eigvals, eigvecs;
        jacobi_eigen(b.values, d, eigvals, eigvecs);
        double lambda_max = 0.0;
        double lambda_min = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            lambda_max = std::max(lambda_max, eigvals[i]);
            lambda_min = std::min(lambda_min, eigvals[i]);
        }
        if (lambda_min < -1e-10 * std::max(1.0, lambda_max))
            throw Error("covariance block " + std::to_string(bi + 1) +
                        " is not positive semidefinite (minimum eigenvalue " +
                        std::to_string(lambda_min) + ")");
        std::vector<double> L(d * d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                L[i * d + j] = eigvecs[i * d + j] * std::sqrt(std::max(eigvals[j], 0.0));
        factors.push_back(std::move(L));
    }

    SeriesMatrix out(spec.length, total_dim);
    for (std::size_t c = 0; c < total_dim; ++c) out.labels[c] = "x" + std::to_string(c + 1);

    Rng rng(spec.seed);
    std::vector<double> z;
    for (std::size_t t = 0; t < spec.length; ++t) {
        std::size_t base = 0;
        for (std::size_t bi = 0; bi < spec.blocks.size(); ++bi) {
            const std::size_t d = spec.blocks[bi].dim;
            const auto& L = factors[bi];
            z.resize(d);
            for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
            for (std::size_t i = 0; i < d; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < d; ++j) s += L[i * d + j] * z[j];
                out.at(t, base + i) = s;
            }
            base += d;
        }
    }
    return out;
}

SeriesMatrix gen_uniform_pair(std::size_t length, uint64_t seed) {
    if (length == 0) throw Error("series length must be positive");
    SeriesMatrix out(length, 2);
    out.labels = {"u1", "u2"};
    Rng rng(seed);
    for (std::size_t t = 0; t < length; ++t) {
        out.at(t, static_cast<std::size_t>(0)) = rng.uniform01();
        out.at(t, static_cast<std::size_t>(1)) = rng.uniform01();
    }
    return out;
}

SeriesMatrix gen_directed_logistic_pair(std::size_t length, std::size_t transient, double alpha,
                                        uint64_t seed) {
    CouplingSpec spec;
    spec.nodes = 2;
    spec.adjacency = {0, 1,   // d1 receives from d2
                      0, 0};  // d2 runs free
    spec.alpha = alpha;
    spec.map = MapKind::logistic;
    spec.length = length;
    spec.transient = transient;
    spec.seed = seed;
    SeriesMatrix out = gen_coupled_map_network(spec);
    out.labels = {"d1", "d2"};
    return out;
}

SeriesMatrix attach_reference_pair(const SeriesMatrix& data, const SeriesMatrix& ref,
                                   Warnings* warnings) {
    if (ref.cols != 2)
        throw Error("reference pair must have exactly 2 channels, got " + std::to_string(ref.cols));
    if (!data.reference_channels().empty())
        throw Error("a reference pair is already attached to this series");

    std::size_t rows = std::min(data.rows, ref.rows);
    if (rows == 0) throw Error("cannot attach a reference pair to an empty series");
    if (data.rows != ref.rows)
        warn(warnings, "reference pair length " + std::to_string(ref.rows) +
                           " differs from series length " + std::to_string(data.rows) +
                           "; both truncated to " + std::to_string(rows) + " rows");

    SeriesMatrix out(rows, data.cols + 2);
    for (std::size_t c = 0; c < data.cols; ++c) {
        out.labels[c] = data.labels[c];
        for (std::size_t t = 0; t < rows; ++t) out.at(t, c) = data.at(t, c);
    }
    out.labels[data.cols] = "_ref1";
    out.labels[data.cols + 1] = "_ref2";
    out.is_reference[data.cols] = 1;
    out.is_reference[data.cols + 1] = 1;
    for (std::size_t t = 0; t < rows; ++t) {
        out.at(t, data.cols) = ref.at(t, static_cast<std::size_t>(0));
        out.at(t, data.cols + 1) = ref.at(t, static_cast<std::size_t>(1));
    }
    return out;
}

}  // namespace mirnet
