#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mirnet/error.hpp"
#include "mirnet/series.hpp"

namespace mirnet {

/// One-dimensional maps driving the coupled-network generator.
///   circle:   f(x) = x + r - k/(2*pi) * sin(2*pi*x)  (mod 1)
///   logistic: f(x) = r * x * (1 - x)
enum class MapKind { circle, logistic };

/// Coupled map network: x_{n+1}[i] = (1-alpha) f(x_n[i])
///                                   + alpha/k_i * sum_j A[i][j] f(x_n[j])
/// where k_i is the number of inputs of node i. Nodes with k_i = 0 evolve
/// with a zero coupling term (warned about when alpha > 0, since the update
/// then deliberately loses weight).
struct CouplingSpec {
    std::size_t nodes = 0;
    /// Row-major nodes*nodes 0/1 matrix; A[i][j] = 1 means node i receives
    /// input from node j. Symmetric for undirected networks, but directed
    /// wiring is allowed. Diagonal must be zero.
    std::vector<uint8_t> adjacency;
    double alpha = 0.0;
    MapKind map = MapKind::circle;
    /// Map parameter r; defaults to 0.35 for circle, 4.0 for logistic.
    std::optional<double> map_r;
    /// Circle-map nonlinearity strength k (ignored by the logistic map).
    double map_k = 6.9115;
    std::size_t length = 100000;
    std::size_t transient = 1000;
    uint64_t seed = 1;
};

/// Runs the coupled map network and returns `length` post-transient samples,
/// channels labelled n1..nM. Errors: empty/ill-shaped adjacency, entries
/// outside {0,1}, nonzero diagonal, alpha outside [0,1], zero length, or a
/// map iterate leaving its domain ([0,1) circle, [0,1] logistic).
SeriesMatrix gen_coupled_map_network(const CouplingSpec& spec, Warnings* warnings = nullptr);

/// Block-diagonal correlated Gaussians: each block is an independent group
/// of jointly Gaussian channels with the given covariance.
struct CovarianceBlock {
    std::size_t dim = 0;
    std::vector<double> values;  ///< row-major dim*dim
};

struct GaussianBlockSpec {
    std::vector<CovarianceBlock> blocks;
    std::size_t length = 100000;
    uint64_t seed = 1;
};

/// Samples the block-diagonal Gaussian model, channels labelled x1..xM.
/// Each block must be symmetric and positive semidefinite: eigenvalues may
/// not fall below -1e-10 * max(1, lambda_max), or the block is rejected with
/// an error. Sampling uses the eigenfactorisation (negative dust clipped to
/// zero), so exactly singular covariances are fine.
SeriesMatrix gen_correlated_gaussians(const GaussianBlockSpec& spec);

/// Two independent channels of uniform noise on [0,1), labelled u1, u2.
/// This is the reference pair for data expected to carry no structure.
SeriesMatrix gen_uniform_pair(std::size_t length, uint64_t seed);

/// Two logistic maps (r = 4) with one-way coupling: channel d1 receives
/// from channel d2 with strength alpha, d2 runs free. This is the reference
/// pair whose weight marks the "genuine interaction" level.
SeriesMatrix gen_directed_logistic_pair(std::size_t length, std::size_t transient, double alpha,
                                        uint64_t seed);

/// Appends `ref` (exactly 2 channels) to `data` as reference channels
/// labelled _ref1 and _ref2. On length mismatch both are truncated to the
/// shorter and a warning is recorded. Errors if `data` already carries
/// reference channels or `ref` does not have exactly 2.
SeriesMatrix attach_reference_pair(const SeriesMatrix& data, const SeriesMatrix& ref,
                                   Warnings* warnings = nullptr);

/// Ring-plus-chords topology used by the 16-node demo network: nodes in a
/// cycle, plus chords {0-8, 0-4, 8-12, 2-10} when n = 16.
std::vector<uint8_t> ring_with_chords_adjacency(std::size_t n);

}  // namespace mirnet
