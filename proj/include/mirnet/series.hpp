#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mirnet/error.hpp"

namespace mirnet {

/// Multivariate time series: `rows` samples of `cols` channels, stored
/// column-major so per-channel scans (the hot path) are contiguous.
struct SeriesMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;        ///< column-major, size rows*cols
    std::vector<std::string> labels;   ///< one per channel
    std::vector<uint8_t> is_reference; ///< one per channel; 1 for attached reference channels

    SeriesMatrix() = default;
    SeriesMatrix(std::size_t n_rows, std::size_t n_cols);

    double& at(std::size_t row, std::size_t col) { return values[col * rows + row]; }
    double at(std::size_t row, std::size_t col) const { return values[col * rows + row]; }

    /// Contiguous view of one channel.
    std::span<const double> channel(std::size_t col) const {
        return {values.data() + col * rows, rows};
    }
    std::span<double> channel(std::size_t col) {
        return {values.data() + col * rows, rows};
    }

    /// Indices of channels not flagged as reference channels.
    std::vector<std::size_t> data_channels() const;
    /// Indices of channels flagged as reference channels.
    std::vector<std::size_t> reference_channels() const;
};

/// Reads a CSV of numeric columns. With `has_header`, the first line names
/// the channels; otherwise channels are labelled c1..cM. Errors name the
/// offending 1-based file line and column: ragged rows, unparsable or
/// non-finite cells, fewer than 2 data rows, fewer than 2 columns.
SeriesMatrix load_csv(const std::string& path, bool has_header);

/// Writes `m` as CSV; header row iff `with_header`. Doubles use the shortest
/// representation that round-trips exactly.
void save_csv(const std::string& path, const SeriesMatrix& m, bool with_header = true);

/// Log-returns transform for price series: out[t][m] = ln(in[t+1][m] / in[t][m]),
/// one fewer row. Errors on any non-positive input value, naming row/column.
SeriesMatrix log_returns(const SeriesMatrix& prices);

}  // namespace mirnet
