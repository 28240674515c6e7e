#include "mirnet/series.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mirnet {

SeriesMatrix::SeriesMatrix(std::size_t n_rows, std::size_t n_cols)
    : rows(n_rows),
      cols(n_cols),
      values(n_rows * n_cols, 0.0),
      labels(n_cols),
      is_reference(n_cols, 0) {}

std::vector<std::size_t> SeriesMatrix::data_channels() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols; ++c)
        if (is_reference[c] == 0) out.push_back(c);
    return out;
}

std::vector<std::size_t> SeriesMatrix::reference_channels() const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cols; ++c)
        if (is_reference[c] != 0) out.push_back(c);
    return out;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

double parse_cell(const std::string& field, std::size_t file_line, std::size_t column) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw Error("cannot parse '" + field + "' as a number at line " +
                    std::to_string(file_line) + " column " + std::to_string(column));
    if (!std::isfinite(v))
        throw Error("non-finite value at line " + std::to_string(file_line) + " column " +
                    std::to_string(column));
    return v;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

SeriesMatrix load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) lines.push_back(line);
    }
    if (lines.empty()) throw Error("'" + path + "' is empty");

    std::size_t first_data = has_header ? 1 : 0;
    if (lines.size() <= first_data) throw Error("'" + path + "' has a header but no data rows");

    std::vector<std::string> header;
    std::size_t n_cols = 0;
    if (has_header) {
        header = split_fields(lines[0]);
        n_cols = header.size();
    } else {
        n_cols = split_fields(lines[0]).size();
    }
    if (n_cols < 2) throw Error("'" + path + "' has " + std::to_string(n_cols) +
                                " column(s); at least 2 channels are required");

    std::size_t n_rows = lines.size() - first_data;
    if (n_rows < 2) throw Error("'" + path + "' has " + std::to_string(n_rows) +
                                " data row(s); at least 2 are required");

    SeriesMatrix m(n_rows, n_cols);
    for (std::size_t c = 0; c < n_cols; ++c)
        m.labels[c] = has_header ? header[c] : "c" + std::to_string(c + 1);

    for (std::size_t r = 0; r < n_rows; ++r) {
        std::size_t file_line = first_data + r + 1;  // 1-based line in the file
        auto fields = split_fields(lines[first_data + r]);
        if (fields.size() != n_cols)
            throw Error("line " + std::to_string(file_line) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(n_cols));
        for (std::size_t c = 0; c < n_cols; ++c)
            m.at(r, c) = parse_cell(fields[c], file_line, c + 1);
    }
    return m;
}

void save_csv(const std::string& path, const SeriesMatrix& m, bool with_header) {
    std::ostringstream out;
    if (with_header) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << m.labels[c];
        }
        out << '\n';
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) out << ',';
            out << format_double(m.at(r, c));
        }
        out << '\n';
    }
    // Temp-and-rename so readers never see a half-written file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open '" + tmp + "' for writing");
        const std::string body = out.str();
        f.write(body.data(), static_cast<std::streamsize>(body.size()));
        if (!f) throw Error("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

SeriesMatrix log_returns(const SeriesMatrix& prices) {
    if (prices.rows < 2) throw Error("log-returns need at least 2 rows");
    SeriesMatrix out(prices.rows - 1, prices.cols);
    out.labels = prices.labels;
    out.is_reference = prices.is_reference;
    for (std::size_t c = 0; c < prices.cols; ++c) {
        for (std::size_t r = 0; r < prices.rows; ++r) {
            if (prices.at(r, c) <= 0.0)
                throw Error("non-positive price at row " + std::to_string(r + 1) + " column " +
                            std::to_string(c + 1) + "; log-returns need positive values");
        }
        for (std::size_t r = 0; r + 1 < prices.rows; ++r)
            out.at(r, c) = std::log(prices.at(r + 1, c) / prices.at(r, c));
    }
    return out;
}

}  // namespace mirnet
