#include "kaczmarz/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kaczmarz {

namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
    throw std::runtime_error(source + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

DenseMatrix read_matrix_market(std::istream& in, const std::string& source_name) {
    std::string line;
    int line_no = 0;

    if (!std::getline(in, line)) fail(source_name, 1, "empty file");
    ++line_no;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        fail(source_name, line_no, "not a MatrixMarket matrix file");
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (field != "real") fail(source_name, line_no, "only real matrices are supported");
    if (symmetry != "general") fail(source_name, line_no, "only general symmetry is supported");
    if (format != "array" && format != "coordinate")
        fail(source_name, line_no, "unknown format '" + format + "'");

    // Skip comments and blank lines up to the size line.
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '%') continue;
        break;
    }
    if (!in && line.empty()) fail(source_name, line_no, "missing size line");

    std::istringstream size_line(line);
    if (format == "array") {
        int m = 0, n = 0;
        if (!(size_line >> m >> n)) fail(source_name, line_no, "malformed size line");
        if (m < 1 || n < 1) fail(source_name, line_no, "dimensions must be positive");
        std::vector<double> data(static_cast<std::size_t>(m) * n);
        // Array format lists entries in column-major order.
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i) {
                double v;
                if (!(in >> v)) fail(source_name, line_no, "too few entries for array format");
                data[static_cast<std::size_t>(i) * n + j] = v;
            }
        return DenseMatrix(m, n, std::move(data));
    }

    int m = 0, n = 0;
    long nnz = 0;
    if (!(size_line >> m >> n >> nnz)) fail(source_name, line_no, "malformed size line");
    if (m < 1 || n < 1 || nnz < 0) fail(source_name, line_no, "bad coordinate sizes");
    std::vector<double> data(static_cast<std::size_t>(m) * n, 0.0);
    for (long e = 0; e < nnz; ++e) {
        int i, j;
        double v;
        if (!(in >> i >> j >> v)) fail(source_name, line_no, "too few coordinate entries");
        if (i < 1 || i > m || j < 1 || j > n)
            fail(source_name, line_no,
                 "coordinate (" + std::to_string(i) + "," + std::to_string(j) + ") out of range");
        data[static_cast<std::size_t>(i - 1) * n + (j - 1)] = v;
    }
    return DenseMatrix(m, n, std::move(data));
}

DenseMatrix read_matrix_market_file(const std::string& path) {
    auto in = open_in(path);
    return read_matrix_market(in, path);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& A, MatrixMarketFormat format) {
    if (format == MatrixMarketFormat::Array) {
        out << "%%MatrixMarket matrix array real general\n";
        out << A.rows() << " " << A.cols() << "\n";
        for (int j = 0; j < A.cols(); ++j)
            for (int i = 0; i < A.rows(); ++i) out << format_double(A.entry(i, j)) << "\n";
        return;
    }
    long nnz = 0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (A.entry(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << A.rows() << " " << A.cols() << " " << nnz << "\n";
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (A.entry(i, j) != 0.0)
                out << (i + 1) << " " << (j + 1) << " " << format_double(A.entry(i, j)) << "\n";
}

void write_matrix_market_file(const std::string& path, const DenseMatrix& A,
                              MatrixMarketFormat format) {
    auto out = open_out(path);
    write_matrix_market(out, A, format);
}

std::vector<double> read_vector(std::istream& in, const std::string& source_name) {
    std::vector<double> v;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            try {
                std::size_t used = 0;
                const double value = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
                v.push_back(value);
            } catch (const std::exception&) {
                fail(source_name, line_no, "not a number: '" + token + "'");
            }
        }
    }
    return v;
}

std::vector<double> read_vector_file(const std::string& path) {
    auto in = open_in(path);
    return read_vector(in, path);
}

void write_vector(std::ostream& out, std::span<const double> v) {
    for (double e : v) out << format_double(e) << "\n";
}

void write_vector_file(const std::string& path, std::span<const double> v) {
    auto out = open_out(path);
    write_vector(out, v);
}

std::pair<std::vector<int>, std::vector<int>> read_schedule_file(const std::string& path) {
    auto in = open_in(path);
    std::vector<int> rows, cols;
    std::vector<int>* current = &rows;
    std::string line;
    int line_no = 0;
    bool seen_separator = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) {  // blank line separates the sections
            if (!rows.empty() && !seen_separator) {
                seen_separator = true;
                current = &cols;
            }
            continue;
        }
        if (line[pos] == '#') continue;
        try {
            current->push_back(std::stoi(line));
        } catch (const std::exception&) {
            fail(path, line_no, "not an index: '" + line + "'");
        }
    }
    return {std::move(rows), std::move(cols)};
}

void write_schedule_file(const std::string& path, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
    auto out = open_out(path);
    for (int i : rows) out << i << "\n";
    out << "\n";
    for (int j : cols) out << j << "\n";
}

const char* const kHistoryCsvHeader =
    "k,j_k,i_k,y_err,gamma_norm,x_err,dist_lss,row_resid_corrected,row_resid_clean";

namespace {

void put_opt(std::ostream& out, const std::optional<double>& v) {
    if (v) out << format_double(*v);
}

}  // namespace

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
    out << kHistoryCsvHeader << "\n";
    for (const auto& rec : history) {
        out << rec.k << ",";
        if (rec.col_index) out << *rec.col_index;
        out << "," << rec.row_index << ",";
        put_opt(out, rec.y_err);
        out << ",";
        put_opt(out, rec.gamma_norm);
        out << ",";
        put_opt(out, rec.x_err_fixed);
        out << ",";
        put_opt(out, rec.dist_lss);
        out << "," << format_double(rec.row_resid_corrected) << ",";
        put_opt(out, rec.row_resid_clean);
        out << "\n";
    }
}

void write_history_csv_file(const std::string& path, const std::vector<IterationRecord>& history) {
    auto out = open_out(path);
    write_history_csv(out, history);
}

}  // namespace kaczmarz
