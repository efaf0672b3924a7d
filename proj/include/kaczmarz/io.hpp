#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "kaczmarz/dense_matrix.hpp"
#include "kaczmarz/diagnostics.hpp"

namespace kaczmarz {

// File I/O used by the CLI: Matrix Market (array and coordinate, real
// general) for matrices, whitespace-separated text for vectors, two-section
// index lists for almost-cyclic schedules, and the fixed-schema history CSV.
// All floating-point output uses 17 significant digits, so a write/read
// round trip reproduces every double exactly.

enum class MatrixMarketFormat { Array, Coordinate };

DenseMatrix read_matrix_market(std::istream& in, const std::string& source_name = "<stream>");
DenseMatrix read_matrix_market_file(const std::string& path);
void write_matrix_market(std::ostream& out, const DenseMatrix& A,
                         MatrixMarketFormat format = MatrixMarketFormat::Array);
void write_matrix_market_file(const std::string& path, const DenseMatrix& A,
                              MatrixMarketFormat format = MatrixMarketFormat::Array);

std::vector<double> read_vector(std::istream& in, const std::string& source_name = "<stream>");
std::vector<double> read_vector_file(const std::string& path);
void write_vector(std::ostream& out, std::span<const double> v);
void write_vector_file(const std::string& path, std::span<const double> v);

// Schedule file: one 1-based index per line; the row section and the column
// section are separated by a blank line.
std::pair<std::vector<int>, std::vector<int>> read_schedule_file(const std::string& path);
void write_schedule_file(const std::string& path, const std::vector<int>& rows,
                         const std::vector<int>& cols);

// History CSV. The header and column count are identical for every variant;
// unavailable fields are left empty.
extern const char* const kHistoryCsvHeader;
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history);
void write_history_csv_file(const std::string& path, const std::vector<IterationRecord>& history);

// 17-significant-digit decimal rendering (shortest form strtod maps back to
// the same double).
std::string format_double(double v);

}  // namespace kaczmarz
