#pragma once
// CSV helpers for matrices and tables.

#include <filesystem>
#include <string>
#include <vector>

#include "skillscape/core.hpp"
#include "skillscape/response_sim.hpp"

namespace skillscape {

using CsvTable = std::vector<std::vector<std::string>>;

// RFC 4180 reader: quoted fields may hold commas, quotes ("") and newlines.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text);

std::string csv_field(const std::string& value);
std::string format_fixed(double value, int decimals = 6);

// Header row `<prefix>_1,...,<prefix>_C` followed by one line per matrix row.
void write_matrix_csv(const std::filesystem::path& path, const IntMatrix& m, const std::string& column_prefix);
void write_matrix_csv(const std::filesystem::path& path, const Matrix<double>& m, const std::string& column_prefix);

IntMatrix read_int_matrix_csv(const std::filesystem::path& path);
Matrix<double> read_real_matrix_csv(const std::filesystem::path& path);

inline void write_q_matrix_csv(const std::filesystem::path& path, const QMatrix& q) {
    write_matrix_csv(path, q.entries(), "skill");
}
inline QMatrix read_q_matrix_csv(const std::filesystem::path& path) { return QMatrix(read_int_matrix_csv(path)); }

}  // namespace skillscape
