#include "skillscape/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace skillscape {

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                field_started = true;
                break;
            case ',':
                row.push_back(std::move(field));
                field.clear();
                field_started = true;
                break;
            case '\r':
                break;
            case '\n':
                row.push_back(std::move(field));
                field.clear();
                table.push_back(std::move(row));
                row.clear();
                field_started = false;
                break;
            default:
                field.push_back(c);
                field_started = true;
        }
    }
    if (quoted) throw std::runtime_error("unterminated quoted CSV field");
    if (field_started || !row.empty()) {
        row.push_back(std::move(field));
        table.push_back(std::move(row));
    }
    return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string s = buf;
    if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);  // no "-0.000000"
    return s;
}

namespace {

template <typename Scalar, typename Fmt>
void write_matrix(const std::filesystem::path& path, const Matrix<Scalar>& m, const std::string& prefix, Fmt fmt) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << prefix << '_' << (c + 1);
    out << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << fmt(m(r, c));
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

template <typename Scalar, typename Parse>
Matrix<Scalar> read_matrix(const std::filesystem::path& path, Parse parse) {
    const auto table = read_csv(path);
    if (table.size() < 2) throw std::runtime_error(path.string() + ": expected a header and at least one row");
    const auto cols = table.front().size();
    Matrix<Scalar> m(static_cast<Eigen::Index>(table.size() - 1), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 1; r < table.size(); ++r) {
        if (table[r].size() != cols)
            throw std::runtime_error(path.string() + ": row " + std::to_string(r + 1) + " has " +
                                     std::to_string(table[r].size()) + " fields, expected " + std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) {
            try {
                m(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = parse(table[r][c]);
            } catch (const std::exception&) {
                throw std::runtime_error(path.string() + ": bad value '" + table[r][c] + "' at row " +
                                         std::to_string(r + 1));
            }
        }
    }
    return m;
}

}  // namespace

void write_matrix_csv(const std::filesystem::path& path, const IntMatrix& m, const std::string& column_prefix) {
    write_matrix(path, m, column_prefix, [](int v) { return std::to_string(v); });
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix<double>& m, const std::string& column_prefix) {
    write_matrix(path, m, column_prefix, [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    });
}

IntMatrix read_int_matrix_csv(const std::filesystem::path& path) {
    return read_matrix<int>(path, [](const std::string& s) {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    });
}

Matrix<double> read_real_matrix_csv(const std::filesystem::path& path) {
    return read_matrix<double>(path, [](const std::string& s) {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    });
}

}  // namespace skillscape
