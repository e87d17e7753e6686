#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "skillscape/experiment.hpp"
#include "skillscape/io.hpp"

namespace skillscape {

const std::vector<std::string> kResultColumns = {
    "hierarchy",   "generating_model", "method", "L_h",           "subset_size",      "proportion",
    "replication", "ARI",              "clusters_found", "profile_accuracy", "runtime_ms", "flags",
};

namespace {

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out.push_back(';');
        out += f;
    }
    return out;
}

std::vector<std::string> split_flags(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ';'))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

template <typename T>
std::string opt_field(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, int>)
        return std::to_string(*v);
    else
        return format_fixed(*v);
}

std::optional<double> opt_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

std::optional<int> opt_int(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stoi(s);
}

}  // namespace

void write_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write results to " + path.string());
    for (std::size_t c = 0; c < kResultColumns.size(); ++c) out << (c ? "," : "") << kResultColumns[c];
    out << '\n';
    for (const auto& r : rows) {
        out << csv_field(r.hierarchy) << ',' << csv_field(r.generating_model) << ',' << csv_field(r.method) << ','
            << r.L_h << ',' << r.subset_size << ',' << format_fixed(r.proportion) << ',' << r.replication << ','
            << opt_field(r.ari) << ',' << opt_field(r.clusters_found) << ',' << opt_field(r.profile_accuracy) << ','
            << opt_field(r.runtime_ms) << ',' << csv_field(join_flags(r.flags)) << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing results to " + path.string());
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
    const auto table = read_csv(path);
    if (table.empty() || table.front() != kResultColumns)
        throw std::runtime_error(path.string() + ": not a results file (unexpected header)");
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& f = table[i];
        if (f.size() != kResultColumns.size())
            throw std::runtime_error(path.string() + ": line " + std::to_string(i + 1) + " has the wrong field count");
        try {
            ResultRow r;
            r.hierarchy = f[0];
            r.generating_model = f[1];
            r.method = f[2];
            r.L_h = std::stoi(f[3]);
            r.subset_size = std::stoi(f[4]);
            r.proportion = std::stod(f[5]);
            r.replication = std::stoi(f[6]);
            r.ari = opt_double(f[7]);
            r.clusters_found = opt_int(f[8]);
            r.profile_accuracy = opt_double(f[9]);
            r.runtime_ms = opt_double(f[10]);
            r.flags = split_flags(f[11]);
            rows.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw std::runtime_error(path.string() + ": bad value on line " + std::to_string(i + 1));
        }
    }
    return rows;
}

std::vector<SeriesPoint> mean_ari_series(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, std::string, int>;
    std::map<Key, SeriesPoint> acc;
    for (const auto& r : rows) {
        if (!r.ari) continue;
        auto& p = acc[{r.generating_model, r.hierarchy, r.method, r.subset_size}];
        if (p.count == 0) {
            p.generating_model = r.generating_model;
            p.hierarchy = r.hierarchy;
            p.method = r.method;
            p.subset_size = r.subset_size;
            p.proportion = r.proportion;
        }
        p.mean_ari += *r.ari;
        ++p.count;
    }
    std::vector<SeriesPoint> out;
    out.reserve(acc.size());
    for (auto& [key, p] : acc) {
        p.mean_ari /= p.count;
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace skillscape
