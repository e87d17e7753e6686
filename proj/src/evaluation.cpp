#include "skillscape/evaluation.hpp"

#include <map>
#include <stdexcept>

namespace skillscape {

namespace {

double choose2(double x) { return x * (x - 1) / 2; }

}  // namespace

AriResult adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw std::invalid_argument("partitions differ in length");
    if (a.size() < 2) throw std::invalid_argument("ARI needs at least two items");

    std::map<std::pair<int, int>, long> cells;
    std::map<int, long> rows, cols;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ++cells[{a[i], b[i]}];
        ++rows[a[i]];
        ++cols[b[i]];
    }
    double index = 0, sum_a = 0, sum_b = 0;
    for (const auto& [key, n] : cells) index += choose2(static_cast<double>(n));
    for (const auto& [key, n] : rows) sum_a += choose2(static_cast<double>(n));
    for (const auto& [key, n] : cols) sum_b += choose2(static_cast<double>(n));

    const double expected = sum_a * sum_b / choose2(static_cast<double>(a.size()));
    const double max_index = 0.5 * (sum_a + sum_b);
    if (max_index == expected) return {1.0, true};
    return {(index - expected) / (max_index - expected), false};
}

double profile_accuracy(std::span<const Profile> assigned, std::span<const Profile> truth) {
    if (assigned.size() != truth.size()) throw std::invalid_argument("profile lists differ in length");
    if (truth.empty()) throw std::invalid_argument("no students to score");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += assigned[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::vector<int> partition_by_profile(std::span<const Profile> profiles) {
    std::map<std::string, int> ids;
    std::vector<int> out;
    out.reserve(profiles.size());
    for (const auto& p : profiles) {
        auto [it, inserted] = ids.emplace(profile_to_string(p), static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    return out;
}

}  // namespace skillscape
