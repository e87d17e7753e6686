#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "skillscape/core.hpp"
#include "skillscape/hierarchy.hpp"

namespace skillscape {

// Starting centers, one per row, with an optional profile label each.
template <typename Scalar>
struct CenterSet {
    Matrix<Scalar> centers;
    std::vector<std::optional<Profile>> labels;

    CenterSet() = default;
    explicit CenterSet(Matrix<Scalar> c) : centers(std::move(c)), labels(centers.rows()) {}
    CenterSet(Matrix<Scalar> c, std::vector<std::optional<Profile>> l) : centers(std::move(c)), labels(std::move(l)) {
        if (static_cast<Eigen::Index>(labels.size()) != centers.rows())
            throw std::invalid_argument("center labels must match center count");
    }

    int size() const { return static_cast<int>(centers.rows()); }
};

template <typename Scalar>
struct ClusteringResult {
    std::vector<int> assignment;  // cluster index per point, 0..num_clusters()-1
    Matrix<Scalar> centers;
    std::vector<std::optional<Profile>> labels;  // per cluster
    Scalar objective = 0;                        // within-cluster sum of squared distances
    int iterations = 0;
    std::string method_tag;
    std::vector<Scalar> objective_trace;  // objective after each assignment step

    int num_clusters() const { return static_cast<int>(centers.rows()); }
};

// Merge list of agglomerative clustering. Leaves are 0..N-1; the cluster
// created by merge s gets id N + s.
template <typename Scalar>
struct Dendrogram {
    struct Merge {
        int a;
        int b;
        Scalar height;
    };
    int num_leaves = 0;
    std::vector<Merge> merges;
};

struct ConstraintSet {
    std::vector<std::pair<int, int>> must_link;
    std::vector<std::pair<int, int>> cannot_link;

    // Throws when a pair repeats an index, references a point outside
    // [0, num_points), or appears in both lists.
    void validate(int num_points) const {
        auto norm = [](std::pair<int, int> p) { return std::pair<int, int>(std::min(p.first, p.second), std::max(p.first, p.second)); };
        std::set<std::pair<int, int>> ml;
        for (auto p : must_link) ml.insert(norm(p));
        for (const auto* list : {&must_link, &cannot_link}) {
            for (auto [a, b] : *list) {
                if (a == b) throw std::invalid_argument("constraint pair repeats point " + std::to_string(a));
                if (a < 0 || b < 0 || a >= num_points || b >= num_points)
                    throw std::invalid_argument("constraint references a point outside the data");
            }
        }
        for (auto p : cannot_link)
            if (ml.count(norm(p))) throw std::invalid_argument("pair is both must-link and cannot-link");
    }
};

namespace detail {

template <typename Scalar>
void check_points(const Matrix<Scalar>& points) {
    if (points.rows() == 0) throw std::invalid_argument("no points to cluster");
    if (!points.allFinite()) throw std::invalid_argument("points must be finite");
}

// Squared distance between two contiguous rows. Every algorithm here uses
// this one kernel so that equal inputs give bit-equal distances.
template <typename Scalar>
inline Scalar sq_dist(const Scalar* a, const Scalar* b, Eigen::Index dim) {
    Scalar s = 0;
    for (Eigen::Index t = 0; t < dim; ++t) {
        const Scalar diff = a[t] - b[t];
        s += diff * diff;
    }
    return s;
}

// Calls f(i, d) for every point i, where d[c] is its squared distance to
// center c. Vectorizes over centers with the same per-pair arithmetic as
// sq_dist.
template <typename Scalar, typename F>
void for_each_distance_row(const Matrix<Scalar>& points, const Matrix<Scalar>& centers, F&& f) {
    const Eigen::Index k = centers.rows(), dim = points.cols();
    const Matrix<Scalar> ct = centers.transpose();
    std::vector<Scalar> d(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const Scalar* x = points.row(i).data();
        Scalar* __restrict out = d.data();
        std::fill(out, out + k, Scalar(0));
        for (Eigen::Index t = 0; t < dim; ++t) {
            const Scalar xt = x[t];
            const Scalar* __restrict row = ct.row(t).data();
            for (Eigen::Index c = 0; c < k; ++c) {
                const Scalar diff = xt - row[c];
                out[c] += diff * diff;
            }
        }
        f(static_cast<int>(i), d.data());
    }
}

// Index and value of the smallest entry; ties go to the lowest index.
template <typename Scalar>
std::pair<int, Scalar> argmin(const Scalar* d, Eigen::Index k) {
    int best = -1;
    Scalar best_d = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
        if (d[c] < best_d) {
            best_d = d[c];
            best = static_cast<int>(c);
        }
    }
    return {best, best_d};
}

// Nearest row of `centers` to `x`; ties go to the lowest index.
template <typename Scalar>
std::pair<int, Scalar> nearest(const Eigen::Ref<const RowVector<std::type_identity_t<Scalar>>>& row, const Matrix<Scalar>& centers) {
    int best = -1;
    Scalar best_d = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        const Scalar d = sq_dist(row.data(), centers.row(c).data(), centers.cols());
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return {best, best_d};
}

template <typename Scalar>
int count_distinct_rows(const Matrix<Scalar>& points) {
    std::vector<std::vector<Scalar>> rows(points.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) rows[i].assign(points.row(i).begin(), points.row(i).end());
    std::sort(rows.begin(), rows.end());
    return static_cast<int>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

template <typename Scalar>
Matrix<Scalar> cluster_means(const Matrix<Scalar>& points, const std::vector<int>& assignment, int k) {
    Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, points.cols());
    std::vector<int> counts(k, 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        sums.row(assignment[i]) += points.row(i);
        ++counts[assignment[i]];
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] > 0) sums.row(c) /= static_cast<Scalar>(counts[c]);
    return sums;
}

template <typename Scalar>
Scalar within_ss(const Matrix<Scalar>& points, const std::vector<int>& assignment, const Matrix<Scalar>& centers) {
    Scalar total = 0;
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        total += sq_dist(points.row(i).data(), centers.row(assignment[i]).data(), points.cols());
    return total;
}

// Relabels an arbitrary partition to 0..c-1 in order of first appearance.
inline std::vector<int> normalize_partition(const std::vector<int>& raw, int* num_classes = nullptr) {
    std::vector<int> out(raw.size());
    std::vector<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto it = std::find_if(seen.begin(), seen.end(), [&](auto& p) { return p.first == raw[i]; });
        if (it == seen.end()) {
            seen.emplace_back(raw[i], static_cast<int>(seen.size()));
            out[i] = seen.back().second;
        } else {
            out[i] = it->second;
        }
    }
    if (num_classes) *num_classes = static_cast<int>(seen.size());
    return out;
}

}  // namespace detail

// Turns any partition into a result with mean centers and the SSE objective.
template <typename Scalar>
ClusteringResult<Scalar> result_from_partition(const Matrix<Scalar>& points, const std::vector<int>& raw,
                                               std::string tag) {
    ClusteringResult<Scalar> r;
    int k = 0;
    r.assignment = detail::normalize_partition(raw, &k);
    r.centers = detail::cluster_means(points, r.assignment, k);
    r.labels.assign(k, std::nullopt);
    r.objective = detail::within_ss(points, r.assignment, r.centers);
    r.method_tag = std::move(tag);
    return r;
}

}  // namespace skillscape
