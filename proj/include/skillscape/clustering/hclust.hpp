#pragma once
// Agglomerative clustering with complete linkage and the largest-gap cut.

#include <numeric>

#include "skillscape/clustering/types.hpp"

namespace skillscape {

// Complete linkage over Euclidean distances. Among equally close cluster
// pairs the one with the lowest (i, j) slot indices merges first; the merged
// cluster keeps the lower slot. Each slot caches its nearest higher slot,
// which stays valid under complete linkage unless the cached partner merged.
template <typename Scalar>
Dendrogram<Scalar> hclust_complete(const Matrix<Scalar>& points) {
    detail::check_points(points);
    const int n = static_cast<int>(points.rows());
    Dendrogram<Scalar> out;
    out.num_leaves = n;
    if (n == 1) return out;

    Matrix<Scalar> dist(n, n);
    for (int i = 0; i < n; ++i) {
        dist(i, i) = 0;
        for (int j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = (points.row(i) - points.row(j)).norm();
    }

    std::vector<char> active(n, 1);
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    std::vector<int> nn(n, -1);
    std::vector<Scalar> nn_d(n, std::numeric_limits<Scalar>::infinity());

    auto refresh = [&](int i) {
        nn[i] = -1;
        nn_d[i] = std::numeric_limits<Scalar>::infinity();
        for (int j = i + 1; j < n; ++j) {
            if (active[j] && dist(i, j) < nn_d[i]) {
                nn_d[i] = dist(i, j);
                nn[i] = j;
            }
        }
    };
    for (int i = 0; i < n; ++i) refresh(i);

    out.merges.reserve(n - 1);
    for (int step = 0; step < n - 1; ++step) {
        int a = -1;
        for (int i = 0; i < n; ++i)
            if (active[i] && nn[i] >= 0 && (a < 0 || nn_d[i] < nn_d[a])) a = i;
        const int b = nn[a];
        out.merges.push_back({id[a], id[b], nn_d[a]});

        active[b] = 0;
        for (int j = 0; j < n; ++j) {
            if (!active[j] || j == a) continue;
            dist(a, j) = dist(j, a) = std::max(dist(a, j), dist(b, j));
        }
        id[a] = n + step;
        for (int i = 0; i < n; ++i)
            if (active[i] && (i == a || nn[i] == a || nn[i] == b)) refresh(i);
    }
    return out;
}

// Partition after applying the first (N - num_clusters) merges.
template <typename Scalar>
std::vector<int> cut_to_clusters(const Dendrogram<Scalar>& d, int num_clusters) {
    const int n = d.num_leaves;
    if (n == 0) throw std::invalid_argument("empty dendrogram");
    num_clusters = std::clamp(num_clusters, 1, n);

    std::vector<int> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int s = 0; s < n - num_clusters; ++s) {
        parent[find(d.merges[s].a)] = n + s;
        parent[find(d.merges[s].b)] = n + s;
    }
    std::vector<int> raw(n);
    for (int i = 0; i < n; ++i) raw[i] = find(i);
    return detail::normalize_partition(raw);
}

// Number of clusters picked by the largest jump between successive merge
// heights. Cutting inside the jump after merge s leaves N - s - 1 clusters;
// cutting above the last merge is a candidate with jump 0. Equal jumps favour
// fewer clusters, so an all-equal dendrogram gives one cluster.
template <typename Scalar>
int largest_gap_cluster_count(const Dendrogram<Scalar>& d) {
    const int n = d.num_leaves;
    if (n == 0) throw std::invalid_argument("empty dendrogram");
    int best_count = 1;
    Scalar best_gap = 0;
    for (int s = n - 3; s >= 0; --s) {
        const Scalar gap = d.merges[s + 1].height - d.merges[s].height;
        if (gap > best_gap) {
            best_gap = gap;
            best_count = n - s - 1;
        }
    }
    return best_count;
}

template <typename Scalar>
std::vector<int> cut_largest_gap(const Dendrogram<Scalar>& d, int max_clusters) {
    if (max_clusters < 1) throw std::invalid_argument("max_clusters must be at least 1");
    return cut_to_clusters(d, std::min(largest_gap_cluster_count(d), max_clusters));
}

}  // namespace skillscape
