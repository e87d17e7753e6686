#pragma once
// Lloyd k-means with restarts, and empty k-means.

#include <numeric>

#include "skillscape/clustering/types.hpp"

namespace skillscape {

inline constexpr int kDefaultMaxIterations = 300;

// Single Lloyd run from the given centers. A center left without points is
// moved onto the point farthest from its own assigned center (ties to the
// lowest point index) and iteration continues.
template <typename Scalar>
ClusteringResult<Scalar> lloyd(const Matrix<Scalar>& points, const Matrix<Scalar>& init,
                               int max_iterations = kDefaultMaxIterations) {
    detail::check_points(points);
    if (init.rows() == 0 || init.cols() != points.cols()) throw std::invalid_argument("initial centers do not match points");
    const int n = static_cast<int>(points.rows());
    const int k = static_cast<int>(init.rows());

    ClusteringResult<Scalar> r;
    r.method_tag = "lloyd";
    Matrix<Scalar> centers = init;
    std::vector<int> assign(n, -1), prev;
    std::vector<Scalar> d2(n);

    for (int it = 0; it < max_iterations; ++it) {
        prev = assign;
        Scalar obj = 0;
        detail::for_each_distance_row(points, centers, [&](int i, const Scalar* dist) {
            auto [c, d] = detail::argmin(dist, k);
            assign[i] = c;
            d2[i] = d;
            obj += d;
        });
        r.objective_trace.push_back(obj);
        r.iterations = it + 1;

        std::vector<int> counts(k, 0);
        for (int c : assign) ++counts[c];
        const bool has_empty = std::find(counts.begin(), counts.end(), 0) != counts.end();
        if (assign == prev && !has_empty) break;

        Matrix<Scalar> means = detail::cluster_means(points, assign, k);
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centers.row(c) = means.row(c);
                continue;
            }
            int far = static_cast<int>(std::max_element(d2.begin(), d2.end()) - d2.begin());
            centers.row(c) = points.row(far);
            d2[far] = -1;
        }
    }

    r.assignment = assign;
    r.centers = detail::cluster_means(points, assign, k);
    r.labels.assign(k, std::nullopt);
    r.objective = detail::within_ss(points, assign, r.centers);
    return r;
}

// `count` distinct data points chosen uniformly without replacement.
template <typename Scalar>
Matrix<Scalar> sample_distinct_points(const Matrix<Scalar>& points, int count, Rng& rng) {
    detail::check_points(points);
    if (count < 1) throw std::invalid_argument("need at least one center");
    const int n = static_cast<int>(points.rows());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    Matrix<Scalar> out(count, points.cols());
    int taken = 0;
    for (int i = 0; i < n && taken < count; ++i) {
        std::uniform_int_distribution<int> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
        const auto row = points.row(order[i]);
        bool dup = false;
        for (int t = 0; t < taken && !dup; ++t) dup = out.row(t) == row;
        if (!dup) out.row(taken++) = row;
    }
    if (taken < count)
        throw std::invalid_argument("requested " + std::to_string(count) + " centers but data has only " +
                                    std::to_string(taken) + " distinct points");
    return out;
}

template <typename Scalar>
ClusteringResult<Scalar> kmeans(const Matrix<Scalar>& points, int k, Rng& rng, int restarts = 5,
                                int max_iterations = kDefaultMaxIterations) {
    detail::check_points(points);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (restarts < 1) throw std::invalid_argument("need at least one restart");
    const int distinct = detail::count_distinct_rows(points);
    if (k > distinct)
        throw std::invalid_argument("k=" + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                                    " distinct points");

    ClusteringResult<Scalar> best;
    bool have = false;
    for (int r = 0; r < restarts; ++r) {
        auto run = lloyd(points, sample_distinct_points(points, k, rng), max_iterations);
        if (!have || run.objective < best.objective) {
            best = std::move(run);
            have = true;
        }
    }
    best.method_tag = "kmeans";
    return best;
}

// Lloyd iterations where a center that receives no points is dropped for
// good. Labels on surviving centers carry over to their clusters.
template <typename Scalar>
ClusteringResult<Scalar> empty_kmeans(const Matrix<Scalar>& points, const CenterSet<Scalar>& init,
                                      int max_iterations = kDefaultMaxIterations) {
    detail::check_points(points);
    if (init.size() == 0) throw std::invalid_argument("empty k-means needs at least one starting center");
    if (init.centers.cols() != points.cols()) throw std::invalid_argument("starting centers do not match point dimension");
    const int n = static_cast<int>(points.rows());

    ClusteringResult<Scalar> r;
    r.method_tag = "empty_kmeans";
    Matrix<Scalar> centers = init.centers;
    std::vector<std::optional<Profile>> labels = init.labels;
    std::vector<int> assign(n, -1), prev;

    for (int it = 0; it < max_iterations; ++it) {
        prev = assign;
        Scalar obj = 0;
        detail::for_each_distance_row(points, centers, [&](int i, const Scalar* dist) {
            auto [c, d] = detail::argmin(dist, centers.rows());
            assign[i] = c;
            obj += d;
        });
        r.objective_trace.push_back(obj);
        r.iterations = it + 1;

        const int k = static_cast<int>(centers.rows());
        std::vector<int> counts(k, 0);
        for (int c : assign) ++counts[c];

        std::vector<int> remap(k, -1);
        int kept = 0;
        for (int c = 0; c < k; ++c)
            if (counts[c] > 0) remap[c] = kept++;
        for (int& a : assign) a = remap[a];
        if (kept < k) {
            Matrix<Scalar> survivors(kept, centers.cols());
            std::vector<std::optional<Profile>> kept_labels;
            for (int c = 0; c < k; ++c) {
                if (remap[c] < 0) continue;
                survivors.row(remap[c]) = centers.row(c);
                kept_labels.push_back(labels[c]);
            }
            centers = std::move(survivors);
            labels = std::move(kept_labels);
            prev.clear();  // indices shifted; never counts as converged
        }
        if (assign == prev) break;
        centers = detail::cluster_means(points, assign, kept);
    }

    r.assignment = assign;
    r.centers = detail::cluster_means(points, assign, static_cast<int>(centers.rows()));
    r.labels = std::move(labels);
    r.objective = detail::within_ss(points, assign, r.centers);
    return r;
}

}  // namespace skillscape
