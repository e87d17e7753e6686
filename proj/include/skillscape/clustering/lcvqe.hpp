#pragma once
// Semisupervised clustering with pairwise constraints (LCVQE).
//
// Each iteration assigns every point to its nearest center, then revisits
// violated constraints:
//   must-link (a, b) split across nearest centers ca != cb: choose the
//     cheapest of both-to-ca, both-to-cb, or keeping the split while paying
//     half of d(a, cb) and half of d(b, ca);
//   cannot-link (a, b) sharing nearest center c: the point farther from c
//     either moves to its second-nearest center c2 or stays and pays half of
//     its distance to c2.
// A penalized point counts with weight 1/2 in the mean of the center it was
// charged against, which makes the update the minimizer of the penalized
// objective for fixed assignments and charges. Iteration stops on a stable
// state, on a repeated state, or at the cap.

#include <unordered_set>

#include "skillscape/clustering/kmeans.hpp"

namespace skillscape {

namespace detail {

inline std::uint64_t state_hash(const std::vector<int>& assign, const std::vector<std::pair<int, int>>& charges) {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    auto mix = [&](std::uint64_t v) { h = splitmix64(h ^ v); };
    for (int a : assign) mix(static_cast<std::uint64_t>(a));
    mix(~std::uint64_t{0});
    for (auto [i, c] : charges) mix((static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(c));
    return h;
}

}  // namespace detail

// Must-links chain consecutive points of each label group; cannot-links join
// the first point of every pair of groups. Entries of -1 are unlabeled.
inline ConstraintSet derive_constraints(const std::vector<int>& labels) {
    std::vector<int> group_label, first, last;
    ConstraintSet out;
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
        if (labels[i] < 0) continue;
        auto it = std::find(group_label.begin(), group_label.end(), labels[i]);
        if (it == group_label.end()) {
            group_label.push_back(labels[i]);
            first.push_back(i);
            last.push_back(i);
            continue;
        }
        auto g = it - group_label.begin();
        out.must_link.emplace_back(last[g], i);
        last[g] = i;
    }
    if (group_label.empty()) throw std::invalid_argument("constraint derivation needs at least one labeled point");
    for (std::size_t g = 0; g < first.size(); ++g)
        for (std::size_t h = g + 1; h < first.size(); ++h) out.cannot_link.emplace_back(first[g], first[h]);
    return out;
}

// `point_labels[i]` is -1 for real (unlabeled) points and otherwise an index
// into `label_profiles`. The returned result covers only the real points, in
// their original order; clusters holding no real point are discarded and each
// survivor carries the majority label of its labeled members (lowest label
// index on ties).
template <typename Scalar>
ClusteringResult<Scalar> lcvqe(const Matrix<Scalar>& points, const std::vector<int>& point_labels,
                               const ConstraintSet& constraints, const CenterSet<Scalar>& init,
                               const std::vector<Profile>& label_profiles = {},
                               int max_iterations = kDefaultMaxIterations) {
    detail::check_points(points);
    const int n = static_cast<int>(points.rows());
    if (static_cast<int>(point_labels.size()) != n) throw std::invalid_argument("point labels must cover every point");
    if (init.size() == 0 || init.centers.cols() != points.cols()) throw std::invalid_argument("bad initial centers");
    constraints.validate(n);
    const int num_real = static_cast<int>(std::count(point_labels.begin(), point_labels.end(), -1));
    if (num_real == 0) throw std::invalid_argument("no real points to cluster");
    for (int l : point_labels)
        if (l < -1 || (!label_profiles.empty() && l >= static_cast<int>(label_profiles.size())))
            throw std::invalid_argument("point label out of range");

    const int k = init.size();
    Matrix<Scalar> centers = init.centers;
    std::vector<int> nearest1(n), nearest2(n), assign(n, -1), prev;
    std::vector<std::pair<int, int>> charges, prev_charges;  // (point, center)
    std::vector<Scalar> own_d(n);

    const Eigen::Index dim = points.cols();
    auto d = [&](int i, int c) { return detail::sq_dist(points.row(i).data(), centers.row(c).data(), dim); };

    std::unordered_set<std::uint64_t> seen;
    ClusteringResult<Scalar> r;
    for (int it = 0; it < max_iterations; ++it) {
        prev = assign;
        prev_charges = std::move(charges);
        charges.clear();

        detail::for_each_distance_row(points, centers, [&](int i, const Scalar* dist) {
            int b1 = -1, b2 = -1;
            Scalar d1 = std::numeric_limits<Scalar>::infinity(), dd2 = d1;
            for (int c = 0; c < k; ++c) {
                const Scalar dc = dist[c];
                if (dc < d1) {
                    b2 = b1;
                    dd2 = d1;
                    b1 = c;
                    d1 = dc;
                } else if (dc < dd2) {
                    b2 = c;
                    dd2 = dc;
                }
            }
            nearest1[i] = b1;
            nearest2[i] = b2;
            assign[i] = b1;
        });

        for (auto [a, b] : constraints.must_link) {
            const int ca = nearest1[a], cb = nearest1[b];
            if (ca == cb) continue;
            const Scalar both_a = d(a, ca) + d(b, ca);
            const Scalar both_b = d(a, cb) + d(b, cb);
            const Scalar split = d(a, ca) + d(b, cb) + Scalar(0.5) * (d(a, cb) + d(b, ca));
            if (both_a <= both_b && both_a <= split) {
                assign[a] = assign[b] = ca;
            } else if (both_b <= split) {
                assign[a] = assign[b] = cb;
            } else {
                assign[a] = ca;
                assign[b] = cb;
                charges.emplace_back(a, cb);
                charges.emplace_back(b, ca);
            }
        }

        for (auto [a, b] : constraints.cannot_link) {
            if (nearest1[a] != nearest1[b]) continue;
            const int c = nearest1[a];
            const int far = d(b, c) > d(a, c) ? b : a;
            const int c2 = nearest2[far];
            if (c2 < 0) continue;  // a single center cannot separate the pair
            const Scalar move = d(far, c2);
            const Scalar stay = d(far, c) + Scalar(0.5) * d(far, c2);
            if (move < stay) {
                assign[far] = c2;
            } else {
                assign[far] = c;
                charges.emplace_back(far, c2);
            }
        }

        Scalar obj = 0;
        for (int i = 0; i < n; ++i) obj += own_d[i] = d(i, assign[i]);
        for (auto [i, c] : charges) obj += Scalar(0.5) * d(i, c);
        r.objective_trace.push_back(obj);
        r.iterations = it + 1;

        Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, points.cols());
        std::vector<Scalar> weight(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += points.row(i);
            weight[assign[i]] += 1;
        }
        for (auto [i, c] : charges) {
            sums.row(c) += Scalar(0.5) * points.row(i);
            weight[c] += Scalar(0.5);
        }
        const bool has_empty = std::find(weight.begin(), weight.end(), Scalar(0)) != weight.end();
        if (assign == prev && charges == prev_charges && !has_empty) break;
        // The state fixes the next centers, so a repeat means a cycle.
        if (!has_empty && !seen.insert(detail::state_hash(assign, charges)).second) break;

        for (int c = 0; c < k; ++c) {
            if (weight[c] > 0) {
                centers.row(c) = sums.row(c) / weight[c];
                continue;
            }
            int far = static_cast<int>(std::max_element(own_d.begin(), own_d.end()) - own_d.begin());
            centers.row(c) = points.row(far);
            own_d[far] = -1;
        }
    }

    // Keep clusters that hold at least one real point.
    std::vector<int> real_count(k, 0);
    for (int i = 0; i < n; ++i)
        if (point_labels[i] < 0) ++real_count[assign[i]];
    std::vector<int> remap(k, -1);
    int kept = 0;
    for (int c = 0; c < k; ++c)
        if (real_count[c] > 0) remap[c] = kept++;

    r.method_tag = "lcvqe";
    r.centers.resize(kept, points.cols());
    r.labels.assign(kept, std::nullopt);
    for (int c = 0; c < k; ++c) {
        if (remap[c] < 0) continue;
        r.centers.row(remap[c]) = centers.row(c);
        if (label_profiles.empty()) continue;
        std::vector<int> votes(label_profiles.size(), 0);
        for (int i = 0; i < n; ++i)
            if (assign[i] == c && point_labels[i] >= 0) ++votes[point_labels[i]];
        auto top = std::max_element(votes.begin(), votes.end());
        if (*top > 0) r.labels[remap[c]] = label_profiles[top - votes.begin()];
    }
    r.assignment.reserve(num_real);
    Scalar sse = 0;
    for (int i = 0; i < n; ++i) {
        if (point_labels[i] >= 0) continue;
        r.assignment.push_back(remap[assign[i]]);
        sse += detail::sq_dist(points.row(i).data(), r.centers.row(remap[assign[i]]).data(), dim);
    }
    r.objective = sse;
    return r;
}

}  // namespace skillscape
