#pragma once
// Starting centers for empty k-means: random data points, rescaled profile
// vertices, and pseudocenters simulated from an assumed response model.

#include "skillscape/capability.hpp"
#include "skillscape/clustering/kmeans.hpp"
#include "skillscape/response_sim.hpp"

namespace skillscape {

template <typename Scalar>
CenterSet<Scalar> centers_random(const Matrix<Scalar>& points, int count, Rng& rng) {
    return CenterSet<Scalar>(sample_distinct_points(points, count, rng));
}

// Maps each profile vertex into the observed bounding box of the data:
// center_k = min_k + alpha_k (max_k - min_k).
template <typename Scalar>
CenterSet<Scalar> centers_rescaled(const Matrix<Scalar>& points, const ProfileSet& profiles) {
    detail::check_points(points);
    if (profiles.num_skills != points.cols()) throw std::invalid_argument("profiles and points differ in dimension");
    const RowVector<Scalar> lo = points.colwise().minCoeff();
    const RowVector<Scalar> range = points.colwise().maxCoeff() - lo;
    CenterSet<Scalar> out;
    out.centers.resize(profiles.size(), points.cols());
    for (int p = 0; p < profiles.size(); ++p) {
        out.centers.row(p) = lo + profile_vertex<Scalar>(profiles[p]).cwiseProduct(range);
        out.labels.emplace_back(profiles[p]);
    }
    return out;
}

// Capability scores of `per_profile` simulated students for every profile,
// stacked profile by profile; label[i] is the profile index of row i.
template <typename Scalar>
struct PseudoData {
    Matrix<Scalar> points;
    std::vector<int> labels;
};

template <typename Scalar = double>
PseudoData<Scalar> simulate_pseudodata(const ProfileSet& profiles, const QMatrix& q, const ResponseModel& model,
                                       int per_profile, Rng& rng) {
    if (per_profile < 1) throw std::invalid_argument("pseudodata needs at least one student per profile");
    if (profiles.size() == 0) throw std::invalid_argument("no profiles to simulate");
    std::vector<Profile> students;
    PseudoData<Scalar> out;
    students.reserve(static_cast<std::size_t>(profiles.size()) * per_profile);
    for (int p = 0; p < profiles.size(); ++p) {
        for (int m = 0; m < per_profile; ++m) {
            students.push_back(profiles[p]);
            out.labels.push_back(p);
        }
    }
    out.points = capability_from_responses<Scalar>(simulate_responses(students, q, model, rng), q);
    return out;
}

// Per-profile mean of simulated capability scores, labeled by profile.
template <typename Scalar = double>
CenterSet<Scalar> centers_pseudo(const ProfileSet& profiles, const QMatrix& q, const ResponseModel& model,
                                 int per_profile, Rng& rng) {
    const auto data = simulate_pseudodata<Scalar>(profiles, q, model, per_profile, rng);
    CenterSet<Scalar> out;
    out.centers = detail::cluster_means(data.points, data.labels, profiles.size());
    for (const auto& p : profiles.profiles) out.labels.emplace_back(p);
    return out;
}

// Draws slip/guess from the given bounds first, as a fresh assumed model.
template <typename Scalar = double>
CenterSet<Scalar> centers_pseudo(const ProfileSet& profiles, const QMatrix& q, ResponseModelKind kind,
                                 int per_profile, Rng& rng, NoiseBounds bounds = {}) {
    const int count = kind == ResponseModelKind::Dina ? q.items() : q.skills();
    const auto model = sample_params(kind, count, rng, bounds);
    return centers_pseudo<Scalar>(profiles, q, model, per_profile, rng);
}

}  // namespace skillscape
