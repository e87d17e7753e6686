#pragma once
// Partition agreement and profile labeling of clusters.

#include <span>
#include <vector>

#include "skillscape/core.hpp"
#include "skillscape/hierarchy.hpp"

namespace skillscape {

struct AriResult {
    double value = 0;
    // Both partitions trivial in the same way (all singletons or one block);
    // the ratio is 0/0 and the value is set to 1.
    bool degenerate = false;
};

AriResult adjusted_rand_index(std::span<const int> a, std::span<const int> b);

struct VertexLabels {
    std::vector<int> profile_index;  // per center, index into the licit set
    bool collision = false;          // two or more centers share a vertex
};

// Euclidean-nearest licit vertex per center; ties go to the lowest index.
template <typename Scalar>
VertexLabels nearest_vertex_labels(const Matrix<Scalar>& centers, const ProfileSet& licit) {
    if (licit.size() == 0) throw std::invalid_argument("licit profile set is empty");
    if (centers.cols() != licit.num_skills) throw std::invalid_argument("centers and profiles differ in dimension");
    VertexLabels out;
    std::vector<int> used(licit.size(), 0);
    for (Eigen::Index c = 0; c < centers.rows(); ++c) {
        int best = 0;
        Scalar best_d = std::numeric_limits<Scalar>::infinity();
        for (int p = 0; p < licit.size(); ++p) {
            const Scalar d = (centers.row(c) - licit[p].cast<Scalar>().transpose()).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        out.profile_index.push_back(best);
        if (used[best]++) out.collision = true;
    }
    return out;
}

double profile_accuracy(std::span<const Profile> assigned, std::span<const Profile> truth);

// Partition of rows into groups of identical rows, numbered by first appearance.
template <typename Derived>
std::vector<int> partition_by_rows(const Eigen::MatrixBase<Derived>& m) {
    std::vector<int> out(m.rows());
    std::vector<Eigen::Index> reps;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        int found = -1;
        for (std::size_t r = 0; r < reps.size() && found < 0; ++r)
            if (m.row(reps[r]) == m.row(i)) found = static_cast<int>(r);
        if (found < 0) {
            found = static_cast<int>(reps.size());
            reps.push_back(i);
        }
        out[i] = found;
    }
    return out;
}

// Class index per student from their true profiles.
std::vector<int> partition_by_profile(std::span<const Profile> profiles);

}  // namespace skillscape
