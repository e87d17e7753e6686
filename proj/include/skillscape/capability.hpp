#pragma once
// Per-skill sum scores and capability scores.

#include <stdexcept>

#include "skillscape/core.hpp"
#include "skillscape/hierarchy.hpp"
#include "skillscape/response_sim.hpp"

namespace skillscape {

// W = Y Q: correct answers per student among items requiring each skill.
template <typename Derived>
IntMatrix sum_scores(const Eigen::MatrixBase<Derived>& responses, const QMatrix& q) {
    if (responses.cols() != q.items())
        throw std::invalid_argument("response matrix has " + std::to_string(responses.cols()) +
                                    " items, Q-matrix has " + std::to_string(q.items()));
    return responses.template cast<int>() * q.entries();
}

// B_ik = W_ik / n_k, so every row lies in the unit hypercube.
template <typename Scalar = double, typename Derived>
Matrix<Scalar> capability_scores(const Eigen::MatrixBase<Derived>& sums, const QMatrix& q) {
    if (sums.cols() != q.skills()) throw std::invalid_argument("sum-score matrix does not match Q-matrix skills");
    const Eigen::VectorXi n = q.items_per_skill();
    if ((n.array() == 0).any()) throw std::invalid_argument("a skill has no items; capability score undefined");
    const RowVector<Scalar> inv = n.cast<Scalar>().cwiseInverse().transpose();
    return sums.template cast<Scalar>().array().rowwise() * inv.array();
}

template <typename Scalar = double>
Matrix<Scalar> capability_from_responses(const ResponseMatrix& responses, const QMatrix& q) {
    return capability_scores<Scalar>(sum_scores(responses, q), q);
}

template <typename Scalar = double>
RowVector<Scalar> profile_vertex(const Profile& p) {
    return p.cast<Scalar>().transpose();
}

}  // namespace skillscape
