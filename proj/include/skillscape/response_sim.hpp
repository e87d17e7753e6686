#pragma once
// Q-matrices, DINA/NIDA item parameters and simulated binary responses.

#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "skillscape/core.hpp"
#include "skillscape/hierarchy.hpp"

namespace skillscape {

// J x K binary item-to-skill requirement matrix. Every item requires at least
// one skill and every skill is required by at least one item.
class QMatrix {
public:
    explicit QMatrix(IntMatrix entries);

    int items() const { return static_cast<int>(q_.rows()); }
    int skills() const { return static_cast<int>(q_.cols()); }
    const IntMatrix& entries() const { return q_; }
    auto row(int item) const { return q_.row(item); }

    // n_k: number of items requiring each skill.
    Eigen::VectorXi items_per_skill() const { return q_.colwise().sum().transpose(); }

private:
    IntMatrix q_;
};

struct ItemMix {
    int skills_per_item;
    int count;
};

// Mix used in the reference study: 9 single-, 18 two- and 3 three-skill items.
std::vector<ItemMix> default_item_mix();

QMatrix sample_q_matrix(int num_items, int num_skills, std::span<const ItemMix> mix, Rng& rng,
                        int max_retries = 1000);

enum class ResponseModelKind { Dina, Nida };

std::string_view to_string(ResponseModelKind kind);
ResponseModelKind parse_response_model(std::string_view name);

// Slip and guess per item.
struct DinaParams {
    Eigen::VectorXd slip;
    Eigen::VectorXd guess;
};

// Slip and guess per skill.
struct NidaParams {
    Eigen::VectorXd slip;
    Eigen::VectorXd guess;
};

using ResponseModel = std::variant<DinaParams, NidaParams>;

ResponseModelKind kind_of(const ResponseModel& model);

struct NoiseBounds {
    double slip_max = 0.30;
    double guess_max = 0.15;
};

// `count` is J for DINA and K for NIDA.
ResponseModel sample_params(ResponseModelKind kind, int count, Rng& rng, NoiseBounds bounds = {});

// Slip = guess = 0: responses become a deterministic function of the profile.
ResponseModel zero_noise_params(ResponseModelKind kind, const QMatrix& q);

// Checks vector lengths against Q and s + g < 1 for every entry.
void validate_params(const ResponseModel& model, const QMatrix& q);

// 1 iff the profile masters every skill the item requires.
int eta(const Profile& p, const Eigen::Ref<const Eigen::RowVectorXi>& q_row);

double response_prob(const ResponseModel& model, const Profile& p, int item, const QMatrix& q);

using ResponseMatrix = IntMatrix;

ResponseMatrix simulate_responses(std::span<const Profile> students, const QMatrix& q, const ResponseModel& model,
                                  Rng& rng);

// Uniform assignment, redrawn until every profile in the subset appears.
std::vector<Profile> assign_students(int num_students, const ProfileSet& subset, Rng& rng, int max_retries = 1000);

}  // namespace skillscape
