#include "skillscape/response_sim.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace skillscape {

QMatrix::QMatrix(IntMatrix entries) : q_(std::move(entries)) {
    if (q_.rows() == 0 || q_.cols() == 0) throw std::invalid_argument("Q-matrix must be nonempty");
    if (((q_.array() != 0) && (q_.array() != 1)).any()) throw std::invalid_argument("Q-matrix entries must be 0/1");
    for (Eigen::Index j = 0; j < q_.rows(); ++j)
        if (q_.row(j).sum() == 0) throw std::invalid_argument("Q-matrix item " + std::to_string(j + 1) + " requires no skill");
    for (Eigen::Index k = 0; k < q_.cols(); ++k)
        if (q_.col(k).sum() == 0) throw std::invalid_argument("Q-matrix skill " + std::to_string(k + 1) + " is not tested by any item");
}

std::vector<ItemMix> default_item_mix() { return {{1, 9}, {2, 18}, {3, 3}}; }

QMatrix sample_q_matrix(int num_items, int num_skills, std::span<const ItemMix> mix, Rng& rng, int max_retries) {
    if (num_items < 1 || num_skills < 1) throw std::invalid_argument("Q-matrix needs J >= 1 and K >= 1");
    int total = 0;
    long coverage = 0;
    for (const auto& m : mix) {
        if (m.skills_per_item < 1 || m.skills_per_item > num_skills)
            throw std::invalid_argument("item mix asks for " + std::to_string(m.skills_per_item) +
                                        " skills per item with K=" + std::to_string(num_skills));
        if (m.count < 0) throw std::invalid_argument("item mix counts must be nonnegative");
        total += m.count;
        coverage += static_cast<long>(m.skills_per_item) * m.count;
    }
    if (total != num_items)
        throw std::invalid_argument("item mix counts sum to " + std::to_string(total) + ", expected J=" +
                                    std::to_string(num_items));
    if (coverage < num_skills) throw std::invalid_argument("item mix cannot cover all skills");

    std::vector<int> skills(num_skills);
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        IntMatrix q = IntMatrix::Zero(num_items, num_skills);
        int item = 0;
        for (const auto& m : mix) {
            for (int c = 0; c < m.count; ++c, ++item) {
                std::iota(skills.begin(), skills.end(), 0);
                for (int i = 0; i < m.skills_per_item; ++i) {
                    std::uniform_int_distribution<int> pick(i, num_skills - 1);
                    std::swap(skills[i], skills[pick(rng)]);
                    q(item, skills[i]) = 1;
                }
            }
        }
        if ((q.colwise().sum().array() > 0).all()) return QMatrix(std::move(q));
    }
    throw std::runtime_error("could not sample a Q-matrix covering every skill in " + std::to_string(max_retries) +
                             " attempts");
}

std::string_view to_string(ResponseModelKind kind) { return kind == ResponseModelKind::Dina ? "DINA" : "NIDA"; }

ResponseModelKind parse_response_model(std::string_view name) {
    if (name == "DINA" || name == "dina") return ResponseModelKind::Dina;
    if (name == "NIDA" || name == "nida") return ResponseModelKind::Nida;
    throw std::invalid_argument("unknown response model '" + std::string(name) + "' (expected DINA or NIDA)");
}

ResponseModelKind kind_of(const ResponseModel& model) {
    return std::holds_alternative<DinaParams>(model) ? ResponseModelKind::Dina : ResponseModelKind::Nida;
}

ResponseModel sample_params(ResponseModelKind kind, int count, Rng& rng, NoiseBounds bounds) {
    if (bounds.slip_max <= 0 || bounds.guess_max <= 0) throw std::invalid_argument("slip/guess bounds must be positive");
    if (bounds.slip_max + bounds.guess_max >= 1) throw std::invalid_argument("slip_max + guess_max must be below 1");
    if (count < 1) throw std::invalid_argument("parameter count must be positive");

    std::uniform_real_distribution<double> slip(0.0, bounds.slip_max);
    std::uniform_real_distribution<double> guess(0.0, bounds.guess_max);
    Eigen::VectorXd s(count), g(count);
    for (int i = 0; i < count; ++i) s[i] = slip(rng);
    for (int i = 0; i < count; ++i) g[i] = guess(rng);
    if (kind == ResponseModelKind::Dina) return DinaParams{std::move(s), std::move(g)};
    return NidaParams{std::move(s), std::move(g)};
}

ResponseModel zero_noise_params(ResponseModelKind kind, const QMatrix& q) {
    if (kind == ResponseModelKind::Dina)
        return DinaParams{Eigen::VectorXd::Zero(q.items()), Eigen::VectorXd::Zero(q.items())};
    return NidaParams{Eigen::VectorXd::Zero(q.skills()), Eigen::VectorXd::Zero(q.skills())};
}

namespace {

void check_vectors(const Eigen::VectorXd& s, const Eigen::VectorXd& g, int expected, const char* what) {
    if (s.size() != expected || g.size() != expected)
        throw std::invalid_argument(std::string(what) + " slip/guess vectors must have length " + std::to_string(expected));
    if ((s.array() < 0).any() || (g.array() < 0).any() || (s.array() >= 1).any() || (g.array() >= 1).any())
        throw std::invalid_argument(std::string(what) + " slip/guess must lie in [0, 1)");
    if (((s + g).array() >= 1).any()) throw std::invalid_argument(std::string(what) + " requires slip + guess < 1");
}

}  // namespace

void validate_params(const ResponseModel& model, const QMatrix& q) {
    if (const auto* d = std::get_if<DinaParams>(&model))
        check_vectors(d->slip, d->guess, q.items(), "DINA");
    else {
        const auto& n = std::get<NidaParams>(model);
        check_vectors(n.slip, n.guess, q.skills(), "NIDA");
    }
}

int eta(const Profile& p, const Eigen::Ref<const Eigen::RowVectorXi>& q_row) {
    if (p.size() != q_row.size()) throw std::invalid_argument("profile and Q row lengths differ");
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (q_row[k] && !p[k]) return 0;
    return 1;
}

double response_prob(const ResponseModel& model, const Profile& p, int item, const QMatrix& q) {
    if (item < 0 || item >= q.items()) throw std::out_of_range("item index out of range");
    if (p.size() != q.skills()) throw std::invalid_argument("profile length does not match Q-matrix");

    if (const auto* d = std::get_if<DinaParams>(&model)) {
        if (d->slip.size() != q.items()) throw std::invalid_argument("DINA parameters do not match Q-matrix");
        return eta(p, q.row(item)) ? 1.0 - d->slip[item] : d->guess[item];
    }
    const auto& n = std::get<NidaParams>(model);
    if (n.slip.size() != q.skills()) throw std::invalid_argument("NIDA parameters do not match Q-matrix");
    double prob = 1.0;
    for (int k = 0; k < q.skills(); ++k) {
        if (!q.entries()(item, k)) continue;
        prob *= p[k] ? 1.0 - n.slip[k] : n.guess[k];
    }
    return prob;
}

ResponseMatrix simulate_responses(std::span<const Profile> students, const QMatrix& q, const ResponseModel& model,
                                  Rng& rng) {
    if (students.empty()) throw std::invalid_argument("no students to simulate");
    validate_params(model, q);
    const int n = static_cast<int>(students.size());
    ResponseMatrix y(n, q.items());
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        if (students[i].size() != q.skills()) throw std::invalid_argument("student profile length does not match K");
        for (int j = 0; j < q.items(); ++j) y(i, j) = unit(rng) < response_prob(model, students[i], j, q) ? 1 : 0;
    }
    return y;
}

std::vector<Profile> assign_students(int num_students, const ProfileSet& subset, Rng& rng, int max_retries) {
    if (subset.profiles.empty()) throw std::invalid_argument("profile subset is empty");
    if (num_students < subset.size())
        throw std::invalid_argument("cannot cover " + std::to_string(subset.size()) + " profiles with " +
                                    std::to_string(num_students) + " students");
    std::uniform_int_distribution<int> pick(0, subset.size() - 1);
    std::vector<int> draw(num_students);
    std::vector<char> seen(subset.size());
    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::fill(seen.begin(), seen.end(), 0);
        for (auto& d : draw) seen[d = pick(rng)] = 1;
        if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) {
            std::vector<Profile> out;
            out.reserve(num_students);
            for (int d : draw) out.push_back(subset.profiles[d]);
            return out;
        }
    }
    throw std::runtime_error("student assignment failed to cover every profile");
}

}  // namespace skillscape
