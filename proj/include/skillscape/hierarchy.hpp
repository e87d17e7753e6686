#pragma once
// Skill prerequisite hierarchies and the mastery profiles they admit.
//
// A hierarchy over K skills stores, per skill, a list of prerequisite terms.
// Each term is a nonempty set of parent skills. Skill k can be mastered only
// if every term has at least one mastered parent (AND over terms, OR within
// a term). Skill indices are 0-based in this API; the JSON config uses 1-based.

#include <string>
#include <string_view>
#include <vector>

#include "skillscape/core.hpp"

namespace skillscape {

// Binary mastery vector, one entry per skill.
using Profile = Eigen::VectorXi;

std::string profile_to_string(const Profile& p);
Profile profile_from_string(std::string_view bits);

enum class HierarchyKind { Linear, Convergent, Divergent, Unstructured, Null };

std::string_view to_string(HierarchyKind kind);
HierarchyKind parse_hierarchy_kind(std::string_view name);

class Hierarchy {
public:
    using Term = std::vector<int>;

    // Throws std::invalid_argument on out-of-range parents, self-loops,
    // empty terms, or a cyclic prerequisite graph.
    Hierarchy(int num_skills, std::vector<std::vector<Term>> requirements);

    int num_skills() const { return num_skills_; }
    const std::vector<Term>& terms(int skill) const { return requirements_.at(skill); }

private:
    int num_skills_;
    std::vector<std::vector<Term>> requirements_;
};

Hierarchy build_canonical_hierarchy(HierarchyKind kind, int num_skills);

bool is_consistent(const Profile& p, const Hierarchy& h);

// Ordered, duplicate-free sequence of profiles over a common skill count.
struct ProfileSet {
    int num_skills = 0;
    std::vector<Profile> profiles;
    bool canonical = false;

    int size() const { return static_cast<int>(profiles.size()); }
    const Profile& operator[](int i) const { return profiles.at(i); }
    int index_of(const Profile& p) const;  // -1 when absent
};

// True when a precedes b: fewer mastered skills first, then skill 1 mastered
// before skill 1 unmastered, and so on down the skill list.
bool canonical_less(const Profile& a, const Profile& b);

inline constexpr int kMaxEnumerableSkills = 20;

// Brute force over all 2^K candidates; K is capped at kMaxEnumerableSkills.
ProfileSet enumerate_profiles(const Hierarchy& h);

enum class SubsetMode { Prefix, Random };

ProfileSet select_subset(const ProfileSet& ps, int size, SubsetMode mode, Rng& rng);

}  // namespace skillscape
