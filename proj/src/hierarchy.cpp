#include "skillscape/hierarchy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace skillscape {

std::string profile_to_string(const Profile& p) {
    std::string s;
    s.reserve(p.size());
    for (Eigen::Index k = 0; k < p.size(); ++k) s.push_back(p[k] ? '1' : '0');
    return s;
}

Profile profile_from_string(std::string_view bits) {
    Profile p(static_cast<Eigen::Index>(bits.size()));
    for (std::size_t k = 0; k < bits.size(); ++k) {
        if (bits[k] != '0' && bits[k] != '1')
            throw std::invalid_argument("profile string must contain only 0/1: " + std::string(bits));
        p[static_cast<Eigen::Index>(k)] = bits[k] == '1';
    }
    return p;
}

std::string_view to_string(HierarchyKind kind) {
    switch (kind) {
        case HierarchyKind::Linear: return "linear";
        case HierarchyKind::Convergent: return "convergent";
        case HierarchyKind::Divergent: return "divergent";
        case HierarchyKind::Unstructured: return "unstructured";
        case HierarchyKind::Null: return "null";
    }
    return "unknown";
}

HierarchyKind parse_hierarchy_kind(std::string_view name) {
    for (auto kind : {HierarchyKind::Linear, HierarchyKind::Convergent, HierarchyKind::Divergent,
                      HierarchyKind::Unstructured, HierarchyKind::Null}) {
        if (to_string(kind) == name) return kind;
    }
    throw std::invalid_argument("unknown hierarchy '" + std::string(name) +
                                "' (expected linear, convergent, divergent, unstructured or null)");
}

Hierarchy::Hierarchy(int num_skills, std::vector<std::vector<Term>> requirements)
    : num_skills_(num_skills), requirements_(std::move(requirements)) {
    if (num_skills_ < 1) throw std::invalid_argument("hierarchy needs at least one skill");
    if (static_cast<int>(requirements_.size()) != num_skills_)
        throw std::invalid_argument("hierarchy requirement list must have one entry per skill");

    for (int k = 0; k < num_skills_; ++k) {
        for (auto& term : requirements_[k]) {
            if (term.empty()) throw std::invalid_argument("empty prerequisite term on skill " + std::to_string(k + 1));
            for (int parent : term) {
                if (parent < 0 || parent >= num_skills_)
                    throw std::invalid_argument("prerequisite of skill " + std::to_string(k + 1) + " out of range");
                if (parent == k)
                    throw std::invalid_argument("skill " + std::to_string(k + 1) + " lists itself as prerequisite");
            }
            std::sort(term.begin(), term.end());
            term.erase(std::unique(term.begin(), term.end()), term.end());
        }
    }

    // Kahn's algorithm over parent -> child edges.
    std::vector<int> indegree(num_skills_, 0);
    std::vector<std::vector<int>> children(num_skills_);
    for (int k = 0; k < num_skills_; ++k) {
        std::vector<int> parents;
        for (const auto& term : requirements_[k]) parents.insert(parents.end(), term.begin(), term.end());
        std::sort(parents.begin(), parents.end());
        parents.erase(std::unique(parents.begin(), parents.end()), parents.end());
        for (int p : parents) children[p].push_back(k);
        indegree[k] = static_cast<int>(parents.size());
    }
    std::vector<int> ready;
    for (int k = 0; k < num_skills_; ++k)
        if (indegree[k] == 0) ready.push_back(k);
    int visited = 0;
    while (!ready.empty()) {
        int k = ready.back();
        ready.pop_back();
        ++visited;
        for (int c : children[k])
            if (--indegree[c] == 0) ready.push_back(c);
    }
    if (visited != num_skills_) throw std::invalid_argument("prerequisite graph contains a cycle");
}

Hierarchy build_canonical_hierarchy(HierarchyKind kind, int num_skills) {
    using Terms = std::vector<Hierarchy::Term>;
    if (num_skills < 1) throw std::invalid_argument("hierarchy needs at least one skill");

    if (kind == HierarchyKind::Null) return Hierarchy(num_skills, std::vector<Terms>(num_skills));
    if (kind == HierarchyKind::Linear) {
        std::vector<Terms> req(num_skills);
        for (int k = 1; k < num_skills; ++k) req[k] = {{k - 1}};
        return Hierarchy(num_skills, std::move(req));
    }
    if (num_skills != 6)
        throw std::invalid_argument("hierarchy '" + std::string(to_string(kind)) +
                                    "' is defined only for 6 skills; linear and null accept any K >= 1");

    switch (kind) {
        case HierarchyKind::Convergent:
            // 1->2, 2->3, 2->4, (3 or 4)->5, 5->6
            return Hierarchy(6, {{}, {{0}}, {{1}}, {{1}}, {{2, 3}}, {{4}}});
        case HierarchyKind::Divergent:
            // 1->2, 2->3, 1->4, 4->5, 4->6
            return Hierarchy(6, {{}, {{0}}, {{1}}, {{0}}, {{3}}, {{3}}});
        case HierarchyKind::Unstructured:
            return Hierarchy(6, {{}, {{0}}, {{0}}, {{0}}, {{0}}, {{0}}});
        default:
            break;
    }
    throw std::invalid_argument("unsupported hierarchy kind");
}

bool is_consistent(const Profile& p, const Hierarchy& h) {
    if (p.size() != h.num_skills())
        throw std::invalid_argument("profile length " + std::to_string(p.size()) + " does not match hierarchy K=" +
                                    std::to_string(h.num_skills()));
    for (int k = 0; k < h.num_skills(); ++k) {
        if (!p[k]) continue;
        for (const auto& term : h.terms(k)) {
            bool satisfied = std::any_of(term.begin(), term.end(), [&](int parent) { return p[parent] != 0; });
            if (!satisfied) return false;
        }
    }
    return true;
}

int ProfileSet::index_of(const Profile& p) const {
    for (int i = 0; i < size(); ++i)
        if (profiles[i] == p) return i;
    return -1;
}

bool canonical_less(const Profile& a, const Profile& b) {
    const auto ca = a.sum(), cb = b.sum();
    if (ca != cb) return ca < cb;
    for (Eigen::Index k = 0; k < std::min(a.size(), b.size()); ++k)
        if (a[k] != b[k]) return a[k] > b[k];
    return a.size() < b.size();
}

ProfileSet enumerate_profiles(const Hierarchy& h) {
    const int K = h.num_skills();
    if (K > kMaxEnumerableSkills)
        throw std::invalid_argument("enumeration supports at most " + std::to_string(kMaxEnumerableSkills) +
                                    " skills, got " + std::to_string(K));
    ProfileSet out;
    out.num_skills = K;
    out.canonical = true;
    Profile p(K);
    for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
        for (int k = 0; k < K; ++k) p[k] = (mask >> (K - 1 - k)) & 1u;
        if (is_consistent(p, h)) out.profiles.push_back(p);
    }
    std::sort(out.profiles.begin(), out.profiles.end(), canonical_less);
    return out;
}

ProfileSet select_subset(const ProfileSet& ps, int size, SubsetMode mode, Rng& rng) {
    if (size < 3 || size > ps.size())
        throw std::invalid_argument("subset size " + std::to_string(size) + " outside [3, " +
                                    std::to_string(ps.size()) + "]");
    ProfileSet out;
    out.num_skills = ps.num_skills;
    out.canonical = ps.canonical;
    if (mode == SubsetMode::Prefix) {
        out.profiles.assign(ps.profiles.begin(), ps.profiles.begin() + size);
        return out;
    }
    std::vector<int> idx(ps.size());
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first `size` slots become a uniform sample.
    for (int i = 0; i < size; ++i) {
        std::uniform_int_distribution<int> pick(i, ps.size() - 1);
        std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    for (int i : idx) out.profiles.push_back(ps.profiles[i]);
    if (!ps.canonical) std::sort(out.profiles.begin(), out.profiles.end(), canonical_less);
    out.canonical = true;
    return out;
}

}  // namespace skillscape
