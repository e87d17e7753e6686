#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <set>

#include "skillscape/hierarchy.hpp"

using namespace skillscape;

namespace {

Profile bits(const char* s) { return profile_from_string(s); }

std::vector<std::string> strings(const ProfileSet& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps.profiles) out.push_back(profile_to_string(p));
    return out;
}

// Oracle: bitmask check against AND-of-OR clauses written independently of
// the library, with skill 1 as the most significant bit of a K-bit mask.
struct Clause {
    int skill;
    std::vector<int> any_of;
};

int brute_force_count(int K, const std::vector<Clause>& clauses) {
    int count = 0;
    for (int mask = 0; mask < (1 << K); ++mask) {
        auto has = [&](int skill) { return (mask >> (K - skill)) & 1; };
        bool ok = true;
        for (const auto& c : clauses) {
            if (!has(c.skill)) continue;
            bool any = false;
            for (int p : c.any_of) any |= has(p);
            ok &= any;
        }
        count += ok;
    }
    return count;
}

}  // namespace

TEST(Hierarchy, CanonicalCountsAtSixSkills) {
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Linear, 6)).size(), 7);
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Convergent, 6)).size(), 12);
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Divergent, 6)).size(), 16);
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Unstructured, 6)).size(), 33);
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Null, 6)).size(), 64);
}

TEST(Hierarchy, CountsMatchBitmaskOracle) {
    // 1-based skills, as drawn.
    EXPECT_EQ(brute_force_count(6, {{2, {1}}, {3, {2}}, {4, {2}}, {5, {3, 4}}, {6, {5}}}), 12);
    EXPECT_EQ(brute_force_count(6, {{2, {1}}, {3, {2}}, {4, {1}}, {5, {4}}, {6, {4}}}), 16);
    EXPECT_EQ(brute_force_count(6, {{2, {1}}, {3, {1}}, {4, {1}}, {5, {1}}, {6, {1}}}), 33);
    // Pure AND reading of the convergent shape gives 8, not 12.
    EXPECT_EQ(brute_force_count(6, {{2, {1}}, {3, {2}}, {4, {2}}, {5, {3}}, {5, {4}}, {6, {5}}}), 8);
}

TEST(Hierarchy, ConvergentProfilesInCanonicalOrder) {
    const auto ps = enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Convergent, 6));
    const std::vector<std::string> expected = {"000000", "100000", "110000", "111000", "110100", "111100",
                                               "111010", "110110", "111110", "111011", "110111", "111111"};
    EXPECT_EQ(strings(ps), expected);
    EXPECT_TRUE(ps.canonical);
}

TEST(Hierarchy, LinearThreeSkills) {
    const auto ps = enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Linear, 3));
    EXPECT_EQ(strings(ps), (std::vector<std::string>{"000", "100", "110", "111"}));
}

TEST(Hierarchy, ConsistencyExamples) {
    const Hierarchy chain = build_canonical_hierarchy(HierarchyKind::Linear, 2);
    EXPECT_FALSE(is_consistent(bits("01"), chain));
    EXPECT_TRUE(is_consistent(bits("10"), chain));
    EXPECT_TRUE(is_consistent(bits("11"), chain));
    EXPECT_TRUE(is_consistent(bits("00"), chain));
    for (auto kind : {HierarchyKind::Convergent, HierarchyKind::Divergent, HierarchyKind::Unstructured})
        EXPECT_TRUE(is_consistent(Profile::Zero(6), build_canonical_hierarchy(kind, 6)));
    EXPECT_THROW(is_consistent(bits("101"), chain), std::invalid_argument);
}

TEST(Hierarchy, RejectsUnsupportedShapes) {
    EXPECT_THROW(build_canonical_hierarchy(HierarchyKind::Convergent, 5), std::invalid_argument);
    EXPECT_THROW(build_canonical_hierarchy(HierarchyKind::Divergent, 7), std::invalid_argument);
    EXPECT_THROW(build_canonical_hierarchy(HierarchyKind::Linear, 0), std::invalid_argument);
    EXPECT_NO_THROW(build_canonical_hierarchy(HierarchyKind::Linear, 9));
    EXPECT_NO_THROW(build_canonical_hierarchy(HierarchyKind::Null, 1));
    try {
        build_canonical_hierarchy(HierarchyKind::Unstructured, 4);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("linear and null"), std::string::npos);
    }
}

TEST(Hierarchy, RejectsMalformedGraphs) {
    EXPECT_THROW(Hierarchy(2, {{{1}}, {{0}}}), std::invalid_argument);  // cycle
    EXPECT_THROW(Hierarchy(2, {{}, {{1}}}), std::invalid_argument);     // self loop
    EXPECT_THROW(Hierarchy(2, {{}, {{2}}}), std::invalid_argument);     // out of range
    EXPECT_THROW(Hierarchy(2, {{}, {{}}}), std::invalid_argument);      // empty term
    EXPECT_THROW(Hierarchy(3, {{}, {}}), std::invalid_argument);        // wrong length
}

TEST(Hierarchy, EnumerationCapacity) {
    EXPECT_THROW(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Linear, 21)), std::invalid_argument);
    EXPECT_EQ(enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Linear, 20)).size(), 21);
}

// Exhaustive: enumerated set == set of consistent vectors, for random DAGs.
TEST(Hierarchy, EnumerationMatchesMembershipOnRandomDags) {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const int K = 1 + trial % 10;
        std::vector<std::vector<Hierarchy::Term>> req(K);
        std::vector<Clause> clauses;
        for (int k = 1; k < K; ++k) {
            const int terms = std::uniform_int_distribution<int>(0, 2)(rng);
            for (int t = 0; t < terms; ++t) {
                Hierarchy::Term term;
                Clause c{k + 1, {}};
                const int width = std::uniform_int_distribution<int>(1, 2)(rng);
                for (int w = 0; w < width; ++w) {
                    const int parent = std::uniform_int_distribution<int>(0, k - 1)(rng);
                    term.push_back(parent);
                    c.any_of.push_back(parent + 1);
                }
                req[k].push_back(term);
                clauses.push_back(c);
            }
        }
        const Hierarchy h(K, req);
        const auto ps = enumerate_profiles(h);
        EXPECT_EQ(ps.size(), brute_force_count(K, clauses));

        std::set<std::string> members;
        for (const auto& p : ps.profiles) members.insert(profile_to_string(p));
        EXPECT_TRUE(members.count(std::string(K, '0')));
        for (int mask = 0; mask < (1 << K); ++mask) {
            Profile p(K);
            for (int k = 0; k < K; ++k) p[k] = (mask >> k) & 1;
            EXPECT_EQ(is_consistent(p, h), members.count(profile_to_string(p)) == 1);
        }
        EXPECT_TRUE(std::is_sorted(ps.profiles.begin(), ps.profiles.end(), canonical_less));
        EXPECT_EQ(strings(enumerate_profiles(h)), strings(ps));
    }
}

// Unmastering a skill that no mastered skill depends on keeps consistency.
TEST(Hierarchy, DownwardClosedUnderRemovingLeaves) {
    for (auto kind : {HierarchyKind::Linear, HierarchyKind::Convergent, HierarchyKind::Divergent,
                      HierarchyKind::Unstructured, HierarchyKind::Null}) {
        const auto h = build_canonical_hierarchy(kind, 6);
        for (const auto& p : enumerate_profiles(h).profiles) {
            for (int k = 0; k < 6; ++k) {
                if (!p[k]) continue;
                bool depended_on = false;
                for (int c = 0; c < 6; ++c) {
                    if (!p[c]) continue;
                    for (const auto& term : h.terms(c))
                        depended_on |= std::find(term.begin(), term.end(), k) != term.end();
                }
                if (depended_on) continue;
                Profile q = p;
                q[k] = 0;
                EXPECT_TRUE(is_consistent(q, h)) << profile_to_string(p) << " minus skill " << k + 1;
            }
        }
    }
}

TEST(Hierarchy, PrefixSubset) {
    Rng rng(1);
    const auto linear = enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Linear, 6));
    EXPECT_EQ(strings(select_subset(linear, 3, SubsetMode::Prefix, rng)),
              (std::vector<std::string>{"000000", "100000", "110000"}));
    EXPECT_EQ(strings(select_subset(linear, 7, SubsetMode::Prefix, rng)), strings(linear));
    EXPECT_EQ(strings(select_subset(linear, 7, SubsetMode::Random, rng)), strings(linear));
    EXPECT_THROW(select_subset(linear, 2, SubsetMode::Prefix, rng), std::invalid_argument);
    EXPECT_THROW(select_subset(linear, 8, SubsetMode::Random, rng), std::invalid_argument);
}

TEST(Hierarchy, RandomSubsetIsDeterministicAndCanonical) {
    const auto null = enumerate_profiles(build_canonical_hierarchy(HierarchyKind::Null, 6));
    Rng a(99), b(99);
    const auto s1 = select_subset(null, 4, SubsetMode::Random, a);
    const auto s2 = select_subset(null, 4, SubsetMode::Random, b);
    EXPECT_EQ(strings(s1), strings(s2));
    EXPECT_EQ(s1.size(), 4);
    EXPECT_TRUE(std::is_sorted(s1.profiles.begin(), s1.profiles.end(), canonical_less));
    const auto names = strings(s1);
    std::set<std::string> uniq(names.begin(), names.end());
    EXPECT_EQ(uniq.size(), 4u);
}

TEST(Hierarchy, EnumerationIsFast) {
    const auto t0 = std::chrono::steady_clock::now();
    for (auto kind : {HierarchyKind::Linear, HierarchyKind::Convergent, HierarchyKind::Divergent,
                      HierarchyKind::Unstructured, HierarchyKind::Null})
        enumerate_profiles(build_canonical_hierarchy(kind, 6));
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}
