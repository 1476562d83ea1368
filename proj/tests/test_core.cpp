#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "hyperlab/constructions.hpp"
#include "hyperlab/structure.hpp"
#include "oracles.hpp"

using namespace hyperlab;

namespace {

const HyperStructure& madar() {
    static const HyperStructure a = fixture("paper-2-4").structure;
    return a;
}

const HyperStructure& ex() {
    static const HyperStructure a = fixture("paper-3-3").structure;
    return a;
}

}  // namespace

TEST(ElementSet, BasicAlgebra) {
    const ElementSet a{0, 2, 5}, b{2, 3};
    EXPECT_EQ(a.size(), 3U);
    EXPECT_TRUE(a.contains(5));
    EXPECT_FALSE(a.contains(1));
    EXPECT_EQ(a | b, (ElementSet{0, 2, 3, 5}));
    EXPECT_EQ(a & b, ElementSet{2});
    EXPECT_EQ(a - b, (ElementSet{0, 5}));
    EXPECT_EQ(a.complement(6), (ElementSet{1, 3, 4}));
    EXPECT_TRUE(ElementSet{2}.subset_of(b));
    EXPECT_FALSE(a.subset_of(b));
    EXPECT_TRUE(a.intersects(b));
    EXPECT_TRUE(ElementSet{}.empty());
    EXPECT_EQ(a.to_vector(), (std::vector<Element>{0, 2, 5}));
    EXPECT_EQ(ElementSet::full(64).size(), 64U);
    EXPECT_EQ(ElementSet::full(64).complement(64), ElementSet{});
}

TEST(ElementSet, IterationIsAscending) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const ElementSet s(rng() | (std::uint64_t{rng()} << 32));
        const auto v = s.to_vector();
        EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
        EXPECT_EQ(v.size(), s.size());
        for (Element e : v) EXPECT_TRUE(s.contains(e));
    }
}

TEST(Multiset, RankIsABijection) {
    for (std::size_t n : {1U, 3U, 5U})
        for (std::size_t k : {1U, 2U, 4U}) {
            std::vector<int> hits(multiset_count(n, k), 0);
            for_each_multiset(ElementSet::full(n), k, [&](std::span<const Element> t) {
                const auto r = multiset_rank(t);
                ASSERT_LT(r, hits.size());
                ++hits[r];
            });
            for (int h : hits) EXPECT_EQ(h, 1) << n << " " << k;
        }
}

TEST(Multiset, CountMatchesBruteForce) {
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t k = 1; k <= 4; ++k) {
            std::size_t sorted = 0;
            oracle::each_tuple(n, k, [&](const oracle::Tuple& t) {
                sorted += std::is_sorted(t.begin(), t.end()) ? 1 : 0;
                return true;
            });
            EXPECT_EQ(multiset_count(n, k), sorted);
        }
}

TEST(EvalF, MadarTable) {
    EXPECT_EQ(madar().f({1, 1}), (ElementSet{0, 1}));
    for (Element x = 0; x < 4; ++x) EXPECT_EQ(madar().f({0, x}), ElementSet::singleton(x));
    EXPECT_EQ(madar().f({1, 3}), (ElementSet{2, 3}));
    EXPECT_EQ(madar().f({2, 2}), ElementSet{0});
    EXPECT_EQ(madar().f({3, 3}), (ElementSet{0, 1}));
}

TEST(EvalF, ThreeElementTable) { EXPECT_EQ(ex().f({1, 2, 2}), (ElementSet{0, 1, 2})); }

TEST(EvalG, Tables) {
    EXPECT_EQ(madar().g({2, 2, 3, 3}), 2);
    EXPECT_EQ(madar().g({1, 2, 3, 3}), 0);
    EXPECT_EQ(ex().g({1, 1, 2}), 2);
}

TEST(EvalSets, Examples) {
    EXPECT_EQ(madar().f_sets({ElementSet{0}, ElementSet{2}}), ElementSet{2});
    EXPECT_EQ(madar().f_sets({ElementSet{1}, ElementSet{1, 3}}), (ElementSet{0, 1, 2, 3}));
    EXPECT_EQ(ex().f_sets({ElementSet{1, 2}, ElementSet{2}, ElementSet{2}}), (ElementSet{0, 1, 2}));
    const ElementSet J{2, 3};
    EXPECT_EQ(madar().g_sets({J, J, J, J}), ElementSet{2});
    EXPECT_EQ(madar().g_sets({ElementSet{0, 1}, J, J, J}), ElementSet{0});
}

TEST(EvalSets, ZeroAbsorbsSetwise) {
    for (const char* name : {"paper-2-4", "ring:Z6", "ring:Z4*ring:Z3"}) {
        const HyperStructure a = fixture(name).structure;
        std::vector<ElementSet> args(a.n(), a.carrier_set());
        args[0] = ElementSet::singleton(a.zero());
        EXPECT_EQ(a.g_sets(args), ElementSet::singleton(a.zero())) << name;
    }
}

TEST(EvalSets, EmptyArgumentThrows) {
    EXPECT_THROW(madar().f_sets({ElementSet{}, ElementSet{1}}), EmptyArgument);
    EXPECT_THROW(madar().g_sets({ElementSet{}, ElementSet{1}, ElementSet{1}, ElementSet{1}}), EmptyArgument);
}

TEST(EvalErrors, ArityAndRange) {
    EXPECT_THROW(madar().f({1, 1, 1}), ArityMismatch);
    EXPECT_THROW(madar().g({1, 1}), ArityMismatch);
    EXPECT_THROW(madar().f({1, 9}), UnknownElement);
    EXPECT_THROW((void)madar().element("7"), UnknownElement);
}

TEST(Structure, RejectsBadTables) {
    EXPECT_THROW(HyperStructure("x", 2, 2, {"0", "1"}, 0, std::nullopt, {ElementSet{0}}, {0, 0, 0}), Error);
    EXPECT_THROW(HyperStructure("x", 2, 2, {"0"}, 0, std::nullopt, {ElementSet{1}}, {0}), Error);
    EXPECT_THROW(HyperStructure("x", 2, 2, {"0", "0"}, 0, std::nullopt, {ElementSet{0}, ElementSet{1}, ElementSet{0}},
                                {0, 0, 0}),
                 Error);
    EXPECT_THROW(HyperStructure("x", 2, 2, {"0"}, 3, std::nullopt, {ElementSet{0}}, {0}), Error);
}

// Property: table lookups agree on every permutation of the arguments.
TEST(Properties, PermutationInvariance) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = oracle::random_structure(rng, 2 + rng() % 4, 2 + rng() % 2, 2 + rng() % 3);
        std::uniform_int_distribution<int> elem(0, static_cast<int>(a.size()) - 1);
        for (int probe = 0; probe < 20; ++probe) {
            std::vector<Element> t(a.m());
            for (auto& x : t) x = static_cast<Element>(elem(rng));
            const ElementSet base = a.f(t);
            std::sort(t.begin(), t.end());
            do EXPECT_EQ(a.f(t), base);
            while (std::next_permutation(t.begin(), t.end()));
            std::vector<Element> u(a.n());
            for (auto& x : u) x = static_cast<Element>(elem(rng));
            const Element gb = a.g(u);
            std::sort(u.begin(), u.end());
            do EXPECT_EQ(a.g(u), gb);
            while (std::next_permutation(u.begin(), u.end()));
        }
    }
}

// Property: setwise evaluation equals the oracle union, is monotone, and
// reduces to the elementwise value on singletons.
TEST(Properties, SetwiseEvaluation) {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = oracle::random_structure(rng, 2 + rng() % 4, 2 + rng() % 2, 2 + rng() % 2);
        std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << a.size()) - 1);
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<ElementSet> fa(a.m()), ga(a.n());
            for (auto& s : fa) s = ElementSet(mask(rng));
            for (auto& s : ga) s = ElementSet(mask(rng));
            EXPECT_EQ(a.f_sets(fa), oracle::f_on_sets(a, fa));
            EXPECT_EQ(a.g_sets(ga), oracle::g_on_sets(a, ga));
            auto bigger = fa;
            bigger[0] |= ElementSet(mask(rng));
            EXPECT_TRUE(a.f_sets(fa).subset_of(a.f_sets(bigger)));
            auto gbig = ga;
            gbig.back() |= ElementSet(mask(rng));
            EXPECT_TRUE(a.g_sets(ga).subset_of(a.g_sets(gbig)));
            std::vector<ElementSet> singles;
            std::vector<Element> t;
            for (ElementSet s : fa) {
                t.push_back(s.min());
                singles.push_back(ElementSet::singleton(s.min()));
            }
            EXPECT_EQ(a.f_sets(singles), a.f(t));
        }
    }
}

TEST(Structure, NamesAndFormatting) {
    const HyperStructure a = fixture("ring:Z6").structure;
    EXPECT_EQ(a.element("4"), 4);
    EXPECT_EQ(a.name_of(5), "5");
    EXPECT_EQ(a.format(ElementSet{0, 3}), "{0,3}");
    EXPECT_EQ(a.set_of({"2", "4"}), (ElementSet{2, 4}));
    EXPECT_EQ(a.one(), std::optional<Element>(1));
    EXPECT_FALSE(madar().has_one());
}
