#include <gtest/gtest.h>

#include <functional>

#include "oracles.hpp"
#include "shear/forcing.hpp"
#include "shear/markov.hpp"

using namespace shear;

namespace {

Rational R(std::int64_t q, std::int64_t p) { return Rational(q, p); }
const FareyPair kThirdHalf(R(1, 3), R(1, 2));

// Naive canonical form: try every rotation.
std::vector<int> naive_min_rotation(const std::vector<int>& w) {
    std::vector<int> best = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
        std::vector<int> rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
        best = std::min(best, rot);
    }
    return best;
}

bool primitive(const std::vector<int>& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d) continue;
        bool periodic = true;
        for (std::size_t i = d; i < n && periodic; ++i) periodic = w[i] == w[i - d];
        if (periodic) return false;
    }
    return true;
}

// Every closed walk of length <= max_len by plain DFS, reduced to canonical
// primitive words.
std::set<std::vector<int>> brute_cycles(const TransitionGraph& g, int max_len) {
    std::set<std::vector<int>> out;
    std::vector<int> w;
    std::function<void()> dfs = [&] {
        if (g.has_edge(w.back(), w.front()) && primitive(w)) out.insert(naive_min_rotation(w));
        if (static_cast<int>(w.size()) == max_len) return;
        for (int nx : g.successors(w.back())) {
            w.push_back(nx);
            dfs();
            w.pop_back();
        }
    };
    for (int v : g.active_vertices()) {
        w.assign(1, v);
        dfs();
    }
    return out;
}

std::vector<FareyPair> pairs_with_long_period_at_most(std::int64_t p1_max) {
    std::vector<FareyPair> out;
    for (const auto& [a, b] : oracle::all_neighbour_pairs(p1_max)) out.emplace_back(a, b);
    return out;
}

}  // namespace

TEST(Rectangles, CountAndKindsForThirdHalf) {
    const auto rects = label_rectangles(kThirdHalf);
    ASSERT_EQ(rects.size(), 16u);
    const std::string kinds = "DDCCLLKKAAABBBBM";
    for (std::size_t i = 0; i < rects.size(); ++i) {
        EXPECT_EQ(rects[i].index, static_cast<int>(i) + 1);
        EXPECT_EQ(kind_letter(rects[i].kind), kinds[i]) << "r" << i + 1;
    }
}

TEST(Rectangles, Count) {
    EXPECT_EQ(label_rectangles(FareyPair(R(1, 4), R(1, 3))).size(), 22u);
    EXPECT_EQ(rectangle_count(FareyPair(R(0, 1), R(1, 2))), 10);
    EXPECT_THROW(rectangle_kind(kThirdHalf, 0), std::out_of_range);
    EXPECT_THROW(rectangle_kind(kThirdHalf, 17), std::out_of_range);
}

TEST(Rectangles, KindRangesGeneral) {
    for (const auto& pair : pairs_with_long_period_at_most(9)) {
        const int p1 = static_cast<int>(pair.long_orbit().den());
        const int p2 = static_cast<int>(pair.short_orbit().den());
        std::map<RectKind, int> count;
        for (const auto& r : label_rectangles(pair)) ++count[r.kind];
        ASSERT_EQ(count[RectKind::D], p2);
        ASSERT_EQ(count[RectKind::C], p2);
        ASSERT_EQ(count[RectKind::L], p2);
        ASSERT_EQ(count[RectKind::K], p2);
        ASSERT_EQ(count[RectKind::A], p1);
        ASSERT_EQ(count[RectKind::B], p1 + 1);
        ASSERT_EQ(count[RectKind::M], p1 - p2);
    }
}

TEST(Skeleton, ThirdHalfEdges) {
    const auto g = build_skeleton_graph(kThirdHalf);
    const std::set<std::pair<int, int>> expected{{12, 13}, {13, 14}, {14, 12}, {1, 2},  {2, 1},
                                                 {5, 6},   {14, 1},  {2, 5},   {14, 5}, {6, 12}};
    EXPECT_EQ(g.edges(), expected);
    EXPECT_EQ(g.n_rectangles(), 16);
    EXPECT_EQ(g.active_vertices(), (std::vector<int>{1, 2, 5, 6, 12, 13, 14}));
}

TEST(Skeleton, EdgeCountAndStrongConnectivity) {
    for (const auto& pair : pairs_with_long_period_at_most(9)) {
        const auto g = build_skeleton_graph(pair);
        const auto p1 = pair.long_orbit().den();
        const auto p2 = pair.short_orbit().den();
        ASSERT_EQ(static_cast<std::int64_t>(g.edges().size()), p1 + 2 * p2 + 3) << pair;
        const auto& vs = g.active_vertices();
        for (int s : vs) {
            std::set<int> seen{s};
            std::vector<int> stack{s};
            while (!stack.empty()) {
                const int v = stack.back();
                stack.pop_back();
                for (int w : g.successors(v))
                    if (seen.insert(w).second) stack.push_back(w);
            }
            ASSERT_EQ(seen.size(), vs.size()) << pair << " from r" << s;
        }
    }
}

TEST(Skeleton, DotOutput) {
    const auto dot = build_skeleton_graph(kThirdHalf).to_dot();
    EXPECT_NE(dot.find("r12 [label=\"r12:B\"];"), std::string::npos);
    EXPECT_NE(dot.find("r16 [label=\"r16:M\"];"), std::string::npos);
    EXPECT_NE(dot.find("r14 -> r5;"), std::string::npos);
    EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Onm, Examples) {
    const auto o11 = build_Onm(kThirdHalf, 1, 1);
    EXPECT_EQ(o11.word(), (std::vector<int>{12, 13, 14, 5, 6}));
    EXPECT_EQ(o11.canonical(), (std::vector<int>{5, 6, 12, 13, 14}));
    EXPECT_EQ(build_Onm(kThirdHalf, 2, 1).length(), 8u);
    EXPECT_EQ(build_Onm(kThirdHalf, 1, 2).word(), (std::vector<int>{12, 13, 14, 1, 2, 5, 6}));
    EXPECT_THROW(build_Onm(kThirdHalf, 0, 1), std::domain_error);
}

TEST(Onm, RotationNumbers) {
    EXPECT_EQ(cycle_rotation_number(build_Onm(kThirdHalf, 1, 1), kThirdHalf), R(2, 5));
    EXPECT_EQ(cycle_rotation_number(build_Onm(kThirdHalf, 2, 1), kThirdHalf), R(3, 8));
    const auto g = build_skeleton_graph(kThirdHalf);
    EXPECT_EQ(cycle_rotation_number(SymbolicCycle({12, 13, 14}, g), kThirdHalf), R(1, 3));
    EXPECT_EQ(cycle_rotation_number(SymbolicCycle({12, 13, 14, 12, 13, 14}, g), kThirdHalf), R(1, 3));
    EXPECT_EQ(cycle_rotation_number(SymbolicCycle({1, 2}, g), kThirdHalf), R(1, 2));
}

TEST(Onm, LengthAndRotationAcrossPairs) {
    for (const auto& pair : pairs_with_long_period_at_most(8)) {
        const auto p1 = pair.long_orbit().den();
        const auto p2 = pair.short_orbit().den();
        std::set<std::vector<int>> words;
        for (int n = 1; n <= 6; ++n)
            for (int m = 1; m <= 6; ++m) {
                const auto c = build_Onm(pair, n, m);
                ASSERT_EQ(static_cast<std::int64_t>(c.length()), n * p1 + m * p2);
                ASSERT_EQ(cycle_rotation_number(c, pair),
                          weighted_mediant(pair.long_orbit(), pair.short_orbit(), n, m));
                ASSERT_TRUE(words.insert(c.canonical()).second) << pair << " O_" << n << "," << m;
            }
    }
}

TEST(SymbolicCycle, RejectsForbiddenTransitions) {
    const auto g = build_skeleton_graph(kThirdHalf);
    EXPECT_THROW(SymbolicCycle({12, 13}, g), std::domain_error);
    EXPECT_THROW(SymbolicCycle({}, g), std::domain_error);
    EXPECT_THROW(SymbolicCycle({12, 14, 13}, g), std::domain_error);
}

TEST(SymbolicCycle, RotationRejectsCycleFromAnotherPair) {
    const FareyPair other(R(2, 5), R(1, 2));
    const auto c = build_Onm(other, 1, 1);
    EXPECT_THROW(cycle_rotation_number(c, kThirdHalf), std::domain_error);
}

TEST(LeastRotation, MatchesNaive) {
    const std::vector<std::vector<int>> words{{3, 1, 2}, {2, 2, 1, 2}, {5}, {1, 1, 1}, {4, 1, 4, 1, 3}, {2, 1, 2, 1}};
    for (const auto& w : words) EXPECT_EQ(least_rotation(w), naive_min_rotation(w));
}

TEST(Enumerate, Examples) {
    const auto g = build_skeleton_graph(kThirdHalf);
    std::set<std::vector<int>> five;
    for (const auto& c : enumerate_cycles(g, 5)) five.insert(c.canonical());
    EXPECT_TRUE(five.contains({12, 13, 14}));
    EXPECT_TRUE(five.contains({1, 2}));
    EXPECT_TRUE(five.contains({5, 6, 12, 13, 14}));

    const auto two = enumerate_cycles(g, 2);
    ASSERT_EQ(two.size(), 1u);
    EXPECT_EQ(two.front().canonical(), (std::vector<int>{1, 2}));

    EXPECT_TRUE(enumerate_cycles(g, 0).empty());
    EXPECT_THROW(enumerate_cycles(g, 65), std::domain_error);
}

TEST(Enumerate, MatchesBruteForceDfs) {
    for (const auto& pair : pairs_with_long_period_at_most(4)) {
        const auto g = build_skeleton_graph(pair);
        for (int len : {1, 3, 7, 12}) {
            std::set<std::vector<int>> got;
            for (const auto& c : enumerate_cycles(g, len)) {
                ASSERT_EQ(c.word(), c.canonical());
                ASSERT_TRUE(got.insert(c.canonical()).second);
            }
            ASSERT_EQ(got, brute_cycles(g, len)) << pair << " len " << len;
        }
    }
}

TEST(Realized, Examples) {
    EXPECT_EQ(realized_rotation_numbers(kThirdHalf, 5), (std::set<Rational>{R(1, 3), R(2, 5), R(1, 2)}));
    EXPECT_EQ(realized_rotation_numbers(kThirdHalf, 2), (std::set<Rational>{R(1, 2)}));
    const auto r12 = realized_rotation_numbers(kThirdHalf, 12);
    for (const auto& r : oracle::rationals_in_closed(R(1, 3), R(1, 2), 12)) EXPECT_TRUE(r12.contains(r)) << r;
    EXPECT_THROW(realized_rotation_numbers(kThirdHalf, 65), std::domain_error);
}

TEST(Realized, AgreesWithCycleEnumeration) {
    // The block-count shortcut must give exactly the rotation numbers of the
    // enumerated cycles.
    for (const auto& pair : pairs_with_long_period_at_most(5)) {
        const auto g = build_skeleton_graph(pair);
        for (int len : {1, 2, 6, 11, 14}) {
            std::set<Rational> via_cycles;
            for (const auto& c : enumerate_cycles(g, len)) via_cycles.insert(cycle_rotation_number(c, pair));
            ASSERT_EQ(realized_rotation_numbers(pair, len), via_cycles) << pair << " len " << len;
        }
    }
}

TEST(Realized, SpansAndStaysInside) {
    for (const auto& pair : pairs_with_long_period_at_most(5)) {
        const auto p1 = pair.long_orbit().den();
        for (std::int64_t D = 1; D <= 12; ++D) {
            const auto got = realized_rotation_numbers(pair, static_cast<int>(D * p1));
            for (const auto& r : oracle::rationals_in_closed(pair.lo(), pair.hi(), D))
                ASSERT_TRUE(got.contains(r)) << pair << " D=" << D << " missing " << r;
            for (const auto& r : got) ASSERT_TRUE(pair.contains(r)) << pair << " leaked " << r;
        }
    }
}

TEST(Realized, ConsistentWithForcedSet) {
    for (const auto& pair : pairs_with_long_period_at_most(5)) {
        const auto p12 = pair.long_orbit().den() + pair.short_orbit().den();
        for (std::int64_t D = 1; D * p12 <= kMaxCycleLength; ++D) {
            const auto got = realized_rotation_numbers(pair, static_cast<int>(D * p12));
            for (const auto& e : forced_set(pair, D))
                if (const auto* o = std::get_if<SimpleOrbit>(&e)) ASSERT_TRUE(got.contains(o->rotation));
        }
    }
}

TEST(Verify, PassesForSmallPairs) {
    EXPECT_TRUE(markov_verify(kThirdHalf, 10).pass);
    EXPECT_THROW(markov_verify(kThirdHalf, 65), std::domain_error);
}
