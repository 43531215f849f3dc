#pragma once

// Symbolic dynamics of a simple pair.
//
// The Markov partition of a simple pair q1/p1 v q2/p2 (p1 > p2) has
// 3p1 + 3p2 + 1 rectangles r_1..r_N, one per edge of the invariant graph,
// grouped by edge type:
//
//   D  1 .. p2              vertical segments from the y-orbit loops
//   C  p2+1 .. 2p2          loops around the y-orbit points
//   L  2p2+1 .. 3p2         diagonal edges (see K)
//   K  3p2+1 .. 4p2
//   A  4p2+1 .. 4p2+p1      long vertical edges
//   B  4p2+p1+1 .. 4p2+2p1+1  short vertical edges; the last one is split in two
//   M  4p2+2p1+2 .. N       diagonals of once-punctured rectangles
//
// Only the skeleton of the transition graph is modelled: the B-loop, the
// D-loop, the L-connector, and the edges joining them. Every closed walk in
// the skeleton is a word of blocks  B | D | C  where
//
//   B = r_{p1+4p2+1} .. r_{2p1+4p2}   (p1 steps, horizontal displacement q1)
//   D = r_1 .. r_{p2}                 (p2 steps, displacement q2)
//   C = r_{2p2+1} .. r_{3p2}          (p2 steps, displacement q2)
//
// The displacement of the connector is taken as q2 so that O_{n,m} has
// rotation number (n q1 + m q2)/(n p1 + m p2). Read literally, the
// construction text assigns q1 to the connector, which contradicts that total.

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "shear/rational.hpp"

namespace shear {

enum class RectKind { A, B, C, D, K, L, M };

char kind_letter(RectKind k) noexcept;

struct RectangleId {
    int index = 0;
    RectKind kind = RectKind::A;
    friend bool operator==(const RectangleId&, const RectangleId&) = default;
};

/// 3p1 + 3p2 + 1
int rectangle_count(const FareyPair& pair) noexcept;

/// Kind of rectangle r_index. Throws std::out_of_range for an invalid index.
RectKind rectangle_kind(const FareyPair& pair, int index);

std::vector<RectangleId> label_rectangles(const FareyPair& pair);

/// Index ranges of the three skeleton blocks (inclusive, 1-based).
struct SkeletonLayout {
    int b_first, b_last;  // p1+4p2+1 .. 2p1+4p2
    int d_first, d_last;  // 1 .. p2
    int c_first, c_last;  // 2p2+1 .. 3p2

    explicit SkeletonLayout(const FareyPair& pair);
};

class TransitionGraph {
public:
    TransitionGraph(const FareyPair& pair, std::set<std::pair<int, int>> edges);

    const FareyPair& pair() const noexcept { return pair_; }
    int n_rectangles() const noexcept { return n_; }
    const std::set<std::pair<int, int>>& edges() const noexcept { return edges_; }

    bool has_edge(int from, int to) const { return edges_.contains({from, to}); }

    /// Ascending.
    const std::vector<int>& successors(int from) const;

    /// Vertices that carry at least one edge, ascending.
    const std::vector<int>& active_vertices() const noexcept { return active_; }

    /// DOT digraph, node labels "r<i>:<kind>".
    std::string to_dot() const;

private:
    FareyPair pair_;
    int n_;
    std::set<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> succ_;
    std::vector<int> active_;
};

/// B-loop, D-loop, entry B->D, exit D->C, skip B->C, connector C->B.
TransitionGraph build_skeleton_graph(const FareyPair& pair);

/// Cyclic word of rectangle indices whose every transition, wraparound
/// included, is an edge of the graph it was validated against.
class SymbolicCycle {
public:
    /// Throws std::domain_error if the word is empty or not a closed walk.
    SymbolicCycle(std::vector<int> word, const TransitionGraph& graph);

    const std::vector<int>& word() const noexcept { return word_; }
    /// Lexicographically least rotation of word().
    const std::vector<int>& canonical() const noexcept { return canonical_; }
    std::size_t length() const noexcept { return word_.size(); }

    /// Same cyclic word.
    friend bool operator==(const SymbolicCycle& a, const SymbolicCycle& b) { return a.canonical_ == b.canonical_; }
    friend auto operator<=>(const SymbolicCycle& a, const SymbolicCycle& b) { return a.canonical_ <=> b.canonical_; }

private:
    std::vector<int> word_;
    std::vector<int> canonical_;
};

std::vector<int> least_rotation(const std::vector<int>& word);

/// (B)^n (D)^(m-1) C, length n p1 + m p2. Throws for n < 1 or m < 1.
SymbolicCycle build_Onm(const FareyPair& pair, int n, int m);

/// Number of full B-block traversals and of D- or C-block traversals.
struct BlockCounts {
    std::int64_t b_blocks = 0;
    std::int64_t dc_blocks = 0;
};

/// Throws std::domain_error if the word is not a closed walk of the skeleton.
BlockCounts decompose(const SymbolicCycle& cycle, const FareyPair& pair);

/// weighted_mediant(long, short, b_blocks, dc_blocks).
Rational cycle_rotation_number(const SymbolicCycle& cycle, const FareyPair& pair);

inline constexpr int kMaxCycleLength = 64;

/// Every primitive closed walk of length <= max_len, one per cyclic class,
/// as Lyndon words in lexicographic order. Throws std::domain_error when
/// max_len exceeds kMaxCycleLength.
std::vector<SymbolicCycle> enumerate_cycles(const TransitionGraph& graph, int max_len);

/// Rotation numbers of all skeleton cycles of period <= max_period.
///
/// A skeleton cycle's rotation number depends only on its block counts, and
/// every (b, dc) with b p1 + dc p2 <= max_period is realised (pure loops for a
/// zero count, O_{b,dc} otherwise), so this ranges over block counts rather
/// than words. Throws std::domain_error when max_period exceeds
/// kMaxCycleLength.
std::set<Rational> realized_rotation_numbers(const FareyPair& pair, int max_period);

/// Result of checking the forcing closure against symbolic cycles.
struct MarkovVerifyReport {
    bool pass = true;
    std::vector<Rational> missing;       // forced orbits with no realising cycle
    std::vector<Rational> out_of_range;  // realised rotation numbers outside the pair's interval
};

/// Every orbit of forced_set(pair, max_den) must be realised by a skeleton
/// cycle of period <= max_den, and nothing realised may leave [lo, hi].
MarkovVerifyReport markov_verify(const FareyPair& pair, std::int64_t max_den);

}  // namespace shear
