#pragma once

// The forcing order on simple orbits and simple pairs.
//
// An element is either a simple orbit, identified by its rotation number r, or
// a simple pair r v s of Farey-neighbour orbits. A pair forces every orbit
// whose rotation number lies in the closed interval spanned by its endpoints,
// and every pair whose two endpoints both lie there. The relation is made
// reflexive so that it is a partial order.

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shear/rational.hpp"

namespace shear {

struct SimpleOrbit {
    Rational rotation;
    friend auto operator<=>(const SimpleOrbit&, const SimpleOrbit&) = default;
};

struct SimplePair {
    FareyPair pair;
    friend bool operator==(const SimplePair&, const SimplePair&) = default;
    friend std::strong_ordering operator<=>(const SimplePair& a, const SimplePair& b) { return a.pair <=> b.pair; }
};

/// Orbits sort before pairs; orbits by value, pairs by (lo, hi).
using ForcingElement = std::variant<SimpleOrbit, SimplePair>;

/// Parses either "q/p" (orbit) or "q1/p1 v q2/p2" (pair).
ForcingElement parse_element(std::string_view text);
std::string to_string(const ForcingElement& e);

/// {"kind":"orbit","value":"q/p"} or {"kind":"pair","endpoints":["q1/p1","q2/p2"]}
nlohmann::json to_json(const ForcingElement& e);

/// a ≽ b.
bool forces(const ForcingElement& a, const ForcingElement& b);

/// Everything pair forces with every denominator <= max_den, the pair itself
/// and its endpoint orbits included (max_den permitting).
std::set<ForcingElement> forced_set(const FareyPair& pair, std::int64_t max_den);

/// Farey subdivision tree. A node built with depth d >= 1 carries the mediant
/// of its pair and two children of depth d-1: (lo, mediant) and (mediant, hi).
/// Depth-0 nodes are leaves.
struct MediantTree {
    FareyPair pair;
    std::optional<Rational> mediant;
    std::unique_ptr<MediantTree> left;
    std::unique_ptr<MediantTree> right;

    bool is_leaf() const noexcept { return !left; }
};

inline constexpr int kMaxTreeDepth = 32;

/// Throws std::domain_error for depth outside [0, kMaxTreeDepth].
MediantTree mediant_tree(const FareyPair& pair, int depth);

/// Mediants of the nodes at the given level (0 = root), in ascending order.
std::vector<Rational> level_mediants(const MediantTree& tree, int level);

/// Indented text rendering, one node per line.
std::string render_tree(const MediantTree& tree);

/// Stern-Brocot descent from pair to the node whose mediant is target:
/// [P0 = pair, P1, ..., Pk] with each P_{i+1} a child of P_i and
/// mediant(Pk) == target. Throws std::domain_error unless target lies strictly
/// inside the pair's interval.
std::vector<FareyPair> forcing_chain(const FareyPair& pair, const Rational& target);

}  // namespace shear
