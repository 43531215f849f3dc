#include "shear/forcing.hpp"

#include <nlohmann/json.hpp>

namespace shear {

ForcingElement parse_element(std::string_view text) {
    if (text.find('v') != std::string_view::npos) return SimplePair{parse_pair(text)};
    return SimpleOrbit{parse_rational(text)};
}

std::string to_string(const ForcingElement& e) {
    return std::visit([](const auto& x) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, SimpleOrbit>)
            return x.rotation.str();
        else
            return x.pair.str();
    }, e);
}

nlohmann::json to_json(const ForcingElement& e) {
    if (const auto* o = std::get_if<SimpleOrbit>(&e))
        return {{"kind", "orbit"}, {"value", o->rotation.str()}};
    const auto& p = std::get<SimplePair>(e).pair;
    return {{"kind", "pair"}, {"endpoints", {p.long_orbit().str(), p.short_orbit().str()}}};
}

bool forces(const ForcingElement& a, const ForcingElement& b) {
    if (a == b) return true;
    const auto* pa = std::get_if<SimplePair>(&a);
    if (!pa) return false;
    if (const auto* ob = std::get_if<SimpleOrbit>(&b)) return pa->pair.contains(ob->rotation);
    const auto& pb = std::get<SimplePair>(b).pair;
    return pa->pair.contains(pb.long_orbit()) && pa->pair.contains(pb.short_orbit());
}

std::set<ForcingElement> forced_set(const FareyPair& pair, std::int64_t max_den) {
    std::vector<Rational> orbits;
    if (pair.lo().den() <= max_den) orbits.push_back(pair.lo());
    for (const auto& r : rationals_between(pair.lo(), pair.hi(), max_den)) orbits.push_back(r);
    if (pair.hi().den() <= max_den) orbits.push_back(pair.hi());

    std::set<ForcingElement> out;
    for (const auto& r : orbits) out.insert(SimpleOrbit{r});
    for (std::size_t i = 0; i < orbits.size(); ++i)
        for (std::size_t j = i + 1; j < orbits.size(); ++j)
            if (is_farey_neighbor(orbits[i], orbits[j])) out.insert(SimplePair{FareyPair(orbits[i], orbits[j])});
    return out;
}

namespace {

void build(MediantTree& node, int depth) {
    if (depth == 0) return;
    const Rational c = node.pair.mediant();
    node.mediant = c;
    node.left = std::make_unique<MediantTree>(MediantTree{FareyPair(node.pair.lo(), c), {}, {}, {}});
    node.right = std::make_unique<MediantTree>(MediantTree{FareyPair(c, node.pair.hi()), {}, {}, {}});
    build(*node.left, depth - 1);
    build(*node.right, depth - 1);
}

void collect(const MediantTree& node, int level, std::vector<Rational>& out) {
    if (level == 0) {
        if (node.mediant) out.push_back(*node.mediant);
        return;
    }
    if (node.is_leaf()) return;
    collect(*node.left, level - 1, out);
    collect(*node.right, level - 1, out);
}

void render(const MediantTree& node, int indent, std::string& out) {
    out.append(static_cast<std::size_t>(2 * indent), ' ');
    out += node.pair.str();
    if (node.mediant) out += "  -> " + node.mediant->str();
    out += '\n';
    if (node.is_leaf()) return;
    render(*node.left, indent + 1, out);
    render(*node.right, indent + 1, out);
}

}  // namespace

MediantTree mediant_tree(const FareyPair& pair, int depth) {
    if (depth < 0 || depth > kMaxTreeDepth)
        throw std::domain_error("mediant_tree: depth must be in [0, " + std::to_string(kMaxTreeDepth) + "]");
    MediantTree root{pair, {}, {}, {}};
    build(root, depth);
    return root;
}

std::vector<Rational> level_mediants(const MediantTree& tree, int level) {
    std::vector<Rational> out;
    collect(tree, level, out);
    return out;
}

std::string render_tree(const MediantTree& tree) {
    std::string out;
    render(tree, 0, out);
    return out;
}

std::vector<FareyPair> forcing_chain(const FareyPair& pair, const Rational& target) {
    if (!pair.strictly_contains(target))
        throw std::domain_error("forcing_chain: " + target.str() + " is not strictly inside " + pair.str());
    std::vector<FareyPair> chain{pair};
    for (;;) {
        const FareyPair& cur = chain.back();
        const Rational c = cur.mediant();
        if (c == target) return chain;
        chain.push_back(target < c ? FareyPair(cur.lo(), c) : FareyPair(c, cur.hi()));
    }
}

}  // namespace shear
