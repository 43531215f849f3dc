#include "shear/markov.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "shear/forcing.hpp"

namespace shear {

char kind_letter(RectKind k) noexcept {
    switch (k) {
        case RectKind::A: return 'A';
        case RectKind::B: return 'B';
        case RectKind::C: return 'C';
        case RectKind::D: return 'D';
        case RectKind::K: return 'K';
        case RectKind::L: return 'L';
        case RectKind::M: return 'M';
    }
    return '?';
}

int rectangle_count(const FareyPair& pair) noexcept {
    return static_cast<int>(3 * pair.long_orbit().den() + 3 * pair.short_orbit().den() + 1);
}

RectKind rectangle_kind(const FareyPair& pair, int index) {
    const int p1 = static_cast<int>(pair.long_orbit().den());
    const int p2 = static_cast<int>(pair.short_orbit().den());
    if (index < 1 || index > rectangle_count(pair))
        throw std::out_of_range("rectangle index " + std::to_string(index) + " out of range");
    if (index <= p2) return RectKind::D;
    if (index <= 2 * p2) return RectKind::C;
    if (index <= 3 * p2) return RectKind::L;
    if (index <= 4 * p2) return RectKind::K;
    if (index <= 4 * p2 + p1) return RectKind::A;
    if (index <= 4 * p2 + 2 * p1 + 1) return RectKind::B;
    return RectKind::M;
}

std::vector<RectangleId> label_rectangles(const FareyPair& pair) {
    std::vector<RectangleId> out;
    const int n = rectangle_count(pair);
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) out.push_back({i, rectangle_kind(pair, i)});
    return out;
}

SkeletonLayout::SkeletonLayout(const FareyPair& pair) {
    const int p1 = static_cast<int>(pair.long_orbit().den());
    const int p2 = static_cast<int>(pair.short_orbit().den());
    b_first = p1 + 4 * p2 + 1;
    b_last = 2 * p1 + 4 * p2;
    d_first = 1;
    d_last = p2;
    c_first = 2 * p2 + 1;
    c_last = 3 * p2;
}

// ---------------------------------------------------------------------------

TransitionGraph::TransitionGraph(const FareyPair& pair, std::set<std::pair<int, int>> edges)
    : pair_(pair), n_(rectangle_count(pair)), edges_(std::move(edges)), succ_(static_cast<std::size_t>(n_) + 1) {
    std::vector<bool> seen(succ_.size(), false);
    for (const auto& [from, to] : edges_) {
        if (from < 1 || from > n_ || to < 1 || to > n_)
            throw std::domain_error("transition graph: edge endpoint out of range");
        succ_[static_cast<std::size_t>(from)].push_back(to);
        seen[static_cast<std::size_t>(from)] = seen[static_cast<std::size_t>(to)] = true;
    }
    for (int i = 1; i <= n_; ++i)
        if (seen[static_cast<std::size_t>(i)]) active_.push_back(i);
}

const std::vector<int>& TransitionGraph::successors(int from) const {
    if (from < 1 || from > n_) throw std::out_of_range("transition graph: vertex out of range");
    return succ_[static_cast<std::size_t>(from)];
}

std::string TransitionGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph markov {\n";
    os << "  // pair " << pair_.str() << ", " << n_ << " rectangles\n";
    for (int i = 1; i <= n_; ++i)
        os << "  r" << i << " [label=\"r" << i << ':' << kind_letter(rectangle_kind(pair_, i)) << "\"];\n";
    for (const auto& [from, to] : edges_) os << "  r" << from << " -> r" << to << ";\n";
    os << "}\n";
    return os.str();
}

TransitionGraph build_skeleton_graph(const FareyPair& pair) {
    const SkeletonLayout s(pair);
    std::set<std::pair<int, int>> edges;
    auto chain = [&](int first, int last) {
        for (int i = first; i < last; ++i) edges.emplace(i, i + 1);
    };
    chain(s.b_first, s.b_last);
    edges.emplace(s.b_last, s.b_first);
    chain(s.d_first, s.d_last);
    edges.emplace(s.d_last, s.d_first);
    edges.emplace(s.b_last, s.d_first);  // entry into the D-loop
    edges.emplace(s.d_last, s.c_first);  // exit to the connector
    edges.emplace(s.b_last, s.c_first);  // skip when m = 1
    chain(s.c_first, s.c_last);
    edges.emplace(s.c_last, s.b_first);
    return TransitionGraph(pair, std::move(edges));
}

// ---------------------------------------------------------------------------

std::vector<int> least_rotation(const std::vector<int>& word) {
    const std::size_t n = word.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const int a = word[(r + i) % n];
            const int b = word[(best + i) % n];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    std::vector<int> out(word.begin() + static_cast<std::ptrdiff_t>(best), word.end());
    out.insert(out.end(), word.begin(), word.begin() + static_cast<std::ptrdiff_t>(best));
    return out;
}

SymbolicCycle::SymbolicCycle(std::vector<int> word, const TransitionGraph& graph) : word_(std::move(word)) {
    if (word_.empty()) throw std::domain_error("symbolic cycle: empty word");
    for (std::size_t i = 0; i < word_.size(); ++i) {
        const int from = word_[i];
        const int to = word_[(i + 1) % word_.size()];
        if (!graph.has_edge(from, to))
            throw std::domain_error("symbolic cycle: r" + std::to_string(from) + " -> r" + std::to_string(to) +
                                    " is not an allowed transition");
    }
    canonical_ = least_rotation(word_);
}

SymbolicCycle build_Onm(const FareyPair& pair, int n, int m) {
    if (n < 1 || m < 1) throw std::domain_error("O_{n,m}: n and m must be positive");
    const SkeletonLayout s(pair);
    std::vector<int> word;
    for (int k = 0; k < n; ++k)
        for (int i = s.b_first; i <= s.b_last; ++i) word.push_back(i);
    for (int k = 0; k < m - 1; ++k)
        for (int i = s.d_first; i <= s.d_last; ++i) word.push_back(i);
    for (int i = s.c_first; i <= s.c_last; ++i) word.push_back(i);
    return SymbolicCycle(std::move(word), build_skeleton_graph(pair));
}

BlockCounts decompose(const SymbolicCycle& cycle, const FareyPair& pair) {
    const auto skeleton = build_skeleton_graph(pair);
    // Revalidate: the cycle may have been built against another graph.
    const SymbolicCycle checked(cycle.word(), skeleton);
    const SkeletonLayout s(pair);
    std::int64_t b = 0;
    std::int64_t dc = 0;
    for (int i : checked.word()) {
        if (i >= s.b_first && i <= s.b_last)
            ++b;
        else
            ++dc;
    }
    const std::int64_t p1 = pair.long_orbit().den();
    const std::int64_t p2 = pair.short_orbit().den();
    if (b % p1 != 0 || dc % p2 != 0) throw std::domain_error("symbolic cycle: not a union of whole blocks");
    return {b / p1, dc / p2};
}

Rational cycle_rotation_number(const SymbolicCycle& cycle, const FareyPair& pair) {
    const auto counts = decompose(cycle, pair);
    return weighted_mediant(pair.long_orbit(), pair.short_orbit(), counts.b_blocks, counts.dc_blocks);
}

// ---------------------------------------------------------------------------

namespace {

// Fredricksen-Kessler-Maiorana generation of pre-necklaces restricted to
// walks in the graph. A prefix a[0..t) with period `period` is a Lyndon word
// exactly when period == t; it is reported when it also closes up.
struct LyndonWalks {
    const TransitionGraph& graph;
    int max_len;
    std::vector<int> word;
    std::vector<SymbolicCycle> out;

    void extend(int period) {
        const int t = static_cast<int>(word.size());
        if (period == t && graph.has_edge(word.back(), word.front())) out.emplace_back(word, graph);
        if (t == max_len) return;
        const int floor_symbol = word[static_cast<std::size_t>(t - period)];
        for (int next : graph.successors(word.back())) {
            if (next < floor_symbol) continue;
            word.push_back(next);
            extend(next == floor_symbol ? period : t + 1);
            word.pop_back();
        }
    }
};

}  // namespace

std::vector<SymbolicCycle> enumerate_cycles(const TransitionGraph& graph, int max_len) {
    if (max_len > kMaxCycleLength)
        throw std::domain_error("enumerate_cycles: max_len exceeds " + std::to_string(kMaxCycleLength));
    LyndonWalks gen{graph, max_len, {}, {}};
    if (max_len <= 0) return {};
    for (int start : graph.active_vertices()) {
        gen.word.assign(1, start);
        gen.extend(1);
    }
    std::sort(gen.out.begin(), gen.out.end());
    return std::move(gen.out);
}

std::set<Rational> realized_rotation_numbers(const FareyPair& pair, int max_period) {
    if (max_period > kMaxCycleLength)
        throw std::domain_error("realized_rotation_numbers: max_period exceeds " + std::to_string(kMaxCycleLength));
    std::set<Rational> out;
    const std::int64_t p1 = pair.long_orbit().den();
    const std::int64_t p2 = pair.short_orbit().den();
    for (std::int64_t b = 0; b * p1 <= max_period; ++b)
        for (std::int64_t dc = 0; b * p1 + dc * p2 <= max_period; ++dc)
            if (b + dc > 0) out.insert(weighted_mediant(pair.long_orbit(), pair.short_orbit(), b, dc));
    return out;
}

MarkovVerifyReport markov_verify(const FareyPair& pair, std::int64_t max_den) {
    if (max_den > kMaxCycleLength)
        throw std::domain_error("markov_verify: max_den exceeds " + std::to_string(kMaxCycleLength));
    MarkovVerifyReport report;
    const auto realized = realized_rotation_numbers(pair, static_cast<int>(max_den));
    for (const auto& e : forced_set(pair, max_den)) {
        if (const auto* o = std::get_if<SimpleOrbit>(&e); o && !realized.contains(o->rotation))
            report.missing.push_back(o->rotation);
    }
    for (const auto& r : realized)
        if (!pair.contains(r)) report.out_of_range.push_back(r);
    report.pass = report.missing.empty() && report.out_of_range.empty();
    return report;
}

}  // namespace shear
