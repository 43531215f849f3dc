#include "shear/rational.hpp"

#include <charconv>
#include <numeric>
#include <ostream>

namespace shear {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("rational: integer overflow");
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("rational: integer overflow");
    return out;
}

// Sign of a/b - c/d for positive denominators.
int compare_fractions(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) noexcept {
    const __int128 lhs = static_cast<__int128>(a) * d;
    const __int128 rhs = static_cast<__int128>(c) * b;
    return (lhs > rhs) - (lhs < rhs);
}

std::int64_t parse_int(std::string_view text) {
    std::int64_t v = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || first == last)
        throw std::invalid_argument("cannot parse integer '" + std::string(text) + "'");
    return v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

Rational::Rational(std::int64_t q, std::int64_t p) {
    if (p <= 0) throw std::domain_error("rational: denominator must be positive");
    if (q < 0) throw std::domain_error("rational: numerator must be non-negative");
    q %= p;
    const std::int64_t g = std::gcd(q, p);
    num_ = q / g;
    den_ = p / g;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    const int c = compare_fractions(a.num_, a.den_, b.num_, b.den_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::string Rational::str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational make_rational(std::int64_t q, std::int64_t p) { return Rational(q, p); }

Rational parse_rational(std::string_view text) {
    text = trim(text);
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
        return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    } catch (const std::domain_error& e) {
        throw std::invalid_argument("invalid rational '" + std::string(text) + "': " + e.what());
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("cannot parse rational '" + std::string(text) + "'");
    }
}

std::int64_t farey_determinant(const Rational& a, const Rational& b) {
    const __int128 d = static_cast<__int128>(a.den()) * b.num() - static_cast<__int128>(b.den()) * a.num();
    const __int128 mag = d < 0 ? -d : d;
    if (mag > INT64_MAX) throw std::overflow_error("rational: determinant overflow");
    return static_cast<std::int64_t>(mag);
}

bool is_farey_neighbor(const Rational& a, const Rational& b) { return farey_determinant(a, b) == 1; }

Rational mediant(const Rational& a, const Rational& b) {
    if (a == b) throw std::domain_error("mediant: endpoints must differ");
    return Rational(checked_add(a.num(), b.num()), checked_add(a.den(), b.den()));
}

Rational weighted_mediant(const Rational& a, const Rational& b, std::int64_t n, std::int64_t m) {
    if (n < 0 || m < 0) throw std::domain_error("weighted_mediant: weights must be non-negative");
    if (n == 0 && m == 0) throw std::domain_error("weighted_mediant: weights must not both be zero");
    const auto q = checked_add(checked_mul(n, a.num()), checked_mul(m, b.num()));
    const auto p = checked_add(checked_mul(n, a.den()), checked_mul(m, b.den()));
    return Rational(q, p);
}

namespace {

struct SternBrocotWalk {
    const Rational& lower;
    const Rational& upper;
    std::int64_t max_den;
    std::vector<Rational>& out;

    // In-order traversal of the subtree spanned by (ln/ld, rn/rd).
    void visit(std::int64_t ln, std::int64_t ld, std::int64_t rn, std::int64_t rd) {
        for (;;) {
            const std::int64_t mn = ln + rn;
            const std::int64_t md = ld + rd;
            if (md > max_den) return;
            if (compare_fractions(mn, md, lower.num(), lower.den()) <= 0) {
                ln = mn;
                ld = md;
                continue;
            }
            if (compare_fractions(mn, md, upper.num(), upper.den()) >= 0) {
                rn = mn;
                rd = md;
                continue;
            }
            visit(ln, ld, mn, md);
            out.emplace_back(mn, md);
            ln = mn;
            ld = md;
        }
    }
};

}  // namespace

std::vector<Rational> rationals_between(const Rational& a, const Rational& b, std::int64_t max_den) {
    std::vector<Rational> out;
    if (!(a < b) || max_den < 2) return out;
    SternBrocotWalk{a, b, max_den, out}.visit(0, 1, 1, 1);
    return out;
}

// ---------------------------------------------------------------------------

NotFareyNeighbors::NotFareyNeighbors(const Rational& a, const Rational& b)
    : std::domain_error("not Farey neighbors (determinant " + std::to_string(farey_determinant(a, b)) + ")"),
      det_(farey_determinant(a, b)) {}

FareyPair::FareyPair(const Rational& a, const Rational& b) {
    if (!is_farey_neighbor(a, b)) throw NotFareyNeighbors(a, b);
    // Farey neighbours in [0,1) never share a denominator.
    if (a.den() > b.den()) {
        long_ = a;
        short_ = b;
    } else {
        long_ = b;
        short_ = a;
    }
    dir_ = long_ < short_ ? PairCase::Case1 : PairCase::Case2;
}

std::string FareyPair::str() const { return long_.str() + " v " + short_.str(); }

std::strong_ordering operator<=>(const FareyPair& a, const FareyPair& b) noexcept {
    if (auto c = a.lo() <=> b.lo(); c != 0) return c;
    return a.hi() <=> b.hi();
}

std::ostream& operator<<(std::ostream& os, const FareyPair& p) { return os << p.str(); }

FareyPair parse_pair(std::string_view text) {
    const auto v = text.find('v');
    if (v == std::string_view::npos)
        throw std::invalid_argument("cannot parse pair '" + std::string(text) + "': expected \"q1/p1 v q2/p2\"");
    const auto a = parse_rational(text.substr(0, v));
    const auto b = parse_rational(text.substr(v + 1));
    if (a == b) throw std::invalid_argument("pair '" + std::string(text) + "' has equal endpoints");
    return FareyPair(a, b);
}

}  // namespace shear
