#pragma once

// Exact rotation-number arithmetic on Q ∩ [0,1).
//
// Every Rational is stored reduced and taken mod 1, so two rotation numbers
// compare equal exactly when their fields do. Farey arithmetic is done in
// 64-bit integers with overflow checks; products go through __int128.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shear {

class Rational {
public:
    constexpr Rational() = default;

    /// Reduced (q mod p)/p. Throws std::domain_error when p <= 0 or q < 0.
    Rational(std::int64_t q, std::int64_t p);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "q/p", ASCII, no spaces.
    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

Rational make_rational(std::int64_t q, std::int64_t p);

/// Parses "q/p" (also accepts a bare integer "q" as q/1). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// |a.den*b.num - b.den*a.num|
std::int64_t farey_determinant(const Rational& a, const Rational& b);

bool is_farey_neighbor(const Rational& a, const Rational& b);

/// (a.num+b.num)/(a.den+b.den); for Farey neighbours this is the unique
/// minimal-denominator rational strictly between them. Throws when a == b.
Rational mediant(const Rational& a, const Rational& b);

/// Reduced (n*a.num + m*b.num)/(n*a.den + m*b.den). Either weight may be zero
/// (returning the other endpoint); both zero or a negative weight throws.
Rational weighted_mediant(const Rational& a, const Rational& b, std::int64_t n, std::int64_t m);

/// All reduced q/p with a < q/p < b and p <= max_den, ascending.
/// Walks the Stern-Brocot tree, so no floating point is involved.
std::vector<Rational> rationals_between(const Rational& a, const Rational& b, std::int64_t max_den);

// ---------------------------------------------------------------------------

/// Thrown for pairs whose rotation numbers are not Farey neighbours; carries the offending determinant.
class NotFareyNeighbors : public std::domain_error {
public:
    NotFareyNeighbors(const Rational& a, const Rational& b);
    std::int64_t determinant() const noexcept { return det_; }

private:
    std::int64_t det_;
};

enum class PairCase { Case1, Case2 };

/// Farey-neighbour pair of rotation numbers normalised by period: `long_orbit`
/// has the larger denominator p1, `short_orbit` the smaller p2. Case1 means
/// long_orbit < short_orbit as values.
class FareyPair {
public:
    /// Accepts the two rotation numbers in either order. Throws
    /// NotFareyNeighbors (a std::domain_error) if the determinant is not 1.
    FareyPair(const Rational& a, const Rational& b);

    const Rational& long_orbit() const noexcept { return long_; }
    const Rational& short_orbit() const noexcept { return short_; }
    PairCase direction() const noexcept { return dir_; }

    const Rational& lo() const noexcept { return dir_ == PairCase::Case1 ? long_ : short_; }
    const Rational& hi() const noexcept { return dir_ == PairCase::Case1 ? short_ : long_; }

    /// Closed interval membership: lo <= r <= hi.
    bool contains(const Rational& r) const noexcept { return lo() <= r && r <= hi(); }
    bool strictly_contains(const Rational& r) const noexcept { return lo() < r && r < hi(); }

    Rational mediant() const { return shear::mediant(long_, short_); }

    /// "q1/p1 v q2/p2" with the long orbit first.
    std::string str() const;

    friend bool operator==(const FareyPair&, const FareyPair&) = default;
    /// Orders by (lo, hi).
    friend std::strong_ordering operator<=>(const FareyPair& a, const FareyPair& b) noexcept;

private:
    Rational long_;
    Rational short_;
    PairCase dir_ = PairCase::Case1;
};

std::ostream& operator<<(std::ostream& os, const FareyPair& p);

/// Parses "q1/p1 v q2/p2" (whitespace around the 'v' optional).
/// Throws std::invalid_argument on syntax errors and NotFareyNeighbors when the
/// determinant is not 1.
FareyPair parse_pair(std::string_view text);


}  // namespace shear
