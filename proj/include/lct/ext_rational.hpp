#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace lct {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Renders a rational as "num/den" (always both parts, denominator > 0).
std::string to_string(const Rational& q);

/// Decimal rendering with `places` digits after the point, rounded half away
/// from zero. Computed exactly, so 60416/68992 renders as 0.875696 on every
/// platform.
std::string to_fixed(const Rational& q, int places);

double to_double(const Rational& q);

/// Parses "p/q", "p", or a finite decimal such as "0.75" into an exact value.
/// Throws InvalidInput on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// An exact rational extended by +infinity.
///
/// This is the value space of singularity exponents and Arnold multiplicities:
/// the degenerate conventions c = 0 <-> lambda = +inf are representable
/// without sentinels. Finite values are kept in lowest terms with a positive
/// denominator (cpp_rational normalizes on every operation).
class ExtRational {
public:
    ExtRational() = default;
    ExtRational(Rational value) : value_(std::move(value)) {}  // NOLINT: implicit by intent
    ExtRational(std::int64_t value) : value_(Rational(value)) {}  // NOLINT
    ExtRational(std::int64_t num, std::int64_t den);

    static ExtRational infinity();

    bool is_infinite() const noexcept { return !value_.has_value(); }
    bool is_finite() const noexcept { return value_.has_value(); }

    /// Throws InvalidInput when infinite.
    const Rational& value() const;

    /// 1/x with reciprocal(0) = +inf and reciprocal(+inf) = 0.
    ExtRational reciprocal() const;

    double to_double() const;

    /// "num/den" or "inf".
    std::string str() const;

    /// Fixed-point rendering; "inf" for infinity.
    std::string fixed(int places) const;

    /// Accepts everything parse_rational accepts plus "inf".
    static ExtRational parse(std::string_view text);

    friend ExtRational operator+(const ExtRational& lhs, const ExtRational& rhs);

    /// Multiplication with 0 * inf = 0. Throws InvalidInput for a negative
    /// finite value times infinity.
    friend ExtRational operator*(const ExtRational& lhs, const ExtRational& rhs);

    friend bool operator==(const ExtRational& lhs, const ExtRational& rhs);
    friend std::strong_ordering operator<=>(const ExtRational& lhs, const ExtRational& rhs);

private:
    std::optional<Rational> value_ = Rational(0);
};

ExtRational min(const ExtRational& lhs, const ExtRational& rhs);

std::ostream& operator<<(std::ostream& os, const ExtRational& x);

}  // namespace lct
