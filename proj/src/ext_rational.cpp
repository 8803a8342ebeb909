#include "lct/ext_rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>

#include "lct/errors.hpp"

namespace lct {

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole)
{
    std::size_t pos = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+'))
        pos = 1;
    if (pos == text.size())
        throw InvalidInput("malformed rational '" + std::string(whole) + "'");
    for (std::size_t i = pos; i < text.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(text[i])))
            throw InvalidInput("malformed rational '" + std::string(whole) + "'");
    BigInt v(std::string(text.substr(pos)));
    return text[0] == '-' ? BigInt(-v) : v;
}

BigInt pow10(int places)
{
    BigInt p = 1;
    for (int i = 0; i < places; ++i)
        p *= 10;
    return p;
}

}  // namespace

std::string to_string(const Rational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

std::string to_fixed(const Rational& q, int places)
{
    if (places < 0)
        throw InvalidInput("negative number of decimal places");
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    const bool negative = num < 0;
    const BigInt scaled = (negative ? BigInt(-num) : num) * pow10(places);
    BigInt rounded = scaled / den;
    if ((scaled % den) * 2 >= den)
        ++rounded;

    std::string digits = rounded.str();
    if (places > 0) {
        if (digits.size() <= static_cast<std::size_t>(places))
            digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
        digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    }
    if (negative && rounded != 0)
        digits.insert(0, "-");
    return digits;
}

double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

Rational parse_rational(std::string_view text)
{
    if (text.empty())
        throw InvalidInput("empty rational");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(text.substr(0, slash), text);
        const BigInt den = parse_integer(text.substr(slash + 1), text);
        if (den == 0)
            throw InvalidInput("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view int_part = text.substr(0, dot);
        const std::string_view frac_part = text.substr(dot + 1);
        const bool negative = !int_part.empty() && int_part[0] == '-';
        std::string digits(int_part);
        if (digits.empty() || digits == "-" || digits == "+")
            digits += "0";
        if (frac_part.empty())
            throw InvalidInput("malformed rational '" + std::string(text) + "'");
        const BigInt whole = parse_integer(digits, text);
        const BigInt frac = parse_integer(frac_part, text);
        if (frac_part[0] == '-' || frac_part[0] == '+')
            throw InvalidInput("malformed rational '" + std::string(text) + "'");
        const BigInt scale = pow10(static_cast<int>(frac_part.size()));
        const BigInt magnitude = (whole < 0 ? BigInt(-whole) : whole) * scale + frac;
        return Rational(negative ? BigInt(-magnitude) : magnitude, scale);
    }
    return Rational(parse_integer(text, text));
}

ExtRational::ExtRational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw InvalidInput("zero denominator");
    value_ = Rational(BigInt(num), BigInt(den));
}

ExtRational ExtRational::infinity()
{
    ExtRational x;
    x.value_.reset();
    return x;
}

const Rational& ExtRational::value() const
{
    if (!value_)
        throw InvalidInput("value requested from +inf");
    return *value_;
}

ExtRational ExtRational::reciprocal() const
{
    if (!value_)
        return ExtRational(0);
    if (*value_ == 0)
        return infinity();
    return ExtRational(Rational(1) / *value_);
}

double ExtRational::to_double() const
{
    if (!value_)
        return std::numeric_limits<double>::infinity();
    return lct::to_double(*value_);
}

std::string ExtRational::str() const
{
    return value_ ? to_string(*value_) : std::string("inf");
}

std::string ExtRational::fixed(int places) const
{
    return value_ ? to_fixed(*value_, places) : std::string("inf");
}

ExtRational ExtRational::parse(std::string_view text)
{
    if (text == "inf" || text == "+inf")
        return infinity();
    return ExtRational(parse_rational(text));
}

ExtRational operator+(const ExtRational& lhs, const ExtRational& rhs)
{
    if (lhs.is_infinite() || rhs.is_infinite())
        return ExtRational::infinity();
    return ExtRational(*lhs.value_ + *rhs.value_);
}

ExtRational operator*(const ExtRational& lhs, const ExtRational& rhs)
{
    if (lhs.is_finite() && rhs.is_finite())
        return ExtRational(*lhs.value_ * *rhs.value_);
    const ExtRational& other = lhs.is_infinite() ? rhs : lhs;
    if (other.is_infinite())
        return ExtRational::infinity();
    if (*other.value_ == 0)
        return ExtRational(0);
    if (*other.value_ < 0)
        throw InvalidInput("negative value times +inf is undefined here");
    return ExtRational::infinity();
}

bool operator==(const ExtRational& lhs, const ExtRational& rhs)
{
    return lhs.value_ == rhs.value_;
}

std::strong_ordering operator<=>(const ExtRational& lhs, const ExtRational& rhs)
{
    if (lhs.is_infinite() || rhs.is_infinite()) {
        if (lhs.is_infinite() && rhs.is_infinite())
            return std::strong_ordering::equal;
        return lhs.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (*lhs.value_ < *rhs.value_)
        return std::strong_ordering::less;
    if (*rhs.value_ < *lhs.value_)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

ExtRational min(const ExtRational& lhs, const ExtRational& rhs)
{
    return rhs < lhs ? rhs : lhs;
}

std::ostream& operator<<(std::ostream& os, const ExtRational& x)
{
    return os << x.str();
}

}  // namespace lct
