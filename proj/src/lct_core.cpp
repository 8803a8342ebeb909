#include "lct/lct_core.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lct/errors.hpp"

namespace lct {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string join(const std::vector<std::uint64_t>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

std::uint64_t json_uint(const nlohmann::json& record, const char* key, std::size_t index)
{
    const auto it = record.find(key);
    if (it == record.end() || !it->is_number_integer() || it->get<std::int64_t>() < 0)
        throw InvalidInput("divisor " + std::to_string(index) + ": '" + key +
                           "' must be a nonnegative integer");
    return it->get<std::uint64_t>();
}

class SpecParser {
public:
    explicit SpecParser(std::string_view text) : text_(text) {}

    SpecPtr parse()
    {
        SpecPtr spec = parse_spec();
        if (pos_ != text_.size())
            fail("trailing characters");
        return spec;
    }

private:
    SpecPtr parse_spec()
    {
        if (consume("mono:"))
            return std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{PrincipalMonomial{parse_list()}});
        if (consume("diag:"))
            return std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{Diagonal{parse_list()}});
        if (consume("dsum(")) {
            auto [l, r] = parse_pair();
            return std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{DirectSum{l, r}});
        }
        if (consume("ssum(")) {
            auto [l, r] = parse_pair();
            return std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{SeparatedSum{l, r}});
        }
        fail("expected mono:, diag:, dsum( or ssum(");
    }

    std::pair<SpecPtr, SpecPtr> parse_pair()
    {
        SpecPtr left = parse_spec();
        if (!consume(";"))
            fail("expected ';'");
        SpecPtr right = parse_spec();
        if (!consume(")"))
            fail("expected ')'");
        return {left, right};
    }

    std::vector<std::uint64_t> parse_list()
    {
        std::vector<std::uint64_t> values;
        do {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                ++pos_;
            if (start == pos_)
                fail("expected a nonnegative integer");
            if (pos_ - start > 18)
                fail("integer too large");
            values.push_back(std::stoull(std::string(text_.substr(start, pos_ - start))));
        } while (consume(","));
        return values;
    }

    bool consume(std::string_view token)
    {
        if (text_.substr(pos_, token.size()) != token)
            return false;
        pos_ += token.size();
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw InvalidInput("spec '" + std::string(text_) + "' at offset " + std::to_string(pos_) +
                           ": " + what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

void ResolutionData::validate() const
{
    if (divisors.empty())
        throw InvalidInput("resolution data has no divisors");
    for (std::size_t i = 0; i < divisors.size(); ++i)
        if (divisors[i].a == 0 && divisors[i].b == 0)
            throw InvalidInput("divisor " + std::to_string(i) + " has a = 0 and b = 0");
}

ResolutionData parse_resolution_json(std::string_view text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("resolution JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("divisors") || !doc["divisors"].is_array())
        throw InvalidInput("resolution JSON must be an object with a 'divisors' array");

    ResolutionData data;
    std::size_t index = 0;
    for (const auto& record : doc["divisors"]) {
        if (!record.is_object())
            throw InvalidInput("divisor " + std::to_string(index) + " is not an object");
        DivisorRecord d;
        d.a = json_uint(record, "a", index);
        d.b = json_uint(record, "b", index);
        const auto it = record.find("meets_k");
        if (it == record.end() || !it->is_boolean())
            throw InvalidInput("divisor " + std::to_string(index) + ": 'meets_k' must be a boolean");
        d.meets_k = it->get<bool>();
        data.divisors.push_back(d);
        ++index;
    }
    data.validate();
    return data;
}

ResolutionData load_resolution_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open resolution file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_resolution_json(buffer.str());
}

ExtRational lct_from_resolution(const ResolutionData& data)
{
    data.validate();
    ExtRational best = ExtRational::infinity();
    for (const auto& d : data.divisors) {
        if (!d.meets_k || d.b == 0)
            continue;
        best = min(best, ExtRational(Rational(BigInt(d.a) + 1, BigInt(d.b))));
    }
    return best;
}

std::size_t MonomialIdealSpec::variable_count() const
{
    return std::visit(overloaded{
                          [](const PrincipalMonomial& m) { return m.exponents.size(); },
                          [](const Diagonal& d) { return d.orders.size(); },
                          [](const DirectSum& s) { return s.left->variable_count() + s.right->variable_count(); },
                          [](const SeparatedSum& s) { return s.left->variable_count() + s.right->variable_count(); },
                      },
                      node);
}

bool MonomialIdealSpec::is_principal() const
{
    return std::visit(overloaded{
                          [](const PrincipalMonomial&) { return true; },
                          [](const Diagonal& d) { return d.orders.size() == 1; },
                          [](const DirectSum&) { return false; },
                          [](const SeparatedSum&) { return true; },
                      },
                      node);
}

void MonomialIdealSpec::validate() const
{
    std::visit(overloaded{
                   [](const PrincipalMonomial& m) {
                       if (std::none_of(m.exponents.begin(), m.exponents.end(),
                                        [](std::uint64_t e) { return e > 0; }))
                           throw InvalidInput("mono: needs at least one positive exponent");
                   },
                   [](const Diagonal& d) {
                       if (d.orders.empty())
                           throw InvalidInput("diag: needs at least one order");
                       for (auto m : d.orders)
                           if (m < 1)
                               throw InvalidInput("diag: every order must be >= 1");
                   },
                   [](const DirectSum& s) {
                       if (!s.left || !s.right)
                           throw InvalidInput("dsum: missing operand");
                       s.left->validate();
                       s.right->validate();
                   },
                   [](const SeparatedSum& s) {
                       if (!s.left || !s.right)
                           throw InvalidInput("ssum: missing operand");
                       s.left->validate();
                       s.right->validate();
                       if (!s.left->is_principal() || !s.right->is_principal())
                           throw InvalidInput("ssum: operands must be single functions, not ideals");
                   },
               },
               node);
}

std::string MonomialIdealSpec::str() const
{
    return std::visit(overloaded{
                          [](const PrincipalMonomial& m) { return "mono:" + join(m.exponents); },
                          [](const Diagonal& d) { return "diag:" + join(d.orders); },
                          [](const DirectSum& s) { return "dsum(" + s.left->str() + ";" + s.right->str() + ")"; },
                          [](const SeparatedSum& s) { return "ssum(" + s.left->str() + ";" + s.right->str() + ")"; },
                      },
                      node);
}

SpecPtr make_monomial(std::vector<std::uint64_t> exponents)
{
    auto spec = std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{PrincipalMonomial{std::move(exponents)}});
    spec->validate();
    return spec;
}

SpecPtr make_diagonal(std::vector<std::uint64_t> orders)
{
    auto spec = std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{Diagonal{std::move(orders)}});
    spec->validate();
    return spec;
}

SpecPtr make_direct_sum(SpecPtr left, SpecPtr right)
{
    auto spec = std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{DirectSum{std::move(left), std::move(right)}});
    spec->validate();
    return spec;
}

SpecPtr make_separated_sum(SpecPtr left, SpecPtr right)
{
    auto spec =
        std::make_shared<MonomialIdealSpec>(MonomialIdealSpec{SeparatedSum{std::move(left), std::move(right)}});
    spec->validate();
    return spec;
}

SpecPtr parse_spec(std::string_view text)
{
    SpecPtr spec = SpecParser(text).parse();
    spec->validate();
    return spec;
}

ExtRational lct_monomial(const MonomialIdealSpec& spec)
{
    spec.validate();
    return std::visit(
        overloaded{
            // The identity is already a log resolution of a normal-crossing
            // monomial: a_i = 0, b_i = alpha_i.
            [](const PrincipalMonomial& m) {
                const std::uint64_t top = *std::max_element(m.exponents.begin(), m.exponents.end());
                return ExtRational(Rational(BigInt(1), BigInt(top)));
            },
            [](const Diagonal& d) {
                Rational sum = 0;
                for (auto order : d.orders)
                    sum += Rational(BigInt(1), BigInt(order));
                return ExtRational(sum);
            },
            [](const DirectSum& s) { return lct_monomial(*s.left) + lct_monomial(*s.right); },
            [](const SeparatedSum& s) { return min(ExtRational(1), lct_monomial(*s.left) + lct_monomial(*s.right)); },
        },
        spec.node);
}

ExtRational arnold_multiplicity(const ExtRational& c)
{
    if (c < ExtRational(0))
        throw InvalidInput("singularity exponent must be nonnegative, got " + c.str());
    return c.reciprocal();
}

ExtRational scale_arnold(const ExtRational& lambda, const Rational& alpha)
{
    if (alpha < 0)
        throw InvalidInput("scale factor must be nonnegative");
    return ExtRational(alpha) * lambda;
}

ExtRational truncation_gap_bound(std::uint64_t n, std::uint64_t k)
{
    if (n < 1)
        throw InvalidInput("truncation bound needs n >= 1");
    return ExtRational(Rational(BigInt(n), BigInt(k) + 1));
}

LelongEnclosure lelong_sandwich(const Rational& nu, std::uint64_t n)
{
    if (nu < 0)
        throw InvalidInput("Lelong number must be nonnegative");
    if (n < 1)
        throw InvalidInput("dimension must be >= 1");
    return {ExtRational(nu / Rational(BigInt(n))), ExtRational(nu)};
}

}  // namespace lct
