#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lct/ext_rational.hpp"

namespace lct {

// ---------------------------------------------------------------------------
// Log-resolution data
// ---------------------------------------------------------------------------

/// One prime divisor E_i of a log resolution mu: X~ -> X.
///
/// `a` is the coefficient of E_i in K_X~ - mu^* K_X, `b` the coefficient of
/// E_i in the pulled-back ideal, `meets_k` whether mu(E_i) meets the compact
/// set K at which the exponent is taken.
struct DivisorRecord {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    bool meets_k = false;

    friend bool operator==(const DivisorRecord&, const DivisorRecord&) = default;
};

struct ResolutionData {
    std::vector<DivisorRecord> divisors;

    /// Throws InvalidInput for an empty list or an (a, b) = (0, 0) record.
    void validate() const;
};

/// Parses {"divisors":[{"a":0,"b":2,"meets_k":true},...]}.
ResolutionData parse_resolution_json(std::string_view text);
ResolutionData load_resolution_json(const std::string& path);

/// Exponent from a log resolution: min over records meeting K with b > 0 of
/// (a + 1)/b. +inf when no record qualifies; b = 0 records never constrain.
ExtRational lct_from_resolution(const ResolutionData& data);

// ---------------------------------------------------------------------------
// Monomial ideal specifications
// ---------------------------------------------------------------------------

struct MonomialIdealSpec;
using SpecPtr = std::shared_ptr<const MonomialIdealSpec>;

/// z_1^{a_1} ... z_n^{a_n}.
struct PrincipalMonomial {
    std::vector<std::uint64_t> exponents;
};

/// (z_1^{m_1}, ..., z_p^{m_p}).
struct Diagonal {
    std::vector<std::uint64_t> orders;
};

/// I (+) J on a product of disjoint variable blocks.
struct DirectSum {
    SpecPtr left;
    SpecPtr right;
};

/// f(x) + g(y) with f, g principal and in disjoint variables.
struct SeparatedSum {
    SpecPtr left;
    SpecPtr right;
};

struct MonomialIdealSpec {
    std::variant<PrincipalMonomial, Diagonal, DirectSum, SeparatedSum> node;

    /// Number of complex variables the spec lives on.
    std::size_t variable_count() const;

    /// True when the spec names a single function rather than an ideal
    /// with several generators.
    bool is_principal() const;

    /// Throws InvalidInput naming the violated invariant.
    void validate() const;

    /// Canonical text form, the inverse of parse_spec.
    std::string str() const;
};

SpecPtr make_monomial(std::vector<std::uint64_t> exponents);
SpecPtr make_diagonal(std::vector<std::uint64_t> orders);
SpecPtr make_direct_sum(SpecPtr left, SpecPtr right);
SpecPtr make_separated_sum(SpecPtr left, SpecPtr right);

/// Grammar:
///   spec := "mono:" list | "diag:" list
///         | "dsum(" spec ";" spec ")" | "ssum(" spec ";" spec ")"
///   list := uint ("," uint)*
/// Whitespace is not allowed. The result is validated.
SpecPtr parse_spec(std::string_view text);

/// Exponent at the origin for the closed-form classes:
///   mono  -> min over positive a_i of 1/a_i
///   diag  -> sum 1/m_i
///   dsum  -> c(L) + c(R)
///   ssum  -> min(1, c(L) + c(R))
ExtRational lct_monomial(const MonomialIdealSpec& spec);

// ---------------------------------------------------------------------------
// Arnold multiplicity and bounds
// ---------------------------------------------------------------------------

/// lambda = 1/c, with 1/0 = +inf and 1/inf = 0. Throws on negative input.
ExtRational arnold_multiplicity(const ExtRational& c);

/// alpha * lambda, with 0 * inf = 0 (alpha = 0 is the zero potential).
ExtRational scale_arnold(const ExtRational& lambda, const Rational& alpha);

/// n/(k+1): bound on |c_0(f) - c_0(p_k)| for the degree-k Taylor
/// truncation p_k of a germ f in n variables.
ExtRational truncation_gap_bound(std::uint64_t n, std::uint64_t k);

struct LelongEnclosure {
    ExtRational lower;
    ExtRational upper;
};

/// nu/n <= lambda <= nu for a potential with Lelong number nu in n variables.
LelongEnclosure lelong_sandwich(const Rational& nu, std::uint64_t n);

}  // namespace lct
