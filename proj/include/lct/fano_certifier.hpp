#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lct/ext_rational.hpp"

namespace lct::fano {

using Weight = std::int64_t;

/// Exponent vector (e0, e1, e2, e3) of x0^e0 x1^e1 x2^e2 x3^e3.
using Exponents = std::array<std::uint32_t, 4>;

/// Weights of P(a0, a1, a2, a3) together with the degree d of the surface.
/// Weights are sorted ascending on construction.
class WeightSystem {
public:
    WeightSystem(std::array<Weight, 4> weights, Weight degree);

    const std::array<Weight, 4>& weights() const noexcept { return a_; }
    Weight a(std::size_t i) const { return a_.at(i); }
    Weight degree() const noexcept { return d_; }
    Weight weight_sum() const noexcept { return a_[0] + a_[1] + a_[2] + a_[3]; }
    /// k - d, so that -K_X = O(k - d).
    Weight fano_index() const noexcept { return weight_sum() - d_; }
    bool is_fano() const noexcept { return fano_index() > 0; }

    std::string str() const;

    friend bool operator==(const WeightSystem&, const WeightSystem&) = default;
    friend auto operator<=>(const WeightSystem&, const WeightSystem&) = default;

private:
    std::array<Weight, 4> a_;
    Weight d_;
};

/// All exponent vectors of weighted degree d, lexicographically ascending.
std::vector<Exponents> weighted_monomials(const WeightSystem& w);

/// "x0^17*x2"; "1" for the empty monomial.
std::string monomial_str(const Exponents& e);

struct IndexCheck {
    int j = 0;
    std::optional<Exponents> witness;
};

struct PairCheck {
    int j = 0;
    int k = 0;
    /// One monomial in x_j, x_k alone, or two monomials x_j^m x_k^p x_l with
    /// distinct l. Empty when the pair fails.
    std::vector<Exponents> witnesses;
    bool pass = false;
};

/// Quasi-smoothness conditions for a generic surface of degree d.
///
///  (i)   for all j: some x_j^m x_l of degree d (m >= 1; l = j allowed, so a
///        pure power counts)
///  (ii)  for all j != k: some x_j^m x_k^p, or two monomials
///        x_j^m1 x_k^p1 x_l1, x_j^m2 x_k^p2 x_l2 with l1 != l2
///  (iii) for all j: some monomial not involving x_j
///  (iv)  for all j, k with gcd(a_j, a_k) > 1: some x_j^m x_k^p
/// plus coprimality of the weights three by three.
struct FletcherReport {
    bool cond_i = false;
    std::array<IndexCheck, 4> cond_i_checks{};
    bool cond_ii = false;
    std::vector<PairCheck> cond_ii_checks;
    bool cond_iii = false;
    std::array<IndexCheck, 4> cond_iii_checks{};
    bool cond_iv = false;
    std::vector<PairCheck> cond_iv_checks;  ///< non-coprime pairs only
    bool triple_coprime = false;
    std::optional<std::array<int, 3>> failing_triple;

    bool passes() const noexcept { return cond_i && cond_ii && cond_iii && cond_iv && triple_coprime; }
};

FletcherReport fletcher_check(const WeightSystem& w);
FletcherReport fletcher_check(const WeightSystem& w, std::span<const Exponents> monomials);

struct AnticanonicalData {
    Weight index = 0;
    Rational square;  ///< d (k-d)^2 / (a0 a1 a2 a3)
};

/// Throws NotFano when k <= d.
AnticanonicalData anticanonical_data(const WeightSystem& w);

/// a0 a1 > (2/3) d (k-d)^2: every curve Z has (-K).Z >= 1/(a2 a3) > (2/3)(-K)^2.
bool curve_bound_check(const WeightSystem& w);

/// rho with the divisibility rule: divide by a0 a1 a2 when a3 does not divide
/// d, else by a0 a1 a3. Cross-checked against the delta form; a mismatch
/// raises InternalError. Throws NotFano when k <= d.
Rational rho(const WeightSystem& w);

/// rho with (k - a1 - a2) in place of (k - a0 - a2).
Rational rho_refined(const WeightSystem& w);

/// (4/3) delta d (k-d)(k - a_i - a2) / (a0 a1 a2 a3) with a_i = a0 (base)
/// or a1 (refined).
Rational rho_delta_form(const WeightSystem& w, Weight delta, bool refined);

/// Branch form of rho as printed: no delta, two denominators.
Rational rho_branch_form(const WeightSystem& w, bool refined);

struct IsotropyBound {
    Weight delta = 0;
    bool misses_top_point = false;  ///< generic X avoids [0:0:0:1]
    std::string justification;
};

/// delta = a2 when a3 | d and x3^(d/a3) is among the monomials (a generic X
/// then misses [0:0:0:1]); delta = a3 otherwise.
IsotropyBound isotropy_bound(const WeightSystem& w, std::span<const Exponents> monomials);

/// True when some monomial involves only x2, x3, so the line (x0 = x1 = 0)
/// is not contained in a generic X.
bool avoids_line_x0_x1(std::span<const Exponents> monomials);

enum class Verdict { KeCertified, KeCertifiedRefined, Inconclusive, NotOrbifold, NotFano };

std::string_view to_string(Verdict v);

struct Certificate {
    WeightSystem weights;
    FletcherReport fletcher;
    std::vector<Exponents> monomials;
    std::size_t monomial_count = 0;
    std::optional<Rational> anticanonical_square{};  ///< set when k > d
    bool curve_bound_ok = false;
    IsotropyBound isotropy{};
    bool nef_line_ok = false;
    std::optional<Rational> rho{};
    std::optional<Rational> rho_refined{};
    Verdict verdict = Verdict::Inconclusive;
    /// The refined twist is only nef off the curve (x0 = 0); the restriction
    /// to that curve is not checked here.
    bool refined_caveat = false;
};

/// Total: every failure maps to a verdict.
///
/// KE_CERTIFIED needs Fletcher, k > d, the curve bound, the line
/// (x0 = x1 = 0) not in X, and rho < 1. KE_CERTIFIED_REFINED needs Fletcher,
/// k > d, the curve bound, rho >= 1 and rho_refined < 1.
Certificate certify(const WeightSystem& w);
Certificate certify(const WeightSystem& w, std::vector<Exponents> monomials);

struct ScanConfig {
    Weight max_a3 = 128;
    Weight fano_index = 1;
    Weight min_a0 = 3;
    /// Report refined verdicts; otherwise they are shown as INCONCLUSIVE.
    bool require_refined = false;
    unsigned threads = 0;
};

struct ScanReport {
    ScanConfig config;
    std::uint64_t systems_examined = 0;
    /// Fletcher-passing systems sorted by (rho, weights, degree).
    std::vector<Certificate> entries;

    std::vector<WeightSystem> with_verdict(Verdict v) const;
};

/// All a0 <= a1 <= a2 <= a3 <= max_a3 with a0 >= min_a0 and
/// d = k - fano_index > 0.
ScanReport scan(const ScanConfig& config);

nlohmann::ordered_json to_json(const FletcherReport& report);
nlohmann::ordered_json to_json(const Certificate& cert);
nlohmann::ordered_json to_json(const ScanReport& report);

/// Columns: a0,a1,a2,a3,d,fletcher,rho_num,rho_den,rho_float,verdict
std::string to_csv(const ScanReport& report);

}  // namespace lct::fano
