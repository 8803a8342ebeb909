#include "lct/fano_certifier.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "lct/errors.hpp"
#include "lct/parallel.hpp"

namespace lct::fano {

using lct::to_string;

namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
constexpr std::array<std::array<int, 3>, 4> kTriples{{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}};

bool supported_on_pair(const Exponents& e, int j, int k)
{
    for (int l = 0; l < 4; ++l)
        if (l != j && l != k && e[static_cast<std::size_t>(l)] != 0)
            return false;
    return true;
}

/// The third variable l when e = x_j^m x_k^p x_l, else -1.
int linear_third_variable(const Exponents& e, int j, int k)
{
    int third = -1;
    for (int l = 0; l < 4; ++l) {
        if (l == j || l == k)
            continue;
        const auto v = e[static_cast<std::size_t>(l)];
        if (v == 0)
            continue;
        if (v != 1 || third != -1)
            return -1;
        third = l;
    }
    return third;
}

std::optional<Exponents> pair_only_monomial(std::span<const Exponents> monomials, int j, int k)
{
    for (const auto& e : monomials)
        if (supported_on_pair(e, j, k))
            return e;
    return std::nullopt;
}

/// Cheap necessary test for condition (i): m a_j = d or m a_j + a_l = d.
bool condition_i_possible(const WeightSystem& w)
{
    const Weight d = w.degree();
    for (std::size_t j = 0; j < 4; ++j) {
        bool found = d % w.a(j) == 0;
        for (std::size_t l = 0; l < 4 && !found; ++l)
            found = l != j && d - w.a(l) > 0 && (d - w.a(l)) % w.a(j) == 0;
        if (!found)
            return false;
    }
    return true;
}

bool triples_coprime(const WeightSystem& w)
{
    for (const auto& t : kTriples)
        if (std::gcd(std::gcd(w.a(static_cast<std::size_t>(t[0])), w.a(static_cast<std::size_t>(t[1]))),
                     w.a(static_cast<std::size_t>(t[2]))) != 1)
            return false;
    return true;
}

Rational product(const WeightSystem& w)
{
    BigInt p = 1;
    for (auto a : w.weights())
        p *= a;
    return Rational(p);
}

void require_fano(const WeightSystem& w)
{
    if (!w.is_fano())
        throw NotFano(w.str() + ": weight sum " + std::to_string(w.weight_sum()) + " does not exceed degree " +
                      std::to_string(w.degree()));
}

double display_float(const Rational& q)
{
    return std::stod(to_fixed(q, 6));
}

nlohmann::ordered_json monomial_list(std::span<const Exponents> monomials)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& e : monomials)
        out.push_back(monomial_str(e));
    return out;
}

nlohmann::ordered_json index_checks_json(bool pass, const std::array<IndexCheck, 4>& checks)
{
    nlohmann::ordered_json out;
    out["pass"] = pass;
    auto& list = out["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["j"] = c.j;
        j["witness"] = c.witness ? nlohmann::ordered_json(monomial_str(*c.witness)) : nlohmann::ordered_json();
        list.push_back(std::move(j));
    }
    return out;
}

nlohmann::ordered_json pair_checks_json(bool pass, const std::vector<PairCheck>& checks)
{
    nlohmann::ordered_json out;
    out["pass"] = pass;
    auto& list = out["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["j"] = c.j;
        j["k"] = c.k;
        j["pass"] = c.pass;
        j["witnesses"] = monomial_list(c.witnesses);
        list.push_back(std::move(j));
    }
    return out;
}

nlohmann::ordered_json optional_rational(const std::optional<Rational>& q)
{
    return q ? nlohmann::ordered_json(to_string(*q)) : nlohmann::ordered_json();
}

nlohmann::ordered_json optional_float(const std::optional<Rational>& q)
{
    return q ? nlohmann::ordered_json(display_float(*q)) : nlohmann::ordered_json();
}

}  // namespace

WeightSystem::WeightSystem(std::array<Weight, 4> weights, Weight degree) : a_(weights), d_(degree)
{
    for (auto a : a_)
        if (a < 1)
            throw InvalidInput("weights must be positive");
    if (d_ < 1)
        throw InvalidInput("degree must be positive");
    std::sort(a_.begin(), a_.end());
}

std::string WeightSystem::str() const
{
    std::ostringstream out;
    out << '(' << a_[0] << ',' << a_[1] << ',' << a_[2] << ',' << a_[3] << "; d=" << d_ << ')';
    return out.str();
}

std::vector<Exponents> weighted_monomials(const WeightSystem& w)
{
    std::vector<Exponents> out;
    const Weight d = w.degree();
    for (Weight e0 = 0; e0 * w.a(0) <= d; ++e0) {
        const Weight r0 = d - e0 * w.a(0);
        for (Weight e1 = 0; e1 * w.a(1) <= r0; ++e1) {
            const Weight r1 = r0 - e1 * w.a(1);
            for (Weight e2 = 0; e2 * w.a(2) <= r1; ++e2) {
                const Weight r2 = r1 - e2 * w.a(2);
                if (r2 % w.a(3) == 0)
                    out.push_back({static_cast<std::uint32_t>(e0), static_cast<std::uint32_t>(e1),
                                   static_cast<std::uint32_t>(e2), static_cast<std::uint32_t>(r2 / w.a(3))});
            }
        }
    }
    return out;
}

std::string monomial_str(const Exponents& e)
{
    std::string out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (e[i] == 0)
            continue;
        if (!out.empty())
            out += '*';
        out += 'x' + std::to_string(i);
        if (e[i] > 1)
            out += '^' + std::to_string(e[i]);
    }
    return out.empty() ? "1" : out;
}

FletcherReport fletcher_check(const WeightSystem& w)
{
    const auto monomials = weighted_monomials(w);
    return fletcher_check(w, monomials);
}

FletcherReport fletcher_check(const WeightSystem& w, std::span<const Exponents> monomials)
{
    FletcherReport r;

    r.cond_i = true;
    for (int j = 0; j < 4; ++j) {
        auto& check = r.cond_i_checks[static_cast<std::size_t>(j)];
        check.j = j;
        for (const auto& e : monomials) {
            const std::uint32_t rest = e[0] + e[1] + e[2] + e[3] - e[static_cast<std::size_t>(j)];
            if (e[static_cast<std::size_t>(j)] >= 1 && rest <= 1) {
                check.witness = e;
                break;
            }
        }
        r.cond_i = r.cond_i && check.witness.has_value();
    }

    r.cond_ii = true;
    for (const auto& [j, k] : kPairs) {
        PairCheck check{j, k, {}, false};
        if (auto e = pair_only_monomial(monomials, j, k)) {
            check.witnesses.push_back(*e);
            check.pass = true;
        } else {
            int first_l = -1;
            for (const auto& m : monomials) {
                const int l = linear_third_variable(m, j, k);
                if (l < 0 || l == first_l)
                    continue;
                check.witnesses.push_back(m);
                if (first_l >= 0) {
                    check.pass = true;
                    break;
                }
                first_l = l;
            }
            if (!check.pass)
                check.witnesses.clear();
        }
        r.cond_ii = r.cond_ii && check.pass;
        r.cond_ii_checks.push_back(std::move(check));
    }

    r.cond_iii = true;
    for (int j = 0; j < 4; ++j) {
        auto& check = r.cond_iii_checks[static_cast<std::size_t>(j)];
        check.j = j;
        for (const auto& e : monomials)
            if (e[static_cast<std::size_t>(j)] == 0) {
                check.witness = e;
                break;
            }
        r.cond_iii = r.cond_iii && check.witness.has_value();
    }

    r.cond_iv = true;
    for (const auto& [j, k] : kPairs) {
        if (std::gcd(w.a(static_cast<std::size_t>(j)), w.a(static_cast<std::size_t>(k))) == 1)
            continue;
        PairCheck check{j, k, {}, false};
        if (auto e = pair_only_monomial(monomials, j, k)) {
            check.witnesses.push_back(*e);
            check.pass = true;
        }
        r.cond_iv = r.cond_iv && check.pass;
        r.cond_iv_checks.push_back(std::move(check));
    }

    r.triple_coprime = true;
    for (const auto& t : kTriples) {
        const Weight g = std::gcd(std::gcd(w.a(static_cast<std::size_t>(t[0])), w.a(static_cast<std::size_t>(t[1]))),
                                  w.a(static_cast<std::size_t>(t[2])));
        if (g != 1) {
            r.triple_coprime = false;
            r.failing_triple = t;
            break;
        }
    }
    return r;
}

AnticanonicalData anticanonical_data(const WeightSystem& w)
{
    require_fano(w);
    const BigInt index = w.fano_index();
    return {w.fano_index(), Rational(BigInt(w.degree()) * index * index) / product(w)};
}

bool curve_bound_check(const WeightSystem& w)
{
    // a0 a1 > (2/3) d (k-d)^2  <=>  3 a0 a1 > 2 d (k-d)^2
    const BigInt index = w.fano_index();
    return BigInt(3) * w.a(0) * w.a(1) > BigInt(2) * w.degree() * index * index;
}

Rational rho_delta_form(const WeightSystem& w, Weight delta, bool refined)
{
    require_fano(w);
    const Weight twist = w.weight_sum() - (refined ? w.a(1) : w.a(0)) - w.a(2);
    const BigInt numerator = BigInt(4) * delta * w.degree() * w.fano_index() * twist;
    return Rational(numerator) / (Rational(3) * product(w));
}

Rational rho_branch_form(const WeightSystem& w, bool refined)
{
    require_fano(w);
    const Weight twist = w.weight_sum() - (refined ? w.a(1) : w.a(0)) - w.a(2);
    const Weight last = w.degree() % w.a(3) == 0 ? w.a(3) : w.a(2);
    const BigInt numerator = BigInt(4) * w.degree() * w.fano_index() * twist;
    const BigInt denominator = BigInt(3) * w.a(0) * w.a(1) * last;
    return Rational(numerator, denominator);
}

namespace {

Rational checked_rho(const WeightSystem& w, bool refined)
{
    const Weight delta = w.degree() % w.a(3) == 0 ? w.a(2) : w.a(3);
    Rational branch = rho_branch_form(w, refined);
    if (branch != rho_delta_form(w, delta, refined))
        throw InternalError("rho forms disagree for " + w.str());
    return branch;
}

}  // namespace

Rational rho(const WeightSystem& w)
{
    return checked_rho(w, false);
}

Rational rho_refined(const WeightSystem& w)
{
    return checked_rho(w, true);
}

IsotropyBound isotropy_bound(const WeightSystem& w, std::span<const Exponents> monomials)
{
    IsotropyBound out;
    out.delta = w.a(3);
    if (w.degree() % w.a(3) != 0) {
        out.justification = "a3 does not divide d: delta = a3";
        return out;
    }
    const Exponents pure{0, 0, 0, static_cast<std::uint32_t>(w.degree() / w.a(3))};
    if (std::find(monomials.begin(), monomials.end(), pure) == monomials.end()) {
        out.justification = "a3 divides d but " + monomial_str(pure) + " is missing: delta = a3";
        return out;
    }
    out.delta = w.a(2);
    out.misses_top_point = true;
    out.justification = "a3 divides d and " + monomial_str(pure) + " occurs, so X misses [0:0:0:1]: delta = a2";
    return out;
}

bool avoids_line_x0_x1(std::span<const Exponents> monomials)
{
    return std::any_of(monomials.begin(), monomials.end(), [](const Exponents& e) { return e[0] == 0 && e[1] == 0; });
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::KeCertified:
        return "KE_CERTIFIED";
    case Verdict::KeCertifiedRefined:
        return "KE_CERTIFIED_REFINED";
    case Verdict::Inconclusive:
        return "INCONCLUSIVE";
    case Verdict::NotOrbifold:
        return "NOT_ORBIFOLD";
    case Verdict::NotFano:
        return "NOT_FANO";
    }
    return "UNKNOWN";
}

Certificate certify(const WeightSystem& w)
{
    return certify(w, weighted_monomials(w));
}

Certificate certify(const WeightSystem& w, std::vector<Exponents> monomials)
{
    Certificate cert{.weights = w, .fletcher = fletcher_check(w, monomials), .monomials = std::move(monomials)};
    cert.monomial_count = cert.monomials.size();
    cert.isotropy = isotropy_bound(w, cert.monomials);
    cert.nef_line_ok = avoids_line_x0_x1(cert.monomials);

    if (w.is_fano()) {
        cert.anticanonical_square = anticanonical_data(w).square;
        cert.curve_bound_ok = curve_bound_check(w);
        cert.rho = rho_delta_form(w, cert.isotropy.delta, false);
        cert.rho_refined = rho_delta_form(w, cert.isotropy.delta, true);
        if (cert.isotropy.misses_top_point || w.degree() % w.a(3) != 0) {
            if (*cert.rho != rho(w) || *cert.rho_refined != rho_refined(w))
                throw InternalError("certificate rho disagrees with rho() for " + w.str());
        }
    }

    if (!cert.fletcher.passes()) {
        cert.verdict = Verdict::NotOrbifold;
    } else if (!w.is_fano()) {
        cert.verdict = Verdict::NotFano;
    } else if (cert.curve_bound_ok && cert.nef_line_ok && *cert.rho < 1) {
        cert.verdict = Verdict::KeCertified;
    } else if (cert.curve_bound_ok && *cert.rho >= 1 && *cert.rho_refined < 1) {
        cert.verdict = Verdict::KeCertifiedRefined;
        cert.refined_caveat = true;
    } else {
        cert.verdict = Verdict::Inconclusive;
    }
    return cert;
}

std::vector<WeightSystem> ScanReport::with_verdict(Verdict v) const
{
    std::vector<WeightSystem> out;
    for (const auto& c : entries)
        if (c.verdict == v)
            out.push_back(c.weights);
    return out;
}

ScanReport scan(const ScanConfig& config)
{
    if (config.min_a0 < 1 || config.max_a3 < config.min_a0)
        throw InvalidInput("scan needs max_a3 >= min_a0 >= 1");
    if (config.fano_index < 1)
        throw InvalidInput("scan needs fano_index >= 1");

    // one task per (a0, a1) so the work splits evenly
    std::vector<std::array<Weight, 2>> heads;
    for (Weight a0 = config.min_a0; a0 <= config.max_a3; ++a0)
        for (Weight a1 = a0; a1 <= config.max_a3; ++a1)
            heads.push_back({a0, a1});

    std::vector<std::vector<Certificate>> found(heads.size());
    std::vector<std::uint64_t> examined(heads.size(), 0);
    parallel_for(heads.size(), worker_count(config.threads), [&](std::size_t task) {
        const auto [a0, a1] = heads[task];
        for (Weight a2 = a1; a2 <= config.max_a3; ++a2) {
            for (Weight a3 = a2; a3 <= config.max_a3; ++a3) {
                const Weight d = a0 + a1 + a2 + a3 - config.fano_index;
                if (d <= 0)
                    continue;
                ++examined[task];
                const WeightSystem w({a0, a1, a2, a3}, d);
                if (!triples_coprime(w) || !condition_i_possible(w))
                    continue;
                auto monomials = weighted_monomials(w);
                if (!fletcher_check(w, monomials).passes())
                    continue;
                Certificate cert = certify(w, std::move(monomials));
                if (cert.verdict == Verdict::KeCertifiedRefined && !config.require_refined) {
                    cert.verdict = Verdict::Inconclusive;
                    cert.refined_caveat = false;
                }
                found[task].push_back(std::move(cert));
            }
        }
    });

    ScanReport report;
    report.config = config;
    for (std::size_t i = 0; i < heads.size(); ++i) {
        report.systems_examined += examined[i];
        for (auto& c : found[i])
            report.entries.push_back(std::move(c));
    }
    std::sort(report.entries.begin(), report.entries.end(), [](const Certificate& x, const Certificate& y) {
        if (*x.rho != *y.rho)
            return *x.rho < *y.rho;
        return x.weights < y.weights;
    });
    return report;
}

nlohmann::ordered_json to_json(const FletcherReport& report)
{
    nlohmann::ordered_json out;
    out["pass"] = report.passes();
    out["cond_i"] = index_checks_json(report.cond_i, report.cond_i_checks);
    out["cond_ii"] = pair_checks_json(report.cond_ii, report.cond_ii_checks);
    out["cond_iii"] = index_checks_json(report.cond_iii, report.cond_iii_checks);
    out["cond_iv"] = pair_checks_json(report.cond_iv, report.cond_iv_checks);
    out["triple_coprime"] = report.triple_coprime;
    out["failing_triple"] =
        report.failing_triple ? nlohmann::ordered_json(*report.failing_triple) : nlohmann::ordered_json();
    return out;
}

nlohmann::ordered_json to_json(const Certificate& cert)
{
    const auto& w = cert.weights;
    nlohmann::ordered_json out;
    out["weights"] = w.weights();
    out["degree"] = w.degree();
    out["weight_sum"] = w.weight_sum();
    out["fano_index"] = w.fano_index();
    out["verdict"] = to_string(cert.verdict);
    out["fletcher"] = to_json(cert.fletcher);
    out["monomial_count"] = cert.monomial_count;
    out["monomials"] = monomial_list(cert.monomials);
    out["anticanonical_square"] = optional_rational(cert.anticanonical_square);
    out["anticanonical_square_float"] = optional_float(cert.anticanonical_square);
    out["curve_bound_ok"] = cert.curve_bound_ok;
    out["nef_line_ok"] = cert.nef_line_ok;
    out["delta"] = cert.isotropy.delta;
    out["delta_justification"] = cert.isotropy.justification;
    out["rho"] = optional_rational(cert.rho);
    out["rho_float"] = optional_float(cert.rho);
    out["rho_refined"] = optional_rational(cert.rho_refined);
    out["rho_refined_float"] = optional_float(cert.rho_refined);
    out["refined_caveat"] = cert.refined_caveat ? nlohmann::ordered_json(
                                                      "twist nef only off the curve (x0=0); restriction to that "
                                                      "curve not verified")
                                                : nlohmann::ordered_json();
    return out;
}

nlohmann::ordered_json to_json(const ScanReport& report)
{
    nlohmann::ordered_json out;
    out["max_a3"] = report.config.max_a3;
    out["fano_index"] = report.config.fano_index;
    out["min_a0"] = report.config.min_a0;
    out["refined"] = report.config.require_refined;
    out["systems_examined"] = report.systems_examined;
    auto& list = out["entries"] = nlohmann::ordered_json::array();
    for (const auto& c : report.entries) {
        nlohmann::ordered_json e;
        e["weights"] = c.weights.weights();
        e["degree"] = c.weights.degree();
        e["verdict"] = to_string(c.verdict);
        e["rho"] = optional_rational(c.rho);
        e["rho_float"] = optional_float(c.rho);
        e["rho_refined"] = optional_rational(c.rho_refined);
        e["rho_refined_float"] = optional_float(c.rho_refined);
        e["curve_bound_ok"] = c.curve_bound_ok;
        e["monomial_count"] = c.monomial_count;
        list.push_back(std::move(e));
    }
    return out;
}

std::string to_csv(const ScanReport& report)
{
    std::ostringstream out;
    out << "a0,a1,a2,a3,d,fletcher,rho_num,rho_den,rho_float,verdict\n";
    for (const auto& c : report.entries) {
        const auto& a = c.weights.weights();
        out << a[0] << ',' << a[1] << ',' << a[2] << ',' << a[3] << ',' << c.weights.degree() << ','
            << (c.fletcher.passes() ? "pass" : "fail") << ',' << boost::multiprecision::numerator(*c.rho) << ','
            << boost::multiprecision::denominator(*c.rho) << ',' << to_fixed(*c.rho, 6) << ','
            << to_string(c.verdict) << '\n';
    }
    return out.str();
}

}  // namespace lct::fano
