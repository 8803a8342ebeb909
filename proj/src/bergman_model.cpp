#include "lct/bergman_model.hpp"

#include <cmath>
#include <numbers>

#include "lct/errors.hpp"
#include "lct/lct_core.hpp"

namespace lct::bergman {

namespace {

BigInt floor_of(const Rational& q)
{
    const BigInt num = boost::multiprecision::numerator(q);
    const BigInt den = boost::multiprecision::denominator(q);
    BigInt f = num / den;
    if (num < 0 && f * den != num)
        --f;
    return f;
}

// sum_{k > k_max} (k + 1) y^(k - k_min), scaled like the partial sum
double scaled_tail(const BergmanApprox& ap, double y)
{
    const double k = static_cast<double>(ap.k_max);
    const double gap = static_cast<double>(ap.k_max - ap.k_min) + 1.0;
    return std::pow(y, gap) * ((k + 2.0) - (k + 1.0) * y) / ((1.0 - y) * (1.0 - y));
}

// sum_k (k + 1 - mc) y^(k - k_min)
double scaled_sum(const BergmanApprox& ap, double y)
{
    double sum = 0.0;
    double power = 1.0;
    for (const auto& coefficient : ap.scaled_coefficients) {
        sum += to_double(coefficient) * power;
        power *= y;
    }
    return sum;
}

}  // namespace

std::uint64_t minimal_degree(const Rational& c, std::uint64_t m)
{
    if (c < 0)
        throw InvalidInput("weight coefficient c must be nonnegative");
    if (m == 0)
        throw InvalidInput("m must be >= 1");
    return floor_of(c * Rational(BigInt(m))).convert_to<std::uint64_t>();
}

BergmanApprox build_approx(const RadialWeight& w, std::uint64_t m, std::uint64_t k_max)
{
    BergmanApprox ap;
    ap.weight = w;
    ap.m = m;
    ap.k_min = minimal_degree(w.c, m);
    if (k_max < ap.k_min + 8)
        throw InvalidInput("k_max = " + std::to_string(k_max) + " is below k_min + 8 = " +
                           std::to_string(ap.k_min + 8));
    ap.k_max = k_max;
    const Rational mc = w.c * Rational(BigInt(m));
    for (std::uint64_t k = ap.k_min; k <= k_max; ++k) {
        Rational s = Rational(BigInt(k) + 1) - mc;
        if (s <= 0)
            throw InternalError("non-positive Bergman coefficient");
        ap.scaled_coefficients.push_back(std::move(s));
    }
    return ap;
}

BergmanApprox build_approx(const RadialWeight& w, std::uint64_t m)
{
    return build_approx(w, m, minimal_degree(w.c, m) + kDefaultTail);
}

PsiValue eval_psi_m(const BergmanApprox& ap, double z_abs)
{
    if (!(z_abs > 0.0 && z_abs < 1.0))
        throw InvalidInput("|z| must lie in (0, 1)");
    const double y = z_abs * z_abs;
    const double partial = scaled_sum(ap, y);
    const double scale = 1.0 / (2.0 * static_cast<double>(ap.m));
    const double log_kernel = static_cast<double>(ap.k_min) * std::log(y) + std::log(partial) - std::log(std::numbers::pi);
    return {scale * log_kernel, scale * std::log1p(scaled_tail(ap, y) / partial)};
}

ExtRational lelong_of_psi_m(const BergmanApprox& ap)
{
    return ExtRational(Rational(BigInt(ap.k_min), BigInt(ap.m)));
}

double lower_bound_constant(const BergmanApprox& ap)
{
    return 0.5 * std::log(std::numbers::pi / to_double(ap.scaled_coefficients.front()));
}

bool lower_bound_holds(const BergmanApprox& ap, double z_abs)
{
    const double m = static_cast<double>(ap.m);
    const double phi = to_double(ap.weight.c) * std::log(z_abs);
    const double bound = phi - lower_bound_constant(ap) / m;
    // rounding slack only; the exact inequality is strict
    return eval_psi_m(ap, z_abs).psi >= bound - 1e-12 * (1.0 + std::abs(bound));
}

bool upper_bound_holds(const BergmanApprox& ap, double z_abs)
{
    const double m = static_cast<double>(ap.m);
    const double rho = (1.0 - z_abs) / 2.0;
    const double sup_phi = to_double(ap.weight.c) * std::log(z_abs + rho);
    const PsiValue v = eval_psi_m(ap, z_abs);
    return v.psi + v.truncation_bound <= sup_phi + std::log(1.0 / (std::sqrt(std::numbers::pi) * rho)) / m;
}

BoundChecks check_bounds(const BergmanApprox& ap)
{
    const ExtRational c(ap.weight.c);
    const ExtRational nu = lelong_of_psi_m(ap);
    const ExtRational c_minus(ap.weight.c - Rational(BigInt(1), BigInt(ap.m)));

    // With K = {0} in one variable, c log|z| has exponent 1/c, so its Arnold
    // multiplicity is c; likewise psi_m has Arnold multiplicity nu.
    const ExtRational lambda_phi = arnold_multiplicity(c.reciprocal());
    const ExtRational lambda_psi = arnold_multiplicity(nu.reciprocal());
    const ExtRational lambda_minus = lambda_phi + ExtRational(Rational(BigInt(-1), BigInt(ap.m)));

    BoundChecks out;
    out.lelong_sandwich = c_minus <= nu && nu <= c;
    out.arnold_bound = lambda_minus <= lambda_psi && lambda_psi <= lambda_phi;
    return out;
}

nlohmann::ordered_json to_json(const BergmanApprox& ap)
{
    const auto checks = check_bounds(ap);
    nlohmann::ordered_json out;
    out["c"] = to_string(ap.weight.c);
    out["m"] = ap.m;
    out["k_min"] = ap.k_min;
    out["k_max"] = ap.k_max;
    out["lelong"] = lelong_of_psi_m(ap).str();
    out["lelong_float"] = lelong_of_psi_m(ap).to_double();
    out["lower_constant_float"] = lower_bound_constant(ap);
    out["sandwich_ok"] = checks.lelong_sandwich;
    out["arnold_bound_ok"] = checks.arnold_bound;
    return out;
}

}  // namespace lct::bergman
