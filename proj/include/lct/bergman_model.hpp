#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "lct/ext_rational.hpp"

namespace lct::bergman {

// Radial model of the Bergman-kernel approximation on the unit disk.
//
// For phi(z) = c log|z| the Hilbert space of holomorphic f with
// int |f|^2 e^{-2m phi} < inf has the orthonormal basis
//   g_k(z) = sqrt((k + 1 - mc)/pi) z^k,   k >= k_min,
// since int_disk |z|^{2k - 2mc} dV = pi/(k + 1 - mc). Hence
//   psi_m(z) = 1/(2m) log sum_k sigma_k |z|^{2k},  sigma_k = (k + 1 - mc)/pi,
// and every statement about psi_m reduces to exact arithmetic on k_min.
// Only n = 1 is modelled.

struct RadialWeight {
    Rational c;  ///< Lelong number of phi at 0; must be >= 0
};

struct BergmanApprox {
    RadialWeight weight;
    std::uint64_t m = 1;
    std::uint64_t k_min = 0;
    std::uint64_t k_max = 0;
    /// pi * sigma_k = k + 1 - mc for k = k_min..k_max, all > 0.
    std::vector<Rational> scaled_coefficients;
};

/// Default k_max is k_min + 64.
inline constexpr std::uint64_t kDefaultTail = 64;

/// Smallest k with k + 1 - mc > 0, i.e. floor(mc) (which equals mc when mc is
/// an integer: the borderline k = mc - 1 has a divergent norm).
std::uint64_t minimal_degree(const Rational& c, std::uint64_t m);

/// Throws InvalidInput for c < 0, m = 0 or k_max < k_min + 8.
BergmanApprox build_approx(const RadialWeight& w, std::uint64_t m, std::uint64_t k_max);
BergmanApprox build_approx(const RadialWeight& w, std::uint64_t m);

struct PsiValue {
    double psi = 0.0;
    /// Upper bound on psi_m(full series) - psi_m(truncated series).
    double truncation_bound = 0.0;
};

/// psi_m at |z| = z_abs in (0, 1).
PsiValue eval_psi_m(const BergmanApprox& ap, double z_abs);

/// Lelong number of psi_m at 0: k_min/m.
ExtRational lelong_of_psi_m(const BergmanApprox& ap);

/// Constant C1 of psi_m >= phi - C1/m in this model:
/// C1 = -(1/2) log sigma_{k_min} = (1/2) log(pi/(k_min + 1 - mc)).
double lower_bound_constant(const BergmanApprox& ap);

/// psi_m(z) >= c log|z| - C1/m at z_abs.
bool lower_bound_holds(const BergmanApprox& ap, double z_abs);

/// psi_m(z) <= sup_{|w - z| < rho} phi + (1/m) log(C2/rho) with C2 = pi^{-1/2}
/// (mean-value inequality on a disk of radius rho = (1 - z_abs)/2), using the
/// truncation bound to cover the tail.
bool upper_bound_holds(const BergmanApprox& ap, double z_abs);

struct BoundChecks {
    bool lelong_sandwich = false;  ///< c - 1/m <= k_min/m <= c
    bool arnold_bound = false;     ///< lambda(phi) - 1/m <= lambda(psi_m) <= lambda(phi)
};

BoundChecks check_bounds(const BergmanApprox& ap);

nlohmann::ordered_json to_json(const BergmanApprox& ap);

}  // namespace lct::bergman
