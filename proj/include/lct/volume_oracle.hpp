#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lct/lct_core.hpp"

namespace lct::volume {

/// Seed used whenever the caller does not pick one.
inline constexpr std::uint64_t kDefaultSeed = 20010523;

/// phi evaluated at a point of C^n given as n complex coordinates.
using Evaluator = std::function<double(std::span<const std::complex<double>>)>;

/// A potential phi on the polydisk of the given radius centred at 0.
struct SampledPotential {
    Evaluator evaluator;
    std::size_t dimension = 1;
    double radius = 1.0;
};

/// A holomorphic function of n complex variables.
using HoloFunction = std::function<std::complex<double>(std::span<const std::complex<double>>)>;

/// The function named by a principal spec (mono, single-order diag, ssum).
HoloFunction function_from_spec(const MonomialIdealSpec& spec);

/// phi = 1/2 log sum_j |g_j|^2 over the generators of the ideal named by
/// `spec`; for a principal spec this is log|f|. Its exponent at 0 is
/// lct_monomial(spec).
SampledPotential potential_from_spec(const MonomialIdealSpec& spec);

/// phi_t = log|f + t g| for principal f, g on the same variables (g may use
/// fewer). A null `perturbation` gives the constant family log|f|.
SampledPotential perturbed_potential(const MonomialIdealSpec& base, const MonomialIdealSpec* perturbation,
                                     double t);

struct VolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
};

/// Uniform-sample estimate of mu({phi < log r}) on the polydisk. Samples are
/// drawn in fixed-size chunks whose seeds derive from (seed, chunk index), so
/// the result is bit-identical for any thread count.
VolumeEstimate estimate_sublevel_volume(const SampledPotential& potential, double r, std::uint64_t samples,
                                        std::uint64_t seed, unsigned threads = 0);

/// Hit counts for several radii from one shared sample set (common random
/// numbers). counts[i] = #{samples with phi < log radii[i]}.
std::vector<std::uint64_t> sublevel_counts(const SampledPotential& potential, std::span<const double> radii,
                                           std::uint64_t samples, std::uint64_t seed, unsigned threads = 0);

struct FitConfig {
    double r_min = 1e-3;
    double r_max = 1e-1;
    std::size_t grid_size = 12;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    bool with_log_correction = false;
    unsigned threads = 0;
};

struct GridPoint {
    double r = 0.0;
    double volume = 0.0;
    double std_error = 0.0;
    std::uint64_t hits = 0;
    bool used_in_fit = false;
};

struct ExponentFit {
    std::vector<GridPoint> points;  ///< radii strictly decreasing
    double fitted_c = 0.0;
    /// Power q of the |log r| factor, set only with log correction.
    std::optional<double> fitted_log_power;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t dimension = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Weighted least squares of log mu against log r on a geometric grid.
///
/// Plain model:      log mu = 2c log r + b
/// Log-corrected:    log mu = 2c log r + q log log(1/r) + b,  0 <= q <= n-1
///
/// The correction power is fitted but clamped to [0, n-1], the range allowed
/// by C1 r^{2c} <= mu <= C2 r^{2c} |log r|^{n-1}. Weights are inverse binomial
/// variances of log mu. Zero-volume and saturated radii are excluded.
/// Throws InvalidInput on a bad grid and InsufficientData with fewer than
/// three usable radii.
ExponentFit fit_exponent(const SampledPotential& potential, const FitConfig& config);

struct SemicontinuityPoint {
    double t = 0.0;
    double fitted_c = 0.0;
    bool violation = false;
};

struct SemicontinuityReport {
    std::vector<SemicontinuityPoint> points;
    double baseline_c = 0.0;  ///< fitted exponent at t = 0
    double tolerance = 0.0;
    bool any_violation = false;
};

using PotentialFamily = std::function<SampledPotential(double)>;

/// Fits every family member and flags t with fitted_c(t) < fitted_c(0) - tol.
/// t_values must contain 0.
SemicontinuityReport semicontinuity_experiment(const PotentialFamily& family, std::span<const double> t_values,
                                               const FitConfig& config, double tolerance = 0.05);

/// Finite-range form of C1 r^{2c'} <= mu <= C2 r^{2c''} for c'' < c < c'.
struct EnvelopeCheck {
    double c_below = 0.0;
    double c_above = 0.0;
    double upper_constant = 0.0;  ///< max mu / r^{2c''} over used radii
    double lower_constant = 0.0;  ///< min mu / r^{2c'} over used radii
    bool upper_ratio_decays = false;  ///< mu / r^{2c''} shrinks toward r_min
    bool lower_ratio_grows = false;   ///< mu / r^{2c'} grows toward r_min
};

EnvelopeCheck envelope_check(const ExponentFit& fit, double c_below, double c_above);

nlohmann::ordered_json fit_to_json(const ExponentFit& fit);

/// Columns: r,volume,std_error,used_in_fit
std::string fit_to_csv(const ExponentFit& fit);

nlohmann::ordered_json semicontinuity_to_json(const SemicontinuityReport& report);

}  // namespace lct::volume
