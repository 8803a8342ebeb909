#include "lct/volume_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "lct/errors.hpp"
#include "lct/parallel.hpp"

namespace lct::volume {

namespace {

constexpr std::uint64_t kChunkSize = 1u << 16;

using Point = std::span<const std::complex<double>>;

std::complex<double> ipow(std::complex<double> z, std::uint64_t e)
{
    std::complex<double> result = 1.0;
    while (e) {
        if (e & 1u)
            result *= z;
        z *= z;
        e >>= 1u;
    }
    return result;
}

HoloFunction function_at(const MonomialIdealSpec& spec, std::size_t offset)
{
    if (const auto* m = std::get_if<PrincipalMonomial>(&spec.node)) {
        return [exps = m->exponents, offset](Point z) {
            std::complex<double> v = 1.0;
            for (std::size_t i = 0; i < exps.size(); ++i)
                v *= ipow(z[offset + i], exps[i]);
            return v;
        };
    }
    if (const auto* d = std::get_if<Diagonal>(&spec.node); d && d->orders.size() == 1)
        return [e = d->orders[0], offset](Point z) { return ipow(z[offset], e); };
    if (const auto* s = std::get_if<SeparatedSum>(&spec.node)) {
        HoloFunction f = function_at(*s->left, offset);
        HoloFunction g = function_at(*s->right, offset + s->left->variable_count());
        return [f, g](Point z) { return f(z) + g(z); };
    }
    throw InvalidInput("spec '" + spec.str() + "' is an ideal, not a single function");
}

void collect_generators(const MonomialIdealSpec& spec, std::size_t offset, std::vector<HoloFunction>& out)
{
    if (const auto* d = std::get_if<Diagonal>(&spec.node)) {
        for (std::size_t i = 0; i < d->orders.size(); ++i)
            out.push_back([e = d->orders[i], at = offset + i](Point z) { return ipow(z[at], e); });
        return;
    }
    if (const auto* s = std::get_if<DirectSum>(&spec.node)) {
        collect_generators(*s->left, offset, out);
        collect_generators(*s->right, offset + s->left->variable_count(), out);
        return;
    }
    out.push_back(function_at(spec, offset));
}

std::uint64_t next_u64_seed(std::seed_seq& seq)
{
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(next_u64_seed(seq));
}

double unit_uniform(std::mt19937_64& engine)
{
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double polydisk_volume(const SampledPotential& p)
{
    return std::pow(std::numbers::pi * p.radius * p.radius, static_cast<double>(p.dimension));
}

void check_potential(const SampledPotential& p)
{
    if (!p.evaluator)
        throw InvalidInput("potential has no evaluator");
    if (p.dimension < 1)
        throw InvalidInput("potential dimension must be >= 1");
    if (!(p.radius > 0.0))
        throw InvalidInput("polydisk radius must be positive");
}

struct LinearFit {
    Eigen::VectorXd beta;
    double r_squared = 0.0;
};

LinearFit weighted_least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w)
{
    const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
    const Eigen::MatrixXd normal = xtw * x;
    Eigen::VectorXd beta = normal.ldlt().solve(xtw * y);
    if (!beta.allFinite())
        throw InsufficientData("degenerate regression");

    const double mean = w.dot(y) / w.sum();
    const Eigen::VectorXd resid = y - x * beta;
    const double ss_res = (w.array() * resid.array().square()).sum();
    const double ss_tot = (w.array() * (y.array() - mean).square()).sum();
    return {beta, ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0};
}

}  // namespace

HoloFunction function_from_spec(const MonomialIdealSpec& spec)
{
    spec.validate();
    return function_at(spec, 0);
}

SampledPotential potential_from_spec(const MonomialIdealSpec& spec)
{
    spec.validate();
    std::vector<HoloFunction> gens;
    collect_generators(spec, 0, gens);
    SampledPotential p;
    p.dimension = spec.variable_count();
    if (gens.size() == 1) {
        p.evaluator = [f = gens[0]](Point z) { return std::log(std::abs(f(z))); };
    } else {
        p.evaluator = [gens](Point z) {
            double sum = 0.0;
            for (const auto& g : gens)
                sum += std::norm(g(z));
            return 0.5 * std::log(sum);
        };
    }
    return p;
}

SampledPotential perturbed_potential(const MonomialIdealSpec& base, const MonomialIdealSpec* perturbation,
                                     double t)
{
    SampledPotential p;
    p.dimension = base.variable_count();
    HoloFunction f = function_from_spec(base);
    if (!perturbation || t == 0.0) {
        p.evaluator = [f](Point z) { return std::log(std::abs(f(z))); };
        return p;
    }
    if (perturbation->variable_count() > base.variable_count())
        throw InvalidInput("perturbation uses more variables than the base function");
    HoloFunction g = function_from_spec(*perturbation);
    p.evaluator = [f, g, t](Point z) { return std::log(std::abs(f(z) + t * g(z))); };
    return p;
}

std::vector<std::uint64_t> sublevel_counts(const SampledPotential& potential, std::span<const double> radii,
                                           std::uint64_t samples, std::uint64_t seed, unsigned threads)
{
    check_potential(potential);
    // thresholds ascending; order[i] maps sorted slot back to caller index
    std::vector<std::size_t> order(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] < radii[b]; });
    std::vector<double> thresholds(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        thresholds[i] = std::log(radii[order[i]]);

    const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
    std::vector<std::vector<std::uint64_t>> buckets(chunks);
    const std::size_t n = potential.dimension;
    const double radius = potential.radius;

    parallel_for(chunks, worker_count(threads), [&](std::size_t chunk) {
        auto engine = chunk_engine(seed, chunk);
        std::vector<std::uint64_t> local(thresholds.size() + 1, 0);
        std::vector<std::complex<double>> z(n);
        const std::uint64_t begin = chunk * kChunkSize;
        const std::uint64_t end = std::min(samples, begin + kChunkSize);
        for (std::uint64_t s = begin; s < end; ++s) {
            for (std::size_t k = 0; k < n; ++k) {
                const double rho = radius * std::sqrt(unit_uniform(engine));
                const double theta = 2.0 * std::numbers::pi * unit_uniform(engine);
                z[k] = std::polar(rho, theta);
            }
            const double phi = potential.evaluator(z);
            // first threshold strictly above phi; NaN lands past the end
            const auto slot = std::isnan(phi) ? thresholds.size()
                                              : static_cast<std::size_t>(std::upper_bound(thresholds.begin(),
                                                                                          thresholds.end(), phi) -
                                                                         thresholds.begin());
            ++local[slot];
        }
        buckets[chunk] = std::move(local);
    });

    std::vector<std::uint64_t> sorted_counts(thresholds.size(), 0);
    for (const auto& b : buckets) {
        std::uint64_t running = 0;
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            running += b[i];
            sorted_counts[i] += running;
        }
    }
    std::vector<std::uint64_t> counts(radii.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        counts[order[i]] = sorted_counts[i];
    return counts;
}

VolumeEstimate estimate_sublevel_volume(const SampledPotential& potential, double r, std::uint64_t samples,
                                        std::uint64_t seed, unsigned threads)
{
    if (!(r > 0.0 && r < 1.0))
        throw InvalidInput("radius must lie in (0, 1)");
    if (samples < 1000)
        throw InvalidInput("at least 1000 samples are required");
    const double radii[] = {r};
    const std::uint64_t hits = sublevel_counts(potential, radii, samples, seed, threads)[0];
    const double total = polydisk_volume(potential);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {total * p, total * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), hits, samples};
}

ExponentFit fit_exponent(const SampledPotential& potential, const FitConfig& config)
{
    check_potential(potential);
    if (!(config.r_min > 0.0 && config.r_min < config.r_max && config.r_max < 1.0))
        throw InvalidInput("need 0 < r_min < r_max < 1");
    if (config.grid_size < 4)
        throw InvalidInput("grid needs at least 4 radii");
    if (config.samples < 1000)
        throw InvalidInput("at least 1000 samples are required");

    ExponentFit fit;
    fit.dimension = potential.dimension;
    fit.samples = config.samples;
    fit.seed = config.seed;

    std::vector<double> radii(config.grid_size);
    const double ratio = config.r_min / config.r_max;
    for (std::size_t i = 0; i < radii.size(); ++i)
        radii[i] = config.r_max * std::pow(ratio, static_cast<double>(i) / static_cast<double>(radii.size() - 1));
    radii.back() = config.r_min;

    const auto counts = sublevel_counts(potential, radii, config.samples, config.seed, config.threads);
    const double total = polydisk_volume(potential);
    const double n_samples = static_cast<double>(config.samples);

    std::vector<std::size_t> usable;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double p = static_cast<double>(counts[i]) / n_samples;
        GridPoint g;
        g.r = radii[i];
        g.hits = counts[i];
        g.volume = total * p;
        g.std_error = total * std::sqrt(p * (1.0 - p) / n_samples);
        g.used_in_fit = counts[i] > 0 && counts[i] < config.samples;
        if (g.used_in_fit)
            usable.push_back(i);
        fit.points.push_back(g);
    }
    if (usable.size() < 3)
        throw InsufficientData("only " + std::to_string(usable.size()) + " radii have a nonzero volume");

    const auto m = static_cast<Eigen::Index>(usable.size());
    Eigen::VectorXd y(m), log_r(m), log_log(m), w(m);
    for (Eigen::Index row = 0; row < m; ++row) {
        const auto& g = fit.points[usable[static_cast<std::size_t>(row)]];
        const double p = static_cast<double>(g.hits) / n_samples;
        y(row) = std::log(g.volume);
        log_r(row) = std::log(g.r);
        log_log(row) = std::log(-std::log(g.r));
        w(row) = p * n_samples / (1.0 - p);  // 1 / Var(log mu)
    }

    auto fit_with_fixed_power = [&](double q) {
        Eigen::MatrixXd x(m, 2);
        x.col(0) = log_r;
        x.col(1).setOnes();
        auto lf = weighted_least_squares(x, y - q * log_log, w);
        fit.fitted_c = lf.beta(0) / 2.0;
        fit.intercept = lf.beta(1);
        fit.r_squared = lf.r_squared;
    };

    const double max_power = static_cast<double>(potential.dimension - 1);
    if (!config.with_log_correction) {
        fit_with_fixed_power(0.0);
        return fit;
    }
    if (max_power == 0.0 || usable.size() < 4) {
        fit_with_fixed_power(0.0);
        fit.fitted_log_power = 0.0;
        return fit;
    }

    Eigen::MatrixXd x(m, 3);
    x.col(0) = log_r;
    x.col(1) = log_log;
    x.col(2).setOnes();
    const auto lf = weighted_least_squares(x, y, w);
    const double q = lf.beta(1);
    if (q >= 0.0 && q <= max_power) {
        fit.fitted_c = lf.beta(0) / 2.0;
        fit.intercept = lf.beta(2);
        fit.r_squared = lf.r_squared;
        fit.fitted_log_power = q;
    } else {
        const double clamped = std::clamp(q, 0.0, max_power);
        fit_with_fixed_power(clamped);
        fit.fitted_log_power = clamped;
    }
    return fit;
}

SemicontinuityReport semicontinuity_experiment(const PotentialFamily& family, std::span<const double> t_values,
                                               const FitConfig& config, double tolerance)
{
    if (std::find(t_values.begin(), t_values.end(), 0.0) == t_values.end())
        throw InvalidInput("t values must include 0");
    SemicontinuityReport report;
    report.tolerance = tolerance;
    for (double t : t_values)
        report.points.push_back({t, fit_exponent(family(t), config).fitted_c, false});
    for (const auto& p : report.points)
        if (p.t == 0.0) {
            report.baseline_c = p.fitted_c;
            break;
        }
    for (auto& p : report.points) {
        p.violation = p.fitted_c < report.baseline_c - tolerance;
        report.any_violation = report.any_violation || p.violation;
    }
    return report;
}

EnvelopeCheck envelope_check(const ExponentFit& fit, double c_below, double c_above)
{
    if (!(c_below < c_above))
        throw InvalidInput("envelope needs c_below < c_above");
    EnvelopeCheck check;
    check.c_below = c_below;
    check.c_above = c_above;

    std::vector<double> upper_ratio, lower_ratio;
    for (const auto& g : fit.points) {
        if (!g.used_in_fit)
            continue;
        upper_ratio.push_back(g.volume / std::pow(g.r, 2.0 * c_below));
        lower_ratio.push_back(g.volume / std::pow(g.r, 2.0 * c_above));
    }
    if (upper_ratio.size() < 2)
        throw InsufficientData("envelope needs at least two used radii");
    check.upper_constant = *std::max_element(upper_ratio.begin(), upper_ratio.end());
    check.lower_constant = *std::min_element(lower_ratio.begin(), lower_ratio.end());
    // points run from r_max down to r_min
    check.upper_ratio_decays = upper_ratio.back() < upper_ratio.front();
    check.lower_ratio_grows = lower_ratio.back() > lower_ratio.front();
    return check;
}

nlohmann::ordered_json fit_to_json(const ExponentFit& fit)
{
    nlohmann::ordered_json out;
    out["dimension"] = fit.dimension;
    out["samples"] = fit.samples;
    out["seed"] = fit.seed;
    out["fitted_c_float"] = fit.fitted_c;
    if (fit.fitted_log_power)
        out["fitted_log_power_float"] = *fit.fitted_log_power;
    out["intercept_float"] = fit.intercept;
    out["r_squared_float"] = fit.r_squared;
    auto& pts = out["points"] = nlohmann::ordered_json::array();
    for (const auto& g : fit.points) {
        nlohmann::ordered_json p;
        p["r"] = g.r;
        p["volume"] = g.volume;
        p["std_error"] = g.std_error;
        p["hits"] = g.hits;
        p["used_in_fit"] = g.used_in_fit;
        pts.push_back(std::move(p));
    }
    return out;
}

std::string fit_to_csv(const ExponentFit& fit)
{
    std::ostringstream out;
    out.precision(17);
    out << "r,volume,std_error,used_in_fit\n";
    for (const auto& g : fit.points)
        out << g.r << ',' << g.volume << ',' << g.std_error << ',' << (g.used_in_fit ? "true" : "false") << '\n';
    return out.str();
}

nlohmann::ordered_json semicontinuity_to_json(const SemicontinuityReport& report)
{
    nlohmann::ordered_json out;
    out["baseline_c_float"] = report.baseline_c;
    out["tolerance"] = report.tolerance;
    out["any_violation"] = report.any_violation;
    auto& pts = out["points"] = nlohmann::ordered_json::array();
    for (const auto& p : report.points) {
        nlohmann::ordered_json j;
        j["t"] = p.t;
        j["fitted_c_float"] = p.fitted_c;
        j["violation"] = p.violation;
        pts.push_back(std::move(j));
    }
    return out;
}

}  // namespace lct::volume
