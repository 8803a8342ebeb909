#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lct/errors.hpp"
#include "lct/volume_oracle.hpp"

using namespace lct;
using namespace lct::volume;

namespace {

SampledPotential spec_potential(const char* text)
{
    return potential_from_spec(*parse_spec(text));
}

SampledPotential zero_potential()
{
    SampledPotential p;
    p.dimension = 1;
    p.evaluator = [](std::span<const std::complex<double>>) { return 0.0; };
    return p;
}

}  // namespace

TEST_CASE("monomial potentials agree with sum alpha_i log|z_i|")
{
    const auto p = spec_potential("mono:2,1,3");
    const std::complex<double> z[] = {{0.3, -0.2}, {-0.7, 0.1}, {0.05, 0.4}};
    const double expected = 2 * std::log(std::abs(z[0])) + std::log(std::abs(z[1])) + 3 * std::log(std::abs(z[2]));
    CHECK(p.evaluator(z) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(p.dimension == 3);

    // (z1^2, z2^3): 1/2 log(|z1|^4 + |z2|^6)
    const auto ideal = spec_potential("diag:2,3");
    const double e2 = 0.5 * std::log(std::pow(std::abs(z[0]), 4) + std::pow(std::abs(z[1]), 6));
    CHECK(ideal.evaluator(std::span(z, 2)) == doctest::Approx(e2).epsilon(1e-14));

    // z1^2 + z2^2 as a separated sum
    const auto sum = spec_potential("ssum(mono:2;mono:2)");
    CHECK(sum.evaluator(std::span(z, 2)) == doctest::Approx(std::log(std::abs(z[0] * z[0] + z[1] * z[1]))));
}

TEST_CASE("disk area law")
{
    const auto p = spec_potential("mono:1");
    const auto est = estimate_sublevel_volume(p, 0.5, 200000, 1);
    CHECK(std::abs(est.volume - std::numbers::pi * 0.25) <= 3 * est.std_error);
    CHECK(est.samples == 200000);
}

TEST_CASE("bidisk closed form for log|z1 z2|")
{
    const double r = 0.1;
    const double exact = std::numbers::pi * std::numbers::pi * r * r * (1 + 2 * std::log(1 / r));
    const auto est = estimate_sublevel_volume(spec_potential("mono:1,1"), r, 400000, 2);
    CHECK(std::abs(est.volume - exact) <= 3 * est.std_error);
}

TEST_CASE("zero potential has empty sublevel sets")
{
    CHECK(estimate_sublevel_volume(zero_potential(), 0.9, 5000, 3).volume == 0.0);
}

TEST_CASE("estimate preconditions")
{
    const auto p = spec_potential("mono:1");
    CHECK_THROWS_AS(estimate_sublevel_volume(p, 0.0, 5000, 1), InvalidInput);
    CHECK_THROWS_AS(estimate_sublevel_volume(p, 1.0, 5000, 1), InvalidInput);
    CHECK_THROWS_AS(estimate_sublevel_volume(p, 0.5, 999, 1), InvalidInput);
    SampledPotential empty;
    CHECK_THROWS_AS(estimate_sublevel_volume(empty, 0.5, 5000, 1), InvalidInput);
}

TEST_CASE("estimates are deterministic and independent of thread count")
{
    const auto p = spec_potential("mono:2,1");
    const double radii[] = {0.2, 0.05, 0.01, 0.002};
    const auto one = sublevel_counts(p, radii, 300000, 42, 1);
    CHECK(sublevel_counts(p, radii, 300000, 42, 1) == one);
    CHECK(sublevel_counts(p, radii, 300000, 42, 3) == one);
    CHECK(sublevel_counts(p, radii, 300000, 42, 8) == one);
    CHECK(sublevel_counts(p, radii, 300000, 43, 1) != one);
}

TEST_CASE("counts are monotone in r and match single-radius estimates")
{
    const auto p = spec_potential("mono:1,1");
    const double radii[] = {0.001, 0.3, 0.01, 0.1, 0.03};
    const auto counts = sublevel_counts(p, radii, 100000, 9);
    CHECK(counts[0] <= counts[2]);
    CHECK(counts[2] <= counts[4]);
    CHECK(counts[4] <= counts[3]);
    CHECK(counts[3] <= counts[1]);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(estimate_sublevel_volume(p, radii[i], 100000, 9).hits == counts[i]);
}

TEST_CASE("fit of log|z1| recovers c = 1")
{
    FitConfig cfg;
    cfg.samples = 1'000'000;
    const auto fit = fit_exponent(spec_potential("mono:1"), cfg);
    CHECK(fit.fitted_c >= 0.97);
    CHECK(fit.fitted_c <= 1.03);
    CHECK(fit.points.size() == 12);
    for (std::size_t i = 1; i < fit.points.size(); ++i) {
        CHECK(fit.points[i].r < fit.points[i - 1].r);
        CHECK(fit.points[i].volume <= fit.points[i - 1].volume);
    }
    CHECK(fit.points.front().r == doctest::Approx(0.1));
    CHECK(fit.points.back().r == doctest::Approx(0.001));
    CHECK(!fit.fitted_log_power);
}

TEST_CASE("fit of log|z1^2 z2| recovers c = 1/2")
{
    FitConfig cfg;
    const auto fit = fit_exponent(spec_potential("mono:2,1"), cfg);
    CHECK(fit.fitted_c >= 0.45);
    CHECK(fit.fitted_c <= 0.55);
    CHECK(fit.r_squared > 0.99);
}

TEST_CASE("log-corrected fit of log|z1 z2|")
{
    FitConfig cfg;
    cfg.with_log_correction = true;
    const auto fit = fit_exponent(spec_potential("mono:1,1"), cfg);
    CHECK(fit.fitted_c >= 0.93);
    CHECK(fit.fitted_c <= 1.05);
    REQUIRE(fit.fitted_log_power);
    CHECK(*fit.fitted_log_power >= 0.0);
    CHECK(*fit.fitted_log_power <= 1.0);

    // one variable: no room for a log factor
    const auto single = fit_exponent(spec_potential("mono:1"), cfg);
    REQUIRE(single.fitted_log_power);
    CHECK(*single.fitted_log_power == 0.0);
}

TEST_CASE("fit preconditions and insufficient data")
{
    FitConfig cfg;
    cfg.samples = 20000;
    CHECK_THROWS_AS(fit_exponent(zero_potential(), cfg), InsufficientData);

    auto bad = cfg;
    bad.grid_size = 3;
    CHECK_THROWS_AS(fit_exponent(spec_potential("mono:1"), bad), InvalidInput);
    bad = cfg;
    bad.r_min = 0.2;
    CHECK_THROWS_AS(fit_exponent(spec_potential("mono:1"), bad), InvalidInput);
    bad = cfg;
    bad.r_max = 1.0;
    CHECK_THROWS_AS(fit_exponent(spec_potential("mono:1"), bad), InvalidInput);

    // a very singular potential on few samples leaves most radii empty
    auto sparse = cfg;
    sparse.samples = 1000;
    sparse.r_min = 1e-9;
    sparse.r_max = 1e-7;
    CHECK_THROWS_AS(fit_exponent(spec_potential("mono:1"), sparse), InsufficientData);
}

TEST_CASE("zero-volume radii are reported but excluded")
{
    FitConfig cfg;
    cfg.samples = 20000;
    cfg.r_min = 1e-4;
    cfg.r_max = 0.5;
    cfg.grid_size = 10;
    const auto fit = fit_exponent(spec_potential("mono:1"), cfg);
    CHECK(fit.points.size() == 10);
    CHECK_FALSE(fit.points.back().used_in_fit);
    CHECK(fit.points.back().hits == 0);
    CHECK(fit.points.front().used_in_fit);
}

TEST_CASE("envelope around the exact exponent")
{
    FitConfig cfg;
    const auto fit = fit_exponent(spec_potential("mono:2,1"), cfg);
    const double c = 0.5;  // lct of z1^2 z2
    const auto env = envelope_check(fit, c - 0.2, c + 0.2);
    CHECK(env.upper_ratio_decays);
    CHECK(env.lower_ratio_grows);
    CHECK(env.lower_constant > 0.0);
    CHECK(std::isfinite(env.upper_constant));
    CHECK_THROWS_AS(envelope_check(fit, 0.6, 0.4), InvalidInput);
}

TEST_CASE("a bounded perturbation of the potential does not move the exponent")
{
    FitConfig cfg;
    cfg.samples = 400000;
    const auto base = spec_potential("mono:1,2");
    SampledPotential shifted = base;
    shifted.evaluator = [f = base.evaluator](std::span<const std::complex<double>> z) {
        return f(z) + 0.4 * std::cos(3.0 * z[0].real()) - 0.2 * std::norm(z[1]);
    };
    const auto a = fit_exponent(base, cfg);
    const auto b = fit_exponent(shifted, cfg);
    CHECK(std::abs(a.fitted_c - b.fitted_c) < 0.08);
}

TEST_CASE("semicontinuity experiment on a constant family is flat")
{
    FitConfig cfg;
    cfg.samples = 200000;
    const auto base = parse_spec("mono:1");
    const double ts[] = {0.0, 0.5, 1.0};
    const auto report = semicontinuity_experiment(
        [&](double t) { return perturbed_potential(*base, nullptr, t); }, ts, cfg);
    CHECK_FALSE(report.any_violation);
    for (const auto& p : report.points)
        CHECK(p.fitted_c == report.baseline_c);
}

TEST_CASE("semicontinuity experiment on z1^3 + t z2^3")
{
    FitConfig cfg;
    cfg.samples = 2'000'000;
    cfg.with_log_correction = true;
    const auto f = parse_spec("mono:3,0");
    const auto g = parse_spec("mono:0,3");
    const double ts[] = {0.0, 1.0};
    const auto report =
        semicontinuity_experiment([&](double t) { return perturbed_potential(*f, g.get(), t); }, ts, cfg);
    // exact endpoints 1/3 and min(1, 2/3)
    CHECK(report.points[0].fitted_c == doctest::Approx(1.0 / 3).epsilon(0.1));
    CHECK(report.points[1].fitted_c == doctest::Approx(2.0 / 3).epsilon(0.1));
    CHECK_FALSE(report.any_violation);
}

TEST_CASE("semicontinuity needs t = 0 and flags drops")
{
    FitConfig cfg;
    cfg.samples = 50000;
    const auto base = parse_spec("mono:1");
    const double no_zero[] = {0.5, 1.0};
    CHECK_THROWS_AS(semicontinuity_experiment([&](double t) { return perturbed_potential(*base, nullptr, t); },
                                              no_zero, cfg),
                    InvalidInput);

    // a family that gets *more* singular away from 0 must be flagged
    const auto mild = parse_spec("mono:1");
    const auto strong = parse_spec("mono:3");
    const double ts[] = {0.0, 1.0};
    const auto report = semicontinuity_experiment(
        [&](double t) { return potential_from_spec(t == 0.0 ? *mild : *strong); }, ts, cfg);
    CHECK(report.any_violation);
    CHECK(report.points[1].violation);
}

TEST_CASE("fit serializations")
{
    FitConfig cfg;
    cfg.samples = 20000;
    cfg.grid_size = 5;
    cfg.r_min = 0.01;
    const auto fit = fit_exponent(spec_potential("mono:1"), cfg);
    const auto csv = fit_to_csv(fit);
    CHECK(csv.rfind("r,volume,std_error,used_in_fit\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    const auto j = fit_to_json(fit);
    CHECK(j["points"].size() == 5);
    CHECK(nlohmann::ordered_json::parse(j.dump()).dump() == j.dump());
}
