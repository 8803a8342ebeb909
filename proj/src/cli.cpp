#include "lct/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lct/bergman_model.hpp"
#include "lct/errors.hpp"
#include "lct/fano_certifier.hpp"
#include "lct/lct_core.hpp"
#include "lct/volume_oracle.hpp"

namespace lct::cli {

namespace {

struct Common {
    std::string format = "json";
    std::string out_path;
    std::string config_path;
    std::uint64_t seed = volume::kDefaultSeed;
};

struct Options {
    Common common;

    // lct
    std::string spec;
    std::string resolution;

    // volume-fit / semicontinuity
    volume::FitConfig fit;
    std::string base;
    std::string perturbation;
    std::vector<double> t_values{0.0, 0.1, 1.0};
    double tolerance = 0.05;

    // bergman
    std::string c = "0";
    std::uint64_t m = 1;
    std::optional<std::uint64_t> k_max;
    std::optional<double> eval_at;

    // fano
    std::vector<fano::Weight> weights;
    fano::Weight degree = 0;
    fano::ScanConfig scan;
};

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool flag_present(const std::vector<std::string>& args, const std::string& flag)
{
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string dump(const nlohmann::ordered_json& j)
{
    return j.dump() + "\n";
}

void add_common(CLI::App* sub, Options& o, bool with_seed)
{
    sub->add_option("--format", o.common.format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", o.common.out_path, "Also write the result to this file");
    sub->add_option("--config", o.common.config_path, "key=value file mirroring the flags");
    if (with_seed)
        sub->add_option("--seed", o.common.seed, "RNG seed");
}

void add_fit_options(CLI::App* sub, Options& o)
{
    sub->add_option("--samples", o.fit.samples, "Monte-Carlo samples")->check(CLI::Range(1000ull, 1ull << 40));
    sub->add_option("--rmin", o.fit.r_min, "Smallest radius");
    sub->add_option("--rmax", o.fit.r_max, "Largest radius");
    sub->add_option("--grid", o.fit.grid_size, "Number of radii");
    sub->add_flag("--log-correction", o.fit.with_log_correction, "Fit a |log r|^q factor, 0 <= q <= n-1");
}

std::string run_lct(const Options& o)
{
    if (o.spec.empty() == o.resolution.empty())
        throw InvalidInput("give exactly one of --spec or --resolution");
    const ExtRational c = o.spec.empty() ? lct_from_resolution(load_resolution_json(o.resolution))
                                         : lct_monomial(*parse_spec(o.spec));
    const ExtRational lambda = arnold_multiplicity(c);
    if (o.common.format == "csv")
        return "c,lambda\n" + c.str() + "," + lambda.str() + "\n";
    if (o.common.format == "text")
        return "c = " + c.str() + "\nlambda = " + lambda.str() + "\n";
    nlohmann::ordered_json j;
    j["c"] = c.str();
    j["lambda"] = lambda.str();
    return dump(j);
}

volume::FitConfig fit_config(const Options& o)
{
    volume::FitConfig cfg = o.fit;
    cfg.seed = o.common.seed;
    return cfg;
}

std::string run_volume_fit(const Options& o)
{
    const SpecPtr spec = parse_spec(o.spec);
    const auto fit = volume::fit_exponent(volume::potential_from_spec(*spec), fit_config(o));
    if (o.common.format == "csv")
        return volume::fit_to_csv(fit);
    const ExtRational exact = lct_monomial(*spec);
    if (o.common.format == "text") {
        std::ostringstream out;
        out << "spec = " << spec->str() << "\nexact_c = " << exact.str() << "\nfitted_c = " << fit.fitted_c
            << "\nr_squared = " << fit.r_squared << '\n';
        if (fit.fitted_log_power)
            out << "log_power = " << *fit.fitted_log_power << '\n';
        return out.str();
    }
    nlohmann::ordered_json j;
    j["spec"] = spec->str();
    j["exact_c"] = exact.str();
    const auto fit_json = volume::fit_to_json(fit);
    for (const auto& [key, value] : fit_json.items())
        j[key] = value;
    return dump(j);
}

std::string run_semicontinuity(const Options& o)
{
    const SpecPtr base = parse_spec(o.base);
    const SpecPtr perturbation = o.perturbation.empty() ? nullptr : parse_spec(o.perturbation);
    const auto report = volume::semicontinuity_experiment(
        [&](double t) { return volume::perturbed_potential(*base, perturbation.get(), t); }, o.t_values,
        fit_config(o), o.tolerance);
    if (o.common.format == "csv") {
        std::ostringstream out;
        out.precision(17);
        out << "t,fitted_c,violation\n";
        for (const auto& p : report.points)
            out << p.t << ',' << p.fitted_c << ',' << (p.violation ? "true" : "false") << '\n';
        return out.str();
    }
    if (o.common.format == "text") {
        std::ostringstream out;
        for (const auto& p : report.points)
            out << "t = " << p.t << "  fitted_c = " << p.fitted_c << (p.violation ? "  VIOLATION" : "") << '\n';
        return out.str();
    }
    nlohmann::ordered_json j;
    j["base"] = base->str();
    j["perturbation"] = perturbation ? nlohmann::ordered_json(perturbation->str()) : nlohmann::ordered_json();
    const auto report_json = volume::semicontinuity_to_json(report);
    for (const auto& [key, value] : report_json.items())
        j[key] = value;
    return dump(j);
}

std::string run_bergman(const Options& o)
{
    const bergman::RadialWeight w{parse_rational(o.c)};
    const auto ap = o.k_max ? bergman::build_approx(w, o.m, *o.k_max) : bergman::build_approx(w, o.m);
    auto j = bergman::to_json(ap);
    if (o.eval_at) {
        const auto v = bergman::eval_psi_m(ap, *o.eval_at);
        nlohmann::ordered_json e;
        e["z_abs"] = *o.eval_at;
        e["psi_float"] = v.psi;
        e["truncation_bound_float"] = v.truncation_bound;
        e["lower_bound_ok"] = bergman::lower_bound_holds(ap, *o.eval_at);
        e["upper_bound_ok"] = bergman::upper_bound_holds(ap, *o.eval_at);
        j["eval"] = std::move(e);
    }
    if (o.common.format == "text") {
        std::ostringstream out;
        for (const auto& [key, value] : j.items())
            out << key << " = " << value.dump() << '\n';
        return out.str();
    }
    if (o.common.format == "csv")
        throw InvalidInput("bergman has no csv output");
    return dump(j);
}

fano::WeightSystem weight_system(const Options& o)
{
    if (o.weights.size() != 4)
        throw InvalidInput("--weights needs exactly four values");
    return fano::WeightSystem({o.weights[0], o.weights[1], o.weights[2], o.weights[3]}, o.degree);
}

std::string run_fano_certify(const Options& o)
{
    const auto cert = fano::certify(weight_system(o));
    if (o.common.format == "text") {
        std::ostringstream out;
        out << cert.weights.str() << '\n' << "verdict = " << fano::to_string(cert.verdict) << '\n';
        out << "fletcher = " << (cert.fletcher.passes() ? "pass" : "fail") << '\n';
        out << "monomials = " << cert.monomial_count << '\n';
        if (cert.rho)
            out << "rho = " << to_string(*cert.rho) << " ~ " << to_fixed(*cert.rho, 6) << '\n'
                << "rho_refined = " << to_string(*cert.rho_refined) << " ~ " << to_fixed(*cert.rho_refined, 6)
                << '\n';
        return out.str();
    }
    if (o.common.format == "csv")
        throw InvalidInput("fano certify has no csv output");
    return dump(fano::to_json(cert));
}

std::string run_fano_monomials(const Options& o)
{
    const auto w = weight_system(o);
    const auto monomials = fano::weighted_monomials(w);
    if (o.common.format == "text" || o.common.format == "csv") {
        std::string out = o.common.format == "csv" ? "e0,e1,e2,e3,monomial\n" : "";
        for (const auto& e : monomials) {
            if (o.common.format == "csv")
                out += std::to_string(e[0]) + "," + std::to_string(e[1]) + "," + std::to_string(e[2]) + "," +
                       std::to_string(e[3]) + ",";
            out += fano::monomial_str(e) + "\n";
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["weights"] = w.weights();
    j["degree"] = w.degree();
    j["count"] = monomials.size();
    auto& list = j["monomials"] = nlohmann::ordered_json::array();
    for (const auto& e : monomials)
        list.push_back(fano::monomial_str(e));
    return dump(j);
}

std::string run_fano_scan(const Options& o, bool format_given)
{
    const auto report = fano::scan(o.scan);
    const bool csv = o.common.format == "csv" ||
                     (!format_given && o.common.out_path.size() > 4 &&
                      o.common.out_path.compare(o.common.out_path.size() - 4, 4, ".csv") == 0);
    if (csv)
        return fano::to_csv(report);
    if (o.common.format == "text") {
        std::ostringstream out;
        out << "examined " << report.systems_examined << " weight systems, " << report.entries.size()
            << " pass the orbifold conditions\n";
        for (const auto& c : report.entries)
            out << c.weights.str() << "  rho ~ " << to_fixed(*c.rho, 6) << "  " << fano::to_string(c.verdict)
                << '\n';
        return out.str();
    }
    return dump(fano::to_json(report));
}

void add_weight_options(CLI::App* sub, Options& o)
{
    sub->add_option("--weights", o.weights, "a0,a1,a2,a3")->delimiter(',')->required();
    sub->add_option("--degree", o.degree, "Degree d")->required();
}

void add_scan_options(CLI::App* sub, Options& o)
{
    sub->add_option("--max-weight", o.scan.max_a3, "Largest a3");
    sub->add_option("--index", o.scan.fano_index, "Fano index k - d");
    sub->add_option("--min-a0", o.scan.min_a0, "Smallest a0");
    sub->add_flag("--refined", o.scan.require_refined, "Apply the refined twist criterion");
}

}  // namespace

std::vector<std::string> expand_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty())
        return args;

    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open config file '" + path + "'");
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line '" + line + "' is not key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0)
            key = key.substr(2);
        const std::string flag = "--" + key;
        if (key == "config" || flag_present(args, flag))
            continue;
        if (value == "true" || value == "yes" || value == "on") {
            extra.push_back(flag);
        } else if (value == "false" || value == "no" || value == "off") {
            continue;
        } else {
            extra.push_back(flag);
            extra.push_back(value);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Singularity exponents, Monte-Carlo exponent fits, and Kahler-Einstein certificates", "lctool"};
    app.require_subcommand(1);

    std::function<std::string()> action;
    bool format_given = false;

    auto* lct = app.add_subcommand("lct", "Exact exponent and Arnold multiplicity");
    lct->add_option("--spec", o.spec, "mono:/diag:/dsum(;)/ssum(;) expression");
    lct->add_option("--resolution", o.resolution, "JSON file with log-resolution divisors");
    add_common(lct, o, false);
    lct->callback([&] { action = [&] { return run_lct(o); }; });

    auto* vfit = app.add_subcommand("volume-fit", "Monte-Carlo sublevel volumes and exponent fit");
    vfit->add_option("--spec", o.spec, "Potential as a spec expression")->required();
    add_fit_options(vfit, o);
    add_common(vfit, o, true);
    vfit->callback([&] { action = [&] { return run_volume_fit(o); }; });

    auto* semi = app.add_subcommand("semicontinuity", "Fitted exponents along log|f + t g|");
    semi->add_option("--base", o.base, "Principal spec f")->required();
    semi->add_option("--perturbation", o.perturbation, "Principal spec g (omit for a constant family)");
    semi->add_option("--t", o.t_values, "Parameter values, must include 0")->delimiter(',');
    semi->add_option("--tolerance", o.tolerance, "Allowed drop below fitted_c(0)");
    add_fit_options(semi, o);
    add_common(semi, o, true);
    semi->callback([&] { action = [&] { return run_semicontinuity(o); }; });

    auto* berg = app.add_subcommand("bergman", "Radial Bergman approximation on the unit disk");
    berg->add_option("--c", o.c, "Lelong coefficient (rational)")->required();
    berg->add_option("--m", o.m, "Approximation order")->required();
    berg->add_option("--kmax", o.k_max, "Series cutoff");
    berg->add_option("--eval", o.eval_at, "Evaluate psi_m at this |z|");
    add_common(berg, o, false);
    berg->callback([&] { action = [&] { return run_bergman(o); }; });

    auto register_certify = [&](CLI::App* sub) {
        add_weight_options(sub, o);
        add_common(sub, o, false);
        sub->callback([&] { action = [&] { return run_fano_certify(o); }; });
    };
    auto register_monomials = [&](CLI::App* sub) {
        add_weight_options(sub, o);
        add_common(sub, o, false);
        sub->callback([&] { action = [&] { return run_fano_monomials(o); }; });
    };
    auto register_scan = [&](CLI::App* sub) {
        add_scan_options(sub, o);
        add_common(sub, o, false);
        sub->callback([&, sub] {
            format_given = sub->count("--format") > 0;
            action = [&] { return run_fano_scan(o, format_given); };
        });
    };

    auto* fano_cmd = app.add_subcommand("fano", "Weighted Del Pezzo surfaces");
    fano_cmd->require_subcommand(1);
    register_certify(fano_cmd->add_subcommand("certify", "Certify one weight system"));
    register_monomials(fano_cmd->add_subcommand("monomials", "List degree-d monomials"));
    register_scan(fano_cmd->add_subcommand("scan", "Scan a box of weight systems"));
    register_certify(app.add_subcommand("fano-certify", "Same as 'fano certify'"));
    register_monomials(app.add_subcommand("fano-monomials", "Same as 'fano monomials'"));
    register_scan(app.add_subcommand("fano-scan", "Same as 'fano scan'"));

    try {
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInvalidInput;
    } catch (const InvalidInput& e) {
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }

    try {
        if (!action)
            throw InvalidInput("no command given");
        const std::string result = action();
        out << result;
        if (!o.common.out_path.empty()) {
            std::ofstream file(o.common.out_path);
            if (!file)
                throw InvalidInput("cannot write '" + o.common.out_path + "'");
            file << result;
        }
        return kOk;
    } catch (const InsufficientData& e) {
        err << "insufficient data: " << e.what() << '\n';
        return kInsufficientData;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalidInput;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

}  // namespace lct::cli
