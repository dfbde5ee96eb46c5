// hyperradon: parameter tables, transform grids and verification suites.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hyperradon.hpp"

namespace hr = hyperradon;

namespace {

// Short spellings for the most used keys.
const std::map<std::string, std::string> aliases = {
    {"space.field", "--field"},          {"space.p", "--p"},
    {"space.q", "--q"},                  {"space.variant", "--variant"},
    {"probe.name", "--probe"},           {"probe.beta", "--beta"},
    {"probe.radius", "--radius"},        {"grid.s_min", "--s-min"},
    {"grid.s_max", "--s-max"},           {"grid.h", "--step"},
    {"grid.method", "--method"},         {"grid.operator", "--operator"},
    {"quadrature.threads", "--threads"}, {"quadrature.target_rel_tol", "--tol"},
    {"output.csv", "--out"},             {"output.json", "--json"},
    {"output.dir", "--dir"},             {"sweep.spaces", "--spaces"},
    {"sweep.suites", "--suites"},
};

struct Flags {
    std::string config_file;
    std::vector<std::string> sets;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    bool gnuplot = false;
};

void add_config_options(CLI::App& app, Flags& flags)
{
    app.add_option("-c,--config", flags.config_file, "INI file with [section] key = value lines")
        ->check(CLI::ExistingFile);
    app.add_option("--set", flags.sets, "override any key: section.key=value (repeatable)");
    app.add_flag("--gnuplot", flags.gnuplot, "prefix the CSV header with '#'");
    for (const auto& [key, def] : hr::config_defaults()) {
        std::string names = "--" + key;
        if (auto it = aliases.find(key); it != aliases.end()) {
            names += "," + it->second;
        }
        flags.options[key] = app.add_option(names, flags.values[key], "default: " + (def.empty() ? "''" : def));
    }
}

/// defaults < config file < flags.
hr::RunConfig resolve_flags(const Flags& flags)
{
    hr::ConfigMap m;
    if (!flags.config_file.empty()) {
        std::ifstream in(flags.config_file);
        hr::require(static_cast<bool>(in), hr::errc::invalid_argument, "cannot read " + flags.config_file);
        m.merge_ini(in, flags.config_file);
    }
    for (const std::string& s : flags.sets) {
        const auto eq = s.find('=');
        hr::require(eq != std::string::npos, hr::errc::invalid_argument, "--set expects section.key=value");
        m.set(hr::trim(s.substr(0, eq)), hr::trim(s.substr(eq + 1)));
    }
    for (const auto& [key, opt] : flags.options) {
        if (opt->count() > 0) {
            m.set(key, flags.values.at(key));
        }
    }
    if (flags.gnuplot) {
        m.set("output.gnuplot", "true");
    }
    return hr::resolve(m);
}

std::string poly_text(const std::vector<double>& c)
{
    std::string out;
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k) {
        if (c[k] == 0.0) {
            continue;
        }
        const double a = std::abs(c[k]);
        if (out.empty()) {
            out += c[k] < 0 ? "-" : "";
        } else {
            out += c[k] < 0 ? " - " : " + ";
        }
        if (a != 1.0 || k == 0) {
            out += hr::shortest(a);
        }
        if (k >= 1) {
            out += "xi";
        }
        if (k >= 2) {
            out += "^" + std::to_string(k);
        }
    }
    return out.empty() ? "0" : out;
}

std::string list_text(const std::vector<double>& v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + hr::shortest(v[i]);
    }
    return out + "}";
}

int cmd_params(const hr::RunConfig& c, double lambda_max)
{
    const hr::SpaceParams& sp = c.space;
    auto row = [](const std::string& k, const std::string& v) { std::printf("%-14s %s\n", k.c_str(), v.c_str()); };
    row("space", sp.label());
    row("d", std::to_string(sp.d()));
    row("rho_q", hr::to_string(hr::rho_q_half(sp)));
    row("rho_1", hr::to_string(hr::rho_1_half(sp)));
    if (sp.p >= sp.q) {
        std::printf("no expansion regime (p >= q); support theorem applies\n");
        return 0;
    }
    const hr::K0Eps ke = hr::k0_eps(sp);
    row("k0", std::to_string(ke.k0));
    row("eps", hr::to_string(ke.eps));
    row("noncuspidal", list_text(hr::noncuspidal(sp)));
    if (sp.codim() > 1) {
        row("L(xi)", poly_text(hr::build_D(sp).image_poly));
    } else {
        row("L(xi)", "none: d(q-p) = 1, Af is already rapidly decreasing");
    }
    std::printf("discrete series, lambda <= %s:\n", hr::shortest(lambda_max).c_str());
    for (const hr::SeriesParam& s : hr::discrete_series(sp, lambda_max)) {
        std::printf("  lambda = %-6s mu = %-5s %-13s %s\n", hr::to_string(s.lambda).c_str(),
                    hr::to_string(s.mu).c_str(), s.spherical ? "spherical" : "non-spherical",
                    s.cuspidal ? "cuspidal" : "non-cuspidal");
    }
    return 0;
}

int cmd_transform(const hr::RunConfig& c)
{
    const hr::TestFunction f = hr::make_probe(c.space, c.probe);
    // [direct] only governs the cross-check form on p < q spaces.
    const hr::QuadratureSpec& spec = c.method == hr::RadonMethod::direct && c.space.p < c.space.q ? c.direct : c.quad;
    const hr::TransformGrid g = hr::compute_grid(f, c.space, c.grid, spec, c.operator_d(), c.method, c.noise_limit);
    const std::string csv = hr::grid_csv(g, c.output.gnuplot);
    if (c.output.csv == "-") {
        std::fputs(csv.c_str(), stdout);
    } else {
        hr::write_atomic(c.output.csv, csv);
        std::fprintf(stderr, "wrote %zu rows to %s\n", g.size(), c.output.csv.c_str());
    }
    return 0;
}

void print_checks(const hr::VerificationReport& r)
{
    std::fprintf(stderr, "%s on %s, probe %s\n", r.suite.c_str(), r.space.label().c_str(), r.probe.c_str());
    for (const hr::Check& k : r.checks) {
        std::fprintf(stderr, "  %s  %s: measured %.6g, threshold %.6g, noise floor %.3g\n", k.pass ? "PASS" : "FAIL",
                     k.name.c_str(), k.measured, k.threshold, k.noise_floor);
    }
}

int cmd_verify(const hr::RunConfig& c, const std::string& suite)
{
    const hr::VerificationReport r = hr::run_suite(suite, c);
    print_checks(r);
    const std::string text = hr::report_json(r, c.source).dump(2) + "\n";
    if (c.output.json.empty() || c.output.json == "-") {
        std::fputs(text.c_str(), stdout);
    } else {
        hr::write_atomic(c.output.json, text);
    }
    return r.passed() ? 0 : 1;
}

std::string space_file_tag(const hr::SpaceParams& sp)
{
    std::string s = hr::to_string(sp.field) + "_" + std::to_string(sp.p) + "_" + std::to_string(sp.q);
    if (sp.variant == hr::Variant::real_nonprojective) {
        s += "_nonprojective";
    }
    return s;
}

int cmd_sweep(const hr::RunConfig& c)
{
    std::vector<hr::SpaceParams> spaces;
    for (const hr::SpaceParams& sp : c.sweep_spaces) {
        if (std::find(spaces.begin(), spaces.end(), sp) != spaces.end()) {
            std::fprintf(stderr, "warning: duplicate space %s ignored\n", sp.label().c_str());
            continue;
        }
        spaces.push_back(sp);
    }
    const std::filesystem::path dir = c.output.dir;
    std::string summary = "space,suite,pass,checks,failed,error\n";
    bool all_ok = true;
    for (const hr::SpaceParams& sp : spaces) {
        std::vector<std::string> suites;
        if (c.sweep_suites == "auto") {
            suites.push_back(hr::auto_suite(sp));
        } else {
            suites = hr::split(c.sweep_suites, ',');
        }
        for (const std::string& suite : suites) {
            hr::ConfigMap m = c.source;
            m.set("space.field", hr::to_string(sp.field));
            m.set("space.p", std::to_string(sp.p));
            m.set("space.q", std::to_string(sp.q));
            m.set("space.variant", sp.variant == hr::Variant::projective ? "projective" : "nonprojective");
            m.set("verify.suite", suite);
            const std::string label = "\"" + sp.label() + "\"";
            std::string row;
            try {
                const hr::RunConfig rc = hr::resolve(m);
                const hr::VerificationReport r = hr::run_suite(suite, rc);
                print_checks(r);
                hr::write_atomic(dir / (space_file_tag(sp) + "_" + suite + ".json"),
                                 hr::report_json(r, m).dump(2) + "\n");
                int failed = 0;
                for (const hr::Check& k : r.checks) {
                    failed += k.pass ? 0 : 1;
                }
                all_ok = all_ok && r.passed();
                row = label + "," + suite + "," + (r.passed() ? "true" : "false") + "," +
                      std::to_string(r.checks.size()) + "," + std::to_string(failed) + ",";
            } catch (const hr::Error& e) {
                std::fprintf(stderr, "%s %s: %s\n", sp.label().c_str(), suite.c_str(), e.what());
                all_ok = false;
                std::string msg = e.what();
                std::replace(msg.begin(), msg.end(), '"', '\'');
                row = label + "," + suite + ",false,0,0,\"" + msg + "\"";
            }
            summary += row + "\n";
        }
    }
    hr::write_atomic(dir / "summary.csv", summary);
    std::fprintf(stderr, "wrote %s\n", (dir / "summary.csv").string().c_str());
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Radon and Abel transforms on hyperbolic spaces X(p+1,q+1;F)"};
    app.set_version_flag("--version", std::string(hr::version));
    app.require_subcommand(1);
    app.fallthrough();
    Flags flags;
    add_config_options(app, flags);

    double lambda_max = 20.0;
    CLI::App* params = app.add_subcommand("params", "print rho-factors, k0, eps, the non-cuspidal set and L");
    params->add_option("--lambda-max", lambda_max, "enumeration cutoff for the discrete series")
        ->check(CLI::PositiveNumber);
    CLI::App* transform = app.add_subcommand("transform", "write the s,Rf,Af,ADf,err grid as CSV");
    std::string suite;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite and emit a JSON report");
    verify->add_option("suite", suite, "consistency|lemmaG|support|exchange|parity|schwartz|theorem-vi")
        ->check(CLI::IsMember(hr::suite_names()));
    CLI::App* sweep = app.add_subcommand("sweep", "run suites over a list of spaces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        hr::RunConfig c = resolve_flags(flags);
        if (params->parsed()) {
            return cmd_params(c, lambda_max);
        }
        if (transform->parsed()) {
            return cmd_transform(c);
        }
        if (verify->parsed()) {
            return cmd_verify(c, suite.empty() ? c.verify.suite : suite);
        }
        if (sweep->parsed()) {
            return cmd_sweep(c);
        }
    } catch (const hr::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return e.code() == hr::errc::invalid_argument || e.code() == hr::errc::incompatible ? 2 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
