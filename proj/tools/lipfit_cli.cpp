#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lipfit/fit.hpp"
#include "lipfit/io.hpp"
#include "lipfit/lbbd.hpp"
#include "lipfit/metrics.hpp"
#include "lipfit/pem.hpp"
#include "lipfit/simgen.hpp"
#include "lipfit/study.hpp"

using nlohmann::ordered_json;
using namespace lipfit;

namespace {

constexpr int kFormatVersion = 1;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string input, curve, out = "lipfit";
    std::string method = "lipfit";
    double m = -1.0;
    double sigma = 0.0;
    bool periodic = false;
    bool periodic_also = false;
    std::optional<double> a, b;
    std::size_t grid_n = 0;  // 0 selects the subcommand default
    std::uint64_t seed = 1;
    std::string m_grid;
    std::string engine = "fast";
    std::string error = "DSPWE";
    std::size_t replicates = 300;
    int k = 5;
    double min_spacing_factor = -1.0;
    std::string scheme = "2,2,2,2";
    std::string target = "deviated";
    std::vector<std::string> external;
    std::optional<double> dump_lp;
};

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw input_error("cannot write '" + path + "'");
    return os;
}

std::ifstream open_in(const std::string& path, const char* what) {
    if (path.empty()) throw usage_error(std::string("missing --") + what);
    std::ifstream is(path);
    if (!is) throw input_error("cannot read '" + path + "'");
    return is;
}

std::optional<Interval1D> domain_of(const RunConfig& c) {
    if (c.a.has_value() != c.b.has_value()) throw usage_error("--a and --b go together");
    if (!c.a) return std::nullopt;
    return Interval1D(*c.a, *c.b);
}

SampleSet load_samples(const RunConfig& c) {
    auto is = open_in(c.input, "input");
    return to_sample_set(read_sample_table(is), domain_of(c));
}

void write_json(const ordered_json& j, const std::string& path) {
    auto os = open_out(path);
    os << j.dump(2) << '\n';
}

std::vector<std::size_t> parse_counts(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(cell, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || pos != cell.size()) throw usage_error("--scheme: bad count '" + cell + "'");
        out.push_back(v);
    }
    if (out.empty()) throw usage_error("--scheme needs at least one count");
    return out;
}

std::vector<ErrorKind> parse_kinds(const std::string& spec) {
    std::vector<ErrorKind> out;
    std::stringstream ss(spec);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(error_kind_from_string(cell));
    if (out.empty()) throw usage_error("--error needs at least one kind");
    return out;
}

ordered_json pair_json(const LBBDPair& p) { return {{"m", p.m}, {"sigma", p.sigma}}; }

ordered_json block_json(const ErrorBlock& b) {
    return {{"IE", b.ie},
            {"DIE", b.die},
            {"SPWE", b.spwe},
            {"DSPWE_LI", b.dspwe_li},
            {"DSPWE_Lipfit", b.dspwe_lipfit},
            {"pair", pair_json(b.pair)},
            {"text", "(" + fmt_double(b.ie) + ", " + fmt_double(b.die) + "); (" + fmt_double(b.spwe) +
                         ", " + fmt_double(b.dspwe_li) + ", " + fmt_double(b.dspwe_lipfit) + ")"}};
}

int cmd_fit(const RunConfig& c) {
    if (c.m < 0.0) throw usage_error("fit needs --m >= 0");
    const std::size_t grid_n = c.grid_n ? c.grid_n : 1001;
    if (grid_n < 2) throw usage_error("--grid-n must be at least 2");
    SampleSet s = load_samples(c);
    MethodId method = method_from_string(c.method);
    const bool periodic = c.periodic || is_periodic_method(method);
    FitCurve fit = fit_method(s, method, c.m, periodic);
    LBBDPair pair(c.m, c.sigma);
    if (!pair_feasible(s, pair, periodic))
        throw infeasible_error("samples are inconsistent with (m, sigma) = (" + fmt_double(c.m) + ", " +
                               fmt_double(c.sigma) + ")");
    const Interval1D dom = s.interval();
    std::vector<double> grid = uniform_grid(dom.a, dom.b, grid_n);
    std::vector<double> values = eval_fit(fit, grid);
    PefProfile prof = pef_profile(s, pair, fit, periodic, grid);
    {
        auto os = open_out(c.out + ".csv");
        os << "x,fit,pef_lower,pef_upper\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            os << fmt_double(grid[i]) << ',' << fmt_double(values[i]) << ','
               << fmt_double(values[i] - prof.pef[i]) << ',' << fmt_double(values[i] + prof.pef[i]) << '\n';
    }
    ErrorReport r = error_report(s, pair, fit, periodic, std::max<std::size_t>(grid_n, kDefaultGridN));
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "fit";
    j["method"] = to_string(fit.method());
    j["periodic"] = periodic;
    j["pair"] = pair_json(pair);
    j["domain"] = {dom.a, dom.b};
    j["n_samples"] = s.size();
    j["grid_n"] = grid_n;
    j["feasible"] = r.feasible;
    j["errors"] = {{"DSPWE", r.dspwe}, {"DIE", r.die}, {"SPWE", r.spwe}, {"IE", r.ie}};
    write_json(j, c.out + ".json");
    return 0;
}

int cmd_lbbd(const RunConfig& c) {
    SampleSet s = load_samples(c);
    Engine engine = engine_from_string(c.engine);
    if (engine == Engine::fast && s.dim() != 1) throw usage_error("--engine fast needs 1-d input");
    if (c.periodic && s.dim() != 1) throw usage_error("--periodic needs 1-d input");
    std::vector<double> grid = c.m_grid.empty() ? default_m_grid(s) : parse_m_grid(c.m_grid);
    if (c.dump_lp) {
        LinearProgram lp = engine == Engine::fast ? gamma_fast_lp(s, *c.dump_lp, c.periodic)
                                                  : gamma_general_lp(s, *c.dump_lp, c.periodic);
        auto os = open_out(c.out + ".lp");
        write_lp_text(lp, os);
    }
    LBBDCurve curve = lbbd_curve(s, grid, c.periodic, engine);
    CurveReport rep = check_curve_properties(curve, s);
    {
        auto os = open_out(c.out + ".csv");
        write_curve_csv(curve, s.size(), os);
    }
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "lbbd";
    j["engine"] = to_string(curve.source);
    j["periodic"] = c.periodic;
    j["n_samples"] = s.size();
    j["dim"] = s.dim();
    j["m_grid_spec"] = c.m_grid.empty() ? "default" : c.m_grid;
    j["lip"] = lip_of_samples(s).value;
    j["diam"] = diam_of(s.ys());
    ordered_json pts = ordered_json::array();
    for (std::size_t i = 0; i < curve.m_grid.size(); ++i)
        pts.push_back({{"m", curve.m_grid[i]}, {"gamma", curve.gamma[i]}});
    j["curve"] = pts;
    j["properties"] = {{"monotone", rep.monotone},
                       {"convex", rep.convex},
                       {"endpoints", rep.endpoints},
                       {"violations", rep.violations}};
    write_json(j, c.out + ".json");
    return 0;
}

int cmd_pem(const RunConfig& c) {
    SampleSet s = load_samples(c);
    if (s.dim() != 1) throw usage_error("pem needs 1-d input");
    LBBDCurve curve;
    {
        auto is = open_in(c.curve, "curve");
        curve = read_curve_csv(is);
    }
    const std::size_t grid_n = c.grid_n ? c.grid_n : kDefaultGridN;
    MethodId method = method_from_string(c.method);
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "pem";
    j["method"] = to_string(method);
    j["periodic"] = c.periodic;
    j["n_samples"] = s.size();
    j["grid_n"] = grid_n;
    ordered_json sel = ordered_json::array();
    for (ErrorKind k : parse_kinds(c.error)) {
        PemResult r = pem_select(s, curve, k, method, c.periodic, grid_n);
        ordered_json audit = ordered_json::array();
        for (const auto& a : r.per_m)
            audit.push_back({{"m", a.m},
                             {"gamma", a.gamma},
                             {"feasible", a.feasible},
                             {"error", a.feasible ? ordered_json(a.error) : ordered_json(nullptr)}});
        sel.push_back({{"error_kind", to_string(k)},
                       {"chosen", pair_json(r.chosen)},
                       {"upsilon", r.upsilon},
                       {"per_m", audit}});
    }
    j["selections"] = sel;
    ordered_json blocks;
    if (c.periodic_also || !c.periodic) blocks["ALB"] = block_json(error_block(s, curve, false, grid_n));
    if (c.periodic_also || c.periodic) blocks["PALB"] = block_json(error_block(s, curve, true, grid_n));
    j["blocks"] = blocks;
    write_json(j, c.out + ".json");
    return 0;
}

GeneratorConfig generator_of(const RunConfig& c) {
    GeneratorConfig g;
    if (auto d = domain_of(c)) g.interval = *d;
    if (c.k < 0) throw usage_error("--k must be >= 0");
    g.k = c.k;
    g.m = c.m < 0.0 ? 10.0 : c.m;
    g.sigma = c.sigma;
    g.min_spacing_factor = c.min_spacing_factor;
    g.periodic = c.periodic;
    g.seed = c.seed;
    return g;
}

int cmd_simulate(const RunConfig& c) {
    GeneratorConfig g = generator_of(c);
    const std::size_t grid_n = c.grid_n ? c.grid_n : 1001;
    PiecewiseLinearFn f = g.periodic ? gen_ppl(g) : gen_pl(g);
    auto counts = parse_counts(c.scheme);
    auto xs = stratified_sample(make_scheme(g.interval, counts, derive_seed(c.seed, 1)));
    SampleSet s = add_deviation(f, g.sigma, xs, derive_seed(c.seed, 2));
    std::vector<double> grid = uniform_grid(g.interval.a, g.interval.b, grid_n);
    std::vector<double> truth(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) truth[i] = eval_pl(f, grid[i]);
    {
        auto os = open_out(c.out + "_truth.csv");
        write_xy_csv(grid, truth, os);
    }
    {
        auto os = open_out(c.out + "_samples.csv");
        write_samples_csv(s, os);
    }
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "simulate";
    j["interval"] = {g.interval.a, g.interval.b};
    j["k"] = g.k;
    j["m"] = g.m;
    j["sigma"] = g.sigma;
    j["min_spacing_factor"] = g.spacing_factor();
    j["periodic"] = g.periodic;
    j["seed"] = c.seed;
    j["scheme"] = counts;
    j["grid_n"] = grid_n;
    j["knots"] = f.knots();
    j["values"] = f.values();
    write_json(j, c.out + "_config.json");
    return 0;
}

int cmd_compare(const RunConfig& c) {
    CompareConfig cc;
    cc.gen = generator_of(c);
    cc.counts = parse_counts(c.scheme);
    cc.replicates = c.replicates;
    if (c.grid_n) cc.grid_n = c.grid_n;
    if (c.target != "deviated" && c.target != "plain")
        throw usage_error("--target must be 'deviated' or 'plain'");
    cc.deviate_target = c.target == "deviated";
    for (const auto& spec : c.external) {
        auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw usage_error("--external expects name=path");
        auto is = open_in(spec.substr(eq + 1), "external");
        cc.external[spec.substr(0, eq)] = read_external_fits(is, cc.gen.interval);
    }
    CompareResult r = run_compare(cc);
    {
        auto os = open_out(c.out + ".csv");
        os << "method,q25,q50,q75\n";
        for (const auto& m : r.methods)
            os << m.name << ',' << fmt_double(m.q25) << ',' << fmt_double(m.q50) << ','
               << fmt_double(m.q75) << '\n';
    }
    ordered_json j;
    j["format_version"] = kFormatVersion;
    j["command"] = "compare";
    j["loss"] = "MPWL";
    j["replicates"] = cc.replicates;
    j["seed"] = c.seed;
    j["k"] = cc.gen.k;
    j["m"] = cc.gen.m;
    j["sigma"] = cc.gen.sigma;
    j["periodic"] = cc.gen.periodic;
    j["scheme"] = cc.counts;
    j["target"] = c.target;
    j["grid_n"] = cc.grid_n;
    ordered_json ms = ordered_json::array();
    for (const auto& m : r.methods)
        ms.push_back({{"method", m.name}, {"q25", m.q25}, {"q50", m.q50}, {"q75", m.q75}});
    j["methods"] = ms;
    write_json(j, c.out + ".json");
    return 0;
}

// Turns --config JSON entries into arguments. A flag given explicitly on the
// command line wins and the skipped config entry is reported.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream is(path);
    if (!is) throw input_error("cannot read config '" + path + "'");
    ordered_json cfg;
    try {
        cfg = ordered_json::parse(is);
    } catch (const ordered_json::parse_error& e) {
        throw input_error("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw input_error("config must be a JSON object");
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    auto scalar = [](const ordered_json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<long long>());
        if (v.is_number()) return fmt_double(v.get<double>());
        throw input_error("config values must be strings, numbers, booleans or arrays");
    };
    std::vector<std::string> extra;
    for (const auto& [key, v] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (flag == "--config") continue;
        if (given(flag)) {
            std::cerr << "note: " << flag << " on the command line overrides the config value\n";
            continue;
        }
        if (v.is_boolean()) {
            if (v.get<bool>()) extra.push_back(flag);
        } else if (v.is_array() && flag == "--external") {
            for (const auto& e : v) extra.insert(extra.end(), {flag, scalar(e)});
        } else if (v.is_array()) {
            std::string joined;
            for (const auto& e : v) joined += (joined.empty() ? "" : ",") + scalar(e);
            extra.insert(extra.end(), {flag, joined});
        } else {
            extra.insert(extra.end(), {flag, scalar(v)});
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

int run(int argc, char** argv) {
    CLI::App app{"Lipschitz-bound fitting, LB-BD curves and parameter selection"};
    app.require_subcommand(1);
    RunConfig c;
    std::string config;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "JSON file of flag values");
        sub->add_option("--out", c.out, "output path prefix");
        sub->add_option("--a", c.a, "domain start");
        sub->add_option("--b", c.b, "domain end");
        sub->add_flag("--periodic", c.periodic, "assume f(a) = f(b)");
        sub->add_option("--grid-n", c.grid_n, "evaluation grid size");
    };
    auto* fit = app.add_subcommand("fit", "fit samples and write the pef band");
    common(fit);
    fit->add_option("--input", c.input, "sample CSV")->required();
    fit->add_option("--method", c.method, "avg|nn|pnn|li|pli|lipfit|plipfit");
    fit->add_option("--m", c.m, "Lipschitz bound")->required();
    fit->add_option("--sigma", c.sigma, "bound deviation");

    auto* lbbd = app.add_subcommand("lbbd", "compute the LB-BD curve");
    common(lbbd);
    lbbd->add_option("--input", c.input, "sample CSV")->required();
    lbbd->add_option("--m-grid", c.m_grid, "list, lin:lo:hi:n or geom:lo:hi:n");
    lbbd->add_option("--engine", c.engine, "general|fast");
    lbbd->add_option("--dump-lp", c.dump_lp, "write the LP for this m to <out>.lp");

    auto* pem = app.add_subcommand("pem", "choose (m, gamma(m)) by prediction error");
    common(pem);
    pem->add_option("--input", c.input, "sample CSV")->required();
    pem->add_option("--curve", c.curve, "curve CSV from lbbd")->required();
    pem->add_option("--error", c.error, "comma list of DSPWE,DIE,SPWE,IE");
    pem->add_option("--method", c.method, "nn|li|lipfit");
    pem->add_flag("--periodic-also", c.periodic_also, "report both ALB and PALB blocks");

    auto* sim = app.add_subcommand("simulate", "generate a function and samples");
    common(sim);
    auto* cmp = app.add_subcommand("compare", "replicated MPWL comparison of methods");
    common(cmp);
    for (auto* sub : {sim, cmp}) {
        sub->add_option("--k", c.k, "break points");
        sub->add_option("--m", c.m, "Lipschitz bound of the generator (default 10)");
        sub->add_option("--sigma", c.sigma, "bound deviation of the noise");
        sub->add_option("--seed", c.seed, "base seed");
        sub->add_option("--scheme", c.scheme, "samples per equal-width stratum, e.g. 2,2,2,2");
        sub->add_option("--min-spacing-factor", c.min_spacing_factor, "break-point spacing factor");
    }
    cmp->add_option("--replicates", c.replicates, "replicate count");
    cmp->add_option("--target", c.target, "deviated|plain");
    cmp->add_option("--external", c.external, "name=path of a replicate,x,fit CSV");

    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    if (fit->parsed()) return cmd_fit(c);
    if (lbbd->parsed()) return cmd_lbbd(c);
    if (pem->parsed()) return cmd_pem(c);
    if (sim->parsed()) return cmd_simulate(c);
    return cmd_compare(c);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const usage_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const infeasible_error& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 2;
    } catch (const parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "degenerate input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
