#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mairy/errors.hpp"
#include "mairy/hciz.hpp"
#include "mairy/matrix_airy.hpp"
#include "mairy/verification.hpp"

namespace {

using mairy::cplx;
using nlohmann::ordered_json;

// quantize to 15 significant digits so emitted numbers match the documented
// formatting exactly
double q15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return std::strtod(buf, nullptr);
}

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

// "a:b:n" -> n equally spaced points; plain scalar -> one point
std::vector<double> parse_axis_spec(const std::string& spec) {
    auto num = [&](const std::string& s) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            throw mairy::DomainError("bad axis value '" + s + "' in: " + spec);
        }
        if (pos != s.size()) throw mairy::DomainError("bad axis value '" + s + "' in: " + spec);
        return v;
    };
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) return {num(spec)};
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw mairy::DomainError("axis spec must be start:stop:count, got " + spec);
    const double a = num(spec.substr(0, c1));
    const double b = num(spec.substr(c1 + 1, c2 - c1 - 1));
    long n = 0;
    try {
        n = std::stol(spec.substr(c2 + 1));
    } catch (const std::exception&) {
        throw mairy::DomainError("bad axis count in: " + spec);
    }
    if (n < 1) throw mairy::DomainError("axis count must be >= 1");
    if (b < a) throw mairy::DomainError("axis stop must be >= start");
    std::vector<double> out;
    for (long i = 0; i < n; ++i)
        out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1));
    return out;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw mairy::DomainError("cannot open output file: " + out_path);
    os << text;
}

ordered_json cplx_json(cplx v) {
    return ordered_json{{"re", q15(v.real())}, {"im", q15(v.imag())}};
}

struct Options {
    std::string rep_tag;
    std::string xi_spec = "0";
    std::string r_spec;
    std::string spectrum_csv;
    std::string grid_spec;
    std::string out_path;
    std::string format = "json";
    std::string config_path;
    std::string calibration_path = "calibration.json";
    std::string suite = "all";
    unsigned long seed = 1234;
};

mairy::QuadratureConfig load_config(const Options& opt) {
    mairy::QuadratureConfig cfg;
    if (!opt.config_path.empty()) cfg = mairy::parse_config_file(opt.config_path, cfg);
    cfg.validate();
    return cfg;
}

// kappa for (rep, N): from the table file when present, computed at the
// standard fit point otherwise. direct and det_oracle are their own
// references, so their kappa is 1 by construction.
cplx lookup_kappa(mairy::Representation rep, int N, const Options& opt,
                  const mairy::QuadratureConfig& cfg) {
    using mairy::Representation;
    if (rep == Representation::direct || rep == Representation::det_oracle) return {1.0, 0.0};
    std::ifstream is(opt.calibration_path);
    if (is) {
        std::stringstream ss;
        ss << is.rdbuf();
        mairy::CalibrationTable table = mairy::CalibrationTable::from_json(ss.str());
        if (const mairy::CalibrationEntry* e = table.find(rep, N)) return e->kappa;
    }
    static const std::vector<std::vector<double>> fit_points = {
        {0.5}, {0.5, -0.5}, {0.8, 0.1, -0.9}, {0.9, 0.3, -0.2, -1.0}};
    mairy::CalibrationTable table = mairy::calibrate({rep}, mairy::split(fit_points[N - 1]), cfg);
    return table.entries.front().kappa;
}

mairy::MatrixArgument argument_from(const Options& opt, double xi, double r, bool have_r) {
    if (!opt.spectrum_csv.empty()) {
        mairy::Spectrum s = mairy::parse_spectrum(opt.spectrum_csv);
        return mairy::split(s.values);
    }
    if (have_r) return mairy::n2_argument(xi, r);
    return mairy::split({xi});
}

int cmd_eval(const Options& opt) {
    mairy::QuadratureConfig cfg = load_config(opt);
    mairy::Representation rep = mairy::parse_representation(opt.rep_tag);
    const bool have_r = !opt.r_spec.empty();
    const double xi = parse_axis_spec(opt.xi_spec).at(0);
    const double r = have_r ? parse_axis_spec(opt.r_spec).at(0) : 0.0;
    mairy::MatrixArgument X = argument_from(opt, xi, r, have_r);

    mairy::Evaluation ev = mairy::evaluate_representation(rep, X, cfg);
    const cplx kappa = lookup_kappa(rep, X.traceless.N, opt, cfg);
    const cplx value = kappa * ev.value;
    const double err = std::abs(kappa) * ev.error_estimate;

    std::vector<double> eig(X.traceless.N);
    for (int i = 0; i < X.traceless.N; ++i) eig[i] = X.xi + X.traceless.values[i];

    if (opt.format == "csv") {
        std::string text = "xi,r,re,im,err\n";
        const double rr = X.traceless.N == 2 ? mairy::n2_r(X) : 0.0;
        text += fmt15(X.xi) + "," + fmt15(rr) + "," + fmt15(value.real()) + "," +
                fmt15(value.imag()) + "," + fmt15(err) + "\n";
        write_output(opt.out_path, text);
        return 0;
    }
    ordered_json j;
    j["rep"] = mairy::to_string(rep);
    j["eigenvalues"] = eig;
    j["value"] = cplx_json(value);
    j["error_estimate"] = q15(err);
    j["kappa"] = cplx_json(kappa);
    j["nodes_used"] = ev.nodes_used;
    j["method"] = mairy::to_string(ev.method_tag);
    write_output(opt.out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_sweep(const Options& opt) {
    mairy::QuadratureConfig cfg = load_config(opt);
    mairy::Representation rep = mairy::parse_representation(opt.rep_tag);
    std::string xi_spec = opt.xi_spec;
    std::string r_spec = opt.r_spec.empty() ? "1" : opt.r_spec;
    if (!opt.grid_spec.empty()) {
        const auto comma = opt.grid_spec.find(',');
        if (comma == std::string::npos)
            throw mairy::DomainError("--grid must be xi_spec,r_spec");
        xi_spec = opt.grid_spec.substr(0, comma);
        r_spec = opt.grid_spec.substr(comma + 1);
    }
    const std::vector<double> xs = parse_axis_spec(xi_spec);
    const std::vector<double> rs = parse_axis_spec(r_spec);
    const cplx kappa = lookup_kappa(rep, 2, opt, cfg);

    ordered_json rows = ordered_json::array();
    std::string csv = "xi,r,re,im,err\n";
    for (double xi : xs)
        for (double r : rs) {
            mairy::Evaluation ev = mairy::evaluate_representation(rep, mairy::n2_argument(xi, r), cfg);
            const cplx v = kappa * ev.value;
            const double err = std::abs(kappa) * ev.error_estimate;
            if (opt.format == "csv") {
                csv += fmt15(xi) + "," + fmt15(r) + "," + fmt15(v.real()) + "," +
                       fmt15(v.imag()) + "," + fmt15(err) + "\n";
            } else {
                ordered_json row;
                row["xi"] = q15(xi);
                row["r"] = q15(r);
                row["re"] = q15(v.real());
                row["im"] = q15(v.imag());
                row["err"] = q15(err);
                rows.push_back(row);
            }
        }
    if (opt.format == "csv") {
        write_output(opt.out_path, csv);
    } else {
        ordered_json j;
        j["rep"] = mairy::to_string(rep);
        j["kappa"] = cplx_json(kappa);
        j["rows"] = rows;
        write_output(opt.out_path, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_calibrate(const Options& opt) {
    mairy::QuadratureConfig cfg = load_config(opt);
    mairy::CalibrationTable table = mairy::default_calibration(cfg);
    const std::string out = opt.out_path.empty() ? opt.calibration_path : opt.out_path;
    write_output(out, table.to_json());
    for (const auto& e : table.entries)
        std::printf("%-10s N=%d kappa=(%s, %s) fit_residual=%s\n", mairy::to_string(e.rep).c_str(),
                    e.N, fmt15(e.kappa.real()).c_str(), fmt15(e.kappa.imag()).c_str(),
                    fmt15(e.fit_residual).c_str());
    return 0;
}

std::vector<mairy::Spectrum> seeded_n2_spectra(unsigned long seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> hi(0.3, 1.5), lo(-1.5, -0.3);
    std::vector<mairy::Spectrum> out;
    for (int i = 0; i < count; ++i) out.push_back(mairy::Spectrum({hi(rng), lo(rng)}));
    return out;
}

std::vector<mairy::Spectrum> seeded_n3_spectra(unsigned long seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> hi(0.6, 1.2), mid(-0.2, 0.2), lo(-1.2, -0.6);
    std::vector<mairy::Spectrum> out;
    for (int i = 0; i < count; ++i) out.push_back(mairy::Spectrum({hi(rng), mid(rng), lo(rng)}));
    return out;
}

ordered_json report_json(const std::string& text) { return ordered_json::parse(text); }

int cmd_check(const Options& opt) {
    mairy::QuadratureConfig cfg = load_config(opt);
    const std::string& suite = opt.suite;
    if (suite != "ode" && suite != "pde" && suite != "cross" && suite != "theorem2" &&
        suite != "all")
        throw mairy::DomainError("unknown suite: " + suite);

    ordered_json root;
    root["suite"] = suite;
    root["seed"] = opt.seed;
    root["config"] = mairy::config_to_text(cfg);
    root["reports"] = ordered_json::array();
    bool all_passed = true;
    auto push = [&](const std::string& json_text, bool passed) {
        root["reports"].push_back(report_json(json_text));
        all_passed = all_passed && passed;
    };

    using mairy::Representation;
    if (suite == "ode" || suite == "all") {
        std::vector<double> grid;
        for (int i = 0; i < 101; ++i) grid.push_back(-6.0 + 10.0 * i / 100.0);
        mairy::ResidualReport r = mairy::ode_residual_check(grid);
        push(r.to_json(), r.passed);
    }
    if (suite == "pde" || suite == "all") {
        std::vector<mairy::Spectrum> n1;
        for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) n1.push_back(mairy::Spectrum({x}));
        mairy::ResidualReport r1 =
            mairy::pde_residual_check(1, n1, Representation::det_oracle, cfg);
        push(r1.to_json(), r1.passed);
        mairy::ResidualReport r2 = mairy::pde_residual_check(
            2, seeded_n2_spectra(opt.seed, 5), Representation::det_oracle, cfg);
        push(r2.to_json(), r2.passed);
    }
    if (suite == "cross" || suite == "all") {
        mairy::CalibrationTable table = mairy::default_calibration(cfg);

        std::vector<mairy::MatrixArgument> g1;
        for (double x : {-3.0, -1.0, 0.0, 1.0, 2.0}) g1.push_back(mairy::split({x}));
        const std::vector<Representation> reps1 = {Representation::direct,
                                                   Representation::separated,
                                                   Representation::det_oracle};
        for (std::size_t a = 0; a < reps1.size(); ++a)
            for (std::size_t b = a + 1; b < reps1.size(); ++b) {
                mairy::ComparisonReport r =
                    mairy::cross_compare(reps1[a], reps1[b], g1, table, 1e-3, cfg);
                push(r.to_json(), r.passed);
            }

        std::vector<mairy::MatrixArgument> g2;
        for (double xi : {-1.0, 0.0, 1.0})
            for (double r : {0.5, 1.0, 2.0}) g2.push_back(mairy::n2_argument(xi, r));
        const std::vector<Representation> reps2 = {
            Representation::direct, Representation::separated, Representation::n2_double,
            Representation::n2_single, Representation::det_oracle};
        for (std::size_t a = 0; a < reps2.size(); ++a)
            for (std::size_t b = a + 1; b < reps2.size(); ++b) {
                mairy::ComparisonReport r =
                    mairy::cross_compare(reps2[a], reps2[b], g2, table, 1e-3, cfg);
                push(r.to_json(), r.passed);
            }
        mairy::ComparisonReport rg = mairy::cross_compare(
            Representation::n2_single, Representation::n2_green, g2, table, 5e-3, cfg);
        push(rg.to_json(), rg.passed);

        std::vector<mairy::MatrixArgument> g3;
        for (const mairy::Spectrum& s : seeded_n3_spectra(opt.seed, 3))
            g3.push_back(mairy::split(s.values));
        mairy::ComparisonReport r3 = mairy::cross_compare(
            Representation::separated, Representation::det_oracle, g3, table, 1e-2, cfg);
        push(r3.to_json(), r3.passed);
    }
    if (suite == "theorem2" || suite == "all") {
        mairy::Spectrum probe({0.7, -0.4});
        // f(Y) = exp(-tr Y^2); its transform is (pi^2/2) exp(-(q1^2+q2^2)/4)
        mairy::InvariantIntegrand gauss = mairy::register_integrand(
            [](const mairy::Spectrum& s) {
                double q = 0.0;
                for (double v : s.values) q += v * v;
                return cplx(std::exp(-q), 0.0);
            },
            mairy::DecayHint::schwartz, probe, opt.seed);

        for (double q : {0.5, 1.0, 2.0}) {
            mairy::Spectrum Q({q, -q});
            mairy::Evaluation red = mairy::reduced_integral(gauss, Q, cfg);
            mairy::Evaluation mc = mairy::direct_matrix_integral(gauss, Q, 1000000, opt.seed);
            const double dev = std::abs(red.value - mc.value);
            const double lim = 3.0 * (red.error_estimate + mc.error_estimate);
            ordered_json j;
            j["check_id"] = "reduction_vs_mc";
            j["q"] = q15(q);
            j["reduced"] = cplx_json(red.value);
            j["mc"] = cplx_json(mc.value);
            j["deviation"] = q15(dev);
            j["limit_3x_combined"] = q15(lim);
            j["passed"] = dev <= lim;
            root["reports"].push_back(j);
            all_passed = all_passed && (dev <= lim);
        }
        {
            mairy::Spectrum Q0({0.0, 0.0});
            mairy::Evaluation mc = mairy::direct_matrix_integral(gauss, Q0, 1000000, opt.seed);
            const double want = 3.141592653589793 * 3.141592653589793 / 2.0;
            const double dev = std::abs(mc.value - want);
            const double lim = 3.0 * mc.error_estimate;
            ordered_json j;
            j["check_id"] = "mc_gaussian_q0";
            j["mc"] = cplx_json(mc.value);
            j["expected"] = q15(want);
            j["deviation"] = q15(dev);
            j["limit_3sigma"] = q15(lim);
            j["passed"] = dev <= lim;
            root["reports"].push_back(j);
            all_passed = all_passed && (dev <= lim);
        }
    }

    root["all_passed"] = all_passed;
    write_output(opt.out_path, root.dump(2) + "\n");
    if (!all_passed) {
        std::cerr << "{\"error\": \"check\", \"detail\": \"one or more checks failed\"}\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix Airy function: evaluation, sweeps, calibration, consistency checks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "quadrature config file (key=value lines)");
        sub->add_option("--seed", opt.seed, "seed for seeded grids / Monte-Carlo");
        sub->add_option("--out", opt.out_path, "output file (default: stdout)");
        sub->add_option("--calibration", opt.calibration_path,
                        "calibration table path (default calibration.json)");
    };
    // malformed tags and range specs are usage errors (exit 2), so validate
    // them during parsing rather than at evaluation time
    auto checked = [](auto parse_fn) {
        return CLI::Validator(
            [parse_fn](std::string& s) -> std::string {
                try {
                    parse_fn(s);
                    return {};
                } catch (const std::exception& e) {
                    return std::string(e.what());
                }
            },
            "");
    };
    auto add_point = [&](CLI::App* sub) {
        sub->add_option("--rep", opt.rep_tag, "representation tag")
            ->required()
            ->check(checked([](const std::string& s) { mairy::parse_representation(s); }));
        sub->add_option("--xi", opt.xi_spec, "trace coordinate (scalar or start:stop:count)")
            ->check(checked([](const std::string& s) { parse_axis_spec(s); }));
        sub->add_option("--r", opt.r_spec, "eigenvalue split r = x1 - x2 (scalar or range)")
            ->check(checked([](const std::string& s) { parse_axis_spec(s); }));
        sub->add_option("--spectrum", opt.spectrum_csv, "comma-separated eigenvalues")
            ->check(checked([](const std::string& s) { mairy::parse_spectrum(s); }));
        sub->add_option("--format", opt.format, "output format: json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* eval = app.add_subcommand("eval", "evaluate one point");
    add_point(eval);
    add_common(eval);

    CLI::App* sweep = app.add_subcommand("sweep", "evaluate a (xi, r) grid");
    add_point(sweep);
    sweep->add_option("--grid", opt.grid_spec, "xi_spec,r_spec (alternative to --xi/--r)")
        ->check(checked([](const std::string& s) {
            const auto comma = s.find(',');
            if (comma == std::string::npos)
                throw mairy::DomainError("--grid must be xi_spec,r_spec");
            parse_axis_spec(s.substr(0, comma));
            parse_axis_spec(s.substr(comma + 1));
        }));
    add_common(sweep);

    CLI::App* cal = app.add_subcommand("calibrate", "refresh the calibration table");
    add_common(cal);

    CLI::App* check = app.add_subcommand("check", "run consistency suites");
    check->add_option("--suite", opt.suite, "ode|pde|cross|theorem2|all")
        ->check(CLI::IsMember({"ode", "pde", "cross", "theorem2", "all"}));
    add_common(check);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(eval)) return cmd_eval(opt);
        if (app.got_subcommand(sweep)) return cmd_sweep(opt);
        if (app.got_subcommand(cal)) return cmd_calibrate(opt);
        if (app.got_subcommand(check)) return cmd_check(opt);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        ordered_json diag;
        diag["error"] = "numerical_failure";
        diag["what"] = e.what();
        std::cerr << diag.dump() << "\n";
        return 1;
    }
}
