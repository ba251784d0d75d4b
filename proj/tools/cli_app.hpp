#pragma once

// Command-line front end. run() is separate from main so tests can drive it in-process.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monomorse/monomorse.hpp"

namespace monomorse::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kConfig = 2, kIo = 3, kNumeric = 4 };

inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Domain:
    case ErrorKind::Index:
    case ErrorKind::EmptyLadder: return kConfig;
    case ErrorKind::Io: return kIo;
    default: return kNumeric;
    }
}

/// key=value lines; blank lines and lines starting with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> read_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cli", "cannot open config file " + path.string());
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, "cli", path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key[0] == '-') key.erase(0, 1);
        out.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return out;
}

namespace detail {

struct FamilyArgs {
    double l = 8.0;
    double m = 3.0;
    int n = 3;
};

struct LadderArgs {
    int M = 8;
    int count = 0;
    int voices = 8;
    std::vector<double> scales;
};

inline void add_family(CLI::App* sub, FamilyArgs& f) {
    sub->add_option("--l", f.l, "Morse power-law parameter l")->check(CLI::Range(1.0, 1e6));
    sub->add_option("--m", f.m, "Morse decay parameter m")->check(CLI::Range(1.0, 1e6));
    sub->add_option("--n", f.n, "number of orthogonal wavelets")->check(CLI::Range(1, 64));
}

inline void add_ladder(CLI::App* sub, LadderArgs& l) {
    sub->add_option("--M", l.M, "frequency points across the band (sets a_max)")->check(CLI::Range(2, 1 << 20));
    sub->add_option("--count", l.count, "log-spaced scales between a_min and a_max (0: use --voices)")
        ->check(CLI::Range(0, 100000));
    sub->add_option("--voices", l.voices, "scales per octave")->check(CLI::Range(1, 1000));
    sub->add_option("--scales", l.scales, "explicit comma-separated scales")->delimiter(',');
}

inline ScaleLadder make_ladder(const LadderArgs& l, const ImageGrid& grid, const MorseFamily& family) {
    if (!l.scales.empty()) return explicit_ladder(l.scales);
    if (l.count > 0) return scale_ladder(grid, family, 0, l.M, l.count);
    return scale_ladder_voices(grid, family, 0, l.M, l.voices);
}

inline json typed(const std::string& s) {
    if (s.empty()) return s;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end && *end == '\0') {
        if (s.find_first_of(".eE") == std::string::npos) return static_cast<long long>(v);
        return v;
    }
    if (s == "true") return true;
    if (s == "false") return false;
    return s;
}

/// Every option of the subcommand with its effective value.
inline json resolved_config(const CLI::App* sub) {
    json cfg = json::object();
    cfg["command"] = sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config") continue;
        const bool vector_valued = opt->get_expected_max() > 1;
        if (opt->count() > 0) {
            const auto res = opt->reduced_results();
            if (vector_valued) {
                json arr = json::array();
                for (const auto& r : res) {
                    std::stringstream ss(r);
                    std::string piece;
                    while (std::getline(ss, piece, ',')) arr.push_back(typed(piece));
                }
                cfg[name] = arr;
            } else if (opt->get_type_size() == 0) {
                cfg[name] = res.empty() || res.back() != "false";
            } else {
                cfg[name] = typed(res.back());
            }
        } else if (vector_valued) {
            cfg[name] = json::array();
        } else if (opt->get_type_size() == 0) {
            cfg[name] = false;
        } else {
            const std::string d = opt->get_default_str();
            cfg[name] = d.empty() ? json(nullptr) : typed(d);
        }
    }
    return cfg;
}

inline json ladder_json(const ScaleLadder& ladder) {
    return {{"a_min", ladder.a_min}, {"a_max", ladder.a_max}, {"M", ladder.M}, {"scales", ladder.scales}};
}

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline void emit(const json& report, const std::string& out_path, std::ostream& out) {
    if (out_path.empty() || out_path == "-") {
        out << report.dump(2) << '\n';
    } else {
        io::write_json(out_path, report);
    }
}

inline void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multiple monogenic Morse wavelet analysis of 2-D images", "monomorse"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::string config_path;
    unsigned threads = 0;
    std::string out_path;
    detail::FamilyArgs fam;
    detail::LadderArgs lad;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "key=value file; command-line flags take precedence");
        sub->add_option("--threads", threads, "worker cap (0: MONOMORSE_THREADS or all cores)");
    };

    // wavelet-gen
    int points = 512;
    double f_top = 0.5;
    CLI::App* wg = app.add_subcommand("wavelet-gen", "tabulate Psi_n(f) to CSV with a JSON manifest");
    common(wg);
    detail::add_family(wg, fam);
    wg->add_option("--points", points, "frequency samples")->check(CLI::Range(2, 10000000));
    wg->add_option("--f-top", f_top, "largest tabulated frequency (cycles per unit)")->check(CLI::PositiveNumber);
    wg->add_option("--out", out_path, "CSV path")->required();

    // transform
    std::string input;
    bool zero_pad = false;
    CLI::App* tr = app.add_subcommand("transform", "forward transform to raw float64 planes");
    common(tr);
    detail::add_family(tr, fam);
    detail::add_ladder(tr, lad);
    tr->add_option("--input", input, "image manifest (.json) or PGM")->required();
    tr->add_option("--out", out_path, "output directory")->required();
    tr->add_flag("--zero-pad", zero_pad, "analyse a 2x zero-padded copy");

    // estimate
    double b1 = 0.0;
    double b2 = 0.0;
    double scale = 0.0;
    double theta = 0.0;
    double local_freq = 0.0;
    double sigma = -1.0;
    CLI::App* es = app.add_subcommand("estimate", "orientation, phase and amplitude at one point");
    common(es);
    detail::add_family(es, fam);
    es->add_option("--input", input, "image manifest (.json) or PGM")->required();
    es->add_option("--b1", b1, "position x1 (sample units times spacing)")->required();
    es->add_option("--b2", b2, "position x2")->required();
    es->add_option("--a", scale, "scale")->required()->check(CLI::PositiveNumber);
    es->add_option("--theta", theta, "rotation of the Riesz pair (radians)");
    es->add_option("--local-freq", local_freq, "local radial frequency for the amplitude (0: f_max / a)");
    es->add_option("--sigma", sigma, "noise standard deviation for predicted variances (negative: skip)");
    es->add_option("--out", out_path, "JSON report path ('-' or empty: stdout)");

    // ridge
    double min_energy = 1e-3;
    CLI::App* rg = app.add_subcommand("ridge", "ridge points along scale to CSV");
    common(rg);
    detail::add_family(rg, fam);
    detail::add_ladder(rg, lad);
    rg->add_option("--input", input, "image manifest (.json) or PGM")->required();
    rg->add_option("--min-energy", min_energy, "ignore maxima below this fraction of the largest")
        ->check(CLI::Range(0.0, 1.0));
    rg->add_option("--out", out_path, "CSV path")->required();

    // validate-operator
    double C = 3.0;
    int quad_points = 128;
    bool identity = false;
    double max_residual = 5e-2;
    double lambda_tol = 5e-3;
    CLI::App* vo = app.add_subcommand("validate-operator", "eigenrelation residuals of the localisation operator");
    common(vo);
    detail::add_family(vo, fam);
    vo->add_option("--C", C, "region parameter C >= 1")->check(CLI::Range(1.0, 1e6));
    vo->add_option("--points", quad_points, "Gauss-Legendre points in omega")->check(CLI::Range(8, 4096));
    vo->add_flag("--identity", identity, "also check the resolution-of-identity constant");
    vo->add_option("--max-residual", max_residual, "fail (exit 4) above this residual")->check(CLI::PositiveNumber);
    vo->add_option("--lambda-tol", lambda_tol, "fail (exit 4) when |lambda_numeric - lambda| exceeds this")
        ->check(CLI::PositiveNumber);
    vo->add_option("--out", out_path, "JSON report path ('-' or empty: stdout)");

    // simulate
    std::string signal = "1";
    std::size_t size = 128;
    std::uint64_t seed = 0;
    double amplitude = 1.2;
    double f0 = 0.1;
    double eta = kPi / 5;
    double theta_s = 0.0;
    std::string component = "both";
    std::string pgm_path;
    CLI::App* si = app.add_subcommand("simulate", "synthetic test images");
    common(si);
    si->add_option("--signal", signal, "1, 2 or plane")->check(CLI::IsMember({"1", "2", "plane"}));
    si->add_option("--size", size, "grid side")->check(CLI::Range(8, 1 << 14));
    si->add_option("--sigma", sigma, "noise standard deviation (negative: 0.2 for signal 1, 0.1 for 2, 0 for plane)");
    si->add_option("--seed", seed, "noise seed");
    si->add_option("--amplitude", amplitude, "plane-wave amplitude");
    si->add_option("--f0", f0, "plane-wave radial frequency")->check(CLI::PositiveNumber);
    si->add_option("--eta", eta, "plane-wave orientation (radians)");
    si->add_option("--theta-s", theta_s, "plane-wave phase offset (radians)");
    si->add_option("--component", component, "signal 2 terms: both, first or second")
        ->check(CLI::IsMember({"both", "first", "second"}));
    si->add_option("--out", out_path, "image manifest path (.json); data goes to .f64 beside it")->required();
    si->add_option("--pgm", pgm_path, "also write a scaled 16-bit PGM");

    // mc-covariance
    std::size_t replicates = 10000;
    double spacing = 1.0;
    double mc_scale = 0.0;
    bool exact = false;
    CLI::App* mc = app.add_subcommand("mc-covariance", "Monte-Carlo coefficient covariance under white noise");
    common(mc);
    detail::add_family(mc, fam);
    detail::add_ladder(mc, lad);
    mc->add_option("--size", size, "grid side")->check(CLI::Range(8, 1 << 14));
    mc->add_option("--spacing", spacing, "sample spacing on both axes")->check(CLI::PositiveNumber);
    mc->add_option("--replicates", replicates, "replicate count")->check(CLI::Range(2, 100000000));
    mc->add_option("--sigma", sigma, "noise standard deviation (negative: 1)");
    mc->add_option("--seed", seed, "noise seed");
    mc->add_option("--scale", mc_scale, "analysis scale (0: geometric mean of the ladder)");
    mc->add_flag("--exact", exact, "also report the exact discrete covariance");
    mc->add_option("--out", out_path, "JSON report path ('-' or empty: stdout)");

    try {
        // config entries are placed before the user's flags so the flags win
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            std::vector<std::string> injected;
            for (const auto& [k, v] : read_config_file(path)) injected.push_back("--" + k + "=" + v);
            if (!args.empty()) args.insert(args.begin() + 1, injected.begin(), injected.end());
            break;
        }
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfig;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_code(e.kind());
    }

    CLI::App* used = app.get_subcommands().front();
    json config = detail::resolved_config(used);
    const std::string cmd = used->get_name();
    try {
        if (cmd == "simulate") {
            if (sigma < 0) sigma = signal == "1" ? 0.2 : signal == "2" ? 0.1 : 0.0;
            config["sigma"] = sigma;
            ImageGrid image;
            if (signal == "1") {
                image = gen_signal1(size, sigma, seed);
            } else if (signal == "2") {
                image = gen_signal2(size, sigma, seed, component != "second", component != "first");
            } else {
                image = gen_plane_wave(size, size, amplitude, f0, eta, theta_s);
                add_white_noise(image, {sigma, seed});
            }
            detail::ensure_parent(out_path);
            io::write_image(out_path, image, {{"config", config}});
            if (!pgm_path.empty()) io::write_pgm(pgm_path, image.data, image.n1, image.n2);
            return kOk;
        }

        const MorseFamily family(fam.l, fam.m, fam.n);
        if (cmd == "wavelet-gen") {
            detail::ensure_parent(out_path);
            std::ofstream csv(out_path);
            if (!csv) throw Error(ErrorKind::Io, "cli", "cannot open " + out_path);
            csv << "f";
            for (int n = 0; n < family.count(); ++n) csv << ",psi_" << n;
            csv << '\n';
            for (int i = 0; i < points; ++i) {
                const double f = f_top * i / (points - 1);
                csv << io::csv_number(f);
                for (int n = 0; n < family.count(); ++n) csv << ',' << io::csv_number(psi_e_hat(f, family, n));
                csv << '\n';
            }
            if (!csv) throw Error(ErrorKind::Io, "cli", "write failed for " + out_path);
            json wavelets = json::array();
            for (int n = 0; n < family.count(); ++n) {
                wavelets.push_back({{"n", n},
                                    {"f_max", family.f_max(n)},
                                    {"f1", family.band(n).f1},
                                    {"f2", family.band(n).f2},
                                    {"norm_constant", family.norm_constant(n)}});
            }
            io::write_json(fs::path(out_path).replace_extension(".json"),
                           {{"config", config}, {"csv", fs::path(out_path).filename().string()},
                            {"units", {{"f", "cycles per unit"}}}, {"wavelets", wavelets}});
            return kOk;
        }

        if (cmd == "validate-operator") {
            OperatorOptions opts;
            opts.threads = threads;
            json rows = json::array();
            bool pass = true;
            for (int n = 0; n < family.count(); ++n) {
                const OperatorCheckReport r =
                    eigenrelation_residual(n, RegionParams{C}, family, false, quad_points, opts);
                const bool ok = r.residual <= max_residual && std::abs(r.lambda_numeric - r.lambda_formula) <= lambda_tol;
                pass = pass && ok;
                rows.push_back({{"n", n},
                                {"C", r.C},
                                {"lambda_formula", r.lambda_formula},
                                {"lambda_numeric", r.lambda_numeric},
                                {"residual", r.residual},
                                {"pass", ok}});
            }
            json report{{"config", config}, {"eigenrelation", rows}};
            if (identity) {
                const IdentityCheck c = identity_constant_check(family.beta(), family.gamma());
                report["identity"] = {{"ratio", c.ratio},
                                      {"ratio_half_b", c.ratio_half_b},
                                      {"cutoff_b", c.cutoff_b},
                                      {"degenerate", c.degenerate}};
                pass = pass && (c.degenerate || std::abs(c.ratio - 1.0) <= 1e-3);
            }
            report["pass"] = pass;
            detail::emit(report, out_path, out);
            return pass ? kOk : kNumeric;
        }

        if (cmd == "mc-covariance") {
            const ImageGrid grid(size, size, spacing, spacing);
            const ScaleLadder ladder = detail::make_ladder(lad, grid, family);
            if (sigma < 0) sigma = 1.0;
            config["sigma"] = sigma;
            const NoiseModel noise{sigma, seed};
            const CovarianceReport r =
                mc_covariance(size, size, spacing, spacing, family, ladder, noise, replicates, {threads, mc_scale});
            auto report_json = [](const CovarianceReport& c) {
                json ratios = json::array();
                for (const auto& d : c.diagonal_ratio) ratios.push_back(d);
                return json{{"N", c.N},
                            {"replicates", c.replicates},
                            {"sigma_eps", c.sigma_eps},
                            {"a", c.a},
                            {"cell_area", c.cell_area},
                            {"site", {c.s1, c.s2}},
                            {"target", "sigma^2 d1 d2 diag(1, 1/2, 1/2) per wavelet, zero across wavelets"},
                            {"covariance", c.covariance},
                            {"correlation", c.correlation},
                            {"diagonal_ratio", ratios},
                            {"max_diagonal_error", c.max_diagonal_error},
                            {"max_within_n_correlation", c.max_within_n_correlation},
                            {"max_cross_n_correlation", c.max_cross_n_correlation}};
            };
            json report{{"config", config}, {"ladder", detail::ladder_json(ladder)}, {"monte_carlo", report_json(r)}};
            if (exact) report["exact"] = report_json(discrete_covariance(size, size, spacing, spacing, family, r.a, noise.sigma_eps));
            detail::emit(report, out_path, out);
            return kOk;
        }

        const ImageGrid image = io::read_image(input);
        if (cmd == "transform") {
            const ScaleLadder ladder = detail::make_ladder(lad, image, family);
            const CoefficientSet cs = forward(image, family, ladder, {threads, zero_pad});
            const fs::path dir(out_path);
            fs::create_directories(dir);
            json planes = json::array();
            for (int n = 0; n < family.count(); ++n) {
                for (std::size_t k = 0; k < cs.scales.size(); ++k) {
                    std::ostringstream stem;
                    stem << "w_n" << n << "_k" << std::setw(3) << std::setfill('0') << k;
                    const PlaneTriple& t = cs.at(n, k);
                    json entry{{"n", n}, {"k", k}, {"a", cs.scales[k]}};
                    for (const auto& [part, plane] : {std::pair{"e", &t.e}, {"r1", &t.r1}, {"r2", &t.r2}}) {
                        const std::string file = stem.str() + "_" + part + ".f64";
                        io::write_raw(dir / file, plane->v);
                        entry[part] = file;
                    }
                    planes.push_back(entry);
                }
            }
            io::write_json(dir / "manifest.json", {{"config", config},
                                                   {"n1", cs.n1},
                                                   {"n2", cs.n2},
                                                   {"d1", cs.d1},
                                                   {"d2", cs.d2},
                                                   {"byte_order", "little"},
                                                   {"dtype", "float64"},
                                                   {"ladder", detail::ladder_json(ladder)},
                                                   {"max_imag_residual", cs.max_imag_residual},
                                                   {"planes", planes}});
            return kOk;
        }

        if (cmd == "estimate") {
            const CoefficientSet cs = forward(image, family, explicit_ladder({scale}), {threads, false});
            const AveragedCoefficients avg = average(cs);
            const Xi xi{scale, theta, b1, b2};
            const Site site = cs.locate(xi);
            const AveragedPoint p = avg.at(site);
            json report{{"config", config},
                        {"units", {{"angles", "radians"}, {"phase", "cycles"}, {"frequency", "cycles per unit"}}},
                        {"site", {site.s1, site.s2}},
                        {"S_plus", p.splus}};
            auto attempt = [&](const char* key, auto fn) {
                try {
                    report[key] = fn();
                } catch (const Error& e) {
                    if (exit_code(e.kind()) != kNumeric) throw;
                    report[key] = nullptr;
                    report["notes"][key] = e.what();
                }
            };
            attempt("theta_max", [&] { return theta_max_est(p); });
            attempt("nu", [&] { return orientation_est(p, theta); });
            attempt("phase", [&] { return phase_est(cs, xi); });
            const double lf = local_freq > 0.0 ? local_freq : family.f_max(0) / scale;
            report["local_freq"] = lf;
            attempt("amplitude", [&] { return amplitude_est(p, scale, lf, family, avg.N); });
            if (sigma >= 0.0) {
                const VariancePrediction v =
                    predict_variances(sigma, avg.N, p, cs.at(0, site.scale).at(site.s1, site.s2));
                report["predicted_variances"] = {{"var_theta_max", detail::number_or_null(v.var_theta_max)},
                                                 {"var_nu", detail::number_or_null(v.var_nu)},
                                                 {"var_nu_nominal", v.var_nu_nominal},
                                                 {"var_phi", detail::number_or_null(v.var_phi)}};
            }
            detail::emit(report, out_path, out);
            return kOk;
        }

        if (cmd == "ridge") {
            const ScaleLadder ladder = detail::make_ladder(lad, image, family);
            const CoefficientSet cs = forward(image, family, ladder, {threads, false});
            RidgeOptions ro;
            ro.min_relative_energy = min_energy;
            const std::vector<RidgeSample> samples = ridge_extract(cs, ro);
            const auto sheets = link_ridges(samples);
            detail::ensure_parent(out_path);
            io::write_ridge_csv(out_path, samples);
            json sizes = json::array();
            for (const auto& s : sheets) sizes.push_back(s.size());
            io::write_json(fs::path(out_path).replace_extension(".json"),
                           {{"config", config},
                            {"csv", fs::path(out_path).filename().string()},
                            {"ladder", detail::ladder_json(ladder)},
                            {"samples", samples.size()},
                            {"sheets", sheets.size()},
                            {"sheet_sizes", sizes}});
            return kOk;
        }
    } catch (const Error& e) {
        err << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "io: " << e.what() << '\n';
        return kIo;
    } catch (const std::exception& e) {
        err << e.what() << '\n';
        return kNumeric;
    }
    return kConfig;
}

}  // namespace monomorse::cli
