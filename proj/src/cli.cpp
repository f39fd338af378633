#include "hyperstab/cli.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyperstab/config.hpp"
#include "hyperstab/control.hpp"
#include "hyperstab/dynamics.hpp"
#include "hyperstab/errors.hpp"
#include "hyperstab/spectral.hpp"
#include "hyperstab/stability.hpp"
#include "hyperstab/tensor.hpp"

namespace hyperstab::cli {

using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

Vec parse_csv_doubles(const std::string& text, const std::string& what) {
    Vec out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw InputError(what + ": cannot parse '" + item + "' as a number");
        }
    }
    if (out.empty()) throw InputError(what + ": empty list");
    return out;
}

void write_output(const std::string& text, const std::string& out_file, std::ostream& fallback) {
    if (out_file.empty()) {
        fallback << text;
        return;
    }
    std::ofstream f(out_file);
    if (!f) throw InputError("cannot open output file: " + out_file);
    f << text;
}

json radius_json(double radius) {
    return std::isfinite(radius) ? json(radius) : json("inf");
}

json cert_to_json(const AttractionCertificate& cert) {
    json j;
    j["theorem"] = to_string(cert.theorem);
    j["kind"] = to_string(cert.kind);
    j["applicable"] = true;
    j["radius"] = radius_json(cert.radius);
    if (cert.delta) j["delta"] = *cert.delta;
    json coeffs = json::object();
    for (const auto& [order, c] : cert.lambdas_used) coeffs[std::to_string(order)] = c;
    j["coefficients"] = std::move(coeffs);
    if (cert.kind == CertKind::box && cert.critical_row >= 0) j["critical_row"] = cert.critical_row + 1;
    if (cert.degenerate) j["degenerate"] = true;
    return j;
}

json pair_to_json(const ZEigenpair& p) {
    json j;
    j["lambda"] = p.lambda;
    j["x"] = p.x;
    j["residual"] = p.residual;
    return j;
}

Tensor parse_nested_array_file(const std::string& path, int order, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + what + " file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(what + ": invalid JSON: " + e.what());
    }
    if (!doc.is_array() || doc.empty()) throw InputError(what + ": expected a non-empty nested array");
    const int n = static_cast<int>(doc.size());
    Tensor t(order, n);
    std::vector<int> idx(static_cast<std::size_t>(order), 0);
    // Walk the nesting levels; every level must be an array of length n,
    // the leaves numbers.
    std::function<void(const json&, int)> walk = [&](const json& node, int depth) {
        if (depth == order) {
            if (!node.is_number()) throw InputError(what + ": expected a number at depth " + std::to_string(depth));
            t.at(idx) = node.get<double>();
            return;
        }
        if (!node.is_array() || static_cast<int>(node.size()) != n)
            throw InputError(what + ": expected an array of length " + std::to_string(n) + " at depth " +
                             std::to_string(depth));
        for (int i = 0; i < n; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            walk(node[static_cast<std::size_t>(i)], depth + 1);
        }
    };
    walk(doc, 0);
    return t;
}

struct AnalyzeOpts {
    std::string config;
    std::string out_file;
    int verify_samples = 0;
    std::uint64_t seed = kDefaultSeed;
    SimParams sim;
};

int do_analyze(const AnalyzeOpts& opt, std::ostream& out) {
    const LoadedSystem loaded = load_system_config(opt.config);
    const PolySystem& sys = loaded.system;

    json report;
    if (!loaded.name.empty()) report["name"] = loaded.name;
    report["dim"] = sys.dim();
    json orders = json::array();
    int nonzero_count = 0, single_order = 0, max_nonzero_order = 0;
    for (const auto& [m, t] : sys.tensors()) {
        orders.push_back(m);
        if (!t.is_zero()) {
            ++nonzero_count;
            single_order = m;
            max_nonzero_order = std::max(max_nonzero_order, m);
        }
    }
    report["orders"] = std::move(orders);

    try {
        report["local_stability"] = to_string(local_stability(sys));
        report["linear_spectral_radius"] = linear_spectral_radius(sys);
    } catch (const ConditionError& e) {
        report["local_stability"] = nullptr;
        report["note"] = e.what();
    }

    std::vector<AttractionCertificate> produced;
    json certs = json::array();
    auto attempt = [&](const char* tag, auto&& make) {
        try {
            AttractionCertificate cert = make();
            certs.push_back(cert_to_json(cert));
            produced.push_back(std::move(cert));
        } catch (const std::exception& e) {
            json j;
            j["theorem"] = tag;
            j["applicable"] = false;
            j["reason"] = e.what();
            certs.push_back(std::move(j));
        }
    };

    if (nonzero_count == 1 && single_order >= 3)
        attempt("T1", [&] { return theorem1_certificate(*sys.tensor(single_order)); });
    attempt("T2", [&] { return theorem2_certificate(sys); });
    attempt("T3", [&] { return theorem3_certificate(sys); });
    if (max_nonzero_order <= 3) attempt("C1", [&] { return quadratic_certificate(sys); });
    if (max_nonzero_order == 4) attempt("C2", [&] { return cubic_certificate(sys); });
    report["certificates"] = std::move(certs);

    const AttractionCertificate* largest = nullptr;
    for (const auto& c : produced)
        if (!largest || c.radius > largest->radius) largest = &c;
    report["largest_radius_theorem"] = largest ? json(to_string(largest->theorem)) : json();

    if (opt.verify_samples > 0) {
        json checks = json::array();
        for (const auto& c : produced) {
            const VerificationReport vr = verify_certificate(sys, c, opt.verify_samples, opt.seed, opt.sim);
            json j;
            j["theorem"] = to_string(c.theorem);
            j["samples"] = vr.total;
            j["converged"] = vr.converged;
            j["worst_final_norm"] = std::isfinite(vr.worst_final_norm) ? json(vr.worst_final_norm) : json("inf");
            checks.push_back(std::move(j));
        }
        report["verification"] = std::move(checks);
    }

    write_output(report.dump(2) + "\n", opt.out_file, out);
    return produced.empty() ? 1 : 0;
}

struct EigOpts {
    std::string config;
    std::string out_file;
    int order = 0;
    int resolution = 720;
};

int do_eig(const EigOpts& opt, std::ostream& out) {
    const LoadedSystem loaded = load_system_config(opt.config);
    const Tensor* t = loaded.system.tensor(opt.order);
    if (!t) throw InputError("no tensor of order " + std::to_string(opt.order) + " in the config");
    const Tensor abs_t = abs_tensor(*t);

    json report;
    report["order"] = opt.order;
    const ZEigenpair pair = perron_z_eigenpair(abs_t);
    report["perron"] = pair_to_json(pair);
    report["note"] = "Perron pair of the entrywise absolute value |A|, the quantity the certificates consume";

    if (loaded.system.dim() <= 3) {
        const OracleResult oracle = z_eigenpairs_oracle(abs_t, opt.resolution);
        json oj;
        oj["degenerate"] = oracle.degenerate;
        oj["sign_convention"] = oracle.sign_convention;
        json pairs = json::array();
        bool matched = false;
        for (const auto& p : oracle.pairs) {
            pairs.push_back(pair_to_json(p));
            matched = matched || std::abs(p.lambda - pair.lambda) < 1e-6;
        }
        oj["pairs"] = std::move(pairs);
        oj["matched"] = matched || oracle.degenerate;
        report["oracle"] = std::move(oj);
    }

    write_output(report.dump(2) + "\n", opt.out_file, out);
    return 0;
}

struct SimulateOpts {
    std::string config;
    std::string out_file;
    std::string x0_text;
    std::string delta_text;
    SimParams sim;
};

int do_simulate(const SimulateOpts& opt, std::ostream& out) {
    const LoadedSystem loaded = load_system_config(opt.config);
    const Vec x0 = parse_csv_doubles(opt.x0_text, "--x0");
    std::optional<Vec> delta;
    if (!opt.delta_text.empty()) delta = parse_csv_doubles(opt.delta_text, "--delta");
    const Trajectory traj = simulate(loaded.system, x0, opt.sim);
    write_output(trajectory_csv(traj, delta), opt.out_file, out);
    return 0;
}

struct SampleOpts {
    std::string config;
    std::string out_file;
    std::string lo_text, hi_text;
    int grid = 0;
    std::string cert = "none";
    SimParams sim;
};

int do_sample_region(const SampleOpts& opt, std::ostream& out) {
    const LoadedSystem loaded = load_system_config(opt.config);
    const PolySystem& sys = loaded.system;
    const Vec lo = parse_csv_doubles(opt.lo_text, "--lo");
    const Vec hi = parse_csv_doubles(opt.hi_text, "--hi");

    std::optional<AttractionCertificate> cert;
    if (opt.cert == "t1") {
        const auto& ts = sys.tensors();
        int found = 0, order = 0;
        for (const auto& [m, t] : ts)
            if (!t.is_zero()) {
                ++found;
                order = m;
            }
        if (found != 1) throw InputError("--cert t1 needs a system with exactly one nonzero tensor");
        cert = theorem1_certificate(*sys.tensor(order));
    } else if (opt.cert == "t2") {
        cert = theorem2_certificate(sys);
    } else if (opt.cert == "t3") {
        cert = theorem3_certificate(sys);
    } else if (opt.cert == "c1") {
        cert = quadratic_certificate(sys);
    } else if (opt.cert == "c2") {
        cert = cubic_certificate(sys);
    } else if (opt.cert != "none") {
        throw InputError("--cert must be one of none|t1|t2|t3|c1|c2");
    }

    const RegionSample sample = sample_region(sys, lo, hi, opt.grid, opt.sim, cert);
    write_output(region_csv(sample), opt.out_file, out);
    return 0;
}

struct ControlOpts {
    std::string config;
    std::string out_file;
    int order = 4;
    double gain = 0.0;
};

int do_control(const ControlOpts& opt, std::ostream& out) {
    const LoadedSystem loaded = load_system_config(opt.config);
    const ControllerSpec ctrl = make_controller(loaded.system, opt.order, opt.gain);
    const AttractionCertificate cert = controlled_certificate(loaded.system, ctrl);
    const PolySystem closed = closed_loop(loaded.system, ctrl);

    json report;
    report["controller"] = {{"order", ctrl.order}, {"gain", ctrl.gain}};
    report["certificate"] = cert_to_json(cert);
    try {
        const AttractionCertificate open = theorem2_certificate(loaded.system);
        report["uncontrolled_radius"] = radius_json(open.radius);
    } catch (const std::exception&) {
        report["uncontrolled_radius"] = nullptr;
    }
    const std::string name = loaded.name.empty() ? "controlled" : loaded.name + "+control";
    report["controlled_system"] = json::parse(serialize_system_config(closed, name));
    write_output(report.dump(2) + "\n", opt.out_file, out);
    return 0;
}

struct SisOpts {
    std::string out_file;
    std::string gamma_text;
    double beta1 = 0.0, beta2 = 0.0, h = 1.0;
    std::string a_file, b_file;
    std::string name = "sis";
};

int do_sis(const SisOpts& opt, std::ostream& out, std::ostream& err) {
    SisParams params{parse_csv_doubles(opt.gamma_text, "--gamma"), opt.beta1, opt.beta2,
                     Tensor(2, 1), Tensor(3, 1), opt.h};
    const int n = static_cast<int>(params.gamma.size());
    params.a = parse_nested_array_file(opt.a_file, 2, "--a-file");
    params.b = opt.b_file.empty() ? Tensor(3, n) : parse_nested_array_file(opt.b_file, 3, "--b-file");

    std::vector<std::string> warnings;
    const PolySystem sys = build_sis(params, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    write_output(serialize_system_config(sys, opt.name), opt.out_file, out);
    return 0;
}

void add_sim_options(CLI::App* cmd, SimParams& sim) {
    cmd->add_option("--steps", sim.max_steps, "maximum iteration count");
    cmd->add_option("--eps", sim.eps_conv, "convergence threshold on ||x||_inf");
    cmd->add_option("--mdiv", sim.m_div, "divergence threshold on ||x||_inf");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability certificates for discrete-time polynomial dynamics on hypergraphs"};
    app.name("hyperstab");
    app.require_subcommand(1);

    AnalyzeOpts analyze_opts;
    auto* analyze = app.add_subcommand("analyze", "local stability verdict plus every applicable certificate");
    analyze->add_option("config", analyze_opts.config, "system config JSON file")->required();
    analyze->add_option("--out", analyze_opts.out_file, "write the JSON report here instead of stdout");
    analyze->add_option("--verify", analyze_opts.verify_samples,
                        "sample this many initial conditions inside each certificate and simulate them");
    analyze->add_option("--seed", analyze_opts.seed, "sampling seed")->envname("HYPERSTAB_SEED");
    add_sim_options(analyze, analyze_opts.sim);

    EigOpts eig_opts;
    auto* eig = app.add_subcommand("eig", "Perron pair of |A_m|, cross-checked against the brute-force oracle");
    eig->add_option("config", eig_opts.config, "system config JSON file")->required();
    eig->add_option("--order", eig_opts.order, "tensor order m")->required();
    eig->add_option("--resolution", eig_opts.resolution, "oracle grid resolution");
    eig->add_option("--out", eig_opts.out_file, "write the JSON report here instead of stdout");

    SimulateOpts sim_opts;
    auto* sim = app.add_subcommand("simulate", "iterate the system from an initial state; CSV trajectory");
    sim->add_option("config", sim_opts.config, "system config JSON file")->required();
    sim->add_option("--x0", sim_opts.x0_text, "initial state, comma-separated")->required();
    sim->add_option("--delta", sim_opts.delta_text, "positive weights; adds the V = max_j |x_j|/delta_j column");
    sim->add_option("--out", sim_opts.out_file, "write the CSV here instead of stdout");
    add_sim_options(sim, sim_opts.sim);

    SampleOpts sample_opts;
    auto* sample = app.add_subcommand("sample-region", "simulate a full grid of initial conditions; CSV labels");
    sample->add_option("config", sample_opts.config, "system config JSON file")->required();
    sample->add_option("--lo", sample_opts.lo_text, "lower grid corner, comma-separated")->required();
    sample->add_option("--hi", sample_opts.hi_text, "upper grid corner, comma-separated")->required();
    sample->add_option("--grid", sample_opts.grid, "points per axis")->required();
    sample->add_option("--cert", sample_opts.cert, "certificate for the inside/outside split: none|t1|t2|t3|c1|c2");
    sample->add_option("--out", sample_opts.out_file, "write the CSV here instead of stdout");
    add_sim_options(sample, sample_opts.sim);

    ControlOpts control_opts;
    auto* control = app.add_subcommand("control", "sign-matched identity feedback and its certificate");
    control->add_option("config", control_opts.config, "system config JSON file")->required();
    control->add_option("--order", control_opts.order, "controller order (even, >= 4)")->required();
    control->add_option("--gain", control_opts.gain, "controller gain s")->required();
    control->add_option("--out", control_opts.out_file, "write the JSON report here instead of stdout");

    SisOpts sis_opts;
    auto* sis = app.add_subcommand("sis", "assemble the SIS-on-hypergraph system config");
    sis->set_help_flag("--help", "print this help message and exit"); // frees -h for the step size
    sis->add_option("--gamma", sis_opts.gamma_text, "healing rates, comma-separated")->required();
    sis->add_option("--beta1", sis_opts.beta1, "pairwise infection rate")->required();
    sis->add_option("--beta2", sis_opts.beta2, "group infection rate")->required();
    sis->add_option("--a-file", sis_opts.a_file, "pairwise contact matrix, JSON nested array")->required();
    sis->add_option("--b-file", sis_opts.b_file, "group contact tensor, JSON nested array");
    sis->add_option("--h", sis_opts.h, "sampling step")->required();
    sis->add_option("--name", sis_opts.name, "name for the emitted config");
    sis->add_option("--out", sis_opts.out_file, "write the config here instead of stdout");

    std::vector<const char*> argv;
    argv.push_back("hyperstab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        if (*analyze) return do_analyze(analyze_opts, out);
        if (*eig) return do_eig(eig_opts, out);
        if (*sim) return do_simulate(sim_opts, out);
        if (*sample) return do_sample_region(sample_opts, out);
        if (*control) return do_control(control_opts, out);
        if (*sis) return do_sis(sis_opts, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConditionError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace hyperstab::cli
