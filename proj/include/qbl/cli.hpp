#pragma once

// Command-line front end.
//
// Subcommands: decompose, coords, member, certify, delta, witness, curve,
// selftest. Reports go to stdout as canonical JSON (or CSV for grid outputs)
// and are byte-identical across runs for fixed inputs, seed and flags; wall
// time is reported on stderr only. Exit codes: 0 success / CertifiedStein,
// 1 error, 2 RefutedStein, 3 Inconclusive.
//
// The default seed comes from --seed, else the spec file's params.seed, else
// the QBL_SEED environment variable, else 1.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbl/algebra.hpp"
#include "qbl/bundle.hpp"
#include "qbl/certify.hpp"
#include "qbl/mostow.hpp"
#include "qbl/profile.hpp"
#include "qbl/spec_io.hpp"

namespace qbl {

namespace cli_detail {

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag_seed,
                                  const std::optional<std::uint64_t>& spec_seed) {
    if (flag_seed) return *flag_seed;
    if (spec_seed) return *spec_seed;
    if (const char* env = std::getenv("QBL_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::runtime_error("QBL_SEED must be an unsigned integer");
        }
    }
    return 1;
}

inline Json group_to_json(const GroupElement& g) { return matrix_to_json(g.m); }

inline Json convexity_to_json(const ConvexityReport& r) {
    Json j;
    j["passes"] = r.passes;
    j["worst_margin"] = r.worst_margin;
    j["worst_triple"] = Json::array({r.h_lo, r.h_mid, r.h_hi});
    return j;
}

inline Json delta_flags_to_json(const DeltaReport& r) {
    Json j;
    j["monotone"] = r.monotone;
    j["midpoint_convex"] = r.midpoint_convex;
    j["divergent"] = r.divergent;
    j["identically_zero"] = r.identically_zero;
    j["worst_step"] = r.worst_step;
    j["worst_second_diff"] = r.worst_second_diff;
    return j;
}

inline Json probe_to_json(const SubmeanReport& r) {
    Json j;
    j["fn"] = probe_fn_name(r.fn);
    j["samples"] = r.samples;
    j["radius"] = r.radius;
    j["circle_points"] = r.circle_points;
    j["worst_margin"] = r.worst_margin;
    j["worst_site_g"] = group_to_json(r.worst_g);
    j["worst_site_v"] = Json::array({complex_to_json(r.worst_v.a), complex_to_json(r.worst_v.b),
                                     complex_to_json(r.worst_v.c)});
    j["levi_min"] = r.levi_min;
    j["levi_mean"] = r.levi_mean;
    j["levi_max"] = r.levi_max;
    return j;
}

inline double governing_margin(const SteinVerdict& v) {
    switch (v.reason) {
        case SteinReason::LogConvexProfile:
        case SteinReason::LogConvexityViolated:
            return v.convexity.worst_margin;
        case SteinReason::DeltaDecreasing:
            return v.delta ? v.delta->worst_step : 0.0;
        case SteinReason::DeltaConvexIncreasing:
            return v.delta ? v.delta->worst_second_diff : 0.0;
        case SteinReason::NegativeSubmeanMargin:
        case SteinReason::ProbeInconclusive:
            return v.probe ? v.probe->worst_margin : 0.0;
    }
    return 0.0;
}

inline Json verdict_to_json(const SteinVerdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    j["reason"] = to_string(v.reason);
    j["worst_margin"] = governing_margin(v);
    j["convexity"] = convexity_to_json(v.convexity);
    if (v.delta) j["delta"] = delta_flags_to_json(*v.delta);
    if (v.probe) j["probe"] = probe_to_json(*v.probe);
    return j;
}

inline Json witness_to_json(const Witness& w) {
    Json j;
    j["C"] = w.c_bound;
    j["D"] = w.d_bound;
    j["s_bound"] = w.s_bound;
    j["center"] = Json::array({complex_to_json(w.center_z3), complex_to_json(w.center_z4)});
    j["eps"] = w.eps;
    return j;
}

inline CertifyParams certify_params(const SpecFile& spec, std::uint64_t seed) {
    CertifyParams cp;
    cp.seed = seed;
    cp.h_grid_max = spec.params.h_grid_max;
    cp.h_grid_points = spec.params.h_grid_points;
    cp.tau_max = spec.params.tau_max;
    cp.tau_steps = spec.params.tau_steps;
    cp.probe.seed = seed;
    cp.probe.samples = spec.params.probe_samples;
    cp.probe.radius = spec.params.probe_radius;
    cp.probe.circle_points = spec.params.circle_points;
    cp.probe.h_max = spec.params.sample_h_max;
    cp.probe.x_max = spec.params.sample_x_max;
    cp.tol_refute = spec.params.tol_refute;
    return cp;
}

// Report envelope: command echo, digest of the inputs, outputs.
inline void emit_report(std::ostream& out, const std::string& command, const Json& args,
                        const std::string& digest_material, const Json& outputs) {
    Json report;
    report["command"] = command;
    report["args"] = args;
    report["digest"] = hex64(fnv1a64(digest_material));
    report["outputs"] = outputs;
    write_canonical(out, report);
    out << '\n';
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write to " + path);
    f << text;
}

inline int run_selftest(std::ostream& out) {
    int failures = 0;
    const auto check = [&](const char* name, bool ok, const std::string& detail) {
        out << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << '\n';
        if (!ok) ++failures;
    };

    {  // closed-form exponential against a truncated power series
        double worst = 0.0;
        const Sampler s(2024, 1.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const Matrix2 a = (4.0 * s.sampled_h(static_cast<std::uint64_t>(i))) *
                              s.direction(static_cast<std::uint64_t>(i)).realize();
            Matrix2 term = Matrix2::identity(), sum = Matrix2::identity();
            for (int k = 1; k <= 30; ++k) {
                term = (Complex(1.0 / k)) * (term * a);
                sum = sum + term;
            }
            worst = std::max(worst, frobenius_distance(exp_traceless(a).m, sum));
        }
        check("exp_traceless vs series", worst <= 1e-12, "max diff " + format_double(worst));
    }
    {  // decomposition round trip
        double worst = 0.0;
        const Sampler s(7, 3.0, 2.0);
        for (int i = 0; i < 500; ++i) {
            const GroupElement g = s.group(static_cast<std::uint64_t>(i));
            worst = std::max(worst, frobenius_distance(reconstruct(decompose(g)).m, g.m));
        }
        check("mostow round trip", worst <= 1e-9, "max residual " + format_double(worst));
    }
    {  // Ad(W) fixes W and negates C, H
        const Matrix2 w = basis_w();
        const double err = frobenius_distance(w * basis_c() * adjugate(w), Complex(-1.0) * basis_c()) +
                           frobenius_distance(w * basis_h() * adjugate(w), Complex(-1.0) * basis_h()) +
                           frobenius_distance(w * basis_w() * adjugate(w), basis_w());
        check("duality basis images", err <= 1e-15, "total deviation " + format_double(err));
    }
    {  // extremal profile has identically vanishing delta
        const RhoProfile rho = RhoProfile::cosh_power(1.0);
        double worst = 0.0;
        for (double tau : uniform_grid(0.0, 18.0, 181))
            worst = std::max(worst, std::abs(delta(rho, 2, tau)));
        check("extremal delta vanishes", worst <= 1e-12, "max |delta| " + format_double(worst));
    }
    {  // closed-form Levi value 1.0 for log t at the unipotent direction
        const Matrix2 v{0.0, 0.0, 1.0, 0.0};
        const double margin =
            submean_margin(invariant_log_t, GroupElement::identity(), v, 1e-2, 64);
        const double levi = margin / 1e-4;
        check("submean Levi estimate", std::abs(levi - 1.0) <= 1e-3,
              "levi " + format_double(levi));
    }
    {  // certification matrix spot checks
        const SteinVerdict a = certify_stein(RhoProfile::cosh_power(1.0), 2);
        const SteinVerdict b = certify_stein(RhoProfile::cosh_power(0.5), 2);
        check("certify extremal", a.status == SteinStatus::CertifiedStein, to_string(a.status));
        check("refute thin profile", b.status == SteinStatus::RefutedStein, to_string(b.status));
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;

    CLI::App app{"equivariant disc bundles over the affine quadric: decomposition, "
                 "Stein certification, hyperbolicity witnesses"};
    app.require_subcommand(1);

    std::string spec_path, matrix_str, point_path, out_path = "-", format = "csv";
    std::string z3_str = "0", z4_str = "0";
    std::optional<std::uint64_t> flag_seed;
    bool punctured = false, do_check = false;
    double eps = 0.1, x_min = -6.0, x_max_flag = 6.0;
    std::optional<double> tau_max_flag;
    int steps = 0, check_samples = 10000;

    auto* cmd_decompose = app.add_subcommand("decompose", "Mostow-decompose a matrix");
    cmd_decompose->add_option("--matrix", matrix_str, "row-major 'a+bi,c+di;e+fi,g+hi'")
        ->required();

    auto* cmd_coords = app.add_subcommand("coords", "invariant coordinates of a matrix");
    cmd_coords->add_option("--matrix", matrix_str)->required();

    auto* cmd_member = app.add_subcommand("member", "membership of a bundle point");
    cmd_member->add_option("--spec", spec_path)->required();
    cmd_member->add_option("--point", point_path, "point JSON file")->required();
    cmd_member->add_flag("--punctured", punctured, "exclude the zero section");

    auto* cmd_certify = app.add_subcommand("certify", "Stein certification of a spec");
    cmd_certify->add_option("--spec", spec_path)->required();
    cmd_certify->add_option("--seed", flag_seed);
    cmd_certify->add_option("--out", out_path, "output path, '-' for stdout");

    auto* cmd_delta = app.add_subcommand("delta", "delta grid of a spec");
    cmd_delta->add_option("--spec", spec_path)->required();
    cmd_delta->add_option("--tau-max", tau_max_flag);
    cmd_delta->add_option("--steps", steps);
    cmd_delta->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    cmd_delta->add_option("--out", out_path);

    auto* cmd_witness = app.add_subcommand("witness", "hyperbolicity witness constants");
    cmd_witness->add_option("--spec", spec_path)->required();
    cmd_witness->add_option("--z3", z3_str, "fiber center, first coordinate")->required();
    cmd_witness->add_option("--z4", z4_str, "fiber center, second coordinate")->required();
    cmd_witness->add_option("--eps", eps)->required();
    cmd_witness->add_flag("--check", do_check, "rejection-sample the bound");
    cmd_witness->add_option("--samples", check_samples, "spot-check sample count");
    cmd_witness->add_option("--seed", flag_seed);

    auto* cmd_curve = app.add_subcommand("curve", "delta along the distinguished curve");
    cmd_curve->add_option("--spec", spec_path)->required();
    cmd_curve->add_option("--x-min", x_min);
    cmd_curve->add_option("--x-max", x_max_flag);
    cmd_curve->add_option("--steps", steps);
    cmd_curve->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    cmd_curve->add_option("--out", out_path);

    auto* cmd_selftest = app.add_subcommand("selftest", "quick internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (cmd_decompose->parsed()) {
            const GroupElement g{parse_matrix(matrix_str)};
            const MostowFactors f = decompose(g);
            Json o;
            o["u"] = group_to_json(f.u);
            o["h"] = f.h;
            o["zeta"] = complex_to_json(f.zeta);
            o["residual"] = frobenius_distance(reconstruct(f).m, g.m);
            Json args;
            args["matrix"] = matrix_str;
            emit_report(out, "decompose", args, "decompose|" + matrix_str, o);
        } else if (cmd_coords->parsed()) {
            const GroupElement g{parse_matrix(matrix_str)};
            const InvariantCoords c = coords(g);
            Json o;
            o["s"] = c.s;
            o["t"] = c.t;
            o["zeta_modulus"] = zeta_modulus(c);
            o["h"] = radial(c);
            Json args;
            args["matrix"] = matrix_str;
            emit_report(out, "coords", args, "coords|" + matrix_str, o);
        } else if (cmd_member->parsed()) {
            const SpecFile spec = parse_spec(spec_path);
            std::ifstream pf(point_path);
            if (!pf) throw std::runtime_error("cannot read point file: " + point_path);
            const BundlePoint p = point_from_json(Json::parse(pf), spec.m);
            const RhoProfile rho = normalize(spec.profile);
            const Region region = membership(p, rho, punctured);
            Json o;
            o["norm"] = fiber_norm(p, rho);
            o["region"] = region == Region::Interior   ? "interior"
                          : region == Region::Boundary ? "boundary"
                                                       : "exterior";
            Json args;
            args["spec"] = spec_path;
            args["point"] = point_path;
            args["punctured"] = punctured;
            emit_report(out, "member", args,
                        "member|" + canonical_json(spec.raw) + "|" + canonical_json(args), o);
        } else if (cmd_certify->parsed()) {
            const SpecFile spec = parse_spec(spec_path);
            const std::uint64_t seed = resolve_seed(flag_seed, spec.params.seed);
            const RhoProfile rho = normalize(spec.profile);
            const SteinVerdict v = certify_stein(rho, spec.m, certify_params(spec, seed));
            Json args;
            args["spec"] = spec_path;
            args["seed"] = seed;
            std::ostringstream body;
            emit_report(body, "certify", args,
                        "certify|" + canonical_json(spec.raw) + "|" + std::to_string(seed),
                        verdict_to_json(v));
            write_text(out_path, body.str(), out);
            code = v.status == SteinStatus::CertifiedStein ? 0
                   : v.status == SteinStatus::RefutedStein ? 2
                                                           : 3;
        } else if (cmd_delta->parsed()) {
            const SpecFile spec = parse_spec(spec_path);
            const double tau_max = tau_max_flag.value_or(spec.params.tau_max);
            const int n_steps = steps > 0 ? steps : spec.params.tau_steps;
            const RhoProfile rho = normalize(spec.profile);
            const DeltaReport r = delta_report(rho, spec.m, tau_max, n_steps);
            if (format == "csv") {
                std::ostringstream body;
                write_csv(body, "tau,delta", r.tau_grid, r.delta_values);
                write_text(out_path, body.str(), out);
            } else {
                Json o = delta_flags_to_json(r);
                o["tau_grid"] = r.tau_grid;
                o["delta_values"] = r.delta_values;
                Json args;
                args["spec"] = spec_path;
                args["steps"] = n_steps;
                args["tau_max"] = tau_max;
                std::ostringstream body;
                emit_report(body, "delta", args,
                            "delta|" + canonical_json(spec.raw) + "|" + canonical_json(args), o);
                write_text(out_path, body.str(), out);
            }
        } else if (cmd_witness->parsed()) {
            const SpecFile spec = parse_spec(spec_path);
            const std::uint64_t seed = resolve_seed(flag_seed, spec.params.seed);
            const RhoProfile rho = normalize(spec.profile);
            WitnessParams wp;
            wp.tau_scan_max = spec.params.tau_scan_max;
            wp.scan_steps = spec.params.scan_steps;
            const Witness w = hyperbolicity_witness(rho, spec.m, parse_complex(z3_str),
                                                    parse_complex(z4_str), eps, wp);
            Json o = witness_to_json(w);
            if (do_check) {
                const SpotCheckReport rep =
                    witness_spot_check(rho, spec.m, w, seed, check_samples,
                                       spec.params.sample_h_max, spec.params.sample_x_max);
                Json cj;
                cj["requested"] = rep.requested;
                cj["accepted"] = rep.accepted;
                cj["max_s"] = rep.max_s;
                cj["s_allowed"] = rep.s_allowed;
                cj["all_within"] = rep.all_within;
                o["spot_check"] = cj;
                if (!rep.all_within || rep.accepted < rep.requested)
                    throw std::runtime_error("witness spot check failed");
            }
            Json args;
            args["spec"] = spec_path;
            args["z3"] = z3_str;
            args["z4"] = z4_str;
            args["eps"] = eps;
            args["seed"] = seed;
            emit_report(out, "witness", args,
                        "witness|" + canonical_json(spec.raw) + "|" + canonical_json(args), o);
        } else if (cmd_curve->parsed()) {
            const SpecFile spec = parse_spec(spec_path);
            const int n_steps = steps > 0 ? steps : 240;
            const RhoProfile rho = normalize(spec.profile);
            const CurveReport r =
                distinguished_curve(rho, spec.m, uniform_grid(x_min, x_max_flag, n_steps + 1));
            if (format == "csv") {
                std::ostringstream body;
                write_csv(body, "x,value", r.x_grid, r.values);
                write_text(out_path, body.str(), out);
            } else {
                Json o;
                o["x_grid"] = r.x_grid;
                o["values"] = r.values;
                o["midpoint_convex"] = r.midpoint_convex;
                o["worst_second_diff"] = r.worst_second_diff;
                Json args;
                args["spec"] = spec_path;
                args["x_min"] = x_min;
                args["x_max"] = x_max_flag;
                args["steps"] = n_steps;
                std::ostringstream body;
                emit_report(body, "curve", args,
                            "curve|" + canonical_json(spec.raw) + "|" + canonical_json(args), o);
                write_text(out_path, body.str(), out);
            }
        } else if (cmd_selftest->parsed()) {
            code = run_selftest(out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    const auto t1 = std::chrono::steady_clock::now();
    err << "wall_ms="
        << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() << '\n';
    return code;
}

}  // namespace qbl
