#pragma once

// File formats and canonical serialization.
//
// Spec file (consumed by the CLI):
//
//   { "m": 2,
//     "profile": {"kind": "cosh_power", "alpha": 1.0}
//              | {"kind": "constant", "c": 1.0}
//              | {"kind": "grid", "h_max": 5.0, "log_rho": [...]},
//     "params": { ... optional seeds / grids / tolerances ... } }
//
// Point fragment: {"g": [[re,im], x4 in column order z1,z2,z3,z4],
//                  "z": [re,im], "m": 2}
//
// Reports are emitted as canonical JSON: keys sorted, UTF-8, floats with 17
// significant digits, so a report re-emitted from the same inputs is
// byte-identical and usable as a regression oracle. CSV grids carry a header
// row ("tau,delta" or "x,value") and the same float format.
//
// Matrix literals on the command line are row-major: "a+bi,c+di;e+fi,g+hi".

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qbl/algebra.hpp"
#include "qbl/bundle.hpp"
#include "qbl/profile.hpp"

namespace qbl {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Number and complex formatting / parsing.

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double_strict(std::string_view s, const char* what) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);  // from_chars rejects a leading '+'
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

// Accepts "1.5", "-2", "i", "-i", "2i", "1+2i", "-1.5e-3+0.5i", "3-i".
inline Complex parse_complex(std::string_view input) {
    std::string s;
    s.reserve(input.size());
    for (char ch : input)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("malformed complex literal: empty");

    // split point: a sign that is neither leading nor part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }

    const auto parse_imag = [](std::string_view tok) {
        // tok ends with 'i'; bare sign means unit coefficient
        std::string_view body = tok.substr(0, tok.size() - 1);
        if (body.empty() || body == "+") return 1.0;
        if (body == "-") return -1.0;
        return parse_double_strict(body, "complex literal");
    };

    if (split == std::string::npos) {
        if (s.back() == 'i') return {0.0, parse_imag(s)};
        return {parse_double_strict(s, "complex literal"), 0.0};
    }
    std::string_view re(s.data(), split), im(s.data() + split, s.size() - split);
    if (im.back() != 'i')
        throw std::invalid_argument("malformed complex literal: '" + s + "'");
    return {parse_double_strict(re, "complex literal"), parse_imag(im)};
}

// Row-major "z1,z3;z2,z4".
inline Matrix2 parse_matrix(std::string_view s) {
    std::vector<std::string> rows;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ';') {
            rows.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    if (rows.size() != 2) throw std::invalid_argument("matrix literal must have two ';'-separated rows");
    Complex e[2][2];
    for (int r = 0; r < 2; ++r) {
        const std::string& row = rows[static_cast<std::size_t>(r)];
        const std::size_t comma = row.find(',');
        if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos)
            throw std::invalid_argument("matrix row must have two ','-separated entries");
        e[r][0] = parse_complex(std::string_view(row).substr(0, comma));
        e[r][1] = parse_complex(std::string_view(row).substr(comma + 1));
    }
    return {e[0][0], e[1][0], e[0][1], e[1][1]};
}

// ---------------------------------------------------------------------------
// Canonical JSON writer: sorted keys (nlohmann objects iterate sorted),
// doubles via %.17g.

inline void write_canonical(std::ostream& os, const Json& v) {
    switch (v.type()) {
        case Json::value_t::object: {
            os << '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ',';
                first = false;
                os << Json(it.key()).dump() << ':';
                write_canonical(os, it.value());
            }
            os << '}';
            break;
        }
        case Json::value_t::array: {
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ',';
                write_canonical(os, v[i]);
            }
            os << ']';
            break;
        }
        case Json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) throw std::domain_error("canonical JSON: non-finite number");
            os << format_double(d);
            break;
        }
        default:
            os << v.dump();  // strings, integers, booleans, null
    }
}

inline std::string canonical_json(const Json& v) {
    std::ostringstream os;
    write_canonical(os, v);
    return os.str();
}

inline void write_csv(std::ostream& os, const std::string& header,
                      const std::vector<double>& col_a, const std::vector<double>& col_b) {
    if (col_a.size() != col_b.size()) throw std::invalid_argument("write_csv: column size mismatch");
    os << header << '\n';
    for (std::size_t i = 0; i < col_a.size(); ++i)
        os << format_double(col_a[i]) << ',' << format_double(col_b[i]) << '\n';
}

// ---------------------------------------------------------------------------
// JSON fragments.

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(std::string(what) + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const Matrix2& m) {
    return Json::array({complex_to_json(m.z1), complex_to_json(m.z2), complex_to_json(m.z3),
                        complex_to_json(m.z4)});
}

inline void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> known,
                                const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok)
            throw std::invalid_argument(std::string(where) + ": unknown key '" + it.key() + "'");
    }
}

inline Json profile_to_json(const RhoProfile& p) {
    Json j;
    switch (p.kind) {
        case RhoProfile::Kind::CoshPower:
            j["kind"] = "cosh_power";
            j["alpha"] = p.alpha;
            break;
        case RhoProfile::Kind::Constant:
            j["kind"] = "constant";
            j["c"] = p.value;
            break;
        case RhoProfile::Kind::Grid:
            j["kind"] = "grid";
            j["h_max"] = p.h_max;
            j["log_rho"] = p.log_rho;
            break;
    }
    return j;
}

inline RhoProfile profile_from_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("profile: expected an object");
    if (!j.contains("kind")) throw std::invalid_argument("profile: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cosh_power") {
        reject_unknown_keys(j, {"kind", "alpha"}, "profile");
        if (!j.contains("alpha")) throw std::invalid_argument("profile: missing 'alpha'");
        return RhoProfile::cosh_power(j.at("alpha").get<double>());
    }
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "c"}, "profile");
        if (!j.contains("c")) throw std::invalid_argument("profile: missing 'c'");
        return RhoProfile::constant(j.at("c").get<double>());
    }
    if (kind == "grid") {
        reject_unknown_keys(j, {"kind", "h_max", "log_rho"}, "profile");
        if (!j.contains("h_max")) throw std::invalid_argument("profile: missing 'h_max'");
        if (!j.contains("log_rho")) throw std::invalid_argument("profile: missing 'log_rho'");
        return RhoProfile::grid(j.at("h_max").get<double>(),
                                j.at("log_rho").get<std::vector<double>>());
    }
    throw std::invalid_argument("profile: unknown kind '" + kind + "'");
}

inline BundlePoint point_from_json(const Json& j, std::optional<int> default_m) {
    if (!j.is_object()) throw std::invalid_argument("point: expected an object");
    reject_unknown_keys(j, {"g", "z", "m"}, "point");
    if (!j.contains("g")) throw std::invalid_argument("point: missing 'g'");
    if (!j.contains("z")) throw std::invalid_argument("point: missing 'z'");
    const Json& g = j.at("g");
    if (!g.is_array() || g.size() != 4)
        throw std::invalid_argument("point: 'g' must list 4 entries (column order z1,z2,z3,z4)");
    Matrix2 m{complex_from_json(g[0], "point g"), complex_from_json(g[1], "point g"),
              complex_from_json(g[2], "point g"), complex_from_json(g[3], "point g")};
    int weight;
    if (j.contains("m")) {
        weight = j.at("m").get<int>();
        if (default_m && *default_m != weight)
            throw std::invalid_argument("point: weight disagrees with the spec file");
    } else if (default_m) {
        weight = *default_m;
    } else {
        throw std::invalid_argument("point: missing 'm'");
    }
    return {GroupElement(m), complex_from_json(j.at("z"), "point z"), weight};
}

// ---------------------------------------------------------------------------
// Spec file.

struct Params {
    std::optional<std::uint64_t> seed;
    double h_grid_max = 5.0;
    int h_grid_points = 101;
    double tau_max = 18.0;
    int tau_steps = 360;
    int probe_samples = 2000;
    double probe_radius = 0.05;
    int circle_points = 64;
    double sample_h_max = 3.0;
    double sample_x_max = 2.0;
    double tol_refute = 1e-5;
    double tau_scan_max = 64.0;
    int scan_steps = 2048;
};

struct SpecFile {
    int m = 0;
    RhoProfile profile;
    Params params;
    Json raw;  // as parsed, for digests
};

inline Params params_from_json(const Json& j) {
    Params p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw std::invalid_argument("params: expected an object");
    reject_unknown_keys(j,
                        {"seed", "h_grid_max", "h_grid_points", "tau_max", "tau_steps",
                         "probe_samples", "probe_radius", "circle_points", "h_max", "x_max",
                         "tol_refute", "tau_scan_max", "scan_steps"},
                        "params");
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("h_grid_max")) p.h_grid_max = j.at("h_grid_max").get<double>();
    if (j.contains("h_grid_points")) p.h_grid_points = j.at("h_grid_points").get<int>();
    if (j.contains("tau_max")) p.tau_max = j.at("tau_max").get<double>();
    if (j.contains("tau_steps")) p.tau_steps = j.at("tau_steps").get<int>();
    if (j.contains("probe_samples")) p.probe_samples = j.at("probe_samples").get<int>();
    if (j.contains("probe_radius")) p.probe_radius = j.at("probe_radius").get<double>();
    if (j.contains("circle_points")) p.circle_points = j.at("circle_points").get<int>();
    if (j.contains("h_max")) p.sample_h_max = j.at("h_max").get<double>();
    if (j.contains("x_max")) p.sample_x_max = j.at("x_max").get<double>();
    if (j.contains("tol_refute")) p.tol_refute = j.at("tol_refute").get<double>();
    if (j.contains("tau_scan_max")) p.tau_scan_max = j.at("tau_scan_max").get<double>();
    if (j.contains("scan_steps")) p.scan_steps = j.at("scan_steps").get<int>();
    if (!(p.h_grid_max > 0.0) || p.h_grid_points < 3 || !(p.tau_max > 0.0) || p.tau_steps < 2 ||
        p.probe_samples < 1 || p.circle_points < 16 || !(p.sample_h_max > 0.0) ||
        !(p.sample_x_max > 0.0) || !(p.tau_scan_max > 0.0) || p.scan_steps < 2)
        throw std::invalid_argument("params: grid sizes and bounds must be positive");
    return p;
}

inline SpecFile parse_spec_json(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("spec: expected an object");
    reject_unknown_keys(j, {"m", "profile", "params"}, "spec");
    if (!j.contains("m")) throw std::invalid_argument("spec: missing 'm'");
    if (!j.contains("profile")) throw std::invalid_argument("spec: missing 'profile'");
    SpecFile s;
    s.m = j.at("m").get<int>();
    s.profile = profile_from_json(j.at("profile"));
    s.params = params_from_json(j.contains("params") ? j.at("params") : Json());
    s.raw = j;
    return s;
}

inline SpecFile parse_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read spec file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path + ": " + e.what());
    }
    return parse_spec_json(j);
}

// ---------------------------------------------------------------------------
// Input digest (FNV-1a, 64-bit).

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace qbl
