#pragma once

// JSON and CSV forms of certificates, reports, transform tables and packing
// samples. Floating-point numbers are written with 17 significant digits.

#include "hypack/certificate.hpp"
#include "hypack/errors.hpp"
#include "hypack/geometry.hpp"
#include "hypack/lpopt.hpp"
#include "hypack/simulator.hpp"
#include "hypack/spherical.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace hypack::io {

using json = nlohmann::ordered_json;

inline constexpr const char* certificate_format = "cert/1";
inline constexpr const char* packing_format = "pack/1";

namespace detail {

inline std::string number(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

inline void write(std::ostringstream& out, const json& j, int indent, int depth) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out << '\n' << std::string(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out << "{}";
                return;
            }
            out << '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out << ',';
                first = false;
                newline(depth + 1);
                out << json(key).dump() << (indent < 0 ? ":" : ": ");
                write(out, value, indent, depth + 1);
            }
            newline(depth);
            out << '}';
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out << "[]";
                return;
            }
            // Numeric arrays stay on one line.
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            out << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out << (flat ? ", " : ",");
                if (!flat) newline(depth + 1);
                write(out, j[i], indent, depth + 1);
            }
            if (!flat) newline(depth);
            out << ']';
            return;
        }
        case json::value_t::number_float:
            out << number(j.get<double>());
            return;
        default:
            out << j.dump();
    }
}

template <typename T>
T field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(std::string("field '") + key + "' has the wrong type");
    }
}

}  // namespace detail

/// Serialized text; indent < 0 gives a single line.
inline std::string dump(const json& j, int indent = 2) {
    std::ostringstream out;
    detail::write(out, j, indent, 0);
    if (indent >= 0) out << '\n';
    return out.str();
}

inline json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write '" + path + "'");
    out << text;
    if (!out) throw InvalidInput("failed writing '" + path + "'");
}

inline json to_json(const Space& s) { return {{"kind", to_string(s.kind())}, {"n", s.dim()}}; }

inline Space space_from_json(const json& j) {
    return Space(parse_space_kind(detail::field<std::string>(j, "kind")), detail::field<int>(j, "n"));
}

inline std::string to_string(Series s) { return s == Series::principal ? "principal" : "complementary"; }

inline json to_json(SpectralParam p) { return {{"series", to_string(p.series)}, {"value", p.value}}; }

inline json to_json(const SpectralGrid& g) {
    return {{"lambda_max", g.lambda_max()},
            {"principal_count", g.principal.size()},
            {"complementary_count", g.complementary.size()}};
}

/// {T, t, f} plus "breaks" when the profile has C0 joints.
inline json profile_json(const RadialProfile& f) {
    json j = {{"T", f.support()},
              {"t", std::vector<double>(f.grid().begin(), f.grid().end())},
              {"f", std::vector<double>(f.values().begin(), f.values().end())}};
    if (const auto b = f.breaks(); !b.empty()) j["breaks"] = b;
    return j;
}

/// cert/1. The optional "spectral" member records the grid the certificate
/// was checked on; readers fall back to the default grid without it.
inline json to_json(const Certificate& c) {
    return {{"format", certificate_format},
            {"space", to_json(c.space)},
            {"r", c.r},
            {"profile", profile_json(c.profile)},
            {"spectral", to_json(c.spectral_grid)},
            {"provenance", c.provenance}};
}

inline Certificate certificate_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInput("certificate must be a JSON object");
    if (detail::field<std::string>(j, "format") != certificate_format)
        throw InvalidInput("unsupported certificate format (expected cert/1)");
    const Space space = space_from_json(detail::field<json>(j, "space"));
    const json profile = detail::field<json>(j, "profile");
    const auto t = detail::field<std::vector<double>>(profile, "t");
    const auto f = detail::field<std::vector<double>>(profile, "f");
    const double T = detail::field<double>(profile, "T");
    if (t.empty() || t.back() != T) throw InvalidInput("profile T must equal the last node");
    const auto breaks = profile.contains("breaks") ? detail::field<std::vector<double>>(profile, "breaks")
                                                   : std::vector<double>{};
    RadialProfile rp(space, t, f, breaks);
    const double r = detail::field<double>(j, "r");
    const std::string provenance = j.contains("provenance") ? detail::field<std::string>(j, "provenance") : "";
    if (!j.contains("spectral")) return Certificate(r, std::move(rp), provenance);
    const json g = j.at("spectral");
    return Certificate(r, std::move(rp),
                       SpectralGrid::uniform(space, detail::field<double>(g, "lambda_max"),
                                             detail::field<std::size_t>(g, "principal_count"),
                                             detail::field<std::size_t>(g, "complementary_count")),
                       provenance);
}

inline json to_json(const VerifyOptions& o) {
    return {{"tol_sign", o.tol_sign},
            {"tol_spec", o.tol_spec},
            {"refinement", o.refinement},
            {"required", o.required == RequiredSeries::principal_only ? "principal" : "principal+complementary"}};
}

inline json to_json(const VerificationReport& r) {
    json sv = json::array(), pv = json::array();
    for (double t : r.sign_violations) sv.push_back(t);
    for (SpectralParam p : r.spectral_violations) pv.push_back(to_json(p));
    auto margin = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"admissible", r.admissible},
            {"sign_margin", margin(r.sign_margin)},
            {"sign_argmax", r.sign_argmax},
            {"spectral_margin", margin(r.spectral_margin)},
            {"spectral_argmin", to_json(r.spectral_argmin)},
            {"principal_margin", margin(r.principal_margin)},
            {"complementary_margin", margin(r.complementary_margin)},
            {"at_one", r.at_one},
            {"lambda_max", r.lambda_max},
            {"sign_points", r.sign_points},
            {"principal_points", r.principal_points},
            {"complementary_points", r.complementary_points},
            {"options", to_json(r.options)},
            {"sign_violations", sv},
            {"spectral_violations", pv}};
}

inline json to_json(const DensityBound& b) {
    return {{"value", b.value}, {"ball_volume", b.ball_volume}, {"f_at_origin", b.f_at_origin}, {"at_one", b.at_one}};
}

inline json to_json(const RepairRound& r) {
    return {{"rows", r.rows},
            {"objective", r.objective},
            {"sign_margin", r.sign_margin},
            {"spectral_margin", r.spectral_margin},
            {"iterations", r.iterations},
            {"added_sign_rows", r.added_sign_rows},
            {"added_spectral_rows", r.added_spectral_rows}};
}

inline json to_json(const TransformTable& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.principal_values.size(); ++i)
        rows.push_back({{"series", "principal"}, {"parameter", t.grid.principal[i]}, {"value", t.principal_values[i]}});
    for (std::size_t i = 0; i < t.complementary_values.size(); ++i)
        rows.push_back(
            {{"series", "complementary"}, {"parameter", t.grid.complementary[i]}, {"value", t.complementary_values[i]}});
    return {{"at_one", t.at_one}, {"values", rows}};
}

/// Columns: series, parameter, value.
inline std::string transform_csv(const TransformTable& t) {
    std::string out = "series,parameter,value\n";
    for (std::size_t i = 0; i < t.principal_values.size(); ++i)
        out += "principal," + detail::number(t.grid.principal[i]) + "," + detail::number(t.principal_values[i]) + "\n";
    for (std::size_t i = 0; i < t.complementary_values.size(); ++i)
        out += "complementary," + detail::number(t.grid.complementary[i]) + "," +
               detail::number(t.complementary_values[i]) + "\n";
    return out;
}

/// pack/1.
inline json to_json(const PackingSample& s) {
    json pts = json::array();
    for (const Point& p : s.points) pts.push_back(p.coords);
    return {{"format", packing_format},
            {"space", to_json(s.space)},
            {"r", s.r},
            {"R", s.window_radius},
            {"seed", s.seed},
            {"process", to_string(s.process)},
            {"lambda", s.proposal_intensity},
            {"points", pts}};
}

inline PackingSample sample_from_json(const json& j) {
    if (detail::field<std::string>(j, "format") != packing_format)
        throw InvalidInput("unsupported packing format (expected pack/1)");
    PackingSample s{space_from_json(detail::field<json>(j, "space")), detail::field<double>(j, "r"),
                    detail::field<double>(j, "R"), {}, detail::field<std::uint64_t>(j, "seed"),
                    ProcessKind::matern_ii, 0.0};
    if (j.contains("process")) s.process = parse_process_kind(detail::field<std::string>(j, "process"));
    if (j.contains("lambda")) s.proposal_intensity = detail::field<double>(j, "lambda");
    for (auto& c : detail::field<std::vector<std::vector<double>>>(j, "points")) {
        Point p{std::move(c)};
        validate(s.space, p);
        s.points.push_back(std::move(p));
    }
    return s;
}

inline json to_json(const DensityEstimate& d) {
    return {{"lower", d.lower}, {"upper", d.upper}, {"intensity_hat", d.intensity_hat}, {"R_obs", d.R_obs}};
}

inline json to_json(const AuditReport& a) {
    return {{"lhs", a.lhs},
            {"diagonal_bound", a.diagonal_bound},
            {"diagonal_allowance", a.diagonal_allowance},
            {"plancherel_floor", a.plancherel_floor},
            {"intensity_hat", a.intensity_hat},
            {"intensity_bound", a.intensity_bound},
            {"slack", a.slack},
            {"points_in_window", a.points_in_window},
            {"passed_diagonal", a.passed_diagonal},
            {"passed_intensity", a.passed_intensity}};
}

inline json to_json(const SeedSummary& s) {
    return {{"mean", s.mean}, {"standard_error", s.standard_error}, {"count", s.count}};
}

/// Columns: bin_left, bin_right, ordered_pair_count.
inline std::string histogram_csv(std::span<const double> edges, std::span<const std::size_t> counts) {
    std::string out = "bin_left,bin_right,ordered_pair_count\n";
    for (std::size_t k = 0; k < counts.size(); ++k)
        out += detail::number(edges[k]) + "," + detail::number(edges[k + 1]) + "," + std::to_string(counts[k]) + "\n";
    return out;
}

}  // namespace hypack::io
