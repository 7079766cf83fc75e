// hypack: density bounds for sphere packings in hyperbolic and Euclidean
// space, certificate checks, spherical transforms and packing simulations.
//
// Exit status: 0 success, 1 domain error (infeasible, not admissible),
// 2 usage error, 3 numerical-accuracy error.

#include "hypack/certificate.hpp"
#include "hypack/geometry.hpp"
#include "hypack/io.hpp"
#include "hypack/lpopt.hpp"
#include "hypack/parallel.hpp"
#include "hypack/simulator.hpp"
#include "hypack/spherical.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace hypack;
using io::json;

namespace {

enum Exit { exit_ok = 0, exit_domain = 1, exit_usage = 2, exit_numerical = 3 };

// Signals a finished run whose verdict is a domain failure; the report has
// already been written.
struct DomainVerdict {};

struct Global {
    std::string format = "json";
    bool verbose = false;
    bool deterministic = false;
};

json global_config(const Global& g) {
    return {{"format", g.format}, {"deterministic", g.deterministic}};
}

void note(const Global& g, const std::string& line) {
    if (g.verbose) std::cerr << line << '\n';
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        io::write_text_file(out_path, text);
}

/// Values from --config (a config object or a report embedding one) fill
/// options absent from the command line.
class ConfigFile {
public:
    void load(const std::string& path, const std::string& subcommand) {
        if (path.empty()) return;
        json j = io::read_json_file(path);
        if (j.contains("config")) j = j.at("config");
        if (!j.is_object()) throw InvalidInput("config must be a JSON object");
        if (j.contains("subcommand") && j.at("subcommand") != subcommand)
            throw InvalidInput("config belongs to subcommand " + j.at("subcommand").dump());
        cfg_ = std::move(j);
    }

    template <typename T>
    void fill(const CLI::Option* opt, const char* key, T& target) const {
        if (opt->count() > 0 || !cfg_.contains(key) || cfg_.at(key).is_null()) return;
        try {
            target = cfg_.at(key).get<T>();
        } catch (const json::exception&) {
            throw InvalidInput(std::string("config field '") + key + "' has the wrong type");
        }
    }

    template <typename T>
    void fill(const CLI::Option* opt, const char* key, std::optional<T>& target) const {
        if (opt->count() > 0 || !cfg_.contains(key) || cfg_.at(key).is_null()) return;
        T v{};
        fill(opt, key, v);
        target = v;
    }

private:
    json cfg_ = json::object();
};

template <typename T>
T required(const std::optional<T>& v, const char* flag) {
    if (!v) throw CLI::RequiredError(flag);
    return *v;
}

template <typename T>
json optional_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

struct SpaceArgs {
    std::optional<std::string> kind;
    std::optional<int> dim;
    CLI::Option* kind_opt = nullptr;
    CLI::Option* dim_opt = nullptr;

    void add(CLI::App* app) {
        kind_opt = app->add_option("--space", kind, "hyperbolic or euclidean")
                       ->check(CLI::IsMember({"hyperbolic", "euclidean"}));
        dim_opt = app->add_option("--dim", dim, "dimension n");
    }

    void fill(const ConfigFile& cfg) {
        cfg.fill(kind_opt, "space", kind);
        cfg.fill(dim_opt, "dim", dim);
    }

    Space space() const { return Space(parse_space_kind(required(kind, "--space")), required(dim, "--dim")); }
};

// ---------------------------------------------------------------- bound

struct BoundArgs {
    SpaceArgs space;
    std::optional<double> r, T, lmax;
    std::optional<std::size_t> basis;
    std::optional<std::string> basis_kind;
    std::size_t grid = default_polynomial_grid;
    std::size_t sign_points = 200, principal_points = default_principal_count,
                complementary_points = default_complementary_count, repair_rounds = 5, refine = 8;
    double tol_sign = 1e-9, tol_spec = 1e-8;
    std::string out, cert_out, config;
};

void run_bound(const BoundArgs& a, const Global& g) {
    if (g.format != "json") throw InvalidInput("bound writes JSON only");
    const Space space = a.space.space();
    const double r = required(a.r, "--r");
    OptimizeOptions opt;
    opt.support = a.T;
    opt.basis_size = a.basis;
    if (a.basis_kind) opt.basis_kind = parse_basis_kind(*a.basis_kind);
    opt.lambda_max = a.lmax;
    opt.grid_segments = a.grid;
    opt.sign_points = a.sign_points;
    opt.principal_points = a.principal_points;
    opt.complementary_points = a.complementary_points;
    opt.max_repair_rounds = a.repair_rounds;
    opt.verify.refinement = a.refine;
    opt.verify.tol_sign = a.tol_sign;
    opt.verify.tol_spec = a.tol_spec;
    const ResolvedOptions o = resolve(space, r, opt);

    json config = {{"subcommand", "bound"},
                   {"space", to_string(space.kind())},
                   {"dim", space.dim()},
                   {"r", r},
                   {"T", o.support},
                   {"basis", o.basis_size},
                   {"basis_kind", to_string(o.basis_kind)},
                   {"lmax", o.lambda_max},
                   {"grid", o.grid_segments},
                   {"sign_points", o.sign_points},
                   {"principal_points", o.principal_points},
                   {"complementary_points", a.complementary_points},
                   {"repair_rounds", a.repair_rounds},
                   {"refine", a.refine},
                   {"tol_sign", a.tol_sign},
                   {"tol_spec", a.tol_spec}};
    config.update(global_config(g));

    note(g, "optimizing " + to_string(space.kind()) + " n=" + std::to_string(space.dim()));
    const OptimizationResult res = optimize_bound(space, r, opt);
    json rounds = json::array();
    for (const RepairRound& rr : res.rounds) rounds.push_back(io::to_json(rr));
    json report = {{"format", "bound-report/1"},
                   {"config", config},
                   {"bound", io::to_json(res.bound)},
                   {"verification", io::to_json(res.report)},
                   {"lp",
                    {{"rows", res.rounds.empty() ? 0 : res.rounds.back().rows},
                     {"columns", res.solution.x.size()},
                     {"iterations", res.solution.iterations},
                     {"objective", res.solution.objective},
                     {"residual", res.solution.residual}}},
                   {"rounds", rounds},
                   {"certificate", io::to_json(res.certificate)}};
    if (!g.deterministic) report["seconds"] = res.seconds;
    if (!a.cert_out.empty()) io::write_text_file(a.cert_out, io::dump(io::to_json(res.certificate)));
    emit(a.out, io::dump(report));
    note(g, "bound " + io::detail::number(res.bound.value));
}

// ---------------------------------------------------------------- verify

/// A cert/1 file, or a report that embeds one under "certificate".
Certificate load_certificate(const std::string& path) {
    const json j = io::read_json_file(path);
    if (j.is_object() && !j.contains("profile") && j.contains("certificate"))
        return io::certificate_from_json(j.at("certificate"));
    return io::certificate_from_json(j);
}

struct VerifyArgs {
    std::optional<std::string> cert;
    std::size_t refine = 8;
    double tol_sign = 1e-9, tol_spec = 1e-8;
    std::string series = "all";
    std::string out, config;
};

void run_verify(const VerifyArgs& a, const Global& g) {
    if (g.format != "json") throw InvalidInput("verify writes JSON only");
    const std::string path = required(a.cert, "--cert");
    const Certificate cert = load_certificate(path);
    VerifyOptions vo;
    vo.refinement = a.refine;
    vo.tol_sign = a.tol_sign;
    vo.tol_spec = a.tol_spec;
    vo.required = a.series == "principal" ? RequiredSeries::principal_only : RequiredSeries::principal_and_complementary;
    json config = {{"subcommand", "verify"}, {"cert", path},         {"refine", a.refine},
                   {"tol_sign", a.tol_sign}, {"tol_spec", a.tol_spec}, {"series", a.series}};
    config.update(global_config(g));
    const VerificationReport rep = verify(cert, vo);
    json report = {{"format", "verify-report/1"},
                   {"config", config},
                   {"admissible", rep.admissible},
                   {"verification", io::to_json(rep)},
                   {"bound", rep.admissible ? io::to_json(bound(cert, rep)) : json(nullptr)}};
    emit(a.out, io::dump(report));
    note(g, rep.admissible ? "admissible" : "not admissible");
    if (!rep.admissible) throw DomainVerdict{};
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
    std::optional<std::string> cert, lgrid;
    std::size_t complementary = default_complementary_count;
    std::string out, config;
};

SpectralGrid parse_lgrid(const std::string& spec, const Space& space, std::size_t complementary) {
    const auto a = spec.find(':');
    const auto b = a == std::string::npos ? a : spec.find(':', a + 1);
    if (b == std::string::npos) throw InvalidInput("--lgrid must be start:stop:count");
    double start = 0.0, stop = 0.0;
    long count = 0;
    try {
        std::size_t used = 0;
        start = std::stod(spec.substr(0, a), &used);
        if (used != a) throw std::invalid_argument("start");
        stop = std::stod(spec.substr(a + 1, b - a - 1), &used);
        if (used != b - a - 1) throw std::invalid_argument("stop");
        count = std::stol(spec.substr(b + 1), &used);
        if (used != spec.size() - b - 1) throw std::invalid_argument("count");
    } catch (const std::exception&) {
        throw InvalidInput("--lgrid must be start:stop:count");
    }
    if (count < 1 || !(start >= 0.0) || !(stop >= start) || (count == 1 && stop != start))
        throw InvalidInput("--lgrid needs 0 <= start <= stop and count >= 1");
    SpectralGrid g;
    for (long k = 0; k < count; ++k)
        g.principal.push_back(count == 1 ? start
                                         : start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1));
    g.principal.back() = stop;
    if (space.is_hyperbolic())
        for (std::size_t j = 1; j <= complementary; ++j)
            g.complementary.push_back(space.rho() * static_cast<double>(j) / static_cast<double>(complementary));
    validate(space, g);
    return g;
}

void run_transform(const TransformArgs& a, const Global& g) {
    const std::string path = required(a.cert, "--cert");
    const std::string spec = required(a.lgrid, "--lgrid");
    const Certificate cert = load_certificate(path);
    const SpectralGrid grid = parse_lgrid(spec, cert.space, a.complementary);
    const TransformTable table = forward_transform(cert.profile, grid);
    if (g.format == "csv") {
        emit(a.out, io::transform_csv(table));
        return;
    }
    json config = {{"subcommand", "transform"}, {"cert", path}, {"lgrid", spec}, {"complementary", a.complementary}};
    config.update(global_config(g));
    emit(a.out, io::dump({{"format", "transform-report/1"},
                          {"config", config},
                          {"space", io::to_json(cert.space)},
                          {"transform", io::to_json(table)}}));
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    SpaceArgs space;
    std::optional<double> r, lambda, R, robs, window;
    std::optional<std::string> seeds, cert;
    std::string process = "matern-ii";
    double slack = default_audit_slack;
    std::size_t bins = 50;
    std::optional<double> hist_max;
    bool points = false;
    std::string out, config;
};

std::pair<std::uint64_t, std::uint64_t> parse_seeds(const std::string& s) {
    const auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            const auto v = std::stoull(s);
            return {v, v};
        }
        const auto a = std::stoull(s.substr(0, dots)), b = std::stoull(s.substr(dots + 2));
        if (b < a) throw std::invalid_argument("order");
        return {a, b};
    } catch (const std::exception&) {
        throw InvalidInput("--seeds must be A..B with A <= B");
    }
}

struct SeedResult {
    explicit SeedResult(PackingSample s) : sample(std::move(s)) {}

    PackingSample sample;
    double intensity = 0.0;
    DensityEstimate density{};
    SeparationCheck separation;
    std::optional<AuditReport> audit;
    std::vector<std::size_t> histogram;
};

void run_simulate(const SimulateArgs& a, const Global& g) {
    const Space space = a.space.space();
    const double r = required(a.r, "--r"), lambda = required(a.lambda, "--lambda"), R = required(a.R, "--R");
    const auto [first, last] = parse_seeds(required(a.seeds, "--seeds"));
    const ProcessKind process = parse_process_kind(a.process);
    if (process == ProcessKind::poisson && r != 0.0) throw InvalidInput("poisson samples need --r 0");
    const double robs = a.robs.value_or(R - r);
    std::optional<Certificate> cert;
    std::optional<VerificationReport> rep;
    double window = 0.0;
    if (a.cert) {
        cert = load_certificate(*a.cert);
        if (!(cert->space == space)) throw InvalidInput("certificate lives in another space");
        window = a.window.value_or(R - cert->support());
        note(g, "verifying certificate");
        rep = verify(*cert);
        if (!rep->admissible) throw ContractViolation("certificate is not admissible; audit refused");
    }
    const double hist_max = a.hist_max.value_or(std::min(R, 4.0 * std::max(r, 0.25)));
    if (a.bins < 1) throw InvalidInput("--bins must be >= 1");
    std::vector<double> edges;
    for (std::size_t k = 0; k <= a.bins; ++k)
        edges.push_back(hist_max * static_cast<double>(k) / static_cast<double>(a.bins));

    json config = {{"subcommand", "simulate"},
                   {"space", to_string(space.kind())},
                   {"dim", space.dim()},
                   {"r", r},
                   {"lambda", lambda},
                   {"R", R},
                   {"seeds", std::to_string(first) + ".." + std::to_string(last)},
                   {"process", a.process},
                   {"robs", robs},
                   {"cert", a.cert ? json(*a.cert) : json(nullptr)},
                   {"window", a.cert ? json(window) : json(nullptr)},
                   {"slack", a.slack},
                   {"bins", a.bins},
                   {"hist_max", hist_max},
                   {"points", a.points}};
    config.update(global_config(g));

    const std::size_t count = static_cast<std::size_t>(last - first) + 1;
    std::vector<std::optional<SeedResult>> results(count);
    note(g, "sampling " + std::to_string(count) + " seeds");
    parallel_for(count, [&](std::size_t i) {
        const std::uint64_t seed = first + i;
        SeedResult& out = results[i].emplace(process == ProcessKind::matern_ii
                                                            ? sample_matern(space, r, lambda, R, seed)
                                                            : sample_poisson(space, lambda, R, seed));
        out.intensity = estimate_intensity(out.sample, process == ProcessKind::poisson ? R : interior_radius(out.sample));
        out.density = estimate_density(out.sample, robs);
        out.separation = check_separation(out.sample);
        if (cert) out.audit = audit_proof_chain(out.sample, *cert, *rep, window, a.slack);
        out.histogram = distance_histogram(out.sample, edges);
    });

    std::vector<std::size_t> hist(a.bins, 0);
    for (const auto& s : results)
        for (std::size_t k = 0; k < a.bins; ++k) hist[k] += s->histogram[k];
    if (g.format == "csv") {
        emit(a.out, io::histogram_csv(edges, hist));
        return;
    }

    json samples = json::array(), packings = json::array();
    std::vector<double> intensity, lower, upper;
    std::size_t separated = 0, diag = 0, inten = 0;
    for (const auto& slot : results) {
        const SeedResult& s = *slot;
        json item = {{"seed", s.sample.seed},
                     {"points", s.sample.size()},
                     {"intensity_hat", s.intensity},
                     {"density", io::to_json(s.density)},
                     {"separation_passed", s.separation.passed()},
                     {"close_pairs", s.separation.close_pairs}};
        if (s.audit) {
            item["audit"] = io::to_json(*s.audit);
            diag += s.audit->passed_diagonal;
            inten += s.audit->passed_intensity;
        }
        samples.push_back(item);
        if (a.points) packings.push_back(io::to_json(s.sample));
        intensity.push_back(s.intensity);
        lower.push_back(s.density.lower);
        upper.push_back(s.density.upper);
        separated += s.separation.passed();
    }
    json summary = {{"seeds", count},
                    {"intensity_hat", io::to_json(summarize(intensity))},
                    {"density_lower", io::to_json(summarize(lower))},
                    {"density_upper", io::to_json(summarize(upper))},
                    {"separation_passed", separated}};
    if (process == ProcessKind::matern_ii) summary["matern_intensity"] = matern_intensity(space, r, lambda);
    if (cert) {
        summary["audit_passed_diagonal"] = diag;
        summary["audit_passed_intensity"] = inten;
        summary["certificate_bound"] = io::to_json(bound(*cert, *rep));
    }
    json report = {{"format", "simulate-report/1"}, {"config", config}, {"summary", summary}, {"samples", samples}};
    json hj = json::array();
    for (std::size_t k = 0; k < a.bins; ++k) hj.push_back({edges[k], edges[k + 1], hist[k]});
    report["histogram"] = hj;
    if (a.points) report["packings"] = packings;
    emit(a.out, io::dump(report));
}

// ---------------------------------------------------------------- volume

struct VolumeArgs {
    SpaceArgs space;
    std::optional<double> radius;
    std::string out, config;
};

void run_volume(const VolumeArgs& a, const Global& g) {
    const Space space = a.space.space();
    const double radius = required(a.radius, "--radius");
    const double v = ball_volume(space, radius);
    std::cout << io::detail::number(v) << '\n';
    if (a.out.empty()) return;
    json config = {{"subcommand", "volume"}, {"space", to_string(space.kind())}, {"dim", space.dim()}, {"radius", radius}};
    config.update(global_config(g));
    io::write_text_file(a.out, io::dump({{"format", "volume-report/1"}, {"config", config}, {"volume", v}}));
}

int run(int argc, char** argv) {
    CLI::App app{"hypack: linear-programming density bounds for sphere packings"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("-v,--verbose", g.verbose, "progress on stderr");
    app.add_flag("--deterministic", g.deterministic, "omit wall-clock fields so reruns match bit for bit");

    BoundArgs ba;
    auto* bound_cmd = app.add_subcommand("bound", "optimize an LP certificate and report its density bound");
    ba.space.add(bound_cmd);
    auto* b_r = bound_cmd->add_option("--r", ba.r, "packing radius");
    auto* b_T = bound_cmd->add_option("--T", ba.T, "profile support");
    auto* b_basis = bound_cmd->add_option("--basis", ba.basis, "basis size");
    auto* b_kind = bound_cmd->add_option("--basis-kind", ba.basis_kind, "spline or polynomial")
                       ->check(CLI::IsMember({"spline", "polynomial"}));
    auto* b_lmax = bound_cmd->add_option("--lmax", ba.lmax, "principal-series cutoff");
    auto* b_grid = bound_cmd->add_option("--grid", ba.grid, "profile segments (polynomial basis)");
    auto* b_sign = bound_cmd->add_option("--sign-points", ba.sign_points, "sign abscissae on [2r, T]");
    auto* b_prin = bound_cmd->add_option("--principal-points", ba.principal_points, "principal abscissae");
    auto* b_comp = bound_cmd->add_option("--complementary-points", ba.complementary_points, "complementary abscissae");
    auto* b_rounds = bound_cmd->add_option("--repair-rounds", ba.repair_rounds, "repair round cap");
    auto* b_refine = bound_cmd->add_option("--refine", ba.refine, "verification refinement");
    auto* b_ts = bound_cmd->add_option("--tol-sign", ba.tol_sign, "sign tolerance");
    auto* b_tp = bound_cmd->add_option("--tol-spec", ba.tol_spec, "spectral tolerance");
    bound_cmd->add_option("--out", ba.out, "report path (default stdout)");
    bound_cmd->add_option("--cert-out", ba.cert_out, "certificate path");
    bound_cmd->add_option("--config", ba.config, "JSON config or report");

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "check a certificate file");
    auto* v_cert = verify_cmd->add_option("--cert", va.cert, "certificate path");
    auto* v_refine = verify_cmd->add_option("--refine", va.refine, "refinement factor");
    auto* v_ts = verify_cmd->add_option("--tol-sign", va.tol_sign, "sign tolerance");
    auto* v_tp = verify_cmd->add_option("--tol-spec", va.tol_spec, "spectral tolerance");
    auto* v_series = verify_cmd->add_option("--series", va.series, "all or principal")
                         ->check(CLI::IsMember({"all", "principal"}));
    verify_cmd->add_option("--out", va.out, "report path (default stdout)");
    verify_cmd->add_option("--config", va.config, "JSON config or report");

    TransformArgs ta;
    auto* transform_cmd = app.add_subcommand("transform", "spherical transform of a certificate profile");
    auto* t_cert = transform_cmd->add_option("--cert", ta.cert, "certificate path");
    auto* t_lgrid = transform_cmd->add_option("--lgrid", ta.lgrid, "principal grid start:stop:count");
    auto* t_comp = transform_cmd->add_option("--complementary", ta.complementary, "complementary abscissae");
    transform_cmd->add_option("--out", ta.out, "output path (default stdout)");
    transform_cmd->add_option("--config", ta.config, "JSON config or report");

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "sample hard-sphere packings and estimate density");
    sa.space.add(simulate_cmd);
    auto* s_r = simulate_cmd->add_option("--r", sa.r, "packing radius");
    auto* s_lambda = simulate_cmd->add_option("--lambda", sa.lambda, "proposal intensity");
    auto* s_R = simulate_cmd->add_option("--R", sa.R, "window radius");
    auto* s_seeds = simulate_cmd->add_option("--seeds", sa.seeds, "seed range A..B");
    auto* s_cert = simulate_cmd->add_option("--cert", sa.cert, "certificate for the proof-chain audit");
    auto* s_process = simulate_cmd->add_option("--process", sa.process, "matern-ii or poisson")
                          ->check(CLI::IsMember({"matern-ii", "poisson"}));
    auto* s_robs = simulate_cmd->add_option("--robs", sa.robs, "density observation radius (default R - r)");
    auto* s_window = simulate_cmd->add_option("--window", sa.window, "audit window radius (default R - T)");
    auto* s_slack = simulate_cmd->add_option("--slack", sa.slack, "intensity audit slack");
    auto* s_bins = simulate_cmd->add_option("--bins", sa.bins, "distance histogram bins");
    auto* s_hmax = simulate_cmd->add_option("--hist-max", sa.hist_max, "histogram range");
    auto* s_points = simulate_cmd->add_flag("--points", sa.points, "embed pack/1 samples in the report");
    simulate_cmd->add_option("--out", sa.out, "output path (default stdout)");
    simulate_cmd->add_option("--config", sa.config, "JSON config or report");

    VolumeArgs wa;
    auto* volume_cmd = app.add_subcommand("volume", "volume of a metric ball");
    wa.space.add(volume_cmd);
    auto* w_radius = volume_cmd->add_option("--radius", wa.radius, "ball radius");
    volume_cmd->add_option("--out", wa.out, "report path");
    volume_cmd->add_option("--config", wa.config, "JSON config or report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        ConfigFile cfg;
        if (bound_cmd->parsed()) {
            cfg.load(ba.config, "bound");
            ba.space.fill(cfg);
            cfg.fill(b_r, "r", ba.r);
            cfg.fill(b_T, "T", ba.T);
            cfg.fill(b_basis, "basis", ba.basis);
            cfg.fill(b_kind, "basis_kind", ba.basis_kind);
            cfg.fill(b_lmax, "lmax", ba.lmax);
            cfg.fill(b_grid, "grid", ba.grid);
            cfg.fill(b_sign, "sign_points", ba.sign_points);
            cfg.fill(b_prin, "principal_points", ba.principal_points);
            cfg.fill(b_comp, "complementary_points", ba.complementary_points);
            cfg.fill(b_rounds, "repair_rounds", ba.repair_rounds);
            cfg.fill(b_refine, "refine", ba.refine);
            cfg.fill(b_ts, "tol_sign", ba.tol_sign);
            cfg.fill(b_tp, "tol_spec", ba.tol_spec);
            run_bound(ba, g);
        } else if (verify_cmd->parsed()) {
            cfg.load(va.config, "verify");
            cfg.fill(v_cert, "cert", va.cert);
            cfg.fill(v_refine, "refine", va.refine);
            cfg.fill(v_ts, "tol_sign", va.tol_sign);
            cfg.fill(v_tp, "tol_spec", va.tol_spec);
            cfg.fill(v_series, "series", va.series);
            run_verify(va, g);
        } else if (transform_cmd->parsed()) {
            cfg.load(ta.config, "transform");
            cfg.fill(t_cert, "cert", ta.cert);
            cfg.fill(t_lgrid, "lgrid", ta.lgrid);
            cfg.fill(t_comp, "complementary", ta.complementary);
            run_transform(ta, g);
        } else if (simulate_cmd->parsed()) {
            cfg.load(sa.config, "simulate");
            sa.space.fill(cfg);
            cfg.fill(s_r, "r", sa.r);
            cfg.fill(s_lambda, "lambda", sa.lambda);
            cfg.fill(s_R, "R", sa.R);
            cfg.fill(s_seeds, "seeds", sa.seeds);
            cfg.fill(s_cert, "cert", sa.cert);
            cfg.fill(s_process, "process", sa.process);
            cfg.fill(s_robs, "robs", sa.robs);
            cfg.fill(s_window, "window", sa.window);
            cfg.fill(s_slack, "slack", sa.slack);
            cfg.fill(s_bins, "bins", sa.bins);
            cfg.fill(s_hmax, "hist_max", sa.hist_max);
            cfg.fill(s_points, "points", sa.points);
            run_simulate(sa, g);
        } else {
            cfg.load(wa.config, "volume");
            wa.space.fill(cfg);
            cfg.fill(w_radius, "radius", wa.radius);
            run_volume(wa, g);
        }
    } catch (const DomainVerdict&) {
        return exit_domain;
    } catch (const CLI::RequiredError& e) {
        std::cerr << "hypack: missing required option " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidInput& e) {
        std::cerr << "hypack: " << e.what() << '\n';
        return exit_usage;
    } catch (const NumericalError& e) {
        std::cerr << "hypack: numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const OptimizationFailed& e) {
        std::cerr << "hypack: " << e.what() << " (sign margin " << e.sign_margin() << ", spectral margin "
                  << e.spectral_margin() << ")\n";
        return exit_domain;
    } catch (const Error& e) {
        std::cerr << "hypack: " << e.what() << '\n';
        return exit_domain;
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "hypack: " << e.what() << '\n';
        return exit_numerical;
    }
}
