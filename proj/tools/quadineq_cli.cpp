// Command-line front end: inequality verification over config corpora,
// constant searches, witness evaluation, lemma sampling, mollification,
// Frechet means and convergence-rate experiments.  Every report embeds a
// run manifest so results can be reproduced from the file alone.
//
// Exit codes: 0 all checks passed, 1 a violation or failed computation,
// 2 usage or input error.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>
#include <json.hpp>

#include "quadineq/common.hpp"
#include "quadineq/constants.hpp"
#include "quadineq/frechet.hpp"
#include "quadineq/geometry.hpp"
#include "quadineq/inequalities.hpp"
#include "quadineq/lemmas.hpp"
#include "quadineq/mollify.hpp"
#include "quadineq/report.hpp"
#include "quadineq/rng.hpp"
#include "quadineq/transforms.hpp"

namespace qi = quadineq;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------- helpers

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Command line as recorded in the manifest.  The worker-thread flag is
// elided: results are independent of it by contract, and reports should be
// byte-identical across thread counts.
std::string command_line(int argc, char** argv) {
    std::string out;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--threads") {
            if (i + 1 < argc) ++i;
            continue;
        }
        if (a.rfind("--threads=", 0) == 0) continue;
        if (!out.empty()) out += ' ';
        out += a;
    }
    return out;
}

// Builds a transform from --transform plus the numeric conveniences.
// Accepts a builtin name (combined with --alpha / --delta), a spec string
// like "power(1.5)", inline JSON, or "@file" holding a JSON spec.
qi::Transform make_transform(const std::string& spec, double alpha,
                             double delta) {
    std::string s = trim(spec);
    if (!s.empty() && s[0] == '@') {
        std::ifstream in(s.substr(1));
        if (!in)
            throw qi::domain_error("cannot read transform file: " + s.substr(1));
        std::ostringstream buf;
        buf << in.rdbuf();
        s = buf.str();
    }
    if (s == "power") return qi::Transform::power(alpha);
    if (s == "huber") return qi::Transform::huber(delta);
    if (s == "pseudo_huber") return qi::Transform::pseudo_huber(delta);
    return qi::Transform::parse(s);
}

// Reads a numeric CSV.  Blank lines and '#' comments are skipped, one
// leading header line is tolerated, every other non-numeric cell is a hard
// error.  expected_cols == 0 accepts any (uniform) width.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path,
                                                  std::size_t expected_cols) {
    std::ifstream in(path);
    if (!in) throw qi::domain_error("cannot open input file: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t cols = expected_cols;
    bool saw_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;

        std::vector<double> vals;
        bool ok = true;
        std::size_t pos = 0;
        while (true) {
            std::size_t comma = s.find(',', pos);
            std::string cell = trim(s.substr(
                pos, comma == std::string::npos ? std::string::npos
                                                : comma - pos));
            char* end = nullptr;
            const char* c = cell.c_str();
            double v = std::strtod(c, &end);
            if (cell.empty() || end != c + cell.size()) {
                ok = false;
                break;
            }
            vals.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!ok) {
            if (!saw_data) continue;  // header line
            throw qi::domain_error("malformed CSV row at line " +
                                   std::to_string(lineno) + " of " + path);
        }
        saw_data = true;
        if (cols == 0) cols = vals.size();
        if (vals.size() != cols)
            throw qi::domain_error("expected " + std::to_string(cols) +
                                   " columns at line " + std::to_string(lineno) +
                                   " of " + path);
        for (double v : vals)
            if (!std::isfinite(v))
                throw qi::domain_error("non-finite value at line " +
                                       std::to_string(lineno) + " of " + path);
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw qi::domain_error("no data rows in " + path);
    return rows;
}

std::string fd(double x) { return qi::format_double(x); }

// ------------------------------------------------------------ common flags

struct Common {
    std::string transform = "power";
    double alpha = 2.0;
    double delta = 1.0;
    unsigned long long seed = 42;
    std::string format;
    std::string output;
    int threads = 0;
    std::string timestamp = "unset";
};

void add_common(CLI::App* cmd, Common& c, const char* default_format) {
    c.format = default_format;
    cmd->add_option("--transform", c.transform,
                    "transform: builtin name, spec like power(1.5), JSON, or @file");
    cmd->add_option("--alpha", c.alpha, "exponent used by --transform power");
    cmd->add_option("--delta", c.delta,
                    "scale used by --transform huber / pseudo_huber");
    cmd->add_option("--seed", c.seed, "seed of the deterministic RNG streams");
    cmd->add_option("--format", c.format, "report format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output", c.output, "output path (default: stdout)");
    cmd->add_option("--threads", c.threads,
                    "OpenMP worker count (0 keeps the runtime default)");
    cmd->add_option("--timestamp", c.timestamp,
                    "timestamp recorded in the manifest (default: unset)");
}

void apply_threads(const Common& c) {
#ifdef _OPENMP
    if (c.threads > 0) omp_set_num_threads(c.threads);
#else
    (void)c;
#endif
}

qi::RunManifest make_manifest(int argc, char** argv, const Common& c,
                              json transform_json,
                              std::vector<std::pair<std::string, double>> tols) {
    qi::RunManifest m;
    m.command = command_line(argc, argv);
    m.transform = std::move(transform_json);
    m.seed = c.seed;
    m.tolerances = std::move(tols);
    m.output_path = c.output;
    m.timestamp = c.timestamp;
    return m;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
    std::string check = "quadtran";
    std::string corpus = "euclidean";
    std::string input;
    long long n = 10000;
    double L = 2.0;
};

std::vector<qi::QuadConfig> euclidean_corpus(long long n,
                                             unsigned long long seed) {
    if (n < 1) throw qi::domain_error("--n must be positive");
    std::vector<qi::QuadConfig> cfgs(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        auto rng = qi::stream_at(seed, static_cast<unsigned long long>(i));
        std::vector<std::vector<double>> pts(4);
        for (auto& p : pts)
            p = {rng.next_normal(), rng.next_normal(), rng.next_normal()};
        cfgs[static_cast<std::size_t>(i)] =
            qi::config_from_euclidean_points(pts[0], pts[1], pts[2], pts[3]);
    }
    return cfgs;
}

int run_verify(int argc, char** argv, const Common& c, const VerifyOpts& o) {
    const bool needs_transform =
        o.check == "quadtran" || o.check == "symmetric";
    qi::Transform t;
    if (needs_transform) t = make_transform(c.transform, c.alpha, c.delta);

    std::vector<qi::QuadConfig> cfgs;
    if (!o.input.empty()) {
        for (const auto& row : read_numeric_csv(o.input, 6)) {
            qi::QuadConfig cfg;
            cfg.yq = row[0];
            cfg.yp = row[1];
            cfg.zq = row[2];
            cfg.zp = row[3];
            cfg.qp = row[4];
            cfg.yz = row[5];
            cfgs.push_back(cfg);
        }
    } else if (o.corpus == "euclidean") {
        cfgs = euclidean_corpus(o.n, c.seed);
    } else {
        throw qi::domain_error("unknown corpus: " + o.corpus);
    }

    std::vector<std::string> rows;
    rows.reserve(cfgs.size());
    json jrows = json::array();
    long long violations = 0;
    for (const auto& cfg : cfgs) {
        qi::CheckResult r;
        if (o.check == "quadtran")
            r = qi::check_quadtran(t, cfg, o.L);
        else if (o.check == "quad2")
            r = qi::check_quad2(cfg);
        else if (o.check == "symmetric")
            r = qi::check_symmetric(t, cfg);
        else if (o.check == "ptolemy")
            r = qi::check_ptolemy(cfg);
        else if (o.check == "roundness")
            r = qi::check_roundness(cfg, c.alpha);
        else
            throw qi::domain_error("unknown check: " + o.check);
        if (!r.holds) ++violations;

        if (c.format == "csv") {
            std::ostringstream row;
            row << fd(cfg.yq) << ',' << fd(cfg.yp) << ',' << fd(cfg.zq) << ','
                << fd(cfg.zp) << ',' << fd(cfg.qp) << ',' << fd(cfg.yz) << ','
                << fd(r.lhs) << ',' << fd(r.rhs) << ',' << fd(r.margin) << ','
                << (r.holds ? "true" : "false");
            rows.push_back(row.str());
        } else {
            json jr = qi::config_to_json(cfg);
            jr["lhs"] = r.lhs;
            jr["rhs"] = r.rhs;
            jr["margin"] = r.margin;
            jr["holds"] = r.holds;
            jrows.push_back(std::move(jr));
        }
    }

    auto m = make_manifest(argc, argv, c,
                           needs_transform ? t.to_json() : json(nullptr), {});
    if (c.format == "csv") {
        qi::emit_csv_report(m, "yq,yp,zq,zp,qp,yz,lhs,rhs,margin,holds", rows,
                            {"checked: " + std::to_string(cfgs.size()),
                             "violations: " + std::to_string(violations)});
    } else {
        json body{{"check", o.check},
                  {"checked", cfgs.size()},
                  {"violations", violations},
                  {"rows", std::move(jrows)}};
        if (o.check == "quadtran") body["L"] = o.L;
        if (o.check == "roundness") body["alpha"] = c.alpha;
        qi::emit_json_report(m, std::move(body));
    }
    return violations > 0 ? 1 : 0;
}

// -------------------------------------------------------------- constants

struct ConstOpts {
    std::string kind = "L";
    std::string normalization = "dtran";
    int resolution = 17;
    double scale = 4.0;
    int refine = 200;
};

int run_constants(int argc, char** argv, const Common& c, const ConstOpts& o) {
    qi::RatioSpec spec;
    spec.kind = qi::ratio_kind_from_string(o.kind);
    spec.normalization = qi::normalization_from_string(o.normalization);
    spec.transform = make_transform(c.transform, c.alpha, c.delta);
    spec.alpha = c.alpha;

    qi::GridSpec grid;
    grid.resolution = o.resolution;
    grid.scale = o.scale;

    qi::SearchReport rep = qi::grid_search(spec, grid, c.seed);
    if (o.refine > 0) rep = qi::refine_local(spec, rep, o.refine);

    auto m = make_manifest(argc, argv, c, spec.transform.to_json(), {});
    if (c.format == "csv") {
        const auto& p = rep.best_params;
        const auto& g = rep.best_config;
        std::ostringstream row;
        row << o.kind << ',' << o.normalization << ',' << fd(spec.alpha) << ','
            << fd(rep.best_ratio) << ',' << fd(p.a) << ',' << fd(p.b) << ','
            << fd(p.c) << ',' << fd(p.r) << ',' << fd(p.s) << ',' << fd(p.t)
            << ',' << fd(g.yq) << ',' << fd(g.yp) << ',' << fd(g.zq) << ','
            << fd(g.zp) << ',' << fd(g.qp) << ',' << fd(g.yz) << ','
            << rep.grid_points_evaluated << ',' << rep.raw_cells << ','
            << rep.refinement_steps;
        qi::emit_csv_report(
            m,
            "kind,normalization,alpha,best_ratio,a,b,c,r,s,t,"
            "yq,yp,zq,zp,qp,yz,grid_points_evaluated,raw_cells,"
            "refinement_steps",
            {row.str()});
    } else {
        json tops = json::array();
        for (const auto& p : rep.top_params) tops.push_back(qi::param_to_json(p));
        json body{{"kind", o.kind},
                  {"normalization", o.normalization},
                  {"alpha", spec.alpha},
                  {"transform", spec.transform.to_json()},
                  {"best_ratio", rep.best_ratio},
                  {"best_params", qi::param_to_json(rep.best_params)},
                  {"best_config", qi::config_to_json(rep.best_config)},
                  {"grid",
                   {{"resolution", rep.grid.resolution}, {"scale", rep.grid.scale}}},
                  {"grid_points_evaluated", rep.grid_points_evaluated},
                  {"raw_cells", rep.raw_cells},
                  {"refinement_steps", rep.refinement_steps},
                  {"top_params", std::move(tops)},
                  {"seed", rep.seed}};
        qi::emit_json_report(m, std::move(body));
    }
    return 0;
}

// -------------------------------------------------------------- witnesses

struct WitnessOpts {
    double u = 1.0;
    double v = 2.0;
    double eps = 0.25;
};

int run_witnesses(int argc, char** argv, const Common& c,
                  const WitnessOpts& o) {
    qi::Transform t = make_transform(c.transform, c.alpha, c.delta);

    struct Line {
        std::string kind, name;
        qi::QuadConfig cfg;
        bool has_cfg = true;
        qi::MetricReport metric;
        qi::CheckResult quad2;
        json extra = json::object();
    };
    std::vector<Line> lines;
    bool all_ok = true;

    for (const auto& family : qi::witness_family_names()) {
        qi::WitnessFamily w;
        w.family = family;
        json params = json::object();
        for (const auto& [pname, value] : qi::witness_default_params(family)) {
            w.params[pname] = value;
            params[pname] = value;
        }
        Line ln;
        ln.kind = "family";
        ln.name = family;
        ln.cfg = qi::witness_config(w);
        ln.metric = qi::validate_metric(ln.cfg);
        ln.quad2 = qi::check_quad2(ln.cfg);
        ln.extra["params"] = std::move(params);
        all_ok = all_ok && ln.metric.ok && ln.quad2.holds;
        lines.push_back(std::move(ln));
    }

    auto bounds = qi::lower_bound_witnesses(t, o.u, o.v, o.eps);
    const char* names[4] = {"witness_i", "witness_ii", "witness_iii",
                            "witness_iv"};
    for (int i = 0; i < 4; ++i) {
        Line ln;
        ln.kind = "lower_bound";
        ln.name = names[i];
        ln.cfg = bounds[static_cast<std::size_t>(i)].config;
        ln.metric = qi::validate_metric(ln.cfg);
        ln.quad2 = qi::check_quad2(ln.cfg);
        const auto& val = bounds[static_cast<std::size_t>(i)].value;
        ln.extra["value"] = val ? json(*val) : json(nullptr);
        all_ok = all_ok && ln.metric.ok && ln.quad2.holds;
        lines.push_back(std::move(ln));
    }
    {
        Line ln;
        ln.kind = "lower_bound";
        ln.name = "unit";
        ln.has_cfg = false;
        ln.extra["value"] = qi::unit_lower_bound(t, o.u);
        ln.extra["quotient"] = qi::unit_lower_bound_quotient(t, o.u, o.eps);
        lines.push_back(std::move(ln));
    }

    auto m = make_manifest(argc, argv, c, t.to_json(), {});
    if (c.format == "csv") {
        std::vector<std::string> rows;
        for (const auto& ln : lines) {
            std::ostringstream row;
            row << ln.kind << ',' << ln.name << ',';
            if (ln.has_cfg) {
                const auto& g = ln.cfg;
                row << fd(g.yq) << ',' << fd(g.yp) << ',' << fd(g.zq) << ','
                    << fd(g.zp) << ',' << fd(g.qp) << ',' << fd(g.yz) << ','
                    << (ln.metric.ok ? "true" : "false") << ','
                    << fd(ln.quad2.margin) << ',';
            } else {
                row << ",,,,,,,,";
            }
            if (ln.extra.contains("value") && ln.extra["value"].is_number())
                row << fd(ln.extra["value"].get<double>());
            rows.push_back(row.str());
        }
        qi::emit_csv_report(
            m, "kind,name,yq,yp,zq,zp,qp,yz,metric_ok,quad2_margin,value",
            rows,
            {"u: " + fd(o.u), "v: " + fd(o.v), "eps: " + fd(o.eps)});
    } else {
        json jfam = json::array(), jlb = json::array();
        for (const auto& ln : lines) {
            json e = ln.extra;
            e["name"] = ln.name;
            if (ln.has_cfg) {
                e["config"] = qi::config_to_json(ln.cfg);
                e["metric_ok"] = ln.metric.ok;
                e["metric_margin"] = ln.metric.margin;
                e["quad2_holds"] = ln.quad2.holds;
                e["quad2_margin"] = ln.quad2.margin;
            }
            (ln.kind == "family" ? jfam : jlb).push_back(std::move(e));
        }
        json body{{"families", std::move(jfam)},
                  {"lower_bounds", std::move(jlb)},
                  {"u", o.u},
                  {"v", o.v},
                  {"eps", o.eps}};
        qi::emit_json_report(m, std::move(body));
    }
    return all_ok ? 0 : 1;
}

// ----------------------------------------------------------------- lemmas

struct LemmaOpts {
    bool all = false;
    std::string id;
    long long n = 10000;
    double tolerance = 1e-8;
    bool transform_given = false;
};

int run_lemmas(int argc, char** argv, const Common& c, const LemmaOpts& o) {
    if (o.all == !o.id.empty())
        throw qi::domain_error("choose exactly one of --all or --id");

    auto registry = qi::lemma_registry();
    std::vector<qi::LemmaInfo> selected;
    if (o.all) {
        selected = registry;
    } else {
        for (const auto& info : registry)
            if (info.id == o.id) selected.push_back(info);
        if (selected.empty()) throw qi::domain_error("unknown lemma: " + o.id);
    }

    std::vector<qi::Transform> transforms;
    if (o.transform_given)
        transforms.push_back(make_transform(c.transform, c.alpha, c.delta));
    else
        transforms = qi::lemma_corpus();

    std::vector<std::string> rows;
    json jrows = json::array();
    long long failures = 0;
    for (const auto& info : selected) {
        for (const auto& t : transforms) {
            if (info.order > t.smoothness_order()) {
                // Requesting a single incompatible pair is an error; an
                // incompatible corpus member is just skipped.
                if (o.transform_given && !o.all)
                    throw qi::capability_error(
                        "lemma " + info.id + " needs derivative order " +
                        std::to_string(info.order) + " beyond transform " +
                        t.name());
                continue;
            }
            qi::SampleReport r = qi::sample_lemma(info.id, t, o.n, c.seed);
            if (r.worst_residual > o.tolerance) ++failures;

            if (c.format == "csv") {
                std::ostringstream inputs;
                for (std::size_t k = 0; k < r.input_names.size(); ++k) {
                    if (k) inputs << ';';
                    inputs << r.input_names[k] << '=' << fd(r.worst_inputs[k]);
                }
                std::ostringstream row;
                row << r.lemma_id << ',' << r.transform_name << ','
                    << info.order << ',' << r.accepted << ',' << r.attempts
                    << ',' << fd(r.worst_residual) << ',' << fd(r.worst_raw)
                    << ',' << inputs.str();
                rows.push_back(row.str());
            } else {
                json inputs = json::object();
                for (std::size_t k = 0; k < r.input_names.size(); ++k)
                    inputs[r.input_names[k]] = r.worst_inputs[k];
                jrows.push_back(json{{"lemma_id", r.lemma_id},
                                     {"transform", r.transform_name},
                                     {"order", info.order},
                                     {"accepted", r.accepted},
                                     {"attempts", r.attempts},
                                     {"worst_residual", r.worst_residual},
                                     {"worst_raw", r.worst_raw},
                                     {"worst_inputs", std::move(inputs)}});
            }
        }
    }

    auto m = make_manifest(
        argc, argv, c,
        o.transform_given ? transforms.front().to_json() : json(nullptr),
        {{"residual", o.tolerance}});
    if (c.format == "csv") {
        qi::emit_csv_report(m,
                            "lemma_id,transform,order,accepted,attempts,"
                            "worst_residual,worst_raw,worst_inputs",
                            rows, {"failures: " + std::to_string(failures)});
    } else {
        json body{{"n", o.n},
                  {"tolerance", o.tolerance},
                  {"failures", failures},
                  {"results", std::move(jrows)}};
        qi::emit_json_report(m, std::move(body));
    }
    return failures > 0 ? 1 : 0;
}

// ---------------------------------------------------------------- mollify

struct MollifyOpts {
    int n = 4;
    int order = 64;
    int points = 33;
    double xmin = 0.01;
    double xmax = 10.0;
};

int run_mollify(int argc, char** argv, const Common& c, const MollifyOpts& o) {
    qi::Transform base = make_transform(c.transform, c.alpha, c.delta);
    qi::moll::validate_quadrature(base, o.n, o.order);
    qi::Transform smooth = qi::mollify(base, o.n, o.order);

    std::vector<double> grid = qi::log_grid(o.xmin, o.xmax, o.points);
    std::vector<double> smooth_vals = smooth.eval_grid(grid);
    std::vector<double> base_vals(grid.size());
    double sup_dist = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        base_vals[i] = base.eval(grid[i]);
        sup_dist = std::fmax(sup_dist, std::fabs(base_vals[i] - smooth_vals[i]));
    }

    qi::MembershipReport mem = qi::check_membership(smooth, grid);
    double base_d1 = base.deriv(1.0, 1, true);
    json scaling =
        base_d1 > 0 ? json(smooth.deriv(1.0, 1) / base_d1) : json(nullptr);

    auto m = make_manifest(argc, argv, c, base.to_json(), {});
    if (c.format == "csv") {
        std::vector<std::string> rows;
        rows.reserve(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            rows.push_back(fd(grid[i]) + "," + fd(base_vals[i]) + "," +
                           fd(smooth_vals[i]));
        qi::emit_csv_report(
            m, "x,base,mollified", rows,
            {"n: " + std::to_string(o.n),
             "quadrature_order: " + std::to_string(o.order),
             "scaling: " + (scaling.is_null() ? "null" : fd(scaling.get<double>())),
             "sup_distance: " + fd(sup_dist),
             std::string("membership_ok: ") + (mem.all_ok() ? "true" : "false")});
    } else {
        json jgrid = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i)
            jgrid.push_back(json{{"x", grid[i]},
                                 {"base", base_vals[i]},
                                 {"mollified", smooth_vals[i]}});
        json body{{"transform", base.to_json()},
                  {"mollified", smooth.to_json()},
                  {"n", o.n},
                  {"quadrature_order", o.order},
                  {"scaling", std::move(scaling)},
                  {"sup_distance", sup_dist},
                  {"membership",
                   {{"nondecreasing_ok", mem.nondecreasing_ok},
                    {"convex_ok", mem.convex_ok},
                    {"concave_deriv_ok", mem.concave_deriv_ok},
                    {"zero_at_zero_ok", mem.zero_at_zero_ok},
                    {"worst_violation", mem.worst_violation},
                    {"worst_point", mem.worst_point}}},
                  {"grid", std::move(jgrid)}};
        qi::emit_json_report(m, std::move(body));
    }
    return mem.all_ok() ? 0 : 1;
}

// ---------------------------------------------------------------- frechet

struct FrechetOpts {
    std::string input;
    int max_iterations = 1000;
    double tolerance = 1e-10;
};

int run_frechet(int argc, char** argv, const Common& c, const FrechetOpts& o) {
    qi::FrechetProblem problem;
    problem.samples = read_numeric_csv(o.input, 0);
    problem.transform = make_transform(c.transform, c.alpha, c.delta);
    problem.solver.max_iterations = o.max_iterations;
    problem.solver.tolerance = o.tolerance;

    qi::FrechetSolution sol = qi::solve_mean(problem);

    auto m = make_manifest(argc, argv, c, problem.transform.to_json(),
                           {{"step", o.tolerance}});
    if (c.format == "csv") {
        std::ostringstream header, row;
        header << "converged,iterations,objective_value";
        row << (sol.converged ? "true" : "false") << ',' << sol.iterations
            << ',' << fd(sol.objective_value);
        for (std::size_t k = 0; k < sol.minimizer.size(); ++k) {
            header << ",m_" << k;
            row << ',' << fd(sol.minimizer[k]);
        }
        qi::emit_csv_report(m, header.str(), {row.str()});
    } else {
        json body{{"n", problem.samples.size()},
                  {"dim", problem.samples.front().size()},
                  {"minimizer", sol.minimizer},
                  {"objective_value", sol.objective_value},
                  {"iterations", sol.iterations},
                  {"converged", sol.converged}};
        qi::emit_json_report(m, std::move(body));
    }
    return sol.converged ? 0 : 1;
}

// ------------------------------------------------------------------- rate

struct RateOpts {
    std::string distribution = "gaussian";
    std::vector<long long> ns = {100, 400, 1600};
    int reps = 16;
};

int run_rate(int argc, char** argv, const Common& c, const RateOpts& o) {
    qi::Transform t = make_transform(c.transform, c.alpha, c.delta);
    qi::RateReport rep =
        qi::rate_experiment(t, o.distribution, o.ns, o.reps, c.seed);

    auto m = make_manifest(argc, argv, c, t.to_json(), {});
    if (c.format == "csv") {
        std::vector<std::string> rows;
        for (const auto& p : rep.points)
            rows.push_back(std::to_string(p.n) + "," + fd(p.mean_error) + "," +
                           fd(p.sd));
        qi::emit_csv_report(m, "n,mean_error,sd", rows,
                            {"slope: " + fd(rep.slope),
                             "runs: " + std::to_string(rep.runs),
                             "failures: " + std::to_string(rep.failures)});
    } else {
        json jpts = json::array();
        for (const auto& p : rep.points)
            jpts.push_back(
                json{{"n", p.n}, {"mean_error", p.mean_error}, {"sd", p.sd}});
        json body{{"distribution", rep.distribution},
                  {"reps", rep.reps},
                  {"runs", rep.runs},
                  {"failures", rep.failures},
                  {"slope", rep.slope},
                  {"points", std::move(jpts)}};
        qi::emit_json_report(m, std::move(body));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadruple inequality toolkit for metric transforms"};
    app.require_subcommand(1);

    Common verify_c, const_c, witness_c, lemma_c, mollify_c, frechet_c, rate_c;
    VerifyOpts verify_o;
    ConstOpts const_o;
    WitnessOpts witness_o;
    LemmaOpts lemma_o;
    MollifyOpts mollify_o;
    FrechetOpts frechet_o;
    RateOpts rate_o;

    CLI::App* verify =
        app.add_subcommand("verify", "check an inequality over a config corpus");
    add_common(verify, verify_c, "csv");
    verify->add_option("--check", verify_o.check, "inequality to check")
        ->check(CLI::IsMember(
            {"quadtran", "quad2", "symmetric", "ptolemy", "roundness"}));
    verify->add_option("--corpus", verify_o.corpus,
                       "random corpus when no --input (euclidean)");
    verify->add_option("--input", verify_o.input,
                       "CSV of configs: yq,yp,zq,zp,qp,yz");
    verify->add_option("--n", verify_o.n, "corpus size");
    verify->add_option("--L", verify_o.L, "constant for --check quadtran");

    CLI::App* constants = app.add_subcommand(
        "constants", "grid search plus local refinement for quadruple constants");
    add_common(constants, const_c, "json");
    constants->add_option("--kind", const_o.kind, "ratio numerator kind")
        ->check(CLI::IsMember({"L", "K", "J"}));
    constants
        ->add_option("--normalization", const_o.normalization,
                     "ratio denominator")
        ->check(CLI::IsMember({"dtran", "power"}));
    constants->add_option("--resolution", const_o.resolution,
                          "grid points per axis");
    constants->add_option("--scale", const_o.scale, "side lengths range (0,scale]");
    constants->add_option("--refine", const_o.refine,
                          "local refinement iterations (0 disables)");

    CLI::App* witnesses = app.add_subcommand(
        "witnesses", "named witness configurations and analytic lower bounds");
    add_common(witnesses, witness_c, "json");
    witnesses->add_option("--u", witness_o.u, "primary scale of the lower bounds");
    witnesses->add_option("--v", witness_o.v, "secondary scale");
    witnesses->add_option("--eps", witness_o.eps, "offset of the audit configs");

    CLI::App* lemmas = app.add_subcommand(
        "lemmas", "sample the numerical lemma suite and report worst residuals");
    add_common(lemmas, lemma_c, "csv");
    lemmas->add_flag("--all", lemma_o.all, "run every registered lemma");
    lemmas->add_option("--id", lemma_o.id, "run a single lemma by id");
    lemmas->add_option("--n", lemma_o.n, "accepted samples per lemma/transform");
    lemmas->add_option("--tolerance", lemma_o.tolerance,
                       "normalized residual gate");

    CLI::App* mollify = app.add_subcommand(
        "mollify", "smooth a transform and audit its class membership");
    add_common(mollify, mollify_c, "json");
    mollify->add_option("--n", mollify_o.n, "mollification index (>= 1)");
    mollify->add_option("--order", mollify_o.order, "quadrature order");
    mollify->add_option("--points", mollify_o.points, "log-grid sample count");
    mollify->add_option("--xmin", mollify_o.xmin, "grid lower end");
    mollify->add_option("--xmax", mollify_o.xmax, "grid upper end");

    CLI::App* frechet = app.add_subcommand(
        "frechet", "minimize the transformed-distance mean over a point cloud");
    add_common(frechet, frechet_c, "json");
    frechet->add_option("--input", frechet_o.input, "CSV of points, one per row")
        ->required();
    frechet->add_option("--max-iterations", frechet_o.max_iterations,
                        "iteration cap");
    frechet->add_option("--tolerance", frechet_o.tolerance,
                        "step-size convergence threshold");

    CLI::App* rate = app.add_subcommand(
        "rate", "empirical convergence rate of the sample mean estimator");
    add_common(rate, rate_c, "csv");
    rate->add_option("--distribution", rate_o.distribution,
                     "sampling distribution")
        ->check(CLI::IsMember({"gaussian", "gaussian_contaminated"}));
    rate->add_option("--n-list", rate_o.ns, "sample sizes, strictly increasing");
    rate->add_option("--reps", rate_o.reps, "repetitions per sample size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (verify->parsed()) {
            apply_threads(verify_c);
            return run_verify(argc, argv, verify_c, verify_o);
        }
        if (constants->parsed()) {
            apply_threads(const_c);
            return run_constants(argc, argv, const_c, const_o);
        }
        if (witnesses->parsed()) {
            apply_threads(witness_c);
            return run_witnesses(argc, argv, witness_c, witness_o);
        }
        if (lemmas->parsed()) {
            apply_threads(lemma_c);
            lemma_o.transform_given = lemmas->count("--transform") > 0;
            return run_lemmas(argc, argv, lemma_c, lemma_o);
        }
        if (mollify->parsed()) {
            apply_threads(mollify_c);
            return run_mollify(argc, argv, mollify_c, mollify_o);
        }
        if (frechet->parsed()) {
            apply_threads(frechet_c);
            return run_frechet(argc, argv, frechet_c, frechet_o);
        }
        if (rate->parsed()) {
            apply_threads(rate_c);
            return run_rate(argc, argv, rate_c, rate_o);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const qi::construction_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qi::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const qi::search_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
