#include "quadineq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quadineq {

namespace {

constexpr double kRadicandFloor = -1e-12;  // clamp window for fp noise

double clamped_sqrt(double radicand) {
    if (radicand >= 0.0) return std::sqrt(radicand);
    if (radicand >= kRadicandFloor) return 0.0;
    throw construction_error(
        "four_point: cosine radicand " + std::to_string(radicand) +
            " below the clamp window",
        3);
}

void require_cosine(double v, const char* nm) {
    if (!(v >= -1.0 && v <= 1.0))
        throw domain_error(std::string("cosine ") + nm +
                           " must lie in [-1,1]");
}

void require_length(double v, const char* nm) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw domain_error(std::string("length ") + nm +
                           " must be finite and nonnegative");
}

}  // namespace

QuadConfig exchanged(const QuadConfig& cfg) {
    return {cfg.yq, cfg.zq, cfg.yp, cfg.zp, cfg.yz, cfg.qp};
}

nlohmann::json config_to_json(const QuadConfig& cfg) {
    return {{"yq", cfg.yq}, {"yp", cfg.yp}, {"zq", cfg.zq},
            {"zp", cfg.zp}, {"qp", cfg.qp}, {"yz", cfg.yz}};
}

QuadConfig config_from_json(const nlohmann::json& j) {
    QuadConfig cfg;
    for (auto [key, dst] :
         {std::pair<const char*, double*>{"yq", &cfg.yq}, {"yp", &cfg.yp},
          {"zq", &cfg.zq}, {"zp", &cfg.zp}, {"qp", &cfg.qp}, {"yz", &cfg.yz}}) {
        if (!j.contains(key) || !j[key].is_number())
            throw domain_error(std::string("config JSON: missing numeric \"") +
                               key + "\"");
        *dst = j[key].get<double>();
    }
    return cfg;
}

nlohmann::json param_to_json(const ParamFour& p) {
    return {{"a", p.a}, {"b", p.b}, {"c", p.c},
            {"r", p.r}, {"s", p.s}, {"t", p.t}};
}

ParamFour param_from_json(const nlohmann::json& j) {
    ParamFour p;
    for (auto [key, dst] :
         {std::pair<const char*, double*>{"a", &p.a}, {"b", &p.b},
          {"c", &p.c}, {"r", &p.r}, {"s", &p.s}, {"t", &p.t}}) {
        if (!j.contains(key) || !j[key].is_number())
            throw domain_error(std::string("param JSON: missing numeric \"") +
                               key + "\"");
        *dst = j[key].get<double>();
    }
    return p;
}

std::array<double, 3> three_point(double a, double b, double s) {
    require_length(a, "a");
    require_length(b, "b");
    require_cosine(s, "s");
    double radicand = a * a + b * b - 2.0 * s * a * b;
    double yq = radicand > 0.0 ? std::sqrt(radicand) : 0.0;
    return {a, b, yq};
}

ConstraintReport check_param_constraints(const ParamFour& p) {
    require_length(p.a, "a");
    require_length(p.b, "b");
    require_length(p.c, "c");
    require_cosine(p.r, "r");
    require_cosine(p.s, "s");
    require_cosine(p.t, "t");
    const double a = p.a, b = p.b, c = p.c, r = p.r, s = p.s, t = p.t;
    double root_r = std::sqrt(std::fmax(0.0, a * a - 2.0 * r * a * b + b * b));
    double root_s = std::sqrt(std::fmax(0.0, c * c - 2.0 * s * c * b + b * b));
    double root_t = std::sqrt(std::fmax(0.0, a * a - 2.0 * t * a * c + c * c));

    // Deltas (rhs - lhs) of the three feasibility inequalities; each encodes
    // one triangle inequality among yz, yq, zq.
    double deltas[3] = {
        b * b - r * a * b - s * c * b + root_r * root_s + t * a * c,
        c * c - t * a * c - s * c * b + root_t * root_s + r * a * b,
        a * a - r * a * b - t * a * c + root_r * root_t + s * c * b,
    };

    ConstraintReport rep;
    rep.margin = deltas[0];
    rep.worst_index = 0;
    for (int i = 1; i < 3; ++i)
        if (deltas[i] < rep.margin) {
            rep.margin = deltas[i];
            rep.worst_index = i;
        }
    double scale = std::fmax(1.0, a * a + b * b + c * c);
    rep.ok = rep.margin >= -1e-9 * scale;
    return rep;
}

QuadConfig four_point(const ParamFour& p) {
    ConstraintReport rep = check_param_constraints(p);
    if (!rep.ok)
        throw construction_error(
            "four_point: feasibility constraint " +
                std::to_string(rep.worst_index) + " violated by margin " +
                std::to_string(rep.margin),
            rep.worst_index);
    const double a = p.a, b = p.b, c = p.c;
    QuadConfig cfg;
    cfg.zp = a;
    cfg.yp = c;
    cfg.qp = b;
    cfg.yz = clamped_sqrt(a * a + c * c - 2.0 * p.t * a * c);
    cfg.yq = clamped_sqrt(c * c + b * b - 2.0 * p.s * c * b);
    cfg.zq = clamped_sqrt(a * a + b * b - 2.0 * p.r * a * b);
    return cfg;
}

ParamFour param_from_config(const QuadConfig& cfg) {
    ParamFour p;
    p.a = cfg.zp;
    p.c = cfg.yp;
    p.b = cfg.qp;
    auto cosine = [](double u, double v, double opp, const char* nm) {
        double denom = 2.0 * u * v;
        if (denom <= 0.0)
            throw domain_error(std::string("param_from_config: cosine ") + nm +
                               " indeterminate (zero side product)");
        return std::clamp((u * u + v * v - opp * opp) / denom, -1.0, 1.0);
    };
    p.t = cosine(p.a, p.c, cfg.yz, "t");
    p.s = cosine(p.c, p.b, cfg.yq, "s");
    p.r = cosine(p.a, p.b, cfg.zq, "r");
    return p;
}

MetricReport validate_metric(const QuadConfig& cfg) {
    MetricReport rep;
    rep.margin = std::numeric_limits<double>::infinity();
    const char* names[6] = {"yq", "yp", "zq", "zp", "qp", "yz"};
    auto d = cfg.as_array();

    auto record = [&](double slack, std::string label) {
        if (slack < rep.margin) {
            rep.margin = slack;
            rep.worst = std::move(label);
        }
    };

    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(d[i])) {
            rep.ok = false;
            rep.margin = -std::numeric_limits<double>::infinity();
            rep.worst = std::string(names[i]) + " non-finite";
            return rep;
        }
        record(d[i], std::string(names[i]) + ">=0");
    }

    // Triples: (side index, side index, side index) into as_array order
    // yq yp zq zp qp yz.
    struct Triple {
        int i, j, k;  // sides of one triangle
    };
    const Triple triples[4] = {
        {0, 1, 4},  // y,q,p: yq, yp, qp
        {5, 1, 3},  // y,z,p: yz, yp, zp
        {5, 0, 2},  // y,z,q: yz, yq, zq
        {2, 3, 4},  // z,q,p: zq, zp, qp
    };
    for (const Triple& tr : triples) {
        int idx[3] = {tr.i, tr.j, tr.k};
        double scale = std::fmax(
            1.0, std::fmax(d[tr.i], std::fmax(d[tr.j], d[tr.k])));
        for (int who = 0; who < 3; ++who) {
            int u = idx[who], v = idx[(who + 1) % 3], w = idx[(who + 2) % 3];
            double slack = d[v] + d[w] - d[u];
            record(slack / scale, std::string(names[u]) + "<=" + names[v] +
                                      "+" + names[w]);
        }
    }
    rep.ok = rep.margin >= -1e-9;
    return rep;
}

QuadConfig config_from_euclidean_points(const std::vector<double>& y,
                                        const std::vector<double>& z,
                                        const std::vector<double>& q,
                                        const std::vector<double>& p) {
    std::size_t d = y.size();
    if (d == 0 || z.size() != d || q.size() != d || p.size() != d)
        throw domain_error("euclidean points: dimensions must match and be >= 1");
    auto dist = [&](const std::vector<double>& u, const std::vector<double>& v) {
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            if (!std::isfinite(u[i]) || !std::isfinite(v[i]))
                throw domain_error("euclidean points: non-finite coordinate");
            acc += sqr(u[i] - v[i]);
        }
        return std::sqrt(acc);
    };
    QuadConfig cfg;
    cfg.yq = dist(y, q);
    cfg.yp = dist(y, p);
    cfg.zq = dist(z, q);
    cfg.zp = dist(z, p);
    cfg.qp = dist(q, p);
    cfg.yz = dist(y, z);
    return cfg;
}

namespace {

struct FamilySpec {
    const char* name;
    std::vector<std::pair<std::string, double>> defaults;
};

const std::vector<FamilySpec>& family_specs() {
    static const std::vector<FamilySpec> specs = {
        {"square", {{"x", 1.0}}},
        {"kite", {{"eps", 0.5}}},
        {"triple_line", {{"u", 1.0}}},
        {"collinear_gap", {{"u", 1.0}, {"v", 2.0}, {"eps", 0.25}}},
        {"collinear_sum", {{"u", 1.0}, {"v", 2.0}, {"eps", 0.25}}},
        {"rectangle_eps", {{"eps", 0.5}}},
        {"degenerate_pair", {{"a", 1.0}}},
    };
    return specs;
}

double get_param(const WitnessFamily& w, const std::string& key,
                 double fallback) {
    auto it = w.params.find(key);
    return it == w.params.end() ? fallback : it->second;
}

void require_positive(double v, const std::string& family,
                      const std::string& key) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw domain_error("witness " + family + ": parameter " + key +
                           " must be positive");
}

}  // namespace

std::vector<std::string> witness_family_names() {
    std::vector<std::string> out;
    for (const auto& f : family_specs()) out.emplace_back(f.name);
    return out;
}

std::vector<std::pair<std::string, double>> witness_default_params(
    const std::string& family) {
    for (const auto& f : family_specs())
        if (family == f.name) return f.defaults;
    throw domain_error("witness: unknown family \"" + family + "\"");
}

QuadConfig witness_config(const WitnessFamily& w) {
    auto defaults = witness_default_params(w.family);
    for (const auto& [key, value] : w.params) {
        (void)value;
        bool known = false;
        for (const auto& [dk, dv] : defaults) {
            (void)dv;
            known |= (dk == key);
        }
        if (!known)
            throw domain_error("witness " + w.family + ": unknown parameter " +
                               key);
    }
    auto p = [&](const char* key) {
        for (const auto& [dk, dv] : defaults)
            if (dk == key) {
                double v = get_param(w, dk, dv);
                require_positive(v, w.family, dk);
                return v;
            }
        throw domain_error("witness " + w.family + ": missing parameter " + key);
    };

    if (w.family == "square") {
        double x = p("x");
        double side = x / std::sqrt(2.0);
        return {side, side, side, side, x, x};
    }
    if (w.family == "kite") {
        double eps = p("eps");
        if (eps > std::sqrt(2.0))
            throw domain_error("witness kite: eps must lie in (0, sqrt(2)]");
        double sin_th = 1.0 - 0.5 * eps * eps;
        double cos_th = std::sqrt(std::fmax(0.0, 1.0 - sin_th * sin_th));
        return config_from_euclidean_points(
            {0.0, 1.0}, {0.0, 0.0},
            {-std::sqrt(3.0) / 2.0, 0.5}, {cos_th, sin_th});
    }
    if (w.family == "triple_line") {
        double u = p("u");
        return {u, 0.5 * u, 0.0, 0.5 * u, 0.5 * u, u};
    }
    if (w.family == "collinear_gap") {
        double u = p("u"), v = p("v"), eps = p("eps");
        return {u,
                std::fabs(u - eps),
                v,
                std::fabs(v - eps),
                eps,
                std::fabs(u - v)};
    }
    if (w.family == "collinear_sum") {
        double u = p("u"), v = p("v"), eps = p("eps");
        return {u, std::fabs(u - eps), v, v + eps, eps, u + v};
    }
    if (w.family == "rectangle_eps") {
        double eps = p("eps");
        double diag = std::sqrt(1.0 + eps * eps);
        return {diag, 1.0, 1.0, diag, eps, eps};
    }
    if (w.family == "degenerate_pair") {
        double a = p("a");
        return {a, 0.0, 0.0, a, a, a};
    }
    throw domain_error("witness: unknown family \"" + w.family + "\"");
}

nlohmann::json witness_to_json(const WitnessFamily& w) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : w.params) params[key] = value;
    return {{"family", w.family}, {"params", params}};
}

WitnessFamily witness_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw domain_error("witness JSON: missing \"family\"");
    WitnessFamily w;
    w.family = j["family"];
    if (j.contains("params")) {
        if (!j["params"].is_object())
            throw domain_error("witness JSON: \"params\" must be an object");
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            if (!it.value().is_number())
                throw domain_error("witness JSON: parameter " + it.key() +
                                   " must be numeric");
            w.params[it.key()] = it.value().get<double>();
        }
    }
    return w;
}

}  // namespace quadineq
