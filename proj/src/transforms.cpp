#include "quadineq/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "quadineq/mollify.hpp"

namespace quadineq {

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void require_nonneg(double x, const char* op) {
    if (!(x >= 0.0))
        throw domain_error(std::string(op) + ": negative or non-finite input x=" +
                           fmt_num(x));
}

}  // namespace

struct Transform::Impl {
    TransformKind kind{};
    double p1 = 0.0;  // alpha, delta, or the constant's value
    int moll_n = 0;
    int moll_order = 64;
    Transform base;  // mollified only
    std::vector<std::pair<double, Transform>> parts;  // sum only
    std::string name;
    Claims claims;
    int smoothness = 0;
};

const Transform::Impl& Transform::impl() const {
    if (!impl_) throw domain_error("transform: used before construction");
    return *impl_;
}

Transform Transform::power(double alpha) {
    if (!(alpha > 0.0)) throw domain_error("power: alpha must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::power;
    impl->p1 = alpha;
    impl->name = "power(" + fmt_num(alpha) + ")";
    impl->claims = {true, alpha >= 1.0, alpha >= 1.0 && alpha <= 2.0, true};
    impl->smoothness = 3;
    return Transform(std::move(impl));
}

Transform Transform::huber(double delta) {
    if (!(delta > 0.0)) throw domain_error("huber: delta must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::huber;
    impl->p1 = delta;
    impl->name = "huber(" + fmt_num(delta) + ")";
    impl->claims = {true, true, true, true};
    impl->smoothness = 1;  // kink at delta: no closed second derivative
    return Transform(std::move(impl));
}

Transform Transform::pseudo_huber(double delta) {
    if (!(delta > 0.0)) throw domain_error("pseudo_huber: delta must be positive");
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::pseudo_huber;
    impl->p1 = delta;
    impl->name = "pseudo_huber(" + fmt_num(delta) + ")";
    impl->claims = {true, true, true, true};
    impl->smoothness = 3;
    return Transform(std::move(impl));
}

Transform Transform::log_cosh() {
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::log_cosh;
    impl->name = "log_cosh";
    impl->claims = {true, true, true, true};
    impl->smoothness = 3;
    return Transform(std::move(impl));
}

Transform Transform::linear() {
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::linear;
    impl->name = "linear";
    impl->claims = {true, true, true, true};
    impl->smoothness = 3;
    return Transform(std::move(impl));
}

Transform Transform::constant(double value) {
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::constant;
    impl->p1 = value;
    impl->name = "constant(" + fmt_num(value) + ")";
    impl->claims = {true, true, true, value == 0.0};
    impl->smoothness = 3;
    return Transform(std::move(impl));
}

Transform Transform::weighted_sum(
    std::vector<std::pair<double, Transform>> parts) {
    if (parts.empty()) throw domain_error("weighted_sum: no terms");
    bool all_zero = true;
    for (auto& [w, t] : parts) {
        if (!(w >= 0.0)) throw domain_error("weighted_sum: negative weight");
        if (!t.valid()) throw domain_error("weighted_sum: empty term");
        if (w != 0.0) all_zero = false;
    }
    if (all_zero) return Transform::constant(0.0);
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::sum;
    impl->claims = {true, true, true, true};
    impl->smoothness = 3;
    std::string name;
    for (auto& [w, t] : parts) {
        const Claims& c = t.claims();
        impl->claims.nondecreasing &= c.nondecreasing;
        impl->claims.convex &= c.convex;
        impl->claims.concave_derivative &= c.concave_derivative;
        impl->claims.zero_at_zero &= (c.zero_at_zero || w == 0.0);
        impl->smoothness = std::min(impl->smoothness, t.smoothness_order());
        if (!name.empty()) name += "+";
        name += fmt_num(w) + "*" + t.name();
    }
    impl->name = std::move(name);
    impl->parts = std::move(parts);
    return Transform(std::move(impl));
}

Transform Transform::mollified(const Transform& base, int n,
                               int quadrature_order) {
    const Claims& c = base.claims();
    if (!(c.nondecreasing && c.convex && c.concave_derivative))
        throw domain_error("mollify: base transform does not claim membership");
    if (n < 1) throw domain_error("mollify: n must be >= 1");
    if (quadrature_order < 8) throw domain_error("mollify: quadrature order too small");
    moll::validate_quadrature(base, n, quadrature_order);
    auto impl = std::make_shared<Impl>();
    impl->kind = TransformKind::mollified;
    impl->moll_n = n;
    impl->moll_order = quadrature_order;
    impl->base = base;
    impl->name = "mollified(" + base.name() + ",n=" + std::to_string(n) + ")";
    impl->claims = c;  // smoothing preserves the class
    impl->smoothness = 1;
    return Transform(std::move(impl));
}

Transform mollify(const Transform& t, int n, int quadrature_order) {
    return Transform::mollified(t, n, quadrature_order);
}

Transform scale_and_add(const Transform& t1, double a1, const Transform& t2,
                        double a2) {
    if (!(a1 >= 0.0) || !(a2 >= 0.0))
        throw domain_error("scale_and_add: weights must be nonnegative");
    return Transform::weighted_sum({{a1, t1}, {a2, t2}});
}

double Transform::eval(double x) const {
    require_nonneg(x, "eval");
    const Impl& im = impl();
    switch (im.kind) {
        case TransformKind::power:
            return std::pow(x, im.p1);
        case TransformKind::huber: {
            double d = im.p1;
            return x <= d ? 0.5 * x * x : d * (x - 0.5 * d);
        }
        case TransformKind::pseudo_huber: {
            double u = x / im.p1, t = u * u;
            // delta^2*(sqrt(1+t)-1) without cancellation for small t
            return im.p1 * im.p1 * t / (std::sqrt(1.0 + t) + 1.0);
        }
        case TransformKind::log_cosh:
            return x + std::log1p(std::exp(-2.0 * x)) - M_LN2;
        case TransformKind::linear:
            return x;
        case TransformKind::constant:
            return im.p1;
        case TransformKind::sum: {
            double acc = 0.0;
            for (auto& [w, t] : im.parts) acc += w * t.eval(x);
            return acc;
        }
        case TransformKind::mollified:
            return moll::mollified_eval(im.base, im.moll_n, im.moll_order, x,
                                        im.base.eval(0.0));
    }
    throw domain_error("eval: unknown transform kind");
}

long double Transform::eval_ld(long double x) const {
    const Impl& im = impl();
    switch (im.kind) {
        case TransformKind::power:
            return powl(x, static_cast<long double>(im.p1));
        case TransformKind::huber: {
            long double d = im.p1;
            return x <= d ? 0.5L * x * x : d * (x - 0.5L * d);
        }
        case TransformKind::pseudo_huber: {
            long double dd = im.p1;
            long double u = x / dd, t = u * u;
            return dd * dd * t / (sqrtl(1.0L + t) + 1.0L);
        }
        case TransformKind::log_cosh:
            return x + log1pl(expl(-2.0L * x)) - 0.693147180559945309417232L;
        case TransformKind::linear:
            return x;
        case TransformKind::constant:
            return im.p1;
        case TransformKind::sum: {
            long double acc = 0.0L;
            for (auto& [w, t] : im.parts) acc += static_cast<long double>(w) * t.eval_ld(x);
            return acc;
        }
        case TransformKind::mollified:
            return eval(static_cast<double>(x));
    }
    throw domain_error("eval_ld: unknown transform kind");
}

long double Transform::deriv1_ld(long double x) const {
    const Impl& im = impl();
    switch (im.kind) {
        case TransformKind::power: {
            long double al = im.p1;
            return al * powl(x, al - 1.0L);
        }
        case TransformKind::huber:
            return x < im.p1 ? x : static_cast<long double>(im.p1);
        case TransformKind::pseudo_huber: {
            long double u = x / im.p1;
            return x / sqrtl(1.0L + u * u);
        }
        case TransformKind::log_cosh:
            return tanhl(x);
        case TransformKind::linear:
            return 1.0L;
        case TransformKind::constant:
            return 0.0L;
        case TransformKind::sum: {
            long double acc = 0.0L;
            for (auto& [w, t] : im.parts) acc += static_cast<long double>(w) * t.deriv1_ld(x);
            return acc;
        }
        case TransformKind::mollified:
            return deriv(static_cast<double>(x), 1);
    }
    throw domain_error("deriv1_ld: unknown transform kind");
}

namespace {

double power_deriv(double alpha, double x, int order) {
    double coeff = alpha;
    for (int k = 1; k < order; ++k) coeff *= alpha - k;
    if (coeff == 0.0) return 0.0;  // exact polynomial cutoff
    return coeff * std::pow(x, alpha - order);
}

}  // namespace

double Transform::deriv(double x, int order, bool fd_fallback) const {
    require_nonneg(x, "deriv");
    if (order < 1 || order > 3)
        throw domain_error("deriv: order must be 1, 2, or 3");
    const Impl& im = impl();

    if (order > im.smoothness) {
        if (!fd_fallback)
            throw capability_error("deriv: " + im.name +
                                   " has no closed-form derivative of order " +
                                   std::to_string(order));
        // Nested central differences, one-sided at the domain edge.
        double h = std::cbrt(std::numeric_limits<double>::epsilon()) *
                   std::fmax(1.0, std::fabs(x));
        auto lower = [&](double y) {
            return order == 1 ? eval(y) : deriv(y, order - 1, true);
        };
        if (x - h >= 0.0) return (lower(x + h) - lower(x - h)) / (2.0 * h);
        return (-3.0 * lower(x) + 4.0 * lower(x + h) - lower(x + 2.0 * h)) /
               (2.0 * h);
    }

    switch (im.kind) {
        case TransformKind::power:
            return power_deriv(im.p1, x, order);
        case TransformKind::huber:
            return std::fmin(x, im.p1);  // order == 1 only
        case TransformKind::pseudo_huber: {
            double d = im.p1, u = x / d, w = 1.0 + u * u;
            if (order == 1) return x / std::sqrt(w);
            if (order == 2) return std::pow(w, -1.5);
            return -3.0 * x / (d * d) * std::pow(w, -2.5);
        }
        case TransformKind::log_cosh: {
            double th = std::tanh(x), sech2 = 1.0 - th * th;
            if (order == 1) return th;
            if (order == 2) return sech2;
            return -2.0 * th * sech2;
        }
        case TransformKind::linear:
            return order == 1 ? 1.0 : 0.0;
        case TransformKind::constant:
            return 0.0;
        case TransformKind::sum: {
            double acc = 0.0;
            for (auto& [w, t] : im.parts) acc += w * t.deriv(x, order, fd_fallback);
            return acc;
        }
        case TransformKind::mollified:
            return moll::mollified_deriv1(im.base, im.moll_n, im.moll_order, x);
    }
    throw domain_error("deriv: unknown transform kind");
}

const std::string& Transform::name() const { return impl().name; }
TransformKind Transform::kind() const { return impl().kind; }
const Claims& Transform::claims() const { return impl().claims; }
int Transform::smoothness_order() const { return impl().smoothness; }

std::vector<double> Transform::breakpoints() const {
    const Impl& im = impl();
    switch (im.kind) {
        case TransformKind::huber:
            return {im.p1};
        case TransformKind::sum: {
            std::vector<double> out;
            for (auto& [w, t] : im.parts) {
                (void)w;
                auto bp = t.breakpoints();
                out.insert(out.end(), bp.begin(), bp.end());
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        }
        default:
            return {};
    }
}

// Limit of f along x_k = 4^{-k}, accelerated by Aitken's delta-squared so
// slowly decaying power tails still stabilize.
namespace {

template <typename F>
double descending_limit(F&& f, const std::string& what) {
    constexpr int kmax = 120;
    double v[3] = {0, 0, 0};
    double prev_w = 0.0;
    int have = 0, stable = 0;
    for (int k = 0; k <= kmax; ++k) {
        double x = std::ldexp(1.0, -2 * k);
        v[0] = v[1];
        v[1] = v[2];
        v[2] = f(x);
        if (!std::isfinite(v[2]))
            throw numeric_error("extend_zero: non-finite sample in " + what);
        if (++have < 3) continue;
        double d1 = v[1] - v[0], d2 = v[2] - v[1];
        double denom = d2 - d1;
        double w = std::fabs(denom) > 1e-300 ? v[2] - d2 * d2 / denom : v[2];
        if (have > 3 &&
            std::fabs(w - prev_w) <= 1e-9 * std::fmax(1.0, std::fabs(w))) {
            if (++stable >= 2) return w;
        } else {
            stable = 0;
        }
        prev_w = w;
    }
    throw numeric_error("extend_zero: sequence did not stabilize for " + what);
}

}  // namespace

std::pair<double, double> Transform::extend_zero() const {
    double tau0 = descending_limit([&](double x) { return eval(x); },
                                   name() + " (value)");
    double dtau0 = descending_limit([&](double x) { return deriv(x, 1); },
                                    name() + " (derivative)");
    return {tau0, dtau0};
}

std::vector<double> Transform::eval_grid(const std::vector<double>& xs) const {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        require_nonneg(xs[i], "eval_grid");
        if (i > 0 && xs[i] < xs[i - 1])
            throw domain_error("eval_grid: grid must be sorted ascending");
    }
    const Impl& im = impl();
    if (im.kind == TransformKind::mollified)
        return moll::mollified_eval_grid(im.base, im.moll_n, im.moll_order, xs,
                                         im.base.eval(0.0));
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval(xs[i]);
    return out;
}

nlohmann::json Transform::to_json() const {
    const Impl& im = impl();
    nlohmann::json j;
    switch (im.kind) {
        case TransformKind::power:
            j["kind"] = "power";
            j["alpha"] = im.p1;
            break;
        case TransformKind::huber:
            j["kind"] = "huber";
            j["delta"] = im.p1;
            break;
        case TransformKind::pseudo_huber:
            j["kind"] = "pseudo_huber";
            j["delta"] = im.p1;
            break;
        case TransformKind::log_cosh:
            j["kind"] = "log_cosh";
            break;
        case TransformKind::linear:
            j["kind"] = "linear";
            break;
        case TransformKind::constant:
            j["kind"] = "constant";
            j["value"] = im.p1;
            break;
        case TransformKind::sum: {
            j["kind"] = "sum";
            auto weights = nlohmann::json::array();
            auto terms = nlohmann::json::array();
            for (auto& [w, t] : im.parts) {
                weights.push_back(w);
                terms.push_back(t.to_json());
            }
            j["weights"] = std::move(weights);
            j["terms"] = std::move(terms);
            break;
        }
        case TransformKind::mollified:
            j["kind"] = "mollified";
            j["n"] = im.moll_n;
            j["quadrature_order"] = im.moll_order;
            j["base"] = im.base.to_json();
            break;
    }
    return j;
}

Transform Transform::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw domain_error("transform JSON: missing \"kind\"");
    const std::string kind = j["kind"];
    auto num = [&](const char* key) -> double {
        if (!j.contains(key) || !j[key].is_number())
            throw domain_error("transform JSON: " + kind + " requires numeric \"" +
                               key + "\"");
        return j[key].get<double>();
    };
    if (kind == "power") return Transform::power(num("alpha"));
    if (kind == "huber")
        return Transform::huber(j.contains("delta") ? num("delta") : 1.0);
    if (kind == "pseudo_huber")
        return Transform::pseudo_huber(j.contains("delta") ? num("delta") : 1.0);
    if (kind == "log_cosh") return Transform::log_cosh();
    if (kind == "linear") return Transform::linear();
    if (kind == "constant") return Transform::constant(num("value"));
    if (kind == "sum") {
        if (!j.contains("terms") || !j.contains("weights") ||
            !j["terms"].is_array() || !j["weights"].is_array() ||
            j["terms"].size() != j["weights"].size())
            throw domain_error(
                "transform JSON: sum requires matching \"terms\" and \"weights\"");
        std::vector<std::pair<double, Transform>> parts;
        for (std::size_t i = 0; i < j["terms"].size(); ++i)
            parts.emplace_back(j["weights"][i].get<double>(),
                               Transform::from_json(j["terms"][i]));
        return Transform::weighted_sum(std::move(parts));
    }
    if (kind == "mollified") {
        int n = j.contains("n") ? j["n"].get<int>() : 1;
        int order =
            j.contains("quadrature_order") ? j["quadrature_order"].get<int>() : 64;
        if (!j.contains("base"))
            throw domain_error("transform JSON: mollified requires \"base\"");
        return Transform::mollified(Transform::from_json(j["base"]), n, order);
    }
    throw domain_error("transform JSON: unknown kind \"" + kind + "\"");
}

Transform Transform::parse(const std::string& text) {
    std::string s = text;
    auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    if (s.empty()) throw domain_error("transform: empty spec");
    if (s.front() == '{') {
        nlohmann::json j = nlohmann::json::parse(s, nullptr, false);
        if (j.is_discarded())
            throw domain_error("transform: malformed JSON spec");
        return from_json(j);
    }
    std::string name = s;
    double arg = std::numeric_limits<double>::quiet_NaN();
    auto paren = s.find('(');
    if (paren != std::string::npos) {
        if (s.back() != ')')
            throw domain_error("transform: malformed spec \"" + s + "\"");
        name = s.substr(0, paren);
        std::string inner = s.substr(paren + 1, s.size() - paren - 2);
        try {
            std::size_t used = 0;
            arg = std::stod(inner, &used);
            if (used != inner.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw domain_error("transform: malformed parameter in \"" + s + "\"");
        }
    }
    bool has_arg = !std::isnan(arg);
    if (name == "power") {
        if (!has_arg) throw domain_error("transform: power requires an exponent");
        return Transform::power(arg);
    }
    if (name == "huber") return Transform::huber(has_arg ? arg : 1.0);
    if (name == "pseudo_huber") return Transform::pseudo_huber(has_arg ? arg : 1.0);
    if (name == "log_cosh") return Transform::log_cosh();
    if (name == "linear") return Transform::linear();
    if (name == "constant") {
        if (!has_arg) throw domain_error("transform: constant requires a value");
        return Transform::constant(arg);
    }
    throw domain_error("transform: unknown spec \"" + s + "\"");
}

MembershipReport check_membership(const Transform& t,
                                  const std::vector<double>& grid,
                                  double rel_tol) {
    if (grid.empty()) throw domain_error("check_membership: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0))
            throw domain_error("check_membership: grid must be strictly positive");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw domain_error("check_membership: grid must be strictly sorted");
    }

    // Interleave midpoints so a mollified transform evaluates everything in
    // one cumulative pass.
    std::vector<double> pts;
    pts.reserve(2 * grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        pts.push_back(grid[i]);
        if (i + 1 < grid.size()) pts.push_back(0.5 * (grid[i] + grid[i + 1]));
    }
    std::vector<double> vals = t.eval_grid(pts);
    std::vector<double> d1(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) d1[i] = t.deriv(pts[i], 1);

    MembershipReport rep;
    auto record = [&](double deficit, double where, bool& flag) {
        if (deficit > rel_tol) flag = false;
        if (deficit > rep.worst_violation) {
            rep.worst_violation = deficit;
            rep.worst_point = where;
        }
    };

    for (std::size_t i = 0; i + 2 < pts.size(); i += 2) {
        double m = pts[i + 1], x1 = pts[i + 2];
        double f0 = vals[i], fm = vals[i + 1], f1 = vals[i + 2];
        double scale =
            std::fmax(1.0, std::fmax(std::fabs(f0), std::fabs(f1)));
        record((f0 - f1) / scale, x1, rep.nondecreasing_ok);
        record((fm - 0.5 * (f0 + f1)) / scale, m, rep.convex_ok);
        double dscale =
            std::fmax(1.0, std::fmax(std::fabs(d1[i]), std::fabs(d1[i + 2])));
        record((0.5 * (d1[i] + d1[i + 2]) - d1[i + 1]) / dscale, m,
               rep.concave_deriv_ok);
    }
    record(std::fabs(t.eval(0.0)), 0.0, rep.zero_at_zero_ok);
    return rep;
}

std::vector<Transform> builtin_s0_transforms() {
    return {Transform::power(1.0),  Transform::power(1.25),
            Transform::power(1.5),  Transform::power(1.75),
            Transform::power(2.0),  Transform::huber(1.0),
            Transform::pseudo_huber(1.0), Transform::log_cosh(),
            Transform::linear()};
}

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw domain_error("log_grid: need 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    return out;
}

}  // namespace quadineq
