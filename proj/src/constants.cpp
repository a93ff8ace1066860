#include "quadineq/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadineq {

namespace {

constexpr double kSkipDenominator = 1e-12;   // public ratio() contract
constexpr double kSearchDenominator = 1e-8;  // noise guard inside searches
constexpr double kMinSide = 1e-6;            // box floor for refinement
constexpr int kTopCells = 10;

long double denom_ld(const RatioSpec& spec, const QuadConfig& cfg) {
    long double qp = cfg.qp, yz = cfg.yz;
    switch (spec.kind) {
        case RatioKind::L:
            if (spec.normalization == Normalization::dtran)
                return qp * spec.transform.deriv1_ld(yz);
            return qp * powl(yz, static_cast<long double>(spec.alpha) - 1.0L);
        case RatioKind::K:
            if (spec.normalization == Normalization::dtran)
                return spec.transform.eval_ld(sqrtl(qp * yz));
            return powl(qp * yz, static_cast<long double>(spec.alpha) / 2.0L);
        case RatioKind::J:
            if (spec.normalization == Normalization::dtran)
                return spec.transform.eval_ld(qp) + spec.transform.eval_ld(yz);
            return powl(qp, static_cast<long double>(spec.alpha)) +
                   powl(yz, static_cast<long double>(spec.alpha));
    }
    throw domain_error("ratio: unknown kind");
}

long double numer_ld(const RatioSpec& spec, const QuadConfig& cfg) {
    const Transform& t = spec.transform;
    return t.eval_ld(cfg.yq) - t.eval_ld(cfg.yp) - t.eval_ld(cfg.zq) +
           t.eval_ld(cfg.zp);
}

void validate_spec(const RatioSpec& spec) {
    if (!spec.transform.valid())
        throw domain_error("ratio: spec carries no transform");
    if (spec.normalization == Normalization::power &&
        !(spec.alpha > 0.0))
        throw domain_error("ratio: power normalization requires alpha > 0");
    if (spec.kind != RatioKind::L && !spec.transform.claims().zero_at_zero)
        throw domain_error("ratio: kinds K and J require tau(0)=0");
}

// Search-internal objective.  Tighter than the public ratio(): quad2 must
// hold without tolerance and the denominator must clear a larger floor, so
// rounding noise divided by a vanishing denominator cannot fake a supremum.
std::optional<long double> search_ratio(const RatioSpec& spec,
                                        const QuadConfig& cfg) {
    long double q2_lhs = static_cast<long double>(cfg.yq) * cfg.yq -
                         static_cast<long double>(cfg.yp) * cfg.yp -
                         static_cast<long double>(cfg.zq) * cfg.zq +
                         static_cast<long double>(cfg.zp) * cfg.zp;
    if (q2_lhs > 2.0L * cfg.qp * cfg.yz) return std::nullopt;
    long double den = denom_ld(spec, cfg);
    if (!(fabsl(den) >= kSearchDenominator)) return std::nullopt;
    return numer_ld(spec, cfg) / den;
}

struct Candidate {
    long double ratio = -std::numeric_limits<long double>::infinity();
    ParamFour params;
};

std::array<double, 6> param_tuple(const ParamFour& p) {
    return {p.a, p.b, p.c, p.r, p.s, p.t};
}

// Total order making merges independent of evaluation order: higher ratio
// first, ties broken by lexicographically smallest parameter tuple.
bool better(const Candidate& x, const Candidate& y) {
    if (x.ratio != y.ratio) return x.ratio > y.ratio;
    return param_tuple(x.params) < param_tuple(y.params);
}

void push_candidate(std::vector<Candidate>& top, const Candidate& c) {
    if (top.size() >= kTopCells && !better(c, top.back())) return;
    top.push_back(c);
    std::sort(top.begin(), top.end(), better);
    if (top.size() > kTopCells) top.resize(kTopCells);
}

std::optional<Candidate> eval_cell(const RatioSpec& spec, const ParamFour& p) {
    if (!check_param_constraints(p).ok) return std::nullopt;
    QuadConfig cfg;
    try {
        cfg = four_point(p);
    } catch (const construction_error&) {
        return std::nullopt;
    }
    auto r = search_ratio(spec, cfg);
    if (!r) return std::nullopt;
    return Candidate{*r, p};
}

SearchReport finish_report(const GridSpec& grid, unsigned long long seed,
                           const std::vector<Candidate>& top,
                           long long evaluated, long long raw) {
    if (top.empty())
        throw search_error(
            "grid_search: no feasible grid cell produced a ratio");
    SearchReport rep;
    rep.best_ratio = static_cast<double>(top.front().ratio);
    rep.best_params = top.front().params;
    rep.best_config = four_point(rep.best_params);
    rep.grid_points_evaluated = evaluated;
    rep.raw_cells = raw;
    rep.refinement_steps = 0;
    rep.seed = seed;
    rep.grid = grid;
    for (const Candidate& c : top) rep.top_params.push_back(c.params);
    return rep;
}

template <bool Parallel>
SearchReport grid_search_impl(const RatioSpec& spec, const GridSpec& grid,
                              unsigned long long seed) {
    validate_spec(spec);
    if (grid.resolution < 2)
        throw domain_error("grid_search: resolution must be >= 2");
    if (!(grid.scale > 0.0))
        throw domain_error("grid_search: scale must be > 0");

    const int R = grid.resolution;
    std::vector<double> side(R), cosine(R);
    for (int i = 0; i < R; ++i) {
        side[i] = grid.scale * (i + 1) / R;
        cosine[i] = -1.0 + 2.0 * i / (R - 1);
    }
    const long long raw = 1LL * R * R * R * R * R * R;

    std::vector<std::vector<Candidate>> tops;
    long long evaluated = 0;

#ifdef _OPENMP
    int max_threads = Parallel ? omp_get_max_threads() : 1;
#else
    int max_threads = 1;
#endif
    tops.resize(max_threads);

#pragma omp parallel for schedule(static) reduction(+ : evaluated) \
    if (Parallel)
    for (long long cell = 0; cell < raw; ++cell) {
        long long rest = cell;
        int it = static_cast<int>(rest % R);
        rest /= R;
        int is = static_cast<int>(rest % R);
        rest /= R;
        int ir = static_cast<int>(rest % R);
        rest /= R;
        int ic = static_cast<int>(rest % R);
        rest /= R;
        int ib = static_cast<int>(rest % R);
        rest /= R;
        int ia = static_cast<int>(rest);
        ParamFour p{side[ia], side[ib], side[ic],
                    cosine[ir], cosine[is], cosine[it]};
        auto cand = eval_cell(spec, p);
        if (!cand) continue;
        evaluated += 1;
#ifdef _OPENMP
        int tid = Parallel ? omp_get_thread_num() : 0;
#else
        int tid = 0;
#endif
        push_candidate(tops[tid], *cand);
    }

    std::vector<Candidate> merged;
    for (const auto& t : tops)
        for (const Candidate& c : t) push_candidate(merged, c);
    return finish_report(grid, seed, merged, evaluated, raw);
}

double clamp_box(double v, double lo, double hi) {
    return std::fmin(hi, std::fmax(lo, v));
}

ParamFour project_box(const ParamFour& p, double D) {
    return {clamp_box(p.a, kMinSide, D), clamp_box(p.b, kMinSide, D),
            clamp_box(p.c, kMinSide, D), clamp_box(p.r, -1.0, 1.0),
            clamp_box(p.s, -1.0, 1.0),   clamp_box(p.t, -1.0, 1.0)};
}

long double refine_objective(const RatioSpec& spec, const ParamFour& raw_p,
                             double D) {
    ParamFour p = project_box(raw_p, D);
    auto cand = eval_cell(spec, p);
    if (!cand) return -std::numeric_limits<long double>::infinity();
    return cand->ratio;
}

// One Nelder-Mead run over the six parameters from a given start point.
Candidate nelder_mead(const RatioSpec& spec, const ParamFour& start, double D,
                      double side_step, double cos_step, int iterations) {
    constexpr int N = 6;
    using Point = std::array<double, N>;
    auto to_param = [](const Point& x) {
        return ParamFour{x[0], x[1], x[2], x[3], x[4], x[5]};
    };
    struct Vertex {
        Point x;
        long double f;
    };
    auto eval = [&](const Point& x) {
        return refine_objective(spec, to_param(x), D);
    };

    std::array<Vertex, N + 1> simplex;
    Point x0 = {start.a, start.b, start.c, start.r, start.s, start.t};
    simplex[0] = {x0, eval(x0)};
    for (int i = 0; i < N; ++i) {
        Point x = x0;
        double h = i < 3 ? side_step : cos_step;
        x[i] += (x[i] + h <= (i < 3 ? D : 1.0)) ? h : -h;
        simplex[i + 1] = {x, eval(x)};
    }

    auto order = [&]() {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& u, const Vertex& v) { return u.f > v.f; });
    };
    order();

    for (int iter = 0; iter < iterations; ++iter) {
        Point centroid{};
        for (int i = 0; i < N; ++i)
            for (int d = 0; d < N; ++d) centroid[d] += simplex[i].x[d] / N;
        const Vertex& worst = simplex[N];

        auto blend = [&](double coef) {
            Point x;
            for (int d = 0; d < N; ++d)
                x[d] = centroid[d] + coef * (centroid[d] - worst.x[d]);
            return x;
        };

        Point xr = blend(1.0);
        long double fr = eval(xr);
        if (fr > simplex[0].f) {
            Point xe = blend(2.0);
            long double fe = eval(xe);
            simplex[N] = fe > fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr > simplex[N - 1].f) {
            simplex[N] = {xr, fr};
        } else {
            Point xc = blend(-0.5);
            long double fc = eval(xc);
            if (fc > simplex[N].f) {
                simplex[N] = {xc, fc};
            } else {
                for (int i = 1; i <= N; ++i) {
                    for (int d = 0; d < N; ++d)
                        simplex[i].x[d] =
                            0.5 * (simplex[i].x[d] + simplex[0].x[d]);
                    simplex[i].f = eval(simplex[i].x);
                }
            }
        }
        order();
    }
    return {simplex[0].f, project_box(to_param(simplex[0].x), D)};
}

}  // namespace

RatioKind ratio_kind_from_string(const std::string& s) {
    if (s == "L") return RatioKind::L;
    if (s == "K") return RatioKind::K;
    if (s == "J") return RatioKind::J;
    throw domain_error("ratio kind must be one of L, K, J");
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "dtran") return Normalization::dtran;
    if (s == "power") return Normalization::power;
    throw domain_error("normalization must be dtran or power");
}

std::string to_string(RatioKind k) {
    switch (k) {
        case RatioKind::L: return "L";
        case RatioKind::K: return "K";
        case RatioKind::J: return "J";
    }
    return "?";
}

std::string to_string(Normalization n) {
    return n == Normalization::dtran ? "dtran" : "power";
}

RatioSpec RatioSpec::dtran(RatioKind kind, const Transform& t) {
    RatioSpec spec;
    spec.kind = kind;
    spec.normalization = Normalization::dtran;
    spec.transform = t;
    return spec;
}

RatioSpec RatioSpec::power(RatioKind kind, double alpha) {
    RatioSpec spec;
    spec.kind = kind;
    spec.normalization = Normalization::power;
    spec.transform = Transform::power(alpha);
    spec.alpha = alpha;
    return spec;
}

std::optional<double> ratio(const RatioSpec& spec, const QuadConfig& cfg) {
    validate_spec(spec);
    if (!check_quad2(cfg).holds)
        throw domain_error("ratio: configuration violates the quad2 condition");
    long double den = denom_ld(spec, cfg);
    if (!(fabsl(den) >= kSkipDenominator)) return std::nullopt;
    return static_cast<double>(numer_ld(spec, cfg) / den);
}

SearchReport grid_search(const RatioSpec& spec, const GridSpec& grid,
                         unsigned long long seed) {
    return grid_search_impl<true>(spec, grid, seed);
}

SearchReport grid_search_serial(const RatioSpec& spec, const GridSpec& grid,
                                unsigned long long seed) {
    return grid_search_impl<false>(spec, grid, seed);
}

SearchReport refine_local(const RatioSpec& spec, const SearchReport& report,
                          int iterations) {
    validate_spec(spec);
    if (iterations < 0)
        throw domain_error("refine_local: iterations must be >= 0");
    SearchReport out = report;
    if (iterations == 0) return out;

    double D = report.grid.scale;
    double side_step = 0.5 * D / report.grid.resolution;
    double cos_step = 1.0 / (report.grid.resolution - 1);

    Candidate best{report.best_ratio, report.best_params};
    std::vector<ParamFour> starts = report.top_params;
    if (starts.empty()) starts.push_back(report.best_params);
    for (const ParamFour& s : starts) {
        Candidate c = nelder_mead(spec, s, D, side_step, cos_step, iterations);
        if (std::isfinite(static_cast<double>(c.ratio)) && better(c, best))
            best = c;
        out.refinement_steps += iterations;
    }
    if (static_cast<double>(best.ratio) > out.best_ratio) {
        out.best_ratio = static_cast<double>(best.ratio);
        out.best_params = best.params;
        out.best_config = four_point(best.params);
    }
    return out;
}

std::array<WitnessValue, 4> lower_bound_witnesses(const Transform& t, double u,
                                                  double v, double eps) {
    for (auto [val, nm] : {std::pair<double, const char*>{u, "u"},
                           {v, "v"},
                           {eps, "eps"}})
        if (!(val > 0.0))
            throw domain_error(std::string("lower_bound_witnesses: ") + nm +
                               " must be positive");

    auto [tau0, dtau0] = t.extend_zero();
    (void)dtau0;
    double du = t.deriv(u, 1), dv = t.deriv(v, 1);

    std::array<WitnessValue, 4> out;
    auto set = [](WitnessValue& w, double num, double den,
                  const QuadConfig& cfg) {
        w.config = cfg;
        if (std::fabs(den) >= 1e-12) w.value = num / den;
    };

    // (i) midpoint construction: z=q, p halfway between q and y.
    set(out[0], 2.0 * (t.eval(u) - tau0), u * du,
        witness_config({"triple_line", {{"u", u}}}));
    // (ii) z=q at the origin, y at u, p at 2u on the same ray.
    set(out[1], t.eval(2.0 * u) - tau0, 2.0 * u * du,
        QuadConfig{u, u, 0.0, 2.0 * u, 2.0 * u, u});
    // (iii) collinear with a gap eps between q and p.
    set(out[2], du - dv, t.deriv(std::fabs(u - v), 1),
        witness_config(
            {"collinear_gap", {{"u", u}, {"v", v}, {"eps", eps}}}));
    // (iv) y and z on opposite sides of the q,p pair.
    set(out[3], du + dv, t.deriv(u + v, 1),
        witness_config(
            {"collinear_sum", {{"u", u}, {"v", v}, {"eps", eps}}}));
    return out;
}

double unit_lower_bound(const Transform& t, double u) {
    if (!(u > 0.0)) throw domain_error("unit_lower_bound: u must be positive");
    if (!(t.deriv(u, 1) > 0.0))
        throw domain_error("unit_lower_bound: tau'(u) must be positive");
    return 1.0;
}

double unit_lower_bound_quotient(const Transform& t, double u, double eps) {
    if (!(u > 0.0) || !(eps > 0.0) || !(eps <= u))
        throw domain_error(
            "unit_lower_bound_quotient: need 0 < eps <= u");
    double du = t.deriv(u, 1);
    if (!(du > 0.0))
        throw domain_error("unit_lower_bound_quotient: tau'(u) must be positive");
    return static_cast<double>(
        (t.eval_ld(u) - t.eval_ld(u - eps)) / (static_cast<long double>(eps) * du));
}

std::pair<double, double> divergence_probe(const Transform& t, double eps) {
    if (!(eps > 0.0)) throw domain_error("divergence_probe: eps must be > 0");
    if (!t.claims().zero_at_zero)
        throw domain_error("divergence_probe: transform must claim tau(0)=0");
    long double diag = sqrtl(1.0L + static_cast<long double>(eps) * eps);
    long double num = 2.0L * (t.eval_ld(diag) - t.eval_ld(1.0L));
    long double den = t.eval_ld(eps);
    if (!(fabsl(den) > 0.0L))
        throw domain_error("divergence_probe: tau(eps) vanished");
    double k = static_cast<double>(num / den);
    return {k, 0.5 * k};
}

std::pair<double, double> divergence_probe(double alpha, double eps) {
    return divergence_probe(Transform::power(alpha), eps);
}

}  // namespace quadineq
