#include "quadineq/inequalities.hpp"

#include <algorithm>
#include <cmath>

namespace quadineq {

namespace {

CheckResult make_result(double lhs, double rhs) {
    CheckResult r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.tolerance_used = check_tolerance(lhs, rhs);
    r.holds = r.margin >= -r.tolerance_used;
    return r;
}

void require_nonneg_config(const QuadConfig& cfg) {
    for (double d : cfg.as_array())
        if (!(d >= 0.0) || !std::isfinite(d))
            throw domain_error("config: distances must be finite and >= 0");
}

}  // namespace

double quad_lhs(const Transform& t, const QuadConfig& cfg) {
    require_nonneg_config(cfg);
    return static_cast<double>(t.eval_ld(cfg.yq) - t.eval_ld(cfg.yp) -
                               t.eval_ld(cfg.zq) + t.eval_ld(cfg.zp));
}

CheckResult check_quad2(const QuadConfig& cfg) {
    require_nonneg_config(cfg);
    double lhs = sqr(cfg.yq) - sqr(cfg.yp) - sqr(cfg.zq) + sqr(cfg.zp);
    double rhs = 2.0 * cfg.qp * cfg.yz;
    return make_result(lhs, rhs);
}

CheckResult check_quadtran(const Transform& t, const QuadConfig& cfg,
                           double L) {
    if (!(L >= 0.0)) throw domain_error("check_quadtran: L must be >= 0");
    double lhs = quad_lhs(t, cfg);
    double dtau = cfg.yz > 0.0 ? t.deriv(cfg.yz, 1) : t.extend_zero().second;
    return make_result(lhs, L * cfg.qp * dtau);
}

CheckResult check_symmetric(const Transform& t, const QuadConfig& cfg) {
    if (!t.claims().zero_at_zero)
        throw domain_error("check_symmetric: transform must claim tau(0)=0");
    double lhs = quad_lhs(t, cfg);
    double rhs =
        static_cast<double>(t.eval_ld(cfg.qp) + t.eval_ld(cfg.yz));
    return make_result(lhs, rhs);
}

CheckResult check_parallelogram(const Transform& t, double u_norm,
                                double v_norm, double sum_norm,
                                double diff_norm) {
    if (!t.claims().zero_at_zero)
        throw domain_error("check_parallelogram: transform must claim tau(0)=0");
    for (double v : {u_norm, v_norm, sum_norm, diff_norm})
        if (!(v >= 0.0) || !std::isfinite(v))
            throw domain_error("check_parallelogram: norms must be >= 0");
    double lhs = static_cast<double>(t.eval_ld(sum_norm) + t.eval_ld(diff_norm));
    double rhs =
        static_cast<double>(2.0L * t.eval_ld(u_norm) + 2.0L * t.eval_ld(v_norm));
    return make_result(lhs, rhs);
}

CheckResult check_ptolemy(const QuadConfig& cfg, PtolemyForm form) {
    require_nonneg_config(cfg);
    if (form == PtolemyForm::classical)
        return make_result(cfg.yq * cfg.zp,
                           cfg.yp * cfg.zq + cfg.qp * cfg.yz);
    return make_result(cfg.yq * cfg.zp + cfg.yp * cfg.zq, cfg.qp * cfg.yz);
}

CheckResult check_roundness(const QuadConfig& cfg, double alpha) {
    if (!(alpha > 0.0)) throw domain_error("check_roundness: alpha must be > 0");
    require_nonneg_config(cfg);
    auto pw = [&](double x) { return powl(static_cast<long double>(x), alpha); };
    double lhs = static_cast<double>(pw(cfg.yq) - pw(cfg.yp) - pw(cfg.zq) +
                                     pw(cfg.zp));
    double rhs = static_cast<double>(pw(cfg.qp) + pw(cfg.yz));
    return make_result(lhs, rhs);
}

KaramataResult check_karamata(const Transform& f, const std::vector<double>& a,
                              const std::vector<double>& b) {
    if (a.size() != b.size() || a.empty())
        throw domain_error("check_karamata: lists must be nonempty, same length");
    for (const auto* v : {&a, &b})
        for (std::size_t i = 1; i < v->size(); ++i)
            if ((*v)[i] > (*v)[i - 1])
                throw domain_error("check_karamata: lists must be sorted descending");
    const Claims& c = f.claims();
    if (!c.nondecreasing || !c.convex)
        throw domain_error(
            "check_karamata: transform must claim nondecreasing and convex");

    KaramataResult res;
    long double pa = 0.0L, pb = 0.0L;
    res.applicable = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        pa += a[i];
        pb += b[i];
        // tiny slack so exactly-tied prefixes computed in different orders
        // do not flip applicability
        if (static_cast<double>(pa - pb) >
            check_tolerance(static_cast<double>(pa), static_cast<double>(pb))) {
            res.applicable = false;
            return res;
        }
    }
    long double sa = 0.0L, sb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += f.eval_ld(a[i]);
        sb += f.eval_ld(b[i]);
    }
    res.check = make_result(static_cast<double>(sa), static_cast<double>(sb));
    return res;
}

std::array<double, 8> rhs_bound_chain(const Transform& t, double qp, double yz,
                                      double beta) {
    if (!t.claims().zero_at_zero)
        throw domain_error("rhs_bound_chain: transform must claim tau(0)=0");
    if (!(qp >= 0.0) || !(yz >= 0.0))
        throw domain_error("rhs_bound_chain: distances must be >= 0");
    if (!(beta >= 0.0 && beta <= 1.0))
        throw domain_error("rhs_bound_chain: beta must lie in [0,1]");

    double lo = std::fmin(qp, yz), hi = std::fmax(qp, yz);
    auto d1 = [&](double x) { return t.deriv(x, 1); };

    std::array<double, 8> v{};
    v[0] = 2.0 * lo * d1(hi);
    v[1] = 2.0 * std::pow(qp, beta) * std::pow(yz, 1.0 - beta) *
           d1(std::pow(qp, 1.0 - beta) * std::pow(yz, beta));
    v[2] = 2.0 * (beta * qp + (1.0 - beta) * yz) *
           d1((1.0 - beta) * qp + beta * yz);
    double gm = std::sqrt(qp * yz), am = 0.5 * (qp + yz);
    v[3] = 2.0 * gm * d1(gm);
    v[4] = (qp + yz) * d1(am);
    v[5] = 4.0 * t.eval(gm);
    v[6] = 4.0 * t.eval(am);
    v[7] = 2.0 * t.eval(qp) + 2.0 * t.eval(yz);
    return v;
}

}  // namespace quadineq
