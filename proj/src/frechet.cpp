#include "quadineq/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "quadineq/common.hpp"
#include "quadineq/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadineq {
namespace {

void validate_problem(const FrechetProblem& p) {
    if (!p.transform.valid())
        throw domain_error("frechet problem needs a valid transform");
    const Claims& c = p.transform.claims();
    if (!c.zero_at_zero || !c.nondecreasing)
        throw domain_error("frechet transform must claim zero_at_zero and "
                           "nondecreasing: " + p.transform.name());
    if (p.samples.empty())
        throw domain_error("frechet problem needs at least one sample");
    std::size_t d = p.samples.front().size();
    if (d == 0) throw domain_error("frechet samples need dimension >= 1");
    for (const auto& s : p.samples) {
        if (s.size() != d)
            throw domain_error("frechet samples have mixed dimensions");
        for (double x : s)
            if (!std::isfinite(x))
                throw domain_error("frechet sample is not finite");
    }
    if (p.solver.max_iterations < 1)
        throw domain_error("frechet solver needs max_iterations >= 1");
    if (!(p.solver.tolerance > 0))
        throw domain_error("frechet solver needs tolerance > 0");
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += sqr(a[k] - b[k]);
    return std::sqrt(s);
}

double objective_unchecked(const FrechetProblem& p,
                           const std::vector<double>& q) {
    double s = 0.0;
    for (const auto& y : p.samples) s += p.transform.eval(dist(y, q));
    return s / static_cast<double>(p.samples.size());
}

std::vector<double> coordinatewise_median(
    const std::vector<std::vector<double>>& samples) {
    std::size_t d = samples.front().size();
    std::vector<double> q(d, 0.0);
    std::vector<double> col(samples.size());
    for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < samples.size(); ++i) col[i] = samples[i][k];
        std::sort(col.begin(), col.end());
        std::size_t m = col.size() / 2;
        q[k] = col.size() % 2 == 1 ? col[m] : 0.5 * (col[m - 1] + col[m]);
    }
    return q;
}

// A transform is "linear" exactly when the objective is the geometric-median
// objective, which is where plain gradient descent stalls (nonsmooth at the
// samples) and Weiszfeld reweighting is the right tool.
bool is_linear_transform(const Transform& t) {
    if (t.smoothness_order() < 2) return false;
    if (!(t.deriv(1.0, 1) > 0.0)) return false;
    for (double x : {1e-3, 0.1, 0.7, 1.9, 3.7})
        if (t.deriv(x, 2) != 0.0) return false;
    return true;
}

FrechetSolution weiszfeld(const FrechetProblem& p, std::vector<double> q) {
    const std::size_t d = q.size();
    FrechetSolution sol;
    std::vector<double> qn(d);
    for (int iter = 1; iter <= p.solver.max_iterations; ++iter) {
        sol.iterations = iter;
        std::fill(qn.begin(), qn.end(), 0.0);
        double wsum = 0.0;
        for (const auto& y : p.samples) {
            double r = std::fmax(dist(y, q), 1e-12);
            double w = 1.0 / r;
            wsum += w;
            for (std::size_t k = 0; k < d; ++k) qn[k] += w * y[k];
        }
        for (std::size_t k = 0; k < d; ++k) qn[k] /= wsum;
        double move = dist(qn, q);
        q = qn;
        if (move < p.solver.tolerance) {
            sol.converged = true;
            break;
        }
    }
    sol.minimizer = q;
    return sol;
}

FrechetSolution gradient_descent(const FrechetProblem& p,
                                 std::vector<double> q) {
    const std::size_t d = q.size();
    FrechetSolution sol;
    double fq = objective_unchecked(p, q);
    double step0 = 1.0;
    std::vector<double> g(d), qn(d);
    for (int iter = 1; iter <= p.solver.max_iterations; ++iter) {
        sol.iterations = iter;
        std::fill(g.begin(), g.end(), 0.0);
        for (const auto& y : p.samples) {
            double r = dist(y, q);
            if (r < 1e-15) continue;  // tau'(0) subgradient choice: 0
            double w = p.transform.deriv(r, 1) / r;
            for (std::size_t k = 0; k < d; ++k) g[k] += w * (q[k] - y[k]);
        }
        double gn2 = 0.0;
        for (double gk : g) gn2 += sqr(gk);
        double n = static_cast<double>(p.samples.size());
        gn2 /= n * n;
        double gn = std::sqrt(gn2);
        if (gn <= 1e-15) {
            sol.converged = true;
            break;
        }
        double tstep = step0;
        bool descended = false;
        double fn = fq;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t k = 0; k < d; ++k)
                qn[k] = q[k] - tstep * g[k] / n;
            fn = objective_unchecked(p, qn);
            // strict decrease required: once the sufficient-decrease margin
            // underflows, accepting equal objectives lets the iterate cycle
            // in the rounding floor forever
            if (fn < fq && fn <= fq - 1e-4 * tstep * gn2) {
                descended = true;
                break;
            }
            tstep *= 0.5;
        }
        if (!descended) {
            // no representable descent; every productive step from here is
            // shorter than the smallest one tried, so the step criterion is
            // met exactly when that floor is below the tolerance
            sol.converged = tstep * gn < p.solver.tolerance;
            break;
        }
        double move = tstep * gn;
        q = qn;
        fq = fn;
        step0 = std::fmin(tstep * 4.0, 1e6);
        if (move < p.solver.tolerance) {
            sol.converged = true;
            break;
        }
    }
    sol.minimizer = q;
    return sol;
}

}  // namespace

double objective(const FrechetProblem& p, const std::vector<double>& q) {
    validate_problem(p);
    if (q.size() != p.samples.front().size())
        throw domain_error("objective point dimension mismatch");
    for (double x : q)
        if (!std::isfinite(x))
            throw domain_error("objective point is not finite");
    return objective_unchecked(p, q);
}

FrechetSolution solve_mean(const FrechetProblem& p) {
    validate_problem(p);
    std::vector<double> q0 = coordinatewise_median(p.samples);

    FrechetSolution sol = is_linear_transform(p.transform)
                              ? weiszfeld(p, q0)
                              : gradient_descent(p, q0);
    sol.objective_value = objective_unchecked(p, sol.minimizer);

    // a sample point may beat the iterate (Weiszfeld degeneracy); keep the
    // promise that the solution is at least as good as every sample
    for (const auto& y : p.samples) {
        double fy = objective_unchecked(p, y);
        if (fy < sol.objective_value) {
            sol.objective_value = fy;
            sol.minimizer = y;
        }
    }
    return sol;
}

RateReport rate_experiment(const Transform& t, const std::string& distribution,
                           const std::vector<long long>& n_list, int reps,
                           unsigned long long seed) {
    bool contaminated = false;
    if (distribution == "gaussian") {
        contaminated = false;
    } else if (distribution == "gaussian_contaminated") {
        contaminated = true;
    } else {
        throw domain_error("unknown distribution: " + distribution +
                           " (expected gaussian or gaussian_contaminated)");
    }
    if (reps < 8) throw domain_error("rate_experiment needs reps >= 8");
    if (n_list.empty()) throw domain_error("rate_experiment needs a nonempty n_list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 2) throw domain_error("rate_experiment needs n >= 2");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw domain_error("rate_experiment needs a strictly increasing n_list");
    }

    auto draw_dataset = [&](SplitMix64& g, long long n) {
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
        for (auto& pt : pts) {
            double scale = 1.0;
            if (contaminated && g.next_double() < 0.1) scale = 3.0;
            pt = {scale * g.next_normal(), scale * g.next_normal()};
        }
        return pts;
    };
    auto run_once = [&](long long n, std::uint64_t stream_index, double* err,
                        bool* ok) {
        SplitMix64 g = stream_at(seed, stream_index);
        FrechetProblem prob;
        prob.samples = draw_dataset(g, n);
        prob.transform = t;
        FrechetSolution sol = solve_mean(prob);
        *ok = sol.converged;
        *err = std::hypot(sol.minimizer[0], sol.minimizer[1]);
    };

    // centered contamination keeps the population minimizer at the origin;
    // confirm on a large pilot sample instead of assuming it
    if (contaminated) {
        double err = 0.0;
        bool ok = false;
        const long long pilot_n = 8000;
        run_once(pilot_n, 8000ULL * 1000003ULL + 999999ULL, &err, &ok);
        if (!ok || err > 0.1) {
            std::ostringstream os;
            os << "contaminated pilot run failed to confirm the center "
               << "(converged=" << ok << ", |m|=" << err << ")";
            throw search_error(os.str());
        }
    }

    RateReport rep;
    rep.distribution = distribution;
    rep.reps = reps;
    rep.seed = seed;
    rep.runs = static_cast<long long>(n_list.size()) * reps;

    const long long total = rep.runs;
    std::vector<double> errs(static_cast<std::size_t>(total), 0.0);
    std::vector<char> oks(static_cast<std::size_t>(total), 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long long idx = 0; idx < total; ++idx) {
        long long n = n_list[static_cast<std::size_t>(idx / reps)];
        long long r = idx % reps;
        double err = 0.0;
        bool ok = false;
        run_once(n, static_cast<std::uint64_t>(n) * 1000003ULL +
                        static_cast<std::uint64_t>(r),
                 &err, &ok);
        errs[static_cast<std::size_t>(idx)] = err;
        oks[static_cast<std::size_t>(idx)] = ok ? 1 : 0;
    }

    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
        RatePoint pt;
        pt.n = n_list[ni];
        double sum = 0.0;
        long long k = 0;
        for (int r = 0; r < reps; ++r) {
            std::size_t idx = ni * reps + static_cast<std::size_t>(r);
            if (!oks[idx]) {
                ++rep.failures;
                continue;
            }
            sum += errs[idx];
            ++k;
        }
        if (k > 0) pt.mean_error = sum / static_cast<double>(k);
        double ss = 0.0;
        for (int r = 0; r < reps; ++r) {
            std::size_t idx = ni * reps + static_cast<std::size_t>(r);
            if (oks[idx]) ss += sqr(errs[idx] - pt.mean_error);
        }
        pt.sd = k > 1 ? std::sqrt(ss / static_cast<double>(k - 1)) : 0.0;
        rep.points.push_back(pt);
    }

    if (10 * rep.failures > rep.runs) {
        std::ostringstream os;
        os << "rate_experiment: " << rep.failures << " of " << rep.runs
           << " solver runs failed to converge";
        throw search_error(os.str());
    }

    // least squares of log(mean_error) on log(n)
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = static_cast<double>(rep.points.size());
    for (const RatePoint& pt : rep.points) {
        double x = std::log(static_cast<double>(pt.n));
        double y = std::log(std::fmax(pt.mean_error, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = m * sxx - sx * sx;
    rep.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    return rep;
}

}  // namespace quadineq
