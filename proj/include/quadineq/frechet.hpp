#pragma once

#include <string>
#include <vector>

#include "quadineq/transforms.hpp"

namespace quadineq {

struct SolverOptions {
    int max_iterations = 1000;
    double tolerance = 1e-10;  // converged when the iterate step drops below
};

struct FrechetProblem {
    std::vector<std::vector<double>> samples;  // one point per row, common dim
    Transform transform;
    SolverOptions solver;
};

struct FrechetSolution {
    std::vector<double> minimizer;
    double objective_value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// (1/n) sum tau(|Y_i - q|).  Dimension mismatch or non-finite q -> domain_error.
double objective(const FrechetProblem& p, const std::vector<double>& q);

// Gradient descent with backtracking from the coordinatewise median; linear
// transforms route to Weiszfeld reweighting (distances floored at 1e-12).
// The result is snapped to a sample point whenever that has a lower
// objective, so solution.objective_value <= objective at every sample.
FrechetSolution solve_mean(const FrechetProblem& p);

struct RatePoint {
    long long n = 0;
    double mean_error = 0.0;  // mean distance to the population center
    double sd = 0.0;          // sample standard deviation of that distance
};

struct RateReport {
    std::string distribution;
    std::vector<RatePoint> points;  // one per entry of n_list
    double slope = 0.0;             // log mean_error vs log n regression
    int reps = 0;
    long long runs = 0;
    long long failures = 0;
    unsigned long long seed = 0;
};

// Convergence-rate experiment in R^2.  distribution is "gaussian"
// (standard normal) or "gaussian_contaminated" (0.9 N(0,I) + 0.1 N(0,9I));
// both are centered, so the population tau-Frechet mean is the origin (the
// contaminated case is confirmed by a large-n pilot solve, not assumed).
// Each (n, rep) run draws from its own counter-derived stream, so results
// do not depend on scheduling.  reps < 8 or a non-increasing n_list ->
// domain_error; more than 10% solver failures -> search_error.
RateReport rate_experiment(const Transform& t, const std::string& distribution,
                           const std::vector<long long>& n_list, int reps,
                           unsigned long long seed);

}  // namespace quadineq
