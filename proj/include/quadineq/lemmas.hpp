#pragma once

#include <map>
#include <string>
#include <vector>

#include "quadineq/transforms.hpp"

namespace quadineq {

struct LemmaInfo {
    std::string id;
    int order = 0;  // highest tau-derivative order the form evaluates
    std::vector<std::string> inputs;  // canonical input names
};

// All registered lemma ids, in registry order.
std::vector<LemmaInfo> lemma_registry();

// The transforms the suite is exercised on.  Kinked members run only on
// forms with derivative order <= their smoothness.
std::vector<Transform> lemma_corpus();

// Evaluates one lemma at explicit inputs.  Returns the raw residual
// (max over the form's sub-inequalities of lhs - rhs; nonpositive when the
// lemma holds).  Hypothesis violations -> domain_error naming the failed
// condition; derivative order beyond the transform -> capability_error.
double run_lemma(const std::string& id, const Transform& t,
                 const std::map<std::string, double>& inputs);

struct SampleReport {
    std::string lemma_id;
    std::string transform_name;
    double worst_residual = 0.0;  // normalized by max(1, |lhs|, |rhs|)
    double worst_raw = 0.0;       // same point, unnormalized lhs - rhs
    std::vector<double> worst_inputs;
    std::vector<std::string> input_names;
    long long accepted = 0;
    long long attempts = 0;
};

// Draws n hypothesis-satisfying samples (deterministic rejection sampling,
// independent of thread count) and reports the worst residual.
// Rejection rate above 99.9% -> search_error.
SampleReport sample_lemma(const std::string& id, const Transform& t,
                          long long n, unsigned long long seed);

struct DerivReport {
    bool derivatives_ok = true;   // finite differences match closed forms
    double worst_fd_error = 0.0;  // relative to max(1, |closed value|)
    bool signs_ok = true;         // tau' >= 0, tau'' >= 0 nonincreasing, tau''' <= 0
    double worst_sign_violation = 0.0;
    int orders_checked = 0;
};

// Finite-difference cross-check of the closed-form derivatives plus the
// sign/monotonicity pattern of the transform class.
DerivReport derivative_consistency(const Transform& t, int n,
                                   unsigned long long seed);

}  // namespace quadineq
