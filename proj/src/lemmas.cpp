#include "quadineq/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>

#include "quadineq/common.hpp"
#include "quadineq/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace quadineq {
namespace {

constexpr double kEps = 1e-7;       // floor for derivative arguments
constexpr double kRadSqrt = 1e-12;  // floor for sqrt radicands under tau
constexpr double kRadDs = 1e-10;    // floor for (tau o sqrt)' radicands
constexpr double kKinkDist = 1e-6;  // rejection distance around kinks
constexpr int kMaxInputs = 8;

// Recording wrapper around a transform: evaluates tau and its derivatives,
// the sqrt-composed forms, and remembers whether any argument landed near a
// derivative kink (those samples get rejected, matching the mollification
// argument that extends the smooth-case lemmas).
class Tau {
  public:
    explicit Tau(const Transform& t) : t_(&t), bps_(t.breakpoints()) {}

    double v(double x) const {
        note(x);
        return t_->eval(x);
    }
    double d1(double x) const {
        note(x);
        return t_->deriv(x, 1);
    }
    double d2(double x) const {
        note(x);
        return t_->deriv(x, 2);
    }
    double d3(double x) const {
        note(x);
        return t_->deriv(x, 3);
    }
    // tau(sqrt(q)) and its first/second derivatives in q
    double sv(double q) const { return v(std::sqrt(q)); }
    double sd1(double q) const {
        double r = std::sqrt(q);
        return d1(r) / (2.0 * r);
    }
    double sd2(double q) const {
        double r = std::sqrt(q);
        return (d2(r) - d1(r) / r) / (4.0 * q);
    }

    bool near_kink() const { return near_; }
    void reset() const { near_ = false; }

  private:
    void note(double x) const {
        for (double bp : bps_) {
            if (std::fabs(x - bp) < kKinkDist) near_ = true;
        }
    }

    const Transform* t_;
    std::vector<double> bps_;
    mutable bool near_ = false;
};

struct Sub {
    double lhs;
    double rhs;
};

struct LemmaDef {
    std::string id;
    int order = 0;
    std::vector<std::string> inputs;
    // returns the text of the first violated condition, empty when satisfied
    std::function<std::string(const double*)> hyp;
    std::function<void(SplitMix64&, double*)> draw;
    std::function<void(const Tau&, const double*, std::vector<Sub>&)> eval;
};

// first failed condition, stringified
#define HYP(cond)                 \
    do {                          \
        if (!(cond)) return #cond; \
    } while (0)

double len4(SplitMix64& g) { return 4.0 * (1.0 - g.next_double()); }  // (0,4]
double cosu(SplitMix64& g) { return g.next_uniform(-1.0, 1.0); }

void sort2_desc(double& x, double& y) {
    if (x < y) std::swap(x, y);
}

std::vector<LemmaDef> build_registry() {
    std::vector<LemmaDef> reg;
    auto add = [&reg](LemmaDef def) { reg.push_back(std::move(def)); };

    // ---- reduction chain of the main bound ------------------------------

    add({"main_param", 1, {"a", "b", "c", "r", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             HYP(a >= 0 && b >= 0 && c >= 0);
             HYP(std::fabs(r) <= 1 && std::fabs(s) <= 1);
             HYP(std::fmax(r * a - s * c, std::fabs(a - c)) >= kEps);
             HYP(a * a - 2 * r * a * b + b * b >= kRadSqrt);
             HYP(c * c - 2 * s * c * b + b * b >= kRadSqrt);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
             v[3] = cosu(g);
             v[4] = cosu(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             double m = std::fmax(r * a - s * c, std::fabs(a - c));
             double xa = a * a - 2 * r * a * b + b * b;
             double xc = c * c - 2 * s * c * b + b * b;
             out.push_back(
                 {t.v(a) - t.v(c) - t.sv(xa) + t.sv(xc), 2 * b * t.d1(m)});
         }});

    add({"first_reduction_a", 1, {"a", "b", "c", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(a >= 0 && b >= 0 && c > 0);
             HYP(std::fabs(s) <= 1);
             HYP((s + 1) * c <= 2 * a);
             HYP(a - s * c >= kEps);
             HYP(c * c - 2 * s * c * b + b * b >= kRadSqrt);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
             double smax = std::fmin(1.0, 2 * v[0] / v[2] - 1.0);
             v[3] = smax < -1.0 ? -2.0 : g.next_uniform(-1.0, smax);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             double xc = c * c - 2 * s * c * b + b * b;
             out.push_back({t.v(a) - t.v(c) - t.v(std::fabs(a - b)) + t.sv(xc),
                            2 * b * t.d1(a - s * c)});
         }});

    // first_reduction_b and reduii share the proof's radicand (a-b)^2 + 4cb
    auto frb_hyp = [](const double* v) -> std::string {
        double a = v[0], b = v[1], c = v[2];
        HYP(a >= 0 && b >= 0 && c >= 0);
        HYP(a >= c);
        HYP(a - c >= kEps);
        return {};
    };
    auto frb_draw = [](SplitMix64& g, double* v) {
        v[0] = len4(g);
        v[1] = len4(g);
        v[2] = v[0] * (1.0 - g.next_double());
    };
    auto frb_eval = [](const Tau& t, const double* v, std::vector<Sub>& out) {
        double a = v[0], b = v[1], c = v[2];
        double q = (a - b) * (a - b) + 4 * c * b;
        out.push_back({t.v(a) - t.v(c) - t.sv(q) + t.v(c + b),
                       2 * b * t.d1(a - c)});
    };
    add({"first_reduction_b", 1, {"a", "b", "c"}, frb_hyp, frb_draw, frb_eval});
    add({"reduii", 1, {"a", "b", "c"}, frb_hyp, frb_draw, frb_eval});

    add({"ddr", 3, {"a", "b", "c", "r", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             HYP(a >= 0 && b >= 0 && c >= 0);
             HYP(std::fabs(r) <= 1 && std::fabs(s) <= 1);
             HYP(r * a - s * c >= kEps);
             HYP(a * a - 2 * r * a * b + b * b >= kRadDs);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
             v[3] = cosu(g);
             v[4] = cosu(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             double xa = a * a - 2 * r * a * b + b * b;
             out.push_back({4 * a * a * b * b * t.sd2(xa) +
                                2 * a * a * b * t.d3(r * a - s * c),
                            0.0});
         }});

    // ---- pointwise maxima of the left side ------------------------------

    // shared left side: tau(a) - tau(c) - tau_sqrt(xa) + tau_sqrt(xc)
    auto ell = [](const Tau& t, double a, double b, double c, double r,
                  double s) {
        double xa = a * a - 2 * r * a * b + b * b;
        double xc = c * c - 2 * s * c * b + b * b;
        return t.v(a) - t.v(c) - t.sv(xa) + t.sv(xc);
    };
    auto maxlhs_radicands = [](const double* v) -> std::string {
        double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
        HYP(a * a - 2 * r * a * b + b * b >= 0);
        HYP(c * c - 2 * s * c * b + b * b >= 0);
        return {};
    };

    add({"maxlhs_i", 0, {"a", "b", "c", "r", "s"},
         [maxlhs_radicands](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             HYP(a >= 0 && b >= 0 && c >= 0);
             HYP(std::fabs(r) <= 1 && std::fabs(s) <= 1);
             HYP(c <= a);
             HYP(r * a - s * c <= std::fabs(a - c));
             HYP(a * a <= c * c + 2 * a * b - 2 * c * b);
             return maxlhs_radicands(v);
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = v[0] * (1.0 - g.next_double());
             v[3] = cosu(g);
             v[4] = cosu(g);
         },
         [ell](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             out.push_back({ell(t, a, b, c, r, s),
                            t.v(a) - t.v(c) - t.v(std::fabs(a - b)) +
                                t.v(std::fabs(c - b))});
         }});

    add({"maxlhs_ii", 0, {"a", "b", "c", "r", "s"},
         [maxlhs_radicands](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             HYP(a >= 0 && b >= 0 && c >= 0);
             HYP(std::fabs(r) <= 1 && std::fabs(s) <= 1);
             HYP(c <= a);
             HYP(r * a - s * c <= std::fabs(a - c));
             HYP(a * a >= c * c + 2 * a * b - 2 * c * b);
             return maxlhs_radicands(v);
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = v[0] * (1.0 - g.next_double());
             v[3] = cosu(g);
             v[4] = cosu(g);
         },
         [ell](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             double q = (a - b) * (a - b) + 4 * c * b;
             out.push_back({ell(t, a, b, c, r, s),
                            t.v(a) - t.v(c) - t.sv(q) + t.v(c + b)});
         }});

    add({"maxlhs_iii", 0, {"a", "b", "c", "r", "s"},
         [maxlhs_radicands](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             HYP(a >= 0 && b >= 0 && c >= 0);
             HYP(std::fabs(r) <= 1 && std::fabs(s) <= 1);
             HYP(a <= c);
             HYP(r * a - s * c <= std::fabs(a - c));
             HYP((c + b) * (c + b) - 4 * a * b >= kRadSqrt);
             return maxlhs_radicands(v);
         },
         [](SplitMix64& g, double* v) {
             v[2] = len4(g);
             v[1] = len4(g);
             v[0] = v[2] * (1.0 - g.next_double());
             v[3] = cosu(g);
             v[4] = cosu(g);
         },
         [ell](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], r = v[3], s = v[4];
             double rad = (c + b) * (c + b) - 4 * a * b;
             out.push_back({ell(t, a, b, c, r, s),
                            t.v(a) - t.v(c) - t.v(std::fabs(a - b)) +
                                t.sv(rad)});
         }});

    // ---- case split over the sign pattern of (a-b, b-sc) ----------------

    auto xc_of = [](const double* v) {
        double b = v[1], c = v[2], s = v[3];
        return c * c - 2 * s * c * b + b * b;
    };
    auto abcs_draw = [](SplitMix64& g, double* v) {
        v[0] = len4(g);
        v[1] = len4(g);
        v[2] = len4(g);
        v[3] = cosu(g);
    };

    add({"gaGbGsc", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP((s + 1) * c <= 2 * a);
             HYP(c >= a && a >= b && b >= s * c);
             HYP(a - s * c >= kEps);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back({t.v(a) - t.v(c) - t.v(a - b) + t.sv(xc_of(v)),
                            2 * b * t.d1(a - s * c)});
         }});

    add({"gaGbLsc", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(a <= c);
             HYP((s + 1) * c <= 2 * a);
             HYP(a >= b && b <= s * c);
             HYP(a - s * c >= kEps);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back({t.v(a) - t.v(c) - t.v(a - b) + t.sv(xc_of(v)),
                            2 * b * t.d1(a - s * c)});
         }});

    add({"gaLb", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP((s + 1) * c <= 2 * a);
             HYP(c >= a && a <= b);
             HYP(a - s * c >= kEps);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back(
                 {t.v(a) - t.v(c) - t.v(std::fabs(a - b)) + t.sv(xc_of(v)),
                  2 * b * t.d1(a - s * c)});
         }});

    add({"laLb_scb", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(b / 2 <= s * c);
             HYP(s * c >= a - b);
             HYP(a >= c);
             HYP((a - s * c) / 2 >= kEps);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back(
                 {t.v(a) - t.v(c) - t.v(std::fabs(a - b)) + t.sv(xc_of(v)),
                  2 * b * t.d1((a - s * c) / 2)});
         }});

    add({"laGb_scb", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(b / 2 <= s * c && s * c <= a - b);
             HYP(a >= c);
             HYP((a - s * c) / 2 >= kEps);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back({t.v(a) - t.v(c) - t.v(a - b) + t.sv(xc_of(v)),
                            2 * b * t.d1((a - s * c) / 2)});
         }});

    add({"labGsc", 1, {"a", "b", "c", "s"},
         [xc_of](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(b >= 2 * s * c);
             HYP(a >= s * c);
             HYP((a - s * c) / 2 >= 1e-9);
             HYP(xc_of(v) >= kRadSqrt);
             return {};
         },
         abcs_draw,
         [xc_of](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back(
                 {t.v(a) - t.v(c) - t.v(std::fabs(a - b)) + t.sv(xc_of(v)),
                  2 * b * t.d1((a - s * c) / 2)});
         }});

    add({"gbcs", 2, {"b", "c", "s"},
         [](const double* v) -> std::string {
             double b = v[0], c = v[1], s = v[2];
             HYP(s > 0 && s <= 1);
             HYP(b >= 1e-9);
             HYP(b <= s * c);
             HYP((1 - s) * c / 2 >= kEps);
             HYP((1 + s) * c / 2 - b >= kEps);
             HYP(c * c - 2 * s * c * b + b * b >= kRadDs);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[1] = g.next_uniform(1e-3, 4.0);
             v[2] = 1.0 - g.next_double();
             v[0] = g.next_double() * v[2] * v[1];
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double b = v[0], c = v[1], s = v[2];
             double q = c * c - 2 * s * c * b + b * b;
             double db = t.d1((1 + s) * c / 2 - b) - 2 * (s * c - b) * t.sd1(q) -
                         2 * t.d1((1 - s) * c / 2);
             double dc = (1 + s) / 2 * t.d1((1 + s) * c / 2) - t.d1(c) -
                         (1 + s) / 2 * t.d1((1 + s) * c / 2 - b) +
                         2 * (c - s * b) * t.sd1(q) -
                         (1 - s) * b * t.d2((1 - s) * c / 2);
             out.push_back({db + dc, 0.0});
         }});

    add({"xabc", 0, {"x", "b", "c"},
         [](const double* v) -> std::string {
             double x = v[0], b = v[1], c = v[2];
             HYP(x >= 0 && b >= 0 && c >= 0);
             HYP(b <= 2 * x);
             HYP(x + b >= c);
             HYP(x <= c);
             HYP(c * c - 2 * x * b + b * b >= kRadSqrt);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], b = v[1], c = v[2];
             double q = c * c - 2 * x * b + b * b;
             out.push_back({t.v(x + b) + t.sv(q),
                            t.v(c) + t.v(x) + 2 * t.v(b)});
         }});

    // ---- mechanical derivative bounds -----------------------------------

    add({"mech_1", 1, {"a", "b", "c"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2];
             HYP(a >= c);
             HYP(a - b - 2 * c >= 0);
             HYP((a - b) * (a - b) + 4 * c * b >= kRadDs);
             HYP(a - c >= kEps);
             HYP(c + b >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2];
             double q = (a - b) * (a - b) + 4 * c * b;
             out.push_back({2 * (a - b - 2 * c) * t.sd1(q) + t.d1(c + b),
                            2 * t.d1(a - c)});
         }});

    add({"mech_2", 1, {"a", "b", "c"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2];
             HYP(a >= c);
             HYP(a - b - 2 * c <= 0);
             HYP((a - b) * (a - b) + 4 * c * b >= kRadDs);
             HYP(a - c >= kEps);
             HYP(c + b >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2];
             double q = (a - b) * (a - b) + 4 * c * b;
             out.push_back({t.d1(c + b),
                            2 * (b + 2 * c - a) * t.sd1(q) + 2 * t.d1(a - c)});
         }});

    add({"mech_3", 1, {"a", "b", "c", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(a >= b && b >= s * c);
             HYP(c * c - 2 * s * c * b + b * b >= kRadDs);
             HYP(a - b >= kEps);
             HYP(a - s * c >= kEps);
             return {};
         },
         abcs_draw,
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             double q = c * c - 2 * s * c * b + b * b;
             out.push_back({t.d1(a - b) + 2 * (b - s * c) * t.sd1(q),
                            2 * t.d1(a - s * c)});
         }});

    add({"mech_5", 1, {"u", "v"},
         [](const double* v) -> std::string {
             double u = v[0], w = v[1];
             HYP(u >= w);
             HYP(4 * u * w >= kRadDs);
             HYP(u >= kEps && w >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             sort2_desc(v[0], v[1]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double u = v[0], w = v[1];
             out.push_back({t.d1(u) + 4 * w * t.sd1(4 * u * w),
                            t.d1(u + w) + 2 * t.d1(w)});
         }});

    add({"mech_6", 1, {"a", "b", "c", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP((s + 1) * c <= 2 * a);
             HYP(a <= b);
             HYP(c * c - 2 * s * c * b + b * b >= kRadDs);
             HYP(b - a >= kEps);
             HYP(a - s * c >= kEps);
             return {};
         },
         abcs_draw,
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             double q = c * c - 2 * s * c * b + b * b;
             out.push_back({2 * (b - s * c) * t.sd1(q),
                            t.d1(b - a) + 2 * t.d1(a - s * c)});
         }});

    add({"mech_7", 2, {"a", "c", "s"},
         [](const double* v) -> std::string {
             double a = v[0], c = v[1], s = v[2];
             HYP(std::fabs(s) <= 1);
             HYP(a >= s * c);
             HYP(c * c - 2 * s * c * a + a * a >= kRadDs);
             HYP(a >= kEps);
             HYP(a - s * c >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = cosu(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], c = v[1], s = v[2];
             double q = c * c - 2 * s * c * a + a * a;
             out.push_back({t.d1(a) + 2 * (a - s * c) * t.sd1(q),
                            2 * t.d1(a - s * c) + 2 * a * t.d2(a - s * c)});
         }});

    add({"mech_8", 1, {"u", "v"},
         [](const double* v) -> std::string {
             double u = v[0], w = v[1];
             HYP(4 * u * w + w * w >= kRadDs);
             HYP(u >= kEps && w >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double u = v[0], w = v[1];
             out.push_back({t.d1(u) + 4 * w * t.sd1(4 * u * w + w * w),
                            t.d1(u + w) + 2 * t.d1(w)});
         }});

    add({"mech_9", 2, {"a", "b", "c", "s"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             HYP(std::fabs(s) <= 1);
             HYP(a >= s * c && s * c >= b);
             HYP(a - b >= kEps);
             HYP(a - s * c >= kEps);
             return {};
         },
         abcs_draw,
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], s = v[3];
             out.push_back({t.d1(a),
                            t.d1(a - b) + 2 * b * t.d2(a - s * c)});
         }});

    add({"mech_10", 1, {"c", "b"},
         [](const double* v) -> std::string {
             double c = v[0], b = v[1];
             HYP(2 * c >= 3 * b);
             HYP(c * c - 2 * (c - b) * b + b * b >= kRadDs);
             HYP(c - b >= kEps);
             HYP(c >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double c = v[0], b = v[1];
             double q = c * c - 2 * (c - b) * b + b * b;
             out.push_back({t.d1(c), t.d1(c - b) + 2 * b * t.sd1(q)});
         }});

    add({"mech_11", 0, {"c", "b"},
         [](const double* v) -> std::string {
             double c = v[0], b = v[1];
             HYP(c >= b && b >= 0);
             HYP((c - b) * (c - b) + 2 * b * b >= kRadDs);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double c = v[0], b = v[1];
             double q = (c - b) * (c - b) + 2 * b * b;
             out.push_back({t.sv(q), t.v(c - b) + 2 * t.v(b)});
         }});

    add({"mech_12", 1, {"c", "b"},
         [](const double* v) -> std::string {
             double c = v[0], b = v[1];
             HYP(2 * c <= 3 * b);
             HYP(c >= kEps);
             HYP(b >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double c = v[0], b = v[1];
             out.push_back({t.d1(1.5 * b),
                            t.d1(0.5 * b) + 2 * b * t.sd1(c * c)});
         }});

    add({"mech_13", 0, {"b"},
         [](const double* v) -> std::string {
             double b = v[0];
             HYP(b >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) { v[0] = len4(g); },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double b = v[0];
             out.push_back({t.v(1.5 * b), t.v(0.5 * b) + 2 * t.v(b)});
         }});

    add({"mech_14", 2, {"x", "b", "c"},
         [](const double* v) -> std::string {
             double x = v[0], b = v[1], c = v[2];
             HYP(x <= c);
             HYP(c * c - 2 * x * b + b * b >= kRadDs);
             HYP(x >= kEps);
             HYP(x + b >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             v[2] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], b = v[1], c = v[2];
             double q = c * c - 2 * x * b + b * b;
             out.push_back({t.d2(x + b) + 4 * b * b * t.sd2(q), t.d2(x)});
         }});

    add({"mech_15", 2, {"u", "c"},
         [](const double* v) -> std::string {
             double u = v[0], c = v[1];
             HYP(u >= kEps);
             HYP(c >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double u = v[0], c = v[1];
             out.push_back({2 * t.d1(u),
                            2 * t.d1(u / 2) + u / 2 * t.d2(c) +
                                u * t.d2(u / 2)});
         }});

    add({"mech_16", 1, {"u"},
         [](const double* v) -> std::string {
             double u = v[0];
             HYP(u >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) { v[0] = len4(g); },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double u = v[0];
             out.push_back({u * t.d1(u), 2 * u * t.d1(u / 2)});
         }});

    add({"mech_17", 2, {"b", "c", "s"},
         [](const double* v) -> std::string {
             double b = v[0], c = v[1], s = v[2];
             HYP(std::fabs(s) <= 1);
             HYP(b <= s * c);
             HYP(b >= kEps);
             HYP((1 - s) * c / 2 >= kEps);
             HYP((1 + s) * c / 2 - b >= kEps);
             HYP(c - b >= kEps);
             HYP(c * c - 2 * s * c * b + b * b >= kRadDs);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[1] = len4(g);
             v[2] = cosu(g);
             v[0] = g.next_double() * std::fmax(v[2] * v[1], 0.0);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double b = v[0], c = v[1], s = v[2];
             double q = c * c - 2 * s * c * b + b * b;
             double lhs = (1 - s) / 2 * t.d1((1 + s) * c / 2 - b) +
                          2 * (1 - s) * (b + c) * t.sd1(q) -
                          2 * t.d1((1 - s) * c / 2) +
                          (1 + s) / 2 * t.d1((1 + s) * c / 2) - t.d1(c) -
                          b * (1 - s) * t.d2((1 - s) * c / 2);
             double rhs = (1 - s) / 2 * t.d1(c - b) +
                          2 * (1 - s) * (b + c) * t.sd1((c - b) * (c - b)) -
                          2 * t.d1((1 - s) * c / 2) -
                          (1 - s) / 2 * t.d1(c) -
                          b * (1 - s) * t.d2((c - b) / 2);
             out.push_back({lhs, rhs});
         }});

    // ---- auxiliary convexity lemmas --------------------------------------

    add({"aux_redistri", 1, {"a", "b", "u", "v"},
         [](const double* w) -> std::string {
             double a = w[0], b = w[1], u = w[2], v = w[3];
             HYP(a >= b && b >= 0);
             HYP(0 <= u && u <= v && v <= b);
             HYP(b - v >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             sort2_desc(v[0], v[1]);
             v[2] = g.next_double() * v[1];
             v[3] = g.next_double() * v[1];
             if (v[2] > v[3]) std::swap(v[2], v[3]);
         },
         [](const Tau& t, const double* w, std::vector<Sub>& out) {
             double a = w[0], b = w[1], u = w[2], v = w[3];
             out.push_back({t.d1(a + v) + t.d1(b - v),
                            t.d1(a + u) + t.d1(b - u)});
             out.push_back({t.v(a + u) + t.v(b - u),
                            t.v(a + v) + t.v(b - v)});
         }});

    add({"aux_six", 1, {"x1", "x2", "x3", "x4", "x5", "x6"},
         [](const double* v) -> std::string {
             double x1 = v[0], x2 = v[1], x3 = v[2], x4 = v[3];
             double x5 = v[4], x6 = v[5];
             HYP(x1 >= 0 && x2 >= 0 && x3 >= 0 && x4 >= 0);
             HYP(std::max({x1, x2, x3, x4}) <= std::fmax(x5, x6));
             HYP(x1 + x2 + x3 + x4 >= x5 + x6);
             return {};
         },
         [](SplitMix64& g, double* v) {
             for (int i = 0; i < 6; ++i) v[i] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             out.push_back({t.d1(v[4]) + t.d1(v[5]),
                            t.d1(v[0]) + t.d1(v[1]) + t.d1(v[2]) +
                                t.d1(v[3])});
         }});

    add({"aux_extreme", 1, {"a", "b", "c", "d"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], d = v[3];
             HYP(a >= b && b >= c && c >= d && d >= 0);
             HYP(a + d <= b + c);
             return {};
         },
         [](SplitMix64& g, double* v) {
             for (int i = 0; i < 4; ++i) v[i] = len4(g);
             std::sort(v, v + 4, std::greater<double>());
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             out.push_back({t.d1(v[0]) + t.d1(v[3]),
                            t.d1(v[1]) + t.d1(v[2])});
         }});

    // ---- squared-argument difference bounds ------------------------------

    add({"f1", 0, {"a", "b", "c", "d"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], d = v[3];
             HYP(a >= b && b >= 0);
             HYP(d >= c && c >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             sort2_desc(v[0], v[1]);
             v[3] = len4(g);
             v[2] = len4(g);
             if (v[3] < v[2]) std::swap(v[2], v[3]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], d = v[3];
             double m = (a - b + d - c) / 2;
             out.push_back({t.sv(a) - t.sv(b) - t.sv(c) + t.sv(d),
                            2 * t.sv(m)});
         }});

    add({"f2", 0, {"a", "b", "c", "d"},
         [](const double* v) -> std::string {
             double a = v[0], b = v[1], c = v[2], d = v[3];
             HYP(a >= b && b >= c && c >= d && d >= 0);
             HYP(a + d >= b + c);
             return {};
         },
         [](SplitMix64& g, double* v) {
             for (int i = 0; i < 4; ++i) v[i] = len4(g);
             std::sort(v, v + 4, std::greater<double>());
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2], d = v[3];
             out.push_back({t.sv(a) - t.sv(b) - t.sv(c) + t.sv(d),
                            t.sv(a - b - c + d)});
         }});

    add({"merging_simple", 0, {"a", "b", "c"},
         [](const double* v) -> std::string {
             double b = v[1];
             HYP(b >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = g.next_uniform(-4.0, 4.0);
             v[1] = len4(g);
             v[2] = g.next_uniform(-4.0, 4.0);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double a = v[0], b = v[1], c = v[2];
             double lhs = t.v(std::fabs(a)) - t.v(std::fabs(c)) -
                          t.v(std::fabs(a - b)) + t.v(std::fabs(c - b));
             double rhs = a > c ? 2 * (t.v((a - c + b) / 2) -
                                       t.v(std::fabs(a - c - b) / 2))
                                : 0.0;
             out.push_back({lhs, rhs});
         }});

    // ---- scalar convexity/concavity toolbox ------------------------------

    add({"ccdiff_i", 1, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= y && y >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             sort2_desc(v[0], v[1]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             double mid = t.v(x) - t.v(y);
             out.push_back({(x - y) / 2 * (t.d1(x) + t.d1(y)), mid});
             out.push_back({mid, (x - y) * t.d1((x + y) / 2)});
         }});

    add({"ccdiff_ii", 1, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= 0 && y >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             out.push_back({t.v(x + y),
                            t.v(std::fabs(x - y)) +
                                2 * std::fmin(x, y) * t.d1(std::fmax(x, y))});
         }});

    add({"ccpoly_i", 2, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= kEps);
             HYP(y >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             double mid = t.v(x + y);
             out.push_back({t.v(x) + y * t.d1(x), mid});
             out.push_back({mid, t.v(x) + y * t.d1(x) + y * y / 2 * t.d2(x)});
         }});

    add({"ccpoly_ii", 2, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= kEps);
             HYP(y >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             out.push_back({t.d1(x), t.d1(x + y)});
             out.push_back({t.d1(x + y), t.d1(x) + y * t.d2(x)});
         }});

    add({"tranconcave_i", 1, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= 0 && y >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             double mid = t.d1(x) + t.d1(y);
             out.push_back({t.d1(x + y), mid});
             out.push_back({mid, 2 * t.d1((x + y) / 2)});
         }});

    add({"tranconcave_ii", 1, {"x", "a"},
         [](const double* v) -> std::string {
             double x = v[0], a = v[1];
             HYP(x >= 0);
             HYP(a >= 0 && a <= 2);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = 2.0 * (1.0 - g.next_double());
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], a = v[1];
             if (a <= 1.0) {
                 out.push_back({a * t.d1(x), t.d1(a * x)});
             } else {
                 out.push_back({t.d1(a * x), a * t.d1(x)});
             }
         }});

    add({"tranconcave_iii", 1, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(y >= x && x >= 0);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             if (v[0] > v[1]) std::swap(v[0], v[1]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             out.push_back({x * t.d1(y), y * t.d1(x)});
         }});

    add({"transdtran", 1, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= y);
             HYP(y >= kEps);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = len4(g);
             v[1] = len4(g);
             sort2_desc(v[0], v[1]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             out.push_back({t.sv(x * y), x * t.d1(y / 2)});
         }});

    add({"ccsqrtprop", 2, {"x", "y"},
         [](const double* v) -> std::string {
             double x = v[0], y = v[1];
             HYP(x >= 0.01 && y <= 16.0);
             HYP(x <= y);
             return {};
         },
         [](SplitMix64& g, double* v) {
             v[0] = g.next_uniform(0.01, 16.0);
             v[1] = g.next_uniform(0.01, 16.0);
             if (v[0] > v[1]) std::swap(v[0], v[1]);
         },
         [](const Tau& t, const double* v, std::vector<Sub>& out) {
             double x = v[0], y = v[1];
             out.push_back({t.sv(x), t.sv(y)});
             out.push_back({t.sd2(x), 0.0});
             out.push_back({(t.sv(x) + t.sv(y)) / 2, t.sv((x + y) / 2)});
         }});

    return reg;
}

#undef HYP

const std::vector<LemmaDef>& registry() {
    static const std::vector<LemmaDef> reg = build_registry();
    return reg;
}

const LemmaDef& find_lemma(const std::string& id) {
    for (const LemmaDef& d : registry()) {
        if (d.id == id) return d;
    }
    throw domain_error("unknown lemma id: " + id);
}

void require_class(const Transform& t) {
    if (!t.valid()) throw domain_error("lemma check needs a valid transform");
    const Claims& c = t.claims();
    if (!(c.nondecreasing && c.convex && c.concave_derivative &&
          c.zero_at_zero)) {
        throw domain_error("lemma check needs a transform claiming the full "
                           "class (nondecreasing, convex, concave derivative, "
                           "zero at zero): " + t.name());
    }
}

void require_order(const LemmaDef& def, const Transform& t) {
    if (def.order > t.smoothness_order()) {
        std::ostringstream os;
        os << "lemma " << def.id << " evaluates derivative order " << def.order
           << " but transform " << t.name() << " provides closed forms only "
           << "to order " << t.smoothness_order();
        throw capability_error(os.str());
    }
}

}  // namespace

std::vector<LemmaInfo> lemma_registry() {
    std::vector<LemmaInfo> out;
    for (const LemmaDef& d : registry()) out.push_back({d.id, d.order, d.inputs});
    return out;
}

std::vector<Transform> lemma_corpus() {
    return {Transform::power(1.0),        Transform::power(1.5),
            Transform::power(2.0),        Transform::huber(1.0),
            Transform::pseudo_huber(1.0), Transform::log_cosh()};
}

double run_lemma(const std::string& id, const Transform& t,
                 const std::map<std::string, double>& inputs) {
    const LemmaDef& def = find_lemma(id);
    require_class(t);
    require_order(def, t);

    double v[kMaxInputs] = {0};
    if (inputs.size() != def.inputs.size())
        throw domain_error("lemma " + id + " takes " +
                           std::to_string(def.inputs.size()) + " inputs, got " +
                           std::to_string(inputs.size()));
    for (std::size_t i = 0; i < def.inputs.size(); ++i) {
        auto it = inputs.find(def.inputs[i]);
        if (it == inputs.end())
            throw domain_error("lemma " + id + " missing input " +
                               def.inputs[i]);
        if (!std::isfinite(it->second))
            throw domain_error("lemma " + id + " input " + def.inputs[i] +
                               " is not finite");
        v[i] = it->second;
    }

    std::string bad = def.hyp(v);
    if (!bad.empty())
        throw domain_error("lemma " + id + " hypothesis violated: " + bad);

    Tau tau(t);
    std::vector<Sub> subs;
    def.eval(tau, v, subs);
    double worst = -std::numeric_limits<double>::infinity();
    for (const Sub& s : subs) worst = std::fmax(worst, s.lhs - s.rhs);
    return worst;
}

SampleReport sample_lemma(const std::string& id, const Transform& t,
                          long long n, unsigned long long seed) {
    const LemmaDef& def = find_lemma(id);
    require_class(t);
    require_order(def, t);
    if (n <= 0) throw domain_error("sample_lemma needs n >= 1");

    SampleReport rep;
    rep.lemma_id = def.id;
    rep.transform_name = t.name();
    rep.input_names = def.inputs;
    rep.worst_residual = -std::numeric_limits<double>::infinity();
    rep.worst_raw = -std::numeric_limits<double>::infinity();

    struct Entry {
        bool ok;
        double norm;
        double raw;
        double vals[kMaxInputs];
    };
    const long long chunk = std::max<long long>(1024, n);
    std::vector<Entry> entries(static_cast<std::size_t>(chunk));

    long long accepted = 0;
    long long base = 0;
    while (accepted < n) {
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            Tau tau(t);
            std::vector<Sub> subs;
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
            for (long long j = 0; j < chunk; ++j) {
                Entry& e = entries[static_cast<std::size_t>(j)];
                e.ok = false;
                SplitMix64 g = stream_at(
                    seed, static_cast<std::uint64_t>(base + j));
                double v[kMaxInputs] = {0};
                def.draw(g, v);
                if (!def.hyp(v).empty()) continue;
                tau.reset();
                subs.clear();
                def.eval(tau, v, subs);
                if (tau.near_kink()) continue;
                double wn = -std::numeric_limits<double>::infinity();
                double wr = wn;
                for (const Sub& s : subs) {
                    double raw = s.lhs - s.rhs;
                    double scale = std::fmax(
                        1.0, std::fmax(std::fabs(s.lhs), std::fabs(s.rhs)));
                    double norm = raw / scale;
                    if (!std::isfinite(raw)) {
                        norm = std::numeric_limits<double>::infinity();
                        raw = norm;
                    }
                    if (norm > wn) {
                        wn = norm;
                        wr = raw;
                    }
                }
                e.ok = true;
                e.norm = wn;
                e.raw = wr;
                for (std::size_t k = 0; k < def.inputs.size(); ++k)
                    e.vals[k] = v[k];
            }
        }
        for (long long j = 0; j < chunk && accepted < n; ++j) {
            const Entry& e = entries[static_cast<std::size_t>(j)];
            if (!e.ok) continue;
            ++accepted;
            rep.attempts = base + j + 1;
            if (e.norm > rep.worst_residual) {
                rep.worst_residual = e.norm;
                rep.worst_raw = e.raw;
                rep.worst_inputs.assign(e.vals,
                                        e.vals + def.inputs.size());
            }
        }
        base += chunk;
        if (accepted < n && base >= 100000 && accepted < base / 1000) {
            std::ostringstream os;
            os << "lemma " << def.id << " on " << t.name()
               << ": rejection rate above 99.9% (" << accepted << " of "
               << base << " attempts accepted)";
            throw search_error(os.str());
        }
    }
    rep.accepted = accepted;
    return rep;
}

DerivReport derivative_consistency(const Transform& t, int n,
                                   unsigned long long seed) {
    if (!t.valid()) throw domain_error("derivative_consistency needs a valid transform");
    if (n <= 0) throw domain_error("derivative_consistency needs n >= 1");

    DerivReport rep;
    rep.orders_checked = std::min(3, t.smoothness_order());
    const std::vector<double> bps = t.breakpoints();
    const double h0 = std::cbrt(std::numeric_limits<double>::epsilon());
    const Claims& cl = t.claims();

    double prev_x = -1.0, prev_d2 = 0.0;
    bool have_prev = false;
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        SplitMix64 g = stream_at(seed, static_cast<std::uint64_t>(i));
        xs.push_back(len4(g));
    }
    std::sort(xs.begin(), xs.end());

    for (double x : xs) {
        bool near_bp = false;
        for (double bp : bps)
            if (std::fabs(x - bp) < 1e-4 * std::fmax(1.0, bp)) near_bp = true;
        if (near_bp) continue;

        double h = h0 * x;
        for (int k = 1; k <= rep.orders_checked; ++k) {
            if (x - h <= 0.0) continue;
            double lo = (k == 1) ? t.eval(x - h) : t.deriv(x - h, k - 1);
            double hi = (k == 1) ? t.eval(x + h) : t.deriv(x + h, k - 1);
            double fd = (hi - lo) / (2.0 * h);
            double cv = t.deriv(x, k);
            double err = std::fabs(fd - cv) / std::fmax(1.0, std::fabs(cv));
            if (err > rep.worst_fd_error) rep.worst_fd_error = err;
        }

        // sign table of the class: tau' >= 0 and concave, tau'' >= 0 and
        // nonincreasing, tau''' <= 0
        double viol = 0.0;
        if (cl.nondecreasing) viol = std::fmax(viol, -t.deriv(x, 1));
        if (rep.orders_checked >= 2 && cl.convex) {
            double d2 = t.deriv(x, 2);
            viol = std::fmax(viol, -d2);
            if (have_prev && cl.concave_derivative && x > prev_x) {
                double scale = std::fmax(1.0, std::fabs(prev_d2));
                viol = std::fmax(viol, (d2 - prev_d2) / scale);
            }
            prev_x = x;
            prev_d2 = d2;
            have_prev = true;
        }
        if (rep.orders_checked >= 3 && cl.concave_derivative)
            viol = std::fmax(viol, t.deriv(x, 3));
        if (viol > rep.worst_sign_violation) rep.worst_sign_violation = viol;
    }

    rep.derivatives_ok = rep.worst_fd_error <= 1e-6;
    rep.signs_ok = rep.worst_sign_violation <= 1e-9;
    return rep;
}

}  // namespace quadineq
