#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ergo/cloud.hpp"
#include "ergo/function_spec.hpp"

namespace ergo {

// T(x,y) = (x+alpha, p*y + f(x)) with |p| >= 2.
struct ExpansiveSystem {
    double alpha = 0.0;
    int p = 2;
    FunctionSpec f; // arity 1

    ExpansiveSystem(double alpha_, int p_, FunctionSpec f_);

    void step(double* xy) const;
};

struct TauValue {
    double value = 0.0;
    double tail_bound = 0.0;
};

// tau(x) = p*gamma'(x) + sum_{n>=0} p^{-n} f'(x+n*alpha), truncated at
// N_trunc terms with a certified geometric tail bound.
TauValue tau(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x, int N_trunc);

// Delta_n(x) = p^n gamma'(x) + sum_{k<n} p^{n-1-k} f'(x+k*alpha); the direct
// formula and the recursion Delta_{n+1} = p*Delta_n + f'(x+n*alpha) are both
// implemented and compared in tests.
double delta_n(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x, long n);
double delta_n_recursive(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x,
                         long n);

// |p|/(|p|-1) * sup|f'|.
double kappa(const ExpansiveSystem& sys);

struct SSetReport {
    double epsilon = 0.0;
    int N_trunc = 0;
    std::vector<std::pair<double, double>> certified_in;  // |tau| certified > epsilon
    std::vector<std::pair<double, double>> certified_out; // |tau| certified < epsilon
    std::vector<std::pair<double, double>> undetermined;
    double kappa = 0.0;
    double beta = 0.0;
};

SSetReport s_set(const ExpansiveSystem& sys, const FunctionSpec& gamma, double epsilon,
                 int grid_n, int N_trunc);

// Cor 5.2: beta = m({x : |f'(x) + p*gamma'(x)| < sup|f'|/(|p|-1)}), strict.
double beta_bound(const ExpansiveSystem& sys, const FunctionSpec& gamma, int grid_n);

// f := gamma(x+alpha) - p*gamma(x), the exact coboundary over the rotation.
FunctionSpec coboundary_of(const FunctionSpec& gamma, double alpha, int p);

// Cor 5.3 residual: min_c sup_x |f(x) - (gamma(x+alpha) - p*gamma(x)) - c|
// on a 10^4 grid; +infinity when the winding identity
// winding(f) = winding(gamma)*(1-p) fails.
double coboundary_residual(const ExpansiveSystem& sys, const FunctionSpec& gamma);

inline double coboundary_infinity() { return std::numeric_limits<double>::infinity(); }

// Example 5.5 instantiation: gamma' cancels tau on [0,1/2] and pushes |tau|
// away from 0 on (1/2,1), with certificates
//   sup |tau| on [0.05,0.45] <= 0.01 and inf |tau| on [0.55,0.95] >= 0.05.
FunctionSpec make_example_5_5(const ExpansiveSystem& sys);

struct CurveExtract {
    double lipschitz_estimate = 0.0;
    double max_vertical_spread = 0.0;
    std::vector<double> bin_means;   // circular mean per bin, NaN for gaps
    std::vector<double> bin_spreads; // circular std per bin, NaN for gaps
    int bins = 200;
};

// Bin particles by base coordinate over [interval_lo, interval_hi); per-bin
// circular mean/spread of the fiber coordinate.
CurveExtract limit_curve_extract(const ParticleCloud& cloud, double interval_lo,
                                 double interval_hi, int bins = 200);

// Weighted circular std of uniform samples, used as the reference spread.
double uniform_circle_spread();

std::string s_set_report_json(const SSetReport& report);

} // namespace ergo
