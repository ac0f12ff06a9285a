#pragma once

#include <string>
#include <vector>

#include "ergo/cloud.hpp"
#include "ergo/function_spec.hpp"

namespace ergo {

// Rejects alpha that is within 1e-12 of a rational with denominator <= 10^6
// (continued-fraction convergents).
void require_irrational(double alpha, const char* what);

// Iterated skew product on T^d:
//   T(x_1,...,x_d) = (x_1 + alpha, x_2 + f_1(x_1), ..., x_d + f_{d-1}(x_1..x_{d-1})).
// skews[i] has arity i+1 and feeds coordinates x_1..x_{i+1} into x_{i+2}.
struct SkewSystem {
    int d = 2;
    double alpha = 0.0;
    std::vector<FunctionSpec> skews;

    SkewSystem(int d_, double alpha_, std::vector<FunctionSpec> skews_);

    void step(double* p) const;
    std::vector<double> step(std::vector<double> p) const;

    // True when every skewing map has nonzero winding (Furstenberg class),
    // which makes the system uniquely ergodic.
    bool furstenberg_class() const;
};

// Pure winding skews q_1,...,q_{d-1}; the paper's model class.
SkewSystem furstenberg_default(int d, const std::vector<int>& windings, double alpha);

double golden_alpha(); // (sqrt(5)-1)/2

// fourier_distance(R_t T^n mu, T^n mu) where R_t adds t to the last coordinate.
double vertical_rotation_defect(const SkewSystem& sys, const ParticleCloud& mu,
                                double t, long n, int K, double s);

std::string skew_system_json(const SkewSystem& sys);
SkewSystem skew_system_from_json(const std::string& text);

} // namespace ergo
