#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "ergo/torus.hpp"

namespace ergo {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// One trigonometric term a*cos(2pi k.x) + b*sin(2pi k.x).
struct Harmonic {
    std::vector<int> freq;
    double a = 0.0;
    double b = 0.0;
};

// Circle-valued map on T^arity: integer winding in the last variable plus a
// trigonometric polynomial.  The integer winding is what makes the map well
// defined on the torus; it also gives closed-form derivatives and exact
// sup-norm bounds.
struct FunctionSpec {
    int winding = 0;
    int arity = 1;
    std::vector<Harmonic> harmonics;

    FunctionSpec() = default;
    FunctionSpec(int winding_, int arity_, std::vector<Harmonic> harmonics_ = {});

    // Real-valued lift: winding*x_last + trig part.
    double lift(const double* x) const;
    double lift(double x) const { return lift(&x); }

    // Value on the circle.
    double eval(const double* x) const { return wrap(lift(x)); }
    double eval(double x) const { return wrap(lift(&x)); }

    // Partial derivative of the lift with respect to variable `var` (0-based).
    double deriv(const double* x, int var) const;
    double deriv(double x) const { return deriv(&x, arity - 1); }

    // Upper bound for sup |d/dx_var|:
    // |winding| (last variable only) + sum 2pi|k_var| (|a|+|b|).
    double sup_deriv_bound(int var) const;
    double sup_deriv_bound() const { return sup_deriv_bound(arity - 1); }

    // Exact Haar mean of the lift: winding/2 plus zero-frequency cosine terms.
    double lift_haar_mean() const;

    bool homotopically_nontrivial() const { return winding != 0; }
};

// Constant map (winding 0, value c via a zero-frequency harmonic).
FunctionSpec constant_function(double c, int arity = 1);

} // namespace ergo
