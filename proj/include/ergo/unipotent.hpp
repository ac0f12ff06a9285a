#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "ergo/skew.hpp"

namespace ergo {

using Rat = boost::rational<boost::multiprecision::cpp_int>;

// Upper triangular with unit diagonal; only the strict upper entries are
// stored.  S is double (fast backend) or Rat (exact backend).
template <class S>
struct Unipotent {
    int d = 1;
    std::vector<S> e; // strict upper, row-major

    explicit Unipotent(int d_ = 1) : d(d_), e(std::size_t(d_) * (d_ - 1) / 2, S(0)) {
        if (d_ < 1) throw std::invalid_argument("Unipotent: bad size");
    }

    // 1-based indices, i < j.
    std::size_t idx(int i, int j) const {
        return std::size_t(i - 1) * d - std::size_t(i) * (i - 1) / 2 + (j - i - 1);
    }
    S& at(int i, int j) { return e[idx(i, j)]; }
    const S& at(int i, int j) const { return e[idx(i, j)]; }

    // Full entry including diagonal/subdiagonal.
    S entry(int i, int j) const {
        if (i == j) return S(1);
        if (i > j) return S(0);
        return at(i, j);
    }

    friend Unipotent operator*(const Unipotent& a, const Unipotent& b) {
        if (a.d != b.d) throw std::invalid_argument("Unipotent: size mismatch");
        Unipotent c(a.d);
        for (int i = 1; i <= a.d; ++i)
            for (int j = i + 1; j <= a.d; ++j) {
                S v = a.at(i, j) + b.at(i, j);
                for (int k = i + 1; k < j; ++k) v += a.at(i, k) * b.at(k, j);
                c.at(i, j) = v;
            }
        return c;
    }

    bool operator==(const Unipotent& o) const { return d == o.d && e == o.e; }
};

template <class S>
Unipotent<S> identity(int d) {
    return Unipotent<S>(d);
}

// Dilation theta_t: entry (i,j) scaled by t^(j-i).
template <class S, class T>
Unipotent<S> dilate(const Unipotent<S>& u, const T& t) {
    if (!(t > T(0))) throw std::invalid_argument("dilate: t must be positive");
    Unipotent<S> r(u.d);
    for (int gap = 1; gap < u.d; ++gap) {
        S scale = S(1);
        for (int k = 0; k < gap; ++k) scale = scale * S(t);
        for (int i = 1; i + gap <= u.d; ++i) r.at(i, i + gap) = u.at(i, i + gap) * scale;
    }
    return r;
}

template <class S>
Unipotent<S> matrix_power(const Unipotent<S>& u, long n) {
    Unipotent<S> r(u.d);
    for (long k = 0; k < n; ++k) r = u * r;
    return r;
}

// Coefficients (ascending) of the polynomial P with P(n) = (u^n)_{i,j},
// obtained by exact interpolation at n = 0..j-i and verified against direct
// powers at n = j-i+1..j-i+5.
std::vector<Rat> matrix_power_polynomial(const Unipotent<Rat>& u, int i, int j);

// lambda(k): leading coefficient of (u^n)_{i,i+k} for unit superdiagonals.
// Computed by the summation recursion lambda(k) = lambda(k-1)/k and
// cross-checked against matrix_power_polynomial for k <= 6.
Rat lambda_constant(int k);

// Cocycle C(x,n) = f(T^{n-1}x) ... f(Tx) f(x) over a base dynamical system.
struct CocycleSpec {
    int d = 2;        // matrix size
    int base_dim = 1; // base point dimension
    std::function<void(double*)> base_step;
    std::function<Unipotent<double>(const double*)> generator;
    std::vector<double> superdiag_means; // Haar means of entries (k,k+1)
    bool means_exact = false;
    double sup_bound = 0.0; // max |entry| over a 10^4 Haar sample
    bool base_minimal = false;

    void record_sup_bound(std::uint64_t seed = 99);
};

// Derivative cocycle of a skew system: generator is the Jacobian in the
// ordered basis (d/dx_d, ..., d/dx_1); exact superdiagonal means are the
// windings (trig parts integrate to zero).
Unipotent<double> derivative_step(const SkewSystem& sys, const double* p);
CocycleSpec derivative_cocycle(const SkewSystem& sys);

// Entrywise FunctionSpec generator over a circle rotation; entries are read
// as real-valued lifts, so the exact mean of entry (i,j) is
// winding/2 + constant term.
CocycleSpec functionspec_cocycle(double alpha,
                                 const std::vector<std::vector<FunctionSpec>>& entries);

Unipotent<double> cocycle_product(const CocycleSpec& spec, std::vector<double> x, long n);

// Thm 1.6 limit: entry (i,j) = lambda(j-i) * prod of superdiagonal means.
Unipotent<double> met_limit_prediction(const CocycleSpec& spec);

struct MetDeviation {
    long n = 0;
    double max_deviation = 0.0;
    std::vector<std::tuple<int, int, double>> by_entry; // (i, j, deviation)
};

std::vector<MetDeviation> met_convergence_check(const CocycleSpec& spec,
                                                std::vector<double> x,
                                                const std::vector<long>& n_list);

} // namespace ergo
