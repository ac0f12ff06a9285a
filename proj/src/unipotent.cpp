#include "ergo/unipotent.hpp"

#include <cmath>

#include "ergo/rng.hpp"

namespace ergo {

static Rat eval_poly(const std::vector<Rat>& coeffs, const Rat& n) {
    Rat v(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * n + *it;
    return v;
}

std::vector<Rat> matrix_power_polynomial(const Unipotent<Rat>& u, int i, int j) {
    if (i < 1 || j > u.d || i >= j)
        throw std::invalid_argument("matrix_power_polynomial: need 1 <= i < j <= d");
    const int m = j - i;
    std::vector<Rat> values;
    Unipotent<Rat> p = identity<Rat>(u.d);
    for (int n = 0; n <= m + 5; ++n) {
        values.push_back(p.at(i, j));
        p = u * p;
    }
    // Newton forward differences at nodes 0..m, then expand the binomial
    // basis C(n,k) into monomials.
    std::vector<Rat> diff(values.begin(), values.begin() + m + 1);
    std::vector<Rat> lead; // diff^k at 0
    for (int k = 0; k <= m; ++k) {
        lead.push_back(diff[0]);
        for (int t = 0; t + 1 < static_cast<int>(diff.size()); ++t)
            diff[t] = diff[t + 1] - diff[t];
        diff.pop_back();
    }
    std::vector<Rat> coeffs(m + 1, Rat(0));
    std::vector<Rat> basis{Rat(1)}; // C(n,0)
    Rat kfact(1);
    for (int k = 0; k <= m; ++k) {
        if (k > 0) {
            // basis *= (n - (k-1)); kfact *= k
            basis.insert(basis.begin(), Rat(0));
            for (int t = 0; t + 1 < static_cast<int>(basis.size()); ++t)
                basis[t] -= Rat(k - 1) * basis[t + 1];
            kfact *= Rat(k);
        }
        for (int t = 0; t < static_cast<int>(basis.size()); ++t)
            coeffs[t] += lead[k] * basis[t] / kfact;
    }
    while (coeffs.size() > 1 && coeffs.back() == Rat(0)) coeffs.pop_back();
    for (int n = 0; n <= m + 5; ++n)
        if (eval_poly(coeffs, Rat(n)) != values[n])
            throw std::logic_error("matrix_power_polynomial: interpolation failed verification");
    return coeffs;
}

Rat lambda_constant(int k) {
    if (k < 0) throw std::invalid_argument("lambda_constant: k must be >= 0");
    // Recursion from the leading-coefficient extraction in the power
    // summation: lambda(k) = lambda(k-1)/k.  Validated once against the
    // interpolation oracle on the all-ones superdiagonal matrix.
    static const bool validated = [] {
        Rat lam(1);
        for (int kk = 1; kk <= 6; ++kk) {
            lam /= Rat(kk);
            Unipotent<Rat> u(kk + 1);
            for (int i = 1; i <= kk; ++i) u.at(i, i + 1) = Rat(1);
            auto poly = matrix_power_polynomial(u, 1, kk + 1);
            if (static_cast<int>(poly.size()) != kk + 1 || poly.back() != lam)
                throw std::logic_error("lambda_constant: recursion disagrees with oracle");
        }
        return true;
    }();
    (void)validated;
    Rat lam(1);
    for (int kk = 1; kk <= k; ++kk) lam /= Rat(kk);
    return lam;
}

Unipotent<double> derivative_step(const SkewSystem& sys, const double* p) {
    const int d = sys.d;
    Unipotent<double> m(d);
    // Basis (d/dx_d, ..., d/dx_1): row i is output coordinate d+1-i, column
    // j is input coordinate d+1-j; the base row (i = d) is trivial.
    for (int i = 1; i < d; ++i) {
        const int c_out = d + 1 - i;
        for (int j = i + 1; j <= d; ++j) {
            const int c_in = d + 1 - j;
            m.at(i, j) = sys.skews[c_out - 2].deriv(p, c_in - 1);
        }
    }
    return m;
}

void CocycleSpec::record_sup_bound(std::uint64_t seed) {
    auto g = rng_stream(seed, "cocycle_sup");
    std::vector<double> p(base_dim);
    double sup = 0.0;
    for (int s = 0; s < 10000; ++s) {
        for (double& c : p) c = uniform01(g);
        Unipotent<double> u = generator(p.data());
        for (double v : u.e) sup = std::max(sup, std::fabs(v));
    }
    sup_bound = std::max(sup, 1.0); // diagonal is 1
}

CocycleSpec derivative_cocycle(const SkewSystem& sys) {
    CocycleSpec spec;
    spec.d = sys.d;
    spec.base_dim = sys.d;
    spec.base_step = [sys](double* p) { sys.step(p); };
    spec.generator = [sys](const double* p) { return derivative_step(sys, p); };
    for (int i = 1; i < sys.d; ++i)
        spec.superdiag_means.push_back(sys.skews[sys.d - 1 - i].winding);
    spec.means_exact = true;
    spec.base_minimal = sys.furstenberg_class();
    spec.record_sup_bound();
    return spec;
}

CocycleSpec functionspec_cocycle(double alpha,
                                 const std::vector<std::vector<FunctionSpec>>& entries) {
    const int d = static_cast<int>(entries.size());
    if (d < 2) throw std::invalid_argument("functionspec_cocycle: need d >= 2");
    for (const auto& row : entries)
        if (static_cast<int>(row.size()) != d)
            throw std::invalid_argument("functionspec_cocycle: entries must be d x d");
    require_irrational(alpha, "functionspec_cocycle");
    CocycleSpec spec;
    spec.d = d;
    spec.base_dim = 1;
    spec.base_step = [alpha](double* p) { p[0] = wrap(p[0] + alpha); };
    spec.generator = [entries, d](const double* p) {
        Unipotent<double> u(d);
        for (int i = 1; i <= d; ++i)
            for (int j = i + 1; j <= d; ++j)
                u.at(i, j) = entries[i - 1][j - 1].lift(*p);
        return u;
    };
    for (int k = 1; k < d; ++k)
        spec.superdiag_means.push_back(entries[k - 1][k].lift_haar_mean());
    spec.means_exact = true;
    spec.base_minimal = true;
    spec.record_sup_bound();
    return spec;
}

Unipotent<double> cocycle_product(const CocycleSpec& spec, std::vector<double> x, long n) {
    if (static_cast<int>(x.size()) != spec.base_dim)
        throw std::invalid_argument("cocycle_product: base dimension mismatch");
    Unipotent<double> acc = identity<double>(spec.d);
    for (long k = 0; k < n; ++k) {
        acc = spec.generator(x.data()) * acc;
        spec.base_step(x.data());
        if ((k & 1023) == 0)
            for (double v : acc.e)
                if (!(std::fabs(v) < 1e300))
                    throw std::overflow_error("cocycle_product: entry magnitude guard (1e300)");
    }
    for (double v : acc.e)
        if (!(std::fabs(v) < 1e300))
            throw std::overflow_error("cocycle_product: entry magnitude guard (1e300)");
    return acc;
}

Unipotent<double> met_limit_prediction(const CocycleSpec& spec) {
    Unipotent<double> pred(spec.d);
    for (int i = 1; i <= spec.d; ++i)
        for (int j = i + 1; j <= spec.d; ++j) {
            double prod = 1.0;
            for (int k = i; k < j; ++k) prod *= spec.superdiag_means[k - 1];
            pred.at(i, j) = boost::rational_cast<double>(lambda_constant(j - i)) * prod;
        }
    return pred;
}

std::vector<MetDeviation> met_convergence_check(const CocycleSpec& spec,
                                                std::vector<double> x,
                                                const std::vector<long>& n_list) {
    const Unipotent<double> pred = met_limit_prediction(spec);
    std::vector<MetDeviation> out;
    Unipotent<double> acc = identity<double>(spec.d);
    long at = 0;
    for (long n : n_list) {
        if (n < at) throw std::invalid_argument("met_convergence_check: n_list must increase");
        for (; at < n; ++at) {
            acc = spec.generator(x.data()) * acc;
            spec.base_step(x.data());
            for (double v : acc.e)
                if (!(std::fabs(v) < 1e300))
                    throw std::overflow_error("met_convergence_check: entry magnitude guard");
        }
        Unipotent<double> dil = dilate(acc, 1.0 / n);
        MetDeviation dev;
        dev.n = n;
        for (int i = 1; i <= spec.d; ++i)
            for (int j = i + 1; j <= spec.d; ++j) {
                double dij = std::fabs(dil.at(i, j) - pred.at(i, j));
                dev.by_entry.emplace_back(i, j, dij);
                dev.max_deviation = std::max(dev.max_deviation, dij);
            }
        out.push_back(dev);
    }
    return out;
}

} // namespace ergo
