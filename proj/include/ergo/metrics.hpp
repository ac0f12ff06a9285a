#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ergo/cloud.hpp"

namespace ergo {

// Frequencies 0 < ||k||_inf <= K, one representative per conjugate pair
// (first nonzero component positive).  mu_hat(-k) = conj(mu_hat(k)), so
// sums over the full lattice double each representative's contribution.
std::vector<std::vector<int>> frequency_lattice(int dim, int K);

// All coefficients at the representative frequencies, deterministic
// blocked reduction.
std::vector<std::complex<double>> all_coefficients(const ParticleCloud& cloud, int K);

struct MetricDefaults {
    static int K_for(int dim) { return dim >= 4 ? 4 : 8; }
    static constexpr double s = 1.0;
};

double fourier_distance(const ParticleCloud& mu, const ParticleCloud& nu, int K, double s);
double haar_distance(const ParticleCloud& mu, int K, double s);
double haar_distance_coeffs(const std::vector<std::vector<int>>& freqs,
                            const std::vector<std::complex<double>>& coeffs, double s);

// Restriction of haar_distance to frequencies supported on the listed axes
// (all other components zero).
double haar_distance_on_axes(const ParticleCloud& mu, const std::vector<int>& axes,
                             int K, double s);

// Max over a family of random low-frequency trig mixtures, rescaled so the
// analytic Lipschitz bound and sup bound are both <= 1.  Always a valid
// lower bound for the weak-star norm of mu - nu.
double lipschitz_lower_bound(const ParticleCloud& mu, const ParticleCloud& nu,
                             std::uint64_t family_seed, int family_size);
// Same family against Haar (the mixtures have zero Haar integral).
double lipschitz_lower_bound_haar(const ParticleCloud& mu,
                                  std::uint64_t family_seed, int family_size);

struct ProfilePoint {
    long n = 0;
    double fourier_value = 0.0;
    double lipschitz_lower = 0.0;
};

// haar_distance of T^n mu at n = 0, stride, 2*stride, ..., n_max, with
// incremental push-forward.
template <class Step>
std::vector<ProfilePoint> distance_profile(Step&& step, const ParticleCloud& mu,
                                           long n_max, int K, double s, long stride,
                                           std::uint64_t family_seed = 1,
                                           int family_size = 32) {
    std::vector<long> samples;
    for (long n = 0; n <= n_max; n += stride) samples.push_back(n);
    return distance_profile_at(step, mu, samples, K, s, family_seed, family_size);
}

template <class Step>
std::vector<ProfilePoint> distance_profile_at(Step&& step, const ParticleCloud& mu,
                                              const std::vector<long>& samples, int K,
                                              double s, std::uint64_t family_seed = 1,
                                              int family_size = 32) {
    std::vector<ProfilePoint> out;
    ParticleCloud cur = mu;
    long at = 0;
    for (long n : samples) {
        pushforward_inplace(cur, step, n - at);
        at = n;
        ProfilePoint p;
        p.n = n;
        p.fourier_value = haar_distance(cur, K, s);
        p.lipschitz_lower = lipschitz_lower_bound_haar(cur, family_seed, family_size);
        out.push_back(p);
    }
    return out;
}

double cesaro_average(const std::vector<double>& values, std::size_t N);
double uniform_window_average(const std::vector<double>& values, std::size_t L);

struct DensityReport {
    double density = 0.0;
    std::vector<std::pair<std::size_t, double>> uniform_density_by_window;
    double epsilon = 0.0;
};

// Exceptional set J = {n : values[n] > epsilon}: plain density over [0,N)
// and max sliding-window density on the geometric ladder L = 10,30,100,...
DensityReport density_statistics(const std::vector<double>& values, double epsilon,
                                 std::size_t N = 0);

void write_profile_csv(const std::vector<ProfilePoint>& profile, const std::string& path);
std::string density_report_json(const DensityReport& report);

} // namespace ergo
