#include "ergo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <stdexcept>

#include "json.hpp"

#include "ergo/rng.hpp"

namespace ergo {

std::vector<std::vector<int>> frequency_lattice(int dim, int K) {
    std::vector<std::vector<int>> freqs;
    std::vector<int> k(dim, -K);
    while (true) {
        int first_nonzero = 0;
        for (int a = 0; a < dim; ++a)
            if (k[a] != 0) { first_nonzero = k[a]; break; }
        if (first_nonzero > 0) freqs.push_back(k);
        int a = dim - 1;
        while (a >= 0 && k[a] == K) k[a--] = -K;
        if (a < 0) break;
        ++k[a];
    }
    return freqs;
}

std::vector<std::complex<double>> all_coefficients(const ParticleCloud& cloud, int K) {
    const auto freqs = frequency_lattice(cloud.dim, K);
    const std::size_t nf = freqs.size();
    const std::size_t n = cloud.size();
    const int d = cloud.dim;
    constexpr std::size_t B = 4096;
    const std::size_t nblocks = (n + B - 1) / B;
    std::vector<std::vector<std::complex<double>>> partial(
        nblocks, std::vector<std::complex<double>>(nf, {0.0, 0.0}));
    parallel_for(static_cast<std::ptrdiff_t>(nblocks), [&](std::ptrdiff_t b) {
        auto& acc = partial[b];
        // Per-axis phasor table e^{-2pi i k x_a}, k = -K..K, built by
        // repeated multiplication per particle.
        std::vector<std::complex<double>> table(d * (2 * K + 1));
        const std::size_t hi = std::min(n, (b + 1) * B);
        for (std::size_t i = b * B; i < hi; ++i) {
            const double* p = cloud.point(i);
            const double w = cloud.weights[i];
            for (int a = 0; a < d; ++a) {
                std::complex<double>* row = table.data() + a * (2 * K + 1);
                const std::complex<double> step(std::cos(two_pi * p[a]),
                                                -std::sin(two_pi * p[a]));
                row[K] = {1.0, 0.0};
                for (int k = 1; k <= K; ++k) {
                    row[K + k] = row[K + k - 1] * step;
                    row[K - k] = std::conj(row[K + k]);
                }
            }
            for (std::size_t j = 0; j < nf; ++j) {
                std::complex<double> v(w, 0.0);
                for (int a = 0; a < d; ++a)
                    v *= table[a * (2 * K + 1) + K + freqs[j][a]];
                acc[j] += v;
            }
        }
    });
    for (std::size_t width = 1; width < nblocks; width *= 2)
        for (std::size_t i = 0; i + width < nblocks; i += 2 * width)
            for (std::size_t j = 0; j < nf; ++j)
                partial[i][j] += partial[i + width][j];
    return nblocks ? partial[0] : std::vector<std::complex<double>>(nf, {0.0, 0.0});
}

static double freq_weight(const std::vector<int>& k, double s) {
    double n2 = 0.0;
    for (int ki : k) n2 += double(ki) * ki;
    return std::pow(1.0 + n2, -s);
}

double fourier_distance(const ParticleCloud& mu, const ParticleCloud& nu, int K, double s) {
    if (mu.space != nu.space || mu.dim != nu.dim)
        throw std::invalid_argument("fourier_distance: space mismatch");
    if (K < 1 || s < 0.0) throw std::invalid_argument("fourier_distance: bad K or s");
    const auto freqs = frequency_lattice(mu.dim, K);
    const auto cm = all_coefficients(mu, K);
    const auto cn = all_coefficients(nu, K);
    double total = 0.0;
    for (std::size_t j = 0; j < freqs.size(); ++j)
        total += 2.0 * freq_weight(freqs[j], s) * std::abs(cm[j] - cn[j]);
    return total;
}

double haar_distance_coeffs(const std::vector<std::vector<int>>& freqs,
                            const std::vector<std::complex<double>>& coeffs, double s) {
    double total = 0.0;
    for (std::size_t j = 0; j < freqs.size(); ++j)
        total += 2.0 * freq_weight(freqs[j], s) * std::abs(coeffs[j]);
    return total;
}

double haar_distance(const ParticleCloud& mu, int K, double s) {
    if (K < 1 || s < 0.0) throw std::invalid_argument("haar_distance: bad K or s");
    return haar_distance_coeffs(frequency_lattice(mu.dim, K), all_coefficients(mu, K), s);
}

double haar_distance_on_axes(const ParticleCloud& mu, const std::vector<int>& axes,
                             int K, double s) {
    return haar_distance(project(mu, axes), K, s);
}

namespace {

struct LipschitzTest {
    std::vector<std::vector<int>> freqs;
    std::vector<double> a, b;

    double eval(const double* x, int dim) const {
        double v = 0.0;
        for (std::size_t j = 0; j < freqs.size(); ++j) {
            double phase = 0.0;
            for (int i = 0; i < dim; ++i) phase += freqs[j][i] * x[i];
            phase *= two_pi;
            v += a[j] * std::cos(phase) + b[j] * std::sin(phase);
        }
        return v;
    }

    double integral(const ParticleCloud& cloud) const {
        const int d = cloud.dim;
        return block_sum<double>(static_cast<std::ptrdiff_t>(cloud.size()),
                                 [&](std::ptrdiff_t i) {
                                     return cloud.weights[i] * eval(cloud.point(i), d);
                                 });
    }
};

// Random mixture of <= 6 nonzero frequencies with ||k||_inf <= 3, rescaled so
// both sup|f| <= 1 and the analytic Lipschitz bound <= 1.  Zero frequency is
// excluded, so the Haar integral is exactly 0.
LipschitzTest make_test(int dim, std::mt19937_64& g) {
    LipschitzTest t;
    std::uniform_int_distribution<int> kdist(-3, 3);
    std::normal_distribution<double> cdist(0.0, 1.0);
    std::uniform_int_distribution<int> ndist(1, 6);
    int terms = ndist(g);
    for (int j = 0; j < terms; ++j) {
        std::vector<int> k(dim);
        bool zero = true;
        do {
            zero = true;
            for (int i = 0; i < dim; ++i) {
                k[i] = kdist(g);
                if (k[i] != 0) zero = false;
            }
        } while (zero);
        t.freqs.push_back(k);
        t.a.push_back(cdist(g));
        t.b.push_back(cdist(g));
    }
    double sup = 0.0, lip = 0.0;
    for (std::size_t j = 0; j < t.freqs.size(); ++j) {
        double amp = std::fabs(t.a[j]) + std::fabs(t.b[j]);
        double n2 = 0.0;
        for (int ki : t.freqs[j]) n2 += double(ki) * ki;
        sup += amp;
        lip += two_pi * std::sqrt(n2) * amp;
    }
    double scale = 1.0 / std::max({sup, lip, 1e-300});
    for (std::size_t j = 0; j < t.freqs.size(); ++j) {
        t.a[j] *= scale;
        t.b[j] *= scale;
    }
    return t;
}

} // namespace

double lipschitz_lower_bound(const ParticleCloud& mu, const ParticleCloud& nu,
                             std::uint64_t family_seed, int family_size) {
    if (mu.space != nu.space || mu.dim != nu.dim)
        throw std::invalid_argument("lipschitz_lower_bound: space mismatch");
    auto g = rng_stream(family_seed, "lipschitz_family");
    double best = 0.0;
    for (int j = 0; j < family_size; ++j) {
        LipschitzTest t = make_test(mu.dim, g);
        best = std::max(best, std::fabs(t.integral(mu) - t.integral(nu)));
    }
    return best;
}

double lipschitz_lower_bound_haar(const ParticleCloud& mu, std::uint64_t family_seed,
                                  int family_size) {
    auto g = rng_stream(family_seed, "lipschitz_family");
    double best = 0.0;
    for (int j = 0; j < family_size; ++j) {
        LipschitzTest t = make_test(mu.dim, g);
        best = std::max(best, std::fabs(t.integral(mu)));
    }
    return best;
}

double cesaro_average(const std::vector<double>& values, std::size_t N) {
    if (values.empty() || N == 0 || N > values.size())
        throw std::invalid_argument("cesaro_average: bad length");
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += values[i];
    return s / N;
}

double uniform_window_average(const std::vector<double>& values, std::size_t L) {
    if (L == 0 || L > values.size())
        throw std::invalid_argument("uniform_window_average: bad window");
    double win = 0.0;
    for (std::size_t i = 0; i < L; ++i) win += values[i];
    double best = win;
    for (std::size_t M = 1; M + L <= values.size(); ++M) {
        win += values[M + L - 1] - values[M - 1];
        best = std::max(best, win);
    }
    return best / L;
}

DensityReport density_statistics(const std::vector<double>& values, double epsilon,
                                 std::size_t N) {
    if (epsilon <= 0.0) throw std::invalid_argument("density_statistics: epsilon must be > 0");
    if (N == 0 || N > values.size()) N = values.size();
    DensityReport r;
    r.epsilon = epsilon;
    std::vector<double> indicator(N);
    std::size_t count = 0;
    for (std::size_t i = 0; i < N; ++i) {
        indicator[i] = values[i] > epsilon ? 1.0 : 0.0;
        count += indicator[i] > 0.0;
    }
    r.density = double(count) / N;
    for (std::size_t L = 10; L <= N; L = (L % 3 == 0) ? (L / 3) * 10 : L * 3)
        r.uniform_density_by_window.emplace_back(L, uniform_window_average(indicator, L));
    return r;
}

void write_profile_csv(const std::vector<ProfilePoint>& profile, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_profile_csv: cannot open " + path);
    os << "n,fourier_value,lipschitz_lower\n";
    os << std::scientific << std::setprecision(16);
    for (const auto& p : profile)
        os << p.n << "," << p.fourier_value << "," << p.lipschitz_lower << "\n";
}

std::string density_report_json(const DensityReport& report) {
    nlohmann::json j;
    j["density"] = report.density;
    j["epsilon"] = report.epsilon;
    j["uniform_density_by_window"] = nlohmann::json::array();
    for (const auto& [L, v] : report.uniform_density_by_window)
        j["uniform_density_by_window"].push_back({{"L", L}, {"value", v}});
    return j.dump(2);
}

} // namespace ergo
