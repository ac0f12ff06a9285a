#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ergo/metrics.hpp"
#include "ergo/parallel.hpp"
#include "ergo/skew.hpp"

using namespace ergo;

namespace {

struct SerialGuard {
    bool saved;
    explicit SerialGuard(bool value) : saved(serial_mode()) { serial_mode() = value; }
    ~SerialGuard() { serial_mode() = saved; }
};

} // namespace

TEST_CASE("block_sum matches the plain loop within rounding") {
    std::vector<double> v(100001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.001 * i) / (i + 1.0);
    double blocked = block_sum<double>(v.size(), [&](std::ptrdiff_t i) { return v[i]; });
    double plain = reference::plain_sum<double>(v.size(), [&](std::ptrdiff_t i) { return v[i]; });
    CHECK(blocked == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("block_sum is independent of threading mode (bitwise)") {
    std::vector<double> v(250000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(0.37 * i) * 1e-3;
    double parallel, serial;
    {
        SerialGuard g(false);
        parallel = block_sum<double>(v.size(), [&](std::ptrdiff_t i) { return v[i]; });
    }
    {
        SerialGuard g(true);
        serial = block_sum<double>(v.size(), [&](std::ptrdiff_t i) { return v[i]; });
    }
    CHECK(parallel == serial);
}

TEST_CASE("pushforward agrees bitwise between serial and parallel") {
    SkewSystem sys = furstenberg_default(3, {1, 1}, golden_alpha());
    ParticleCloud base = sample_haar(Space::torus, 3, 40000, 5);
    ParticleCloud a = base, b = base;
    {
        SerialGuard g(false);
        pushforward_inplace(a, [&](double* p) { sys.step(p); }, 50);
    }
    {
        SerialGuard g(true);
        pushforward_inplace(b, [&](double* p) { sys.step(p); }, 50);
    }
    CHECK(a.coords == b.coords);
    CHECK(a.weights == b.weights);
}

TEST_CASE("fourier kernels agree bitwise between serial and parallel") {
    ParticleCloud cloud = sample_haar(Space::torus, 2, 123457, 9);
    double a, b;
    std::complex<double> ca, cb;
    {
        SerialGuard g(false);
        a = haar_distance(cloud, 8, 1.0);
        ca = fourier_coefficient(cloud, {3, -2});
    }
    {
        SerialGuard g(true);
        b = haar_distance(cloud, 8, 1.0);
        cb = fourier_coefficient(cloud, {3, -2});
    }
    CHECK(a == b);
    CHECK(ca == cb);
}

TEST_CASE("all_coefficients matches direct per-frequency evaluation") {
    ParticleCloud cloud = sample_haar(Space::torus, 2, 5000, 13);
    auto freqs = frequency_lattice(2, 4);
    auto coeffs = all_coefficients(cloud, 4);
    REQUIRE(freqs.size() == coeffs.size());
    for (std::size_t j = 0; j < freqs.size(); ++j)
        CHECK(std::abs(coeffs[j] - fourier_coefficient(cloud, freqs[j])) < 1e-12);
}

TEST_CASE("frequency_lattice enumerates one representative per pair") {
    auto freqs = frequency_lattice(2, 8);
    CHECK(freqs.size() == ((17 * 17 - 1) / 2));
    for (const auto& k : freqs) {
        int first = 0;
        for (int c : k)
            if (c != 0) { first = c; break; }
        CHECK(first > 0);
    }
}
