#include <chrono>
#include <cstdio>

#include "ergo/cloud.hpp"
#include "ergo/metrics.hpp"
#include "ergo/skew.hpp"

using namespace ergo;

template <class F>
static double timed(F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int main() {
    const std::size_t n = 1000000;
    const int steps = 200;
    SkewSystem sys = furstenberg_default(2, {1}, golden_alpha());
    ParticleCloud base = sample_haar(Space::torus, 2, n, 42);

    double volatile sink = 0.0;
    for (bool serial : {true, false}) {
        serial_mode() = serial;
        ParticleCloud cloud = base;
        double t_push = timed([&] {
            pushforward_inplace(cloud, [&](double* p) { sys.step(p); }, steps);
        });
        double dist = 0.0;
        double t_fourier = timed([&] { dist = haar_distance(cloud, 8, 1.0); });
        sink = dist;
        std::printf("%-8s pushforward %zu x %d steps: %8.3f s   haar_distance K=8: %8.3f s\n",
                    serial ? "serial" : "openmp", n, steps, t_push, t_fourier);
    }
    (void)sink;
    return 0;
}
