#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ergo/function_spec.hpp"
#include "ergo/parallel.hpp"
#include "ergo/torus.hpp"

namespace ergo {

enum class Space { torus, heisenberg };

// Weighted particle cloud on T^d or the Heisenberg fundamental domain.
// Weights are normalized once at construction; every later operation must
// conserve them bit for bit.
struct ParticleCloud {
    Space space = Space::torus;
    int dim = 0;
    std::vector<double> coords; // row-major, n*dim
    std::vector<double> weights;

    ParticleCloud() = default;
    ParticleCloud(Space space_, int dim_, std::vector<double> coords_,
                  std::vector<double> weights_);

    std::size_t size() const { return weights.size(); }
    const double* point(std::size_t i) const { return coords.data() + i * dim; }
    double* point(std::size_t i) { return coords.data() + i * dim; }
};

ParticleCloud sample_haar(Space space, int dim, std::size_t n, std::uint64_t seed);

enum class CurveSampling { stratified, iid };

// Cloud on the graph {(x, gamma(x))} with Lebesgue base projection.
ParticleCloud cloud_on_curve(const FunctionSpec& gamma, std::size_t n,
                             CurveSampling mode = CurveSampling::stratified,
                             std::uint64_t seed = 0);

// Stratified midpoint grid on T^d, m points per axis (n = m^d particles).
ParticleCloud stratified_grid_cloud(int dim, std::size_t m);

// Stratified grid on the first dim-1 coordinates, last coordinate fixed.
ParticleCloud stratified_section_cloud(int dim, std::size_t m, double last_coord,
                                       Space space = Space::torus);

// n-fold push-forward; `step` maps a coordinate pointer in place.
template <class Step>
ParticleCloud pushforward(const ParticleCloud& cloud, Step&& step, long n) {
    ParticleCloud out = cloud;
    parallel_for(static_cast<std::ptrdiff_t>(out.size()), [&](std::ptrdiff_t i) {
        double* p = out.point(i);
        for (long k = 0; k < n; ++k) step(p);
    });
    return out;
}

template <class Step>
void pushforward_inplace(ParticleCloud& cloud, Step&& step, long n = 1) {
    parallel_for(static_cast<std::ptrdiff_t>(cloud.size()), [&](std::ptrdiff_t i) {
        double* p = cloud.point(i);
        for (long k = 0; k < n; ++k) step(p);
    });
}

ParticleCloud project(const ParticleCloud& cloud, const std::vector<int>& coord_indices);

std::complex<double> fourier_coefficient(const ParticleCloud& cloud,
                                         const std::vector<int>& k);

void write_cloud_csv(const ParticleCloud& cloud, std::ostream& os);
void write_cloud_csv(const ParticleCloud& cloud, const std::string& path);
ParticleCloud read_cloud_csv(std::istream& is, Space space = Space::torus);

} // namespace ergo
