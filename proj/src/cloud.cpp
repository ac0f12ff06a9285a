#include "ergo/cloud.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ergo/rng.hpp"

namespace ergo {

ParticleCloud::ParticleCloud(Space space_, int dim_, std::vector<double> coords_,
                             std::vector<double> weights_)
    : space(space_), dim(dim_), coords(std::move(coords_)), weights(std::move(weights_)) {
    if (weights.empty()) throw std::invalid_argument("ParticleCloud: empty cloud");
    if (coords.size() != weights.size() * static_cast<std::size_t>(dim))
        throw std::invalid_argument("ParticleCloud: coords/weights length mismatch");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("ParticleCloud: negative weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("ParticleCloud: zero total weight");
    if (std::fabs(total - 1.0) > 1e-12)
        for (double& w : weights) w /= total;
    for (double& c : coords) c = wrap(c);
}

ParticleCloud sample_haar(Space space, int dim, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_haar: n must be >= 1");
    if (space == Space::heisenberg && dim != 3)
        throw std::invalid_argument("sample_haar: heisenberg space is 3-dimensional");
    auto g = rng_stream(seed, "sample_haar");
    std::vector<double> coords(n * dim);
    for (double& c : coords) c = uniform01(g);
    return ParticleCloud(space, dim, std::move(coords),
                         std::vector<double>(n, 1.0 / n));
}

ParticleCloud cloud_on_curve(const FunctionSpec& gamma, std::size_t n,
                             CurveSampling mode, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("cloud_on_curve: n must be >= 1");
    if (gamma.arity != 1) throw std::invalid_argument("cloud_on_curve: curve must have arity 1");
    std::vector<double> coords(2 * n);
    if (mode == CurveSampling::stratified) {
        for (std::size_t i = 0; i < n; ++i) {
            double x = (i + 0.5) / n;
            coords[2 * i] = x;
            coords[2 * i + 1] = gamma.eval(x);
        }
    } else {
        auto g = rng_stream(seed, "cloud_on_curve");
        for (std::size_t i = 0; i < n; ++i) {
            double x = uniform01(g);
            coords[2 * i] = x;
            coords[2 * i + 1] = gamma.eval(x);
        }
    }
    return ParticleCloud(Space::torus, 2, std::move(coords),
                         std::vector<double>(n, 1.0 / n));
}

ParticleCloud stratified_grid_cloud(int dim, std::size_t m) {
    if (m == 0) throw std::invalid_argument("stratified_grid_cloud: m must be >= 1");
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= m;
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = i;
        for (int a = dim - 1; a >= 0; --a) {
            coords[i * dim + a] = (r % m + 0.5) / m;
            r /= m;
        }
    }
    return ParticleCloud(Space::torus, dim, std::move(coords),
                         std::vector<double>(n, 1.0 / n));
}

ParticleCloud stratified_section_cloud(int dim, std::size_t m, double last_coord,
                                       Space space) {
    if (dim < 2) throw std::invalid_argument("stratified_section_cloud: dim must be >= 2");
    ParticleCloud base = stratified_grid_cloud(dim - 1, m);
    std::size_t n = base.size();
    std::vector<double> coords(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        for (int a = 0; a < dim - 1; ++a) coords[i * dim + a] = base.coords[i * (dim - 1) + a];
        coords[i * dim + dim - 1] = wrap(last_coord);
    }
    return ParticleCloud(space, dim, std::move(coords),
                         std::vector<double>(n, 1.0 / n));
}

ParticleCloud project(const ParticleCloud& cloud, const std::vector<int>& coord_indices) {
    if (coord_indices.empty()) throw std::invalid_argument("project: empty index set");
    for (int idx : coord_indices)
        if (idx < 0 || idx >= cloud.dim) throw std::invalid_argument("project: index out of range");
    int d = static_cast<int>(coord_indices.size());
    std::size_t n = cloud.size();
    std::vector<double> coords(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (int a = 0; a < d; ++a)
            coords[i * d + a] = cloud.coords[i * cloud.dim + coord_indices[a]];
    return ParticleCloud(Space::torus, d, std::move(coords), cloud.weights);
}

std::complex<double> fourier_coefficient(const ParticleCloud& cloud,
                                         const std::vector<int>& k) {
    if (static_cast<int>(k.size()) != cloud.dim)
        throw std::invalid_argument("fourier_coefficient: frequency arity mismatch");
    bool zero = true;
    for (int ki : k)
        if (ki != 0) { zero = false; break; }
    if (zero) return {1.0, 0.0};
    std::size_t n = cloud.size();
    int d = cloud.dim;
    return block_sum<std::complex<double>>(
        static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
            double phase = 0.0;
            const double* p = cloud.point(i);
            for (int a = 0; a < d; ++a) phase += k[a] * p[a];
            phase *= -two_pi;
            return cloud.weights[i] * std::complex<double>(std::cos(phase), std::sin(phase));
        });
}

void write_cloud_csv(const ParticleCloud& cloud, std::ostream& os) {
    os << "w";
    if (cloud.space == Space::heisenberg)
        os << ",x,y,z";
    else
        for (int a = 1; a <= cloud.dim; ++a) os << ",x" << a;
    os << "\n";
    os << std::scientific << std::setprecision(16);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        os << cloud.weights[i];
        const double* p = cloud.point(i);
        for (int a = 0; a < cloud.dim; ++a) os << "," << p[a];
        os << "\n";
    }
}

void write_cloud_csv(const ParticleCloud& cloud, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_cloud_csv: cannot open " + path);
    write_cloud_csv(cloud, os);
}

ParticleCloud read_cloud_csv(std::istream& is, Space space) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_cloud_csv: empty input");
    int dim = 0;
    for (char c : line)
        if (c == ',') ++dim;
    std::vector<double> coords, weights;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::getline(row, cell, ',');
        weights.push_back(std::stod(cell));
        for (int a = 0; a < dim; ++a) {
            std::getline(row, cell, ',');
            coords.push_back(std::stod(cell));
        }
    }
    return ParticleCloud(space, dim, std::move(coords), std::move(weights));
}

} // namespace ergo
