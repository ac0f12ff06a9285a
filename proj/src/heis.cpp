#include "ergo/heis.hpp"

#include <cmath>
#include <stdexcept>

#include "ergo/torus.hpp"

namespace ergo {

HeisElem heis_mul(const HeisElem& g, const HeisElem& h) {
    return {g.x + h.x, g.y + h.y, g.z + h.z + g.x * h.y};
}

HeisElem heis_inv(const HeisElem& g) {
    return {-g.x, -g.y, -g.z + g.x * g.y};
}

HeisElem reduce(const HeisElem& g) {
    // Right-multiply by gamma = (a,b,c) in H3(Z): (x+a, y+b, z+c+x*b).
    // b normalizes y, c then normalizes z (which picked up x*b), a
    // normalizes x without touching z.
    double b = -std::floor(g.y);
    double z = wrap(g.z + g.x * b);
    double y = g.y + b;
    if (y >= 1.0) y = 0.0; // guard the rounding edge, as in wrap
    return {wrap(g.x), y, z};
}

bool NilRotation::torus_factor_minimal(double xu, double yu) {
    for (int m = -1000; m <= 1000; ++m)
        for (int n = -1000; n <= 1000; ++n) {
            if (m == 0 && n == 0) continue;
            double v = m * xu + n * yu;
            if (std::fabs(v - std::round(v)) < 1e-9) return false;
        }
    return true;
}

NilRotation::NilRotation(const HeisElem& u_, bool require_minimal) : u(u_) {
    if (require_minimal && !torus_factor_minimal(u.x, u.y))
        throw std::invalid_argument(
            "NilRotation: torus factor rotation is not minimal (small integer relation)");
}

NilRotation default_nilrotation() {
    return NilRotation({(std::sqrt(5.0) - 1.0) / 2.0, std::sqrt(2.0) - 1.0, 0.0});
}

HeisElem nil_step(const NilRotation& rot, const HeisElem& p) {
    return reduce(heis_mul(rot.u, p));
}

void nil_step(const NilRotation& rot, double* p) {
    HeisElem q = nil_step(rot, HeisElem{p[0], p[1], p[2]});
    p[0] = q.x;
    p[1] = q.y;
    p[2] = q.z;
}

void torus_factor(const HeisElem& p, double* xy) {
    xy[0] = p.x;
    xy[1] = p.y;
}

ParticleCloud torus_factor(const ParticleCloud& cloud) {
    if (cloud.space != Space::heisenberg)
        throw std::invalid_argument("torus_factor: expected a Heisenberg cloud");
    return project(cloud, {0, 1});
}

ParticleCloud fiber_section_cloud(double z0, std::size_t n, std::uint64_t) {
    if (n == 0) throw std::invalid_argument("fiber_section_cloud: n must be >= 1");
    std::size_t m = static_cast<std::size_t>(std::llround(std::sqrt(double(n))));
    if (m == 0) m = 1;
    ParticleCloud grid = stratified_grid_cloud(2, m);
    std::size_t count = grid.size();
    std::vector<double> coords(count * 3);
    for (std::size_t i = 0; i < count; ++i) {
        coords[3 * i] = grid.coords[2 * i];
        coords[3 * i + 1] = grid.coords[2 * i + 1];
        coords[3 * i + 2] = wrap(z0);
    }
    return ParticleCloud(Space::heisenberg, 3, std::move(coords),
                         std::vector<double>(count, 1.0 / count));
}

} // namespace ergo
