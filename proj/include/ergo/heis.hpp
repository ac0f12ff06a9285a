#pragma once

#include <cstdint>

#include "ergo/cloud.hpp"

namespace ergo {

// Malcev coordinates on H3(R); group law fixed by the convention
// (x,y,z)*(x',y',z') = (x+x', y+y', z+z'+x*y').
struct HeisElem {
    double x = 0.0, y = 0.0, z = 0.0;
};

HeisElem heis_mul(const HeisElem& g, const HeisElem& h);
HeisElem heis_inv(const HeisElem& g);

// Unique representative of g*H3(Z) in the fundamental cube [0,1)^3.
HeisElem reduce(const HeisElem& g);

struct NilRotation {
    HeisElem u;

    explicit NilRotation(const HeisElem& u_, bool require_minimal = true);
    // Minimality of the torus-factor rotation: 1, x_u, y_u have no small
    // integer relation (|m|,|n| <= 1000, tolerance 1e-9).
    static bool torus_factor_minimal(double xu, double yu);
};

NilRotation default_nilrotation(); // ((sqrt(5)-1)/2, sqrt(2)-1, 0)

HeisElem nil_step(const NilRotation& rot, const HeisElem& p);
void nil_step(const NilRotation& rot, double* p); // in-place on (x,y,z)

// Forget z.
void torus_factor(const HeisElem& p, double* xy);
ParticleCloud torus_factor(const ParticleCloud& cloud);

// Particles (x_i, y_i, z0) with stratified-Lebesgue (x,y); n is rounded to
// the nearest perfect square.
ParticleCloud fiber_section_cloud(double z0, std::size_t n, std::uint64_t seed = 0);

} // namespace ergo
