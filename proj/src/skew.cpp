#include "ergo/skew.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "ergo/metrics.hpp"

namespace ergo {

void require_irrational(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument(std::string(what) + ": alpha must lie in (0,1)");
    // Continued-fraction convergents p/q of alpha; a rational with q <= 10^6
    // within 1e-14 disqualifies.  (A true rational stored as a double sits
    // within a few ulp of p/q, while even the golden ratio keeps all its
    // convergents with q <= 10^6 further than 6e-13 away.)
    double x = alpha;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(x);
        long long ai = static_cast<long long>(a);
        long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > 1000000 || q2 <= 0) break;
        if (q2 >= 1 && std::fabs(alpha - double(p2) / double(q2)) < 1e-14)
            throw std::invalid_argument(std::string(what) +
                                        ": alpha is rational to machine precision");
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
}

SkewSystem::SkewSystem(int d_, double alpha_, std::vector<FunctionSpec> skews_)
    : d(d_), alpha(alpha_), skews(std::move(skews_)) {
    if (d < 2) throw std::invalid_argument("SkewSystem: d must be >= 2");
    require_irrational(alpha, "SkewSystem");
    if (static_cast<int>(skews.size()) != d - 1)
        throw std::invalid_argument("SkewSystem: need d-1 skewing maps");
    for (int i = 0; i < d - 1; ++i)
        if (skews[i].arity != i + 1)
            throw std::invalid_argument("SkewSystem: skews[i] must have arity i+1");
}

void SkewSystem::step(double* p) const {
    // Update top coordinate first so every skew sees the old values.
    for (int c = d - 1; c >= 1; --c) p[c] = wrap(p[c] + skews[c - 1].eval(p));
    p[0] = wrap(p[0] + alpha);
}

std::vector<double> SkewSystem::step(std::vector<double> p) const {
    if (static_cast<int>(p.size()) != d)
        throw std::invalid_argument("SkewSystem::step: dimension mismatch");
    step(p.data());
    return p;
}

bool SkewSystem::furstenberg_class() const {
    for (const auto& f : skews)
        if (f.winding == 0) return false;
    return true;
}

SkewSystem furstenberg_default(int d, const std::vector<int>& windings, double alpha) {
    if (static_cast<int>(windings.size()) != d - 1)
        throw std::invalid_argument("furstenberg_default: need d-1 windings");
    std::vector<FunctionSpec> skews;
    for (int i = 0; i < d - 1; ++i) skews.emplace_back(windings[i], i + 1);
    return SkewSystem(d, alpha, std::move(skews));
}

double golden_alpha() { return (std::sqrt(5.0) - 1.0) / 2.0; }

double vertical_rotation_defect(const SkewSystem& sys, const ParticleCloud& mu,
                                double t, long n, int K, double s) {
    if (mu.dim != sys.d)
        throw std::invalid_argument("vertical_rotation_defect: dimension mismatch");
    ParticleCloud pushed = pushforward(mu, [&](double* p) { sys.step(p); }, n);
    ParticleCloud rotated = pushed;
    for (std::size_t i = 0; i < rotated.size(); ++i) {
        double* p = rotated.point(i);
        p[sys.d - 1] = wrap(p[sys.d - 1] + t);
    }
    return fourier_distance(rotated, pushed, K, s);
}

std::string skew_system_json(const SkewSystem& sys) {
    nlohmann::json j;
    j["format"] = 1;
    j["d"] = sys.d;
    j["alpha"] = sys.alpha;
    j["skews"] = nlohmann::json::array();
    for (const auto& f : sys.skews) {
        nlohmann::json jf;
        jf["winding"] = f.winding;
        jf["harmonics"] = nlohmann::json::array();
        for (const auto& h : f.harmonics)
            jf["harmonics"].push_back({h.freq, h.a, h.b});
        j["skews"].push_back(jf);
    }
    return j.dump(2);
}

SkewSystem skew_system_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("format", 0) != 1)
        throw std::invalid_argument("skew_system_from_json: unsupported format");
    int d = j.at("d").get<int>();
    double alpha = j.at("alpha").get<double>();
    std::vector<FunctionSpec> skews;
    int arity = 1;
    for (const auto& jf : j.at("skews")) {
        FunctionSpec f(jf.at("winding").get<int>(), arity);
        for (const auto& jh : jf.value("harmonics", nlohmann::json::array())) {
            Harmonic h;
            h.freq = jh.at(0).get<std::vector<int>>();
            h.a = jh.at(1).get<double>();
            h.b = jh.at(2).get<double>();
            if (static_cast<int>(h.freq.size()) != arity)
                throw std::invalid_argument("skew_system_from_json: harmonic arity mismatch");
            f.harmonics.push_back(std::move(h));
        }
        skews.push_back(std::move(f));
        ++arity;
    }
    return SkewSystem(d, alpha, std::move(skews));
}

} // namespace ergo
