#include "ergo/expansive.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>

#include "json.hpp"

#include "ergo/skew.hpp"

namespace ergo {

ExpansiveSystem::ExpansiveSystem(double alpha_, int p_, FunctionSpec f_)
    : alpha(alpha_), p(p_), f(std::move(f_)) {
    if (std::abs(p) < 2) throw std::invalid_argument("ExpansiveSystem: need |p| >= 2");
    require_irrational(alpha, "ExpansiveSystem");
    if (f.arity != 1) throw std::invalid_argument("ExpansiveSystem: f must have arity 1");
}

void ExpansiveSystem::step(double* xy) const {
    xy[1] = wrap(p * xy[1] + f.lift(xy[0]));
    xy[0] = wrap(xy[0] + alpha);
}

TauValue tau(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x, int N_trunc) {
    if (N_trunc < 1) throw std::invalid_argument("tau: N_trunc must be >= 1");
    TauValue t;
    double pk = 1.0;
    double sum = 0.0;
    for (int n = 0; n < N_trunc; ++n) {
        sum += pk * sys.f.deriv(x + n * sys.alpha);
        pk /= sys.p;
    }
    t.value = sys.p * gamma.deriv(x) + sum;
    double ap = std::abs(double(sys.p));
    t.tail_bound = sys.f.sup_deriv_bound() * std::pow(ap, -(N_trunc - 1)) / (ap - 1.0);
    return t;
}

double delta_n(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x, long n) {
    if (n < 0) throw std::invalid_argument("delta_n: n must be >= 0");
    if (n > 60) throw std::invalid_argument("delta_n: n too large for floating backend");
    double pn = std::pow(double(sys.p), double(n));
    double sum = 0.0;
    for (long k = 0; k < n; ++k)
        sum += std::pow(double(sys.p), double(n - 1 - k)) * sys.f.deriv(x + k * sys.alpha);
    return pn * gamma.deriv(x) + sum;
}

double delta_n_recursive(const ExpansiveSystem& sys, const FunctionSpec& gamma, double x,
                         long n) {
    if (n < 0) throw std::invalid_argument("delta_n_recursive: n must be >= 0");
    if (n > 60) throw std::invalid_argument("delta_n_recursive: n too large");
    double d = gamma.deriv(x);
    for (long k = 0; k < n; ++k) d = sys.p * d + sys.f.deriv(x + k * sys.alpha);
    return d;
}

double kappa(const ExpansiveSystem& sys) {
    double ap = std::abs(double(sys.p));
    return ap / (ap - 1.0) * sys.f.sup_deriv_bound();
}

static void merge_cell(std::vector<std::pair<double, double>>& intervals, double a, double b) {
    if (!intervals.empty() && std::fabs(intervals.back().second - a) < 1e-15)
        intervals.back().second = b;
    else
        intervals.emplace_back(a, b);
}

SSetReport s_set(const ExpansiveSystem& sys, const FunctionSpec& gamma, double epsilon,
                 int grid_n, int N_trunc) {
    if (grid_n < 2) throw std::invalid_argument("s_set: grid too small");
    double tail = tau(sys, gamma, 0.0, N_trunc).tail_bound;
    if (!(epsilon > tail))
        throw std::invalid_argument(
            "s_set: epsilon must exceed the truncation tail bound (raise N_trunc)");
    SSetReport r;
    r.epsilon = epsilon;
    r.N_trunc = N_trunc;
    r.kappa = kappa(sys);
    r.beta = beta_bound(sys, gamma, grid_n);
    for (int i = 0; i < grid_n; ++i) {
        double x = (i + 0.5) / grid_n;
        TauValue t = tau(sys, gamma, x, N_trunc);
        double lo = double(i) / grid_n, hi = double(i + 1) / grid_n;
        double mag = std::fabs(t.value);
        if (mag - t.tail_bound > epsilon)
            merge_cell(r.certified_in, lo, hi);
        else if (mag + t.tail_bound < epsilon)
            merge_cell(r.certified_out, lo, hi);
        else
            merge_cell(r.undetermined, lo, hi);
    }
    return r;
}

double beta_bound(const ExpansiveSystem& sys, const FunctionSpec& gamma, int grid_n) {
    if (grid_n < 1000) throw std::invalid_argument("beta_bound: grid_n must be >= 1000");
    double thr = sys.f.sup_deriv_bound() / (std::abs(double(sys.p)) - 1.0);
    long count = 0;
    for (int i = 0; i < grid_n; ++i) {
        double x = (i + 0.5) / grid_n;
        if (std::fabs(sys.f.deriv(x) + sys.p * gamma.deriv(x)) < thr) ++count;
    }
    return double(count) / grid_n;
}

FunctionSpec coboundary_of(const FunctionSpec& gamma, double alpha, int p) {
    if (gamma.arity != 1) throw std::invalid_argument("coboundary_of: arity 1 expected");
    FunctionSpec f(gamma.winding * (1 - p), 1);
    for (const auto& h : gamma.harmonics) {
        double phi = two_pi * h.freq[0] * alpha;
        double a = h.a * std::cos(phi) + h.b * std::sin(phi) - p * h.a;
        double b = -h.a * std::sin(phi) + h.b * std::cos(phi) - p * h.b;
        f.harmonics.push_back({h.freq, a, b});
    }
    return f;
}

double coboundary_residual(const ExpansiveSystem& sys, const FunctionSpec& gamma) {
    if (gamma.arity != 1) throw std::invalid_argument("coboundary_residual: arity 1 expected");
    if (sys.f.winding != gamma.winding * (1 - sys.p)) return coboundary_infinity();
    const int grid = 10000;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid; ++i) {
        double x = double(i) / grid;
        // Lifts; the winding identity above makes r periodic.
        double r = sys.f.lift(x) - (gamma.lift(x + sys.alpha) - sys.p * gamma.lift(x));
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return (hi - lo) / 2.0;
}

namespace {
inline constexpr double pi = std::numbers::pi;
} // namespace

FunctionSpec make_example_5_5(const ExpansiveSystem& sys) {
    // gamma' = g + h.  The series part g(x) = -sum_{n>=0} p^{-n-1} f'(x+n a)
    // cancels the f' contribution to tau exactly, frequency by frequency, so
    // tau = p*h.  The profile h is a smoothed plateau of height A on (1/2,1)
    // (indicator convolved with a Gaussian) minus a mass-matched narrow
    // Gaussian dip at 1/2, giving mean zero; both have closed-form Fourier
    // coefficients with Gaussian decay, so the truncation at K harmonics and
    // the leakage into [0.05,0.45] are both ~1e-12.  That keeps p^{n-1}|tau|
    // well below 1 on the certified complement for every n <= 30.
    const int K = 192;
    const double sigma_edge = 0.0075;
    const double sigma_dip = 0.0065;
    const double A = 0.1 / sys.p; // tau plateau at p*A = 0.1
    double w_real = -double(sys.f.winding) / (sys.p - 1.0);
    if (std::fabs(w_real - double(std::lround(w_real))) > 1e-9)
        throw std::invalid_argument(
            "make_example_5_5: winding(f)/(p-1) must be an integer for a trig gamma");

    std::map<int, std::complex<double>> gprime; // complex coefficients of gamma'
    for (const auto& h : sys.f.harmonics) {
        int k = h.freq[0];
        std::complex<double> d(pi * k * h.b, pi * k * h.a); // f' coefficient at +k
        std::complex<double> rot = std::polar(1.0, two_pi * k * sys.alpha);
        gprime[k] -= d / (double(sys.p) - rot);
    }
    for (int k = 1; k <= K; ++k) {
        double gd = std::exp(-2.0 * pi * pi * sigma_dip * sigma_dip * k * k);
        double gg = std::exp(-2.0 * pi * pi * sigma_edge * sigma_edge * k * k);
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        std::complex<double> hk(-0.5 * A * sign * gd,
                                (k % 2 == 1) ? A * gg / (pi * k) : 0.0);
        gprime[k] += hk;
    }

    FunctionSpec gamma(static_cast<int>(std::lround(w_real)), 1);
    for (const auto& [k, c] : gprime) {
        if (std::abs(c) < 1e-300) continue;
        gamma.harmonics.push_back({{k}, c.imag() / (pi * k), c.real() / (pi * k)});
    }

    // Certificates on a 10^4 grid.
    const int series_N = 40;
    double sup_out = 0.0, inf_in = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
        double x = double(i) / 10000;
        if (x >= 0.05 && x <= 0.45)
            sup_out = std::max(sup_out, std::fabs(tau(sys, gamma, x, series_N).value));
        if (x >= 0.55 && x <= 0.95)
            inf_in = std::min(inf_in, std::fabs(tau(sys, gamma, x, series_N).value));
    }
    if (sup_out > 0.01 || inf_in < 0.05)
        throw std::runtime_error("make_example_5_5: certificate failure");
    return gamma;
}

CurveExtract limit_curve_extract(const ParticleCloud& cloud, double interval_lo,
                                 double interval_hi, int bins) {
    if (cloud.dim != 2) throw std::invalid_argument("limit_curve_extract: cloud must be 2-D");
    if (!(interval_hi > interval_lo) || bins < 2)
        throw std::invalid_argument("limit_curve_extract: bad interval or bin count");
    CurveExtract out;
    out.bins = bins;
    const double width = (interval_hi - interval_lo) / bins;
    std::vector<double> wsum(bins, 0.0), re(bins, 0.0), im(bins, 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double x = cloud.point(i)[0], y = cloud.point(i)[1];
        if (x < interval_lo || x >= interval_hi) continue;
        int b = std::min(bins - 1, int((x - interval_lo) / width));
        wsum[b] += cloud.weights[i];
        re[b] += cloud.weights[i] * std::cos(two_pi * y);
        im[b] += cloud.weights[i] * std::sin(two_pi * y);
    }
    out.bin_means.assign(bins, std::numeric_limits<double>::quiet_NaN());
    out.bin_spreads.assign(bins, std::numeric_limits<double>::quiet_NaN());
    for (int b = 0; b < bins; ++b) {
        if (wsum[b] <= 0.0) continue; // gap
        out.bin_means[b] = wrap(std::atan2(im[b], re[b]) / two_pi);
    }
    // Second pass for spreads about the circular means.
    std::vector<double> dev(bins, 0.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        double x = cloud.point(i)[0], y = cloud.point(i)[1];
        if (x < interval_lo || x >= interval_hi) continue;
        int b = std::min(bins - 1, int((x - interval_lo) / width));
        double d = circ_signed(y, out.bin_means[b]);
        dev[b] += cloud.weights[i] * d * d;
    }
    for (int b = 0; b < bins; ++b) {
        if (wsum[b] <= 0.0) continue;
        out.bin_spreads[b] = std::sqrt(dev[b] / wsum[b]);
        out.max_vertical_spread = std::max(out.max_vertical_spread, out.bin_spreads[b]);
    }
    int prev = -1;
    for (int b = 0; b < bins; ++b) {
        if (wsum[b] <= 0.0) continue;
        if (prev >= 0 && b == prev + 1)
            out.lipschitz_estimate =
                std::max(out.lipschitz_estimate,
                         circ_dist(out.bin_means[b], out.bin_means[prev]) / width);
        prev = b;
    }
    return out;
}

double uniform_circle_spread() {
    // Circular std of the uniform distribution about any center: deviations
    // are uniform on [-1/2,1/2), std = sqrt(1/12).  Evaluated on a 10^6
    // stratified sample rather than asserted.
    const int n = 1000000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = circ_signed((i + 0.5) / n, 0.0);
        acc += d * d;
    }
    return std::sqrt(acc / n);
}

std::string s_set_report_json(const SSetReport& report) {
    nlohmann::json j;
    j["epsilon"] = report.epsilon;
    j["N_trunc"] = report.N_trunc;
    auto dump = [](const std::vector<std::pair<double, double>>& iv) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& [lo, hi] : iv) a.push_back({lo, hi});
        return a;
    };
    j["certified_in"] = dump(report.certified_in);
    j["certified_out"] = dump(report.certified_out);
    j["undetermined"] = dump(report.undetermined);
    j["kappa"] = report.kappa;
    j["beta"] = report.beta;
    return j.dump(2);
}

} // namespace ergo
