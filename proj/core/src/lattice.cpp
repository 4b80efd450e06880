#include "prw/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <fftw3.h>

namespace prw {

LatticePMF::LatticePMF(std::int64_t offset, std::vector<double> masses, double defect)
    : offset_(offset), masses_(std::move(masses)), defect_(defect) {
    if (masses_.empty()) throw Error("LatticePMF: empty window");
    for (double m : masses_)
        if (m < 0.0 || !std::isfinite(m)) throw Error("LatticePMF: negative or non-finite mass");
    if (defect_ < 0.0 || defect_ > 1.0) throw Error("LatticePMF: defect outside [0,1]");
    trim(0.0);
}

LatticePMF LatticePMF::from_points(const std::vector<std::pair<std::int64_t, double>>& points,
                                   double defect) {
    if (points.empty()) throw Error("LatticePMF::from_points: no points");
    std::int64_t lo = points[0].first, hi = points[0].first;
    for (const auto& [x, m] : points) {
        (void)m;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [x, m] : points) w[static_cast<std::size_t>(x - lo)] += m;
    return LatticePMF(lo, std::move(w), defect);
}

LatticePMF LatticePMF::uniform(std::int64_t lo, std::int64_t len, double mass) {
    if (len <= 0) throw Error("LatticePMF::uniform: empty interval");
    return LatticePMF(lo, std::vector<double>(static_cast<std::size_t>(len),
                                              mass / static_cast<double>(len)));
}

double LatticePMF::total_mass() const {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

double LatticePMF::mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i)
        s += masses_[i] * static_cast<double>(offset_ + static_cast<std::int64_t>(i));
    return s;
}

double LatticePMF::second_moment() const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses_.size(); ++i) {
        double x = static_cast<double>(offset_ + static_cast<std::int64_t>(i));
        s += masses_[i] * x * x;
    }
    return s;
}

double LatticePMF::max_mass() const {
    return *std::max_element(masses_.begin(), masses_.end());
}

bool LatticePMF::is_symmetric(double tol) const {
    if (lo() != -hi()) return false;
    std::size_t n = masses_.size();
    for (std::size_t i = 0; i < n / 2; ++i)
        if (std::abs(masses_[i] - masses_[n - 1 - i]) > tol) return false;
    return true;
}

LatticePMF LatticePMF::reflected() const {
    std::vector<double> w(masses_.rbegin(), masses_.rend());
    return LatticePMF(-hi(), std::move(w), defect_);
}

void LatticePMF::trim(double threshold) {
    std::size_t a = 0, b = masses_.size();
    while (a + 1 < b && masses_[a] <= threshold) ++a;
    while (b > a + 1 && masses_[b - 1] <= threshold) --b;
    if (a > 0 || b < masses_.size()) {
        masses_ = std::vector<double>(masses_.begin() + static_cast<std::ptrdiff_t>(a),
                                      masses_.begin() + static_cast<std::ptrdiff_t>(b));
        offset_ += static_cast<std::int64_t>(a);
    }
}

void LatticePMF::validate(const LatticeConfig& cfg) const {
    double t = total_mass() + defect_;
    if (std::abs(t - 1.0) > cfg.mass_tol)
        throw Error("LatticePMF: total mass " + std::to_string(t) + " outside tolerance");
}

namespace {

// direct (schoolbook) convolution of the mass windows
std::vector<double> conv_direct(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    // iterate over the shorter operand in the outer loop
    const std::vector<double>& s = a.size() <= b.size() ? a : b;
    const std::vector<double>& l = a.size() <= b.size() ? b : a;
    for (std::size_t i = 0; i < s.size(); ++i) {
        double si = s[i];
        if (si == 0.0) continue;
        for (std::size_t j = 0; j < l.size(); ++j) out[i + j] += si * l[j];
    }
    return out;
}

std::vector<double> conv_fft(const std::vector<double>& a, const std::vector<double>& b) {
    std::size_t n = a.size() + b.size() - 1;
    std::size_t m = 1;
    while (m < n) m <<= 1;
    std::vector<double> fa(m, 0.0), fb(m, 0.0);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    std::size_t mc = m / 2 + 1;
    std::vector<std::complex<double>> ca(mc), cb(mc);
    fftw_plan pa = fftw_plan_dft_r2c_1d(static_cast<int>(m), fa.data(),
                                        reinterpret_cast<fftw_complex*>(ca.data()), FFTW_ESTIMATE);
    fftw_execute(pa);
    fftw_destroy_plan(pa);
    fftw_plan pb = fftw_plan_dft_r2c_1d(static_cast<int>(m), fb.data(),
                                        reinterpret_cast<fftw_complex*>(cb.data()), FFTW_ESTIMATE);
    fftw_execute(pb);
    fftw_destroy_plan(pb);
    for (std::size_t i = 0; i < mc; ++i) ca[i] *= cb[i];
    std::vector<double> out(m);
    fftw_plan pi = fftw_plan_dft_c2r_1d(static_cast<int>(m),
                                        reinterpret_cast<fftw_complex*>(ca.data()), out.data(),
                                        FFTW_ESTIMATE);
    fftw_execute(pi);
    fftw_destroy_plan(pi);
    double inv = 1.0 / static_cast<double>(m);
    out.resize(n);
    for (double& v : out) {
        v *= inv;
        if (v < 0.0) v = 0.0; // round-off from the transform
    }
    return out;
}

// direct evaluation of a single output coefficient
double conv_at(const std::vector<double>& a, const std::vector<double>& b, std::size_t k) {
    std::size_t ilo = k >= b.size() ? k - b.size() + 1 : 0;
    std::size_t ihi = std::min(k, a.size() - 1);
    double s = 0.0;
    for (std::size_t i = ilo; i <= ihi; ++i) s += a[i] * b[k - i];
    return s;
}

constexpr std::size_t kFftThreshold = std::size_t(1) << 21; // direct multiply count

} // namespace

LatticePMF convolve(const LatticePMF& a, const LatticePMF& b, const LatticeConfig& cfg) {
    std::size_t out_size = a.window_size() + b.window_size() - 1;
    if (out_size > cfg.support_cap)
        throw SupportCapError("convolve: support cap exceeded (" + std::to_string(out_size) +
                              " > " + std::to_string(cfg.support_cap) + ")");
    double defect = 1.0 - (1.0 - a.defect()) * (1.0 - b.defect());

    std::vector<double> out;
    std::size_t direct_cost = a.window_size() * b.window_size();
    if (direct_cost <= kFftThreshold) {
        out = conv_direct(a.masses(), b.masses());
    } else {
        out = conv_fft(a.masses(), b.masses());
        // spot check against direct sums on a deterministic pseudo-random
        // sample of output positions; fall back to direct if it fails
        std::uint64_t st = 0x853c49e6748fea9bull ^ (out.size() * 0x9e3779b97f4a7c15ull);
        bool ok = true;
        for (int r = 0; r < 32 && ok; ++r) {
            st = st * 6364136223846793005ull + 1442695040888963407ull;
            std::size_t k = static_cast<std::size_t>((st >> 16) % out.size());
            double ref = conv_at(a.masses(), b.masses(), k);
            if (std::abs(out[k] - ref) > 1e-12 * std::max(1.0, ref)) ok = false;
        }
        if (!ok) out = conv_direct(a.masses(), b.masses());
    }
    LatticePMF r(a.offset() + b.offset(), std::move(out), std::min(1.0, defect));
    r.trim(cfg.trim_threshold);
    return r;
}

LatticePMF n_fold(const LatticePMF& a, std::uint64_t n, const LatticeConfig& cfg) {
    LatticePMF acc = LatticePMF::delta(0);
    LatticePMF base = a;
    while (n > 0) {
        if (n & 1) acc = convolve(acc, base, cfg);
        n >>= 1;
        if (n > 0) base = convolve(base, base, cfg);
    }
    return acc;
}

std::complex<double> char_fn(const LatticePMF& a, double t) {
    // incremental rotation with periodic exact resync
    const auto& w = a.masses();
    std::complex<double> rot = std::polar(1.0, t);
    std::complex<double> sum = 0.0;
    std::complex<double> cur = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if ((i & 1023) == 0)
            cur = std::polar(1.0, t * static_cast<double>(a.offset() + static_cast<std::int64_t>(i)));
        if (w[i] != 0.0) sum += w[i] * cur;
        cur *= rot;
    }
    return sum;
}

std::vector<double> char_fn_grid(const LatticePMF& a, std::int64_t M) {
    if (M < 2 || (M & (M - 1)) != 0) throw ContractError("char_fn_grid: M must be a power of two");
    if (!a.is_symmetric()) throw ContractError("char_fn_grid: law is not symmetric");
    if (static_cast<std::int64_t>(a.window_size()) > M)
        throw SupportCapError("char_fn_grid: window exceeds the torus size");
    std::vector<double> f(static_cast<std::size_t>(M), 0.0);
    for (std::int64_t x = a.lo(); x <= a.hi(); ++x) {
        double m = a.mass_at(x);
        if (m != 0.0) f[static_cast<std::size_t>(((x % M) + M) % M)] += m;
    }
    std::vector<std::complex<double>> c(static_cast<std::size_t>(M / 2 + 1));
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(M), f.data(),
                                       reinterpret_cast<fftw_complex*>(c.data()), FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
    std::vector<double> out(static_cast<std::size_t>(M / 2 + 1));
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = c[j].real();
    return out;
}

double two_sided_tail(const LatticePMF& a, std::int64_t n) {
    if (!a.is_symmetric()) throw ContractError("two_sided_tail: law is not symmetric");
    if (n <= 0) return a.total_mass();
    double s = 0.0;
    for (std::int64_t x = std::max(n, a.lo()); x <= a.hi(); ++x) s += a.mass_at(x);
    for (std::int64_t x = a.lo(); x <= std::min(-n, a.hi()); ++x) s += a.mass_at(x);
    return s;
}

double concentration(const LatticePMF& a, double lambda) {
    if (lambda < 0.0) throw ContractError("concentration: lambda < 0");
    std::int64_t span = static_cast<std::int64_t>(std::floor(lambda)) + 1; // points per window
    const auto& w = a.masses();
    std::int64_t n = static_cast<std::int64_t>(w.size());
    double best = 0.0;
    double cur = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        cur += w[static_cast<std::size_t>(i)];
        if (i >= span) cur -= w[static_cast<std::size_t>(i - span)];
        best = std::max(best, cur);
    }
    return best;
}

double positivity_radius(const LatticePMF& a, int grid, double tol) {
    if (!a.is_symmetric()) throw ContractError("positivity_radius: law is not symmetric");
    const double pi = 3.14159265358979323846;
    for (;;) {
        int k = 1;
        for (; k <= grid; ++k) {
            double t = pi * static_cast<double>(k) / static_cast<double>(grid);
            if (char_fn(a, t).real() < -tol) break;
        }
        if (k > 1 || grid >= (1 << 22))
            return pi * static_cast<double>(k - 1) / static_cast<double>(grid);
        grid *= 4; // phi is 1 at 0 and continuous, so a fine enough grid succeeds
    }
}

LatticePMF alternating_sum_pmf(const LatticePMF& nu, std::uint64_t g, const LatticeConfig& cfg) {
    if (nu.lo() < 1) throw ContractError("alternating_sum_pmf: nu must live on {1,2,...}");
    if (g == 0) throw ContractError("alternating_sum_pmf: g must be >= 1");
    LatticePMF acc = nu;
    LatticePMF neg = nu.reflected();
    for (std::uint64_t k = 2; k <= g; ++k) acc = convolve(acc, (k % 2 == 1) ? nu : neg, cfg);
    return acc;
}

LatticePMF symmetrize(const LatticePMF& a) {
    std::int64_t m = std::max(std::abs(a.lo()), std::abs(a.hi()));
    std::vector<double> w(static_cast<std::size_t>(2 * m + 1), 0.0);
    for (std::int64_t x = 0; x <= m; ++x) {
        double v = 0.5 * (a.mass_at(x) + a.mass_at(-x));
        w[static_cast<std::size_t>(m + x)] = v;
        w[static_cast<std::size_t>(m - x)] = v;
    }
    return LatticePMF(-m, std::move(w), a.defect());
}

LatticePMF geometric_mixture(const LatticePMF& nu, double p_stay, std::uint64_t g_max,
                             double tol, double* trunc_err, const LatticeConfig& cfg) {
    if (p_stay < 0.0 || p_stay >= 1.0)
        throw ContractError("geometric_mixture: p_stay must be in [0,1)");
    if (g_max == 0) throw ContractError("geometric_mixture: g_max must be >= 1");
    double tail = std::pow(p_stay, static_cast<double>(g_max));
    if (tail >= tol)
        throw Error("geometric_mixture: g_max too small for tolerance (tail " +
                    std::to_string(tail) + ")");
    if (trunc_err) *trunc_err = tail;

    // accumulate sum_g P(G=g) law(A_g); P(G >= g_max) is lumped at g_max
    std::map<std::int64_t, double> acc;
    LatticePMF ag = nu;
    double geo = 1.0; // P(G >= g)
    double defect = 0.0;
    for (std::uint64_t g = 1; g <= g_max; ++g) {
        double w = (g == g_max) ? geo : geo * (1.0 - p_stay);
        for (std::size_t i = 0; i < ag.window_size(); ++i) {
            double m = ag.masses()[i];
            if (m != 0.0) acc[ag.lo() + static_cast<std::int64_t>(i)] += w * m;
        }
        defect += w * ag.defect();
        geo *= p_stay;
        if (g < g_max) ag = convolve(ag, (g % 2 == 0) ? nu : nu.reflected(), cfg);
    }
    std::vector<std::pair<std::int64_t, double>> pts(acc.begin(), acc.end());
    LatticePMF mix = LatticePMF::from_points(pts, defect);
    return symmetrize(mix);
}

} // namespace prw
