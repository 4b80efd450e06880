#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace prw {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a result window would exceed the configured support cap.
struct SupportCapError : Error {
    explicit SupportCapError(const std::string& what) : Error(what) {}
};

// Violated operation precondition (e.g. symmetry required).
struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(what) {}
};

struct LatticeConfig {
    std::size_t support_cap = std::size_t(1) << 26; // max window entries
    double trim_threshold = 1e-15;                  // per-entry trim
    double mass_tol = 1e-9;                         // |masses+defect-1| tolerance
};

// Possibly defective probability mass function on Z, stored as a dense
// window [offset, offset+masses.size()). Mass sent to the cemetery is
// carried explicitly in `defect` (never renormalized away).
class LatticePMF {
  public:
    LatticePMF() : offset_(0), masses_{1.0}, defect_(0.0) {} // delta_0

    LatticePMF(std::int64_t offset, std::vector<double> masses, double defect = 0.0);

    static LatticePMF delta(std::int64_t x) { return LatticePMF(x, {1.0}, 0.0); }
    // points: (position, mass) pairs, need not be sorted
    static LatticePMF from_points(const std::vector<std::pair<std::int64_t, double>>& points,
                                  double defect = 0.0);
    // uniform on the integer interval [lo, lo+len) with total mass `mass`
    static LatticePMF uniform(std::int64_t lo, std::int64_t len, double mass = 1.0);

    std::int64_t offset() const { return offset_; }
    const std::vector<double>& masses() const { return masses_; }
    double defect() const { return defect_; }

    std::int64_t lo() const { return offset_; }
    std::int64_t hi() const { return offset_ + static_cast<std::int64_t>(masses_.size()) - 1; }
    std::size_t window_size() const { return masses_.size(); }

    double mass_at(std::int64_t x) const {
        if (x < lo() || x > hi()) return 0.0;
        return masses_[static_cast<std::size_t>(x - offset_)];
    }

    double total_mass() const;
    double mean() const;
    double second_moment() const;
    double max_mass() const;

    bool is_symmetric(double tol = 1e-12) const;
    LatticePMF reflected() const; // law of -X

    // drop sub-threshold entries at the window ends (dropped mass stays
    // within the total-mass tolerance; defect is untouched)
    void trim(double threshold);
    void validate(const LatticeConfig& cfg = LatticeConfig{}) const;

  private:
    std::int64_t offset_;
    std::vector<double> masses_;
    double defect_;
};

// law of X+Y for independent X~a, Y~b; defect composes as
// 1-(1-d_a)(1-d_b). Uses FFT when the direct cost is large, with a
// post-hoc residual spot check against direct sums; falls back to the
// direct algorithm if the check fails.
LatticePMF convolve(const LatticePMF& a, const LatticePMF& b,
                    const LatticeConfig& cfg = LatticeConfig{});

// n-fold convolution power (n = 0 gives delta_0), via binary powering
LatticePMF n_fold(const LatticePMF& a, std::uint64_t n,
                  const LatticeConfig& cfg = LatticeConfig{});

// sum_x mass(x) e^{itx}; real for symmetric laws
std::complex<double> char_fn(const LatticePMF& a, double t);

// char_fn at t = 2*pi*j/M for j = 0..M/2 via FFT (symmetric law, M a power
// of two at least the window size; masses wrapped onto the M-torus)
std::vector<double> char_fn_grid(const LatticePMF& a, std::int64_t M);

// P(|X| >= n); requires a symmetric
double two_sided_tail(const LatticePMF& a, std::int64_t n);

// Levy concentration function Q(a, lambda) = sup_x P(x <= X <= x+lambda)
double concentration(const LatticePMF& a, double lambda);

// largest p on the grid {k*pi/grid} with char_fn >= -tol on [-p, p];
// requires a symmetric
double positivity_radius(const LatticePMF& a, int grid = 4096, double tol = 1e-12);

// exact law of A_g = sum_{k=1}^g (-1)^{k-1} tau_k, tau_k iid ~ nu;
// nu must be supported on {1,2,...}
LatticePMF alternating_sum_pmf(const LatticePMF& nu, std::uint64_t g,
                               const LatticeConfig& cfg = LatticeConfig{});

// symmetrization (law of eps*X with eps a Rademacher sign)
LatticePMF symmetrize(const LatticePMF& a);

// law of eps * sum_{k=1}^G (-1)^{k-1} tau_k with G geometric on {1,2,...}
// of parameter 1-p_stay. The geometric is capped at g_max (tail mass
// lumped at g_max); errors out if p_stay^g_max exceeds `tol`. The
// truncation bound is reported through trunc_err when non-null.
LatticePMF geometric_mixture(const LatticePMF& nu, double p_stay, std::uint64_t g_max,
                             double tol = 1e-12, double* trunc_err = nullptr,
                             const LatticeConfig& cfg = LatticeConfig{});

} // namespace prw
