#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "prw/skeleton.hpp"

namespace prw {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Jump law attached to one kernel edge: an axis-aligned lattice law
// (T * dir with T ~ nu), a sparse 2D lattice law, or an analytic
// characteristic function (for laws with no dense representation).
struct EdgeJump {
    enum class Kind { Axis, Sparse, Analytic };
    Kind kind = Kind::Axis;

    LatticePMF nu;  // Axis
    IVec2 dir{1, 0};

    struct Point {
        std::int64_t x, y;
        double mass;
    };
    std::vector<Point> pts;  // Sparse

    std::function<std::complex<double>(Vec2)> chf_fn;  // Analytic: mu_hat(t)
    std::function<std::complex<double>(Vec2)> def_fn;  // optional: 1 - mu_hat, stable form

    static EdgeJump axis(LatticePMF nu, IVec2 dir);
    static EdgeJump sparse(std::vector<Point> pts);
    static EdgeJump analytic(std::function<std::complex<double>(Vec2)> chf,
                             std::function<std::complex<double>(Vec2)> def = nullptr);

    bool is_lattice() const { return kind != Kind::Analytic; }
    std::complex<double> chf(Vec2 t) const;
    // 1 - chf(t) without cancellation near t = 0 (defect included)
    std::complex<double> deficiency(Vec2 t) const;
};

// Lattice MRW with finite internal chain: kernel + per-edge jump laws.
struct MRWModel {
    Eigen::MatrixXd P;
    Eigen::VectorXd pi;
    std::vector<std::vector<EdgeJump>> jumps;  // [i][j], used where P(i,j) > 0

    int size() const { return static_cast<int>(P.rows()); }
    bool all_lattice() const;
};

MRWModel mrw_from_skeleton(const InternalKernel& kernel, const ConditionalJumpLaws& laws);
MRWModel mrw_single(EdgeJump jump);

// P_t matrix: entries P(c,s) * mu_hat_{c,s}(t)
Eigen::MatrixXcd perturbed_operator(const MRWModel& m, Vec2 t);

struct PrincipalEigen {
    std::complex<double> lambda;
    Eigen::VectorXcd eigvec;  // normalized so pi . eigvec = 1
    double gap;               // |lambda| minus next eigenvalue modulus
};

// dominant eigenvalue by full eigensolve; a gap below gap_tol means t left
// the admissible neighbourhood and raises an error
PrincipalEigen principal_eigenvalue(const MRWModel& m, Vec2 t, double gap_tol = 1e-10);

// 1 - lambda(t); for 1-state models computed from the stable edge
// deficiency instead of the eigensolver
std::complex<double> eigen_deficiency(const MRWModel& m, Vec2 t, double gap_tol = 1e-10);

// Tf = sum_n P^n (f - (pi.f) 1); computed both by partial sums and by the
// linear system (I-P)x = f-(pi.f)1, pi.x = 0; the two must agree to 1e-10
Eigen::VectorXd reduced_resolvent_apply(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi,
                                        const Eigen::VectorXd& f);

// truncated expansion lambda(t)-1 ~ sum_n pi ((P_t-P)T)^n (P_t-P)1, the
// geometric form pi (1 - (P_t-P)T)^{-1} (P_t-P)1; exact when the summed
// vectors leave the range of T (e.g. rank-one kernels), otherwise accurate
// to O(|t|^4) near the origin (the eigen-equation feeds (lambda-1) T w back
// into the remainder, an O(|t|^3) correction to the eigenvector);
// raises on detected divergence (term ratio >= 1); last-term magnitude
// reported through err when non-null
std::complex<double> expansion_eigenvalue(const MRWModel& m, Vec2 t, int order,
                                          double* err = nullptr);

struct SectorReport {
    double K_hat = 0.0;   // max |Im lambda| / Re(1-lambda) over the grid
    double max_im = 0.0;  // max |Im lambda(t)|
    bool pass = false;    // K_hat <= K
    bool real_spectrum_asserted = false;  // reversible + mirror-symmetric laws
};

// smallest empirical sector constant on the grid; for pi-reversible kernels
// with mirror-symmetric laws the imaginary part must vanish (asserted to
// 1e-12, error otherwise)
SectorReport sector_check(const MRWModel& m, const std::vector<Vec2>& grid, double K);

enum class Classification { Diverges, Converges, Undecided };

struct FourierOptions {
    double v = 3.141592653589793;  // neighbourhood half-width
    int j_max = 24;                // r_j = 1 - 2^-j, j = 1..j_max
    int window = 4;                // halvings examined by both rules
    double escape = 1e3;           // divergence: integral must exceed this
    double growth = 0.05;          // ... and grow by this per halving
    double converge_rtol = 1e-3;   // convergence: relative change below this
    // optional second divergence route: per-halving increment at least
    // slope_min * ln 2 (log-divergent integrals have vanishing relative
    // growth, so the growth rule alone cannot see them); disabled at 0
    double slope_min = 0.0;
    int annulus_grid = 48;  // points per side on each dyadic annulus
};

struct FourierReport {
    Classification verdict = Classification::Undecided;
    std::vector<double> integral;  // I(r_j) for j = 1..j_max
    bool periodic_flag = false;    // subgroup test or |lambda| ~ 1 at t != 0
    std::string periodic_note;
    std::string detail;
};

// evaluates I(r) = int_V Re(1/(1 - r lambda(t))) dt on a dyadically refined
// grid for r_j increasing to 1 and classifies the trend; periodicity
// diagnostics are reported, never silently acted on
FourierReport fourier_criterion(const MRWModel& m, FourierOptions opts = {});

struct ReturnProbOptions {
    enum class Method { Auto, Dense, Spectral };
    Method method = Method::Auto;
    double alias_tol = 1e-12;  // torus wrap-around mass bound (spectral)
    std::size_t dense_cost_cap = std::size_t(1) << 31;
};

// P_nu(Z_n = 0) for n = 0..N. Dense path: exact forward recursion over
// (state, lattice point). Spectral path (1-state symmetric lattice laws):
// torus-grid average of phi(t)^n with certified aliasing bound.
std::vector<double> series_return_probs(const MRWModel& m, const Eigen::VectorXd& nu0,
                                        std::int64_t N, ReturnProbOptions opts = {});

// symmetric heavy-tail law with two-sided tail P(|X| >= n) = n^{-1/2}:
// characteristic function via the polylogarithm expansion (valid |t| <= pi)
double heavy_tail_charfn(double t);
// slow oracle route: truncated mass summation, error <= (n_max+1)^{-1/2}
double heavy_tail_charfn_direct(double t, std::int64_t n_max);
// 1-state model whose jump is the product of two such margins
MRWModel heavy_tail_product_model();

} // namespace prw
