#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prw/quadcomb.hpp"

namespace prw {

// terms of the two margin series: a_n = P(H_{n+1}=0) P(0 <= V_n <= V_{n+1}-V_n),
// b_n with the roles of H and V swapped
struct CriterionTerms {
    std::vector<double> a, b;
};

struct TermsOptions {
    enum class Engine { Auto, Dense, Spectral };
    Engine engine = Engine::Auto;
    double alias_tol = 1e-9;  // absolute torus wrap-around bound (spectral)
    std::size_t dense_cost_cap = std::size_t(1) << 31;
};

// exact terms for n = 0..N-1; Dense iterates the margin windows by
// convolution, Spectral evaluates the same sums on certified 1D torus grids
CriterionTerms series_criterion_terms(const LatticePMF& h_jump, const LatticePMF& v_jump,
                                      std::int64_t N, TermsOptions opts = {});

enum class Verdict { RecurrentAtN, TransientAtN, Undecided };

struct ClassifyOptions {
    double margin = 0.1;       // transient needs gamma > 1 + margin
    double growth_min = 0.01;  // recurrent needs partial-sum log-slope >= this
    double tail_tol = 0.1;     // ... and fitted remaining tail below this
    std::uint64_t g_max = 0;   // geometric cap for the margin laws (0 = auto)
    TermsOptions terms;
};

struct ClassifyReport {
    Verdict verdict = Verdict::Undecided;
    CriterionTerms terms;
    double sum_a = 0, sum_b = 0;        // partial sums at N
    double slope_a = 0, slope_b = 0;    // d(partial sum)/d(ln n), last decade
    double gamma_a = 0, gamma_b = 0;    // fitted power of the terms, last decade
    double tail_a = 0, tail_b = 0;      // fitted remaining tail sum_{n>N}
    std::string detail;
};

// finite-horizon verdict from the two margin series; the evidence (full
// term table, slopes, tail fits) always accompanies the verdict
ClassifyReport classify_drrw(const DRRWSpec& spec, std::int64_t N, ClassifyOptions opts = {});

// quadrature of int int Re(Phi_V(r,s) / (1 - phi_H(t) phi_V(s))) ds dt over
// [-v_half, v_half]^2, with Phi_V(r,s) = sum r^n T_V(n) cos(ns) summed to
// phi_tol; the equivalence with the series criterion holds only when the
// joint walk (H,V) is transient, so the caller must assert that check
double fourier_double_integral(const LatticePMF& h_jump, const LatticePMF& v_jump, double r,
                               int grid_n, double v_half, bool joint_transient,
                               double phi_tol = 1e-14);

struct ConcentrationReport {
    double p = 0;      // positivity radius of the characteristic function
    double L = 0;      // lambda threshold numerator (2 pi N)
    double c_hat = 0;  // max Q(M_n,lambda) / P(0<=M_n<=lambda)
    int violations = 0;
    int evaluated = 0;
};

// sandwich P(0<=M_n<=lambda) <= Q(M_n,lambda) <= C P(0<=M_n<=lambda) for
// lambda >= L/p: left inequality exact, right reported empirically
ConcentrationReport concentration_sandwich_check(const LatticePMF& jump, int n_max,
                                                 const std::vector<double>& lambda_grid,
                                                 int big_n = 6);

struct EsseenReport {
    double q = 0;         // Q(M_n, lambda)
    double integral = 0;  // int_{-pi/lambda}^{pi/lambda} phi^n
    double ratio = 0;     // q / (lambda * integral)
};

// both sides of m lambda int phi^n <= Q <= M lambda int phi^n; requires
// lambda > 2 pi / p
EsseenReport esseen_bounds_check(const LatticePMF& jump, int n, double lambda);

struct BacktrackReport {
    double lhs = 0, rhs = 0;
    bool pass = false;
};

// P(0 <= V_n <= max_{l<=G} eps A_l) <= 2(1+p_v) P(0 <= V_n <= V_{n+1}-V_n),
// both sides by exact enumeration with the geometric variable capped
BacktrackReport backtrack_max_bound_check(const LatticePMF& nu_v, double p_v, int n,
                                          std::uint64_t g_max, double tol = 1e-12);

} // namespace prw
