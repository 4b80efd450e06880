#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "prw/criteria.hpp"
#include "prw/logreal.hpp"

namespace prw {

struct CexParams {
    double r = 0.5;
    double delta = 0.5;
    double c = 2.0;
    double alpha = 1.0;
    double beta = 1.0;
    double p2 = 0.2;
    std::int64_t y1 = 1, l1 = 1;
    // v_k = v_coeff k^{2+delta}, u_k = u_coeff k^{u_pow} v_k
    double v_coeff = 1.0;
    double u_coeff = 1.0;
    double u_pow = 1.0;

    double v_k(int k) const;
    double u_k(int k) const;
    void validate() const; // p2 in (0,1-r), 1/v_k < c/k^{2+delta}, v_k = o(u_k)
};

// One level of the waiting-time construction. The sequence grows as an
// exponential tower, so beyond the first levels no fixed-precision value can
// carry the constraint-relevant ratios; each level therefore stores, next to
// the tower-valued y, l, p, the exact double-scale structure relative to
// A_k = ln(1/p_k):
//   ln y = 2 A + ry,   ln l = ln y + A/2 + rl,   ln(1/p_{k+1}) = vr l^2 p^2.
struct CexLevel {
    LogReal y, l; // interval start and length
    LogReal p;    // interval mass p_k
    LogReal q;    // residual 1 - (p_0 + ... + p_k), p_0 = 0

    bool numeric = false; // y, l are exact integers (small scales only)
    double a = 0;         // A_k as a double, +inf once out of range
    double lna = 0;       // ln A_k as a double, +inf once out of range
    bool a_cert = false;  // certified A_k >= 1e15 when a and lna overflow
    double ry = 0, rl = 0;
    double vr = 0; // the CondConst5 ratio, exact (k >= 2)
    int doublings = 0;
};

// the measure is realized with finitely many intervals: levels 1..K carry
// p_1..p_K and the final residual q_K equals p_{K+1}, so masses sum to one
struct CexSequence {
    CexParams params;
    int K = 0;
    std::vector<CexLevel> levels; // levels[k-1] is level k
    LogReal p_next;               // p_{K+1}

    const CexLevel& at(int k) const { return levels.at(static_cast<std::size_t>(k - 1)); }
    LogReal p_after(int k) const; // p_{k+1}, valid for k = 1..K
};

// constraints enforced for k = 2..K; within the feasibility search p_1 is
// bounded above by 1 (it is only pinned once all interval masses are known)
CexSequence build_sequence(const CexParams& params, int K);

struct ConstraintRow {
    int k;
    std::string name;
    bool pass = false;
    double lhs = 0, rhs = 0; // the decisive comparison, in log scale
};

// independent re-evaluation of every constraint. Small levels are checked
// directly in double log space; tower levels through the exact residual
// structure plus certified lower bounds on A_k (each inequality is reduced,
// with the same algebra the construction uses, to a double comparison whose
// slack dwarfs every bound employed)
std::vector<ConstraintRow> verify_constraints(const CexSequence& seq, const CexParams& params);

// symbolic symmetric interval measure: uniform mass on +-[y, y+l) per block
struct IntervalPMF {
    struct Block {
        LogReal y, l, mass;
    };
    std::vector<Block> blocks;
    LogReal defect;

    LogReal total_mass() const; // blocks + defect
    void validate() const;      // disjoint intervals, masses + defect = 1
};

IntervalPMF mu_k(const CexSequence& seq, int k);

// dense normalized positive part of mu_K (the waiting-time law); only
// feasible when y_K + l_K fits under cap
LatticePMF waiting_distribution(const CexSequence& seq, int K, std::int64_t cap);

struct BoundSeries {
    std::vector<int> k; // index of each term (starts at 2)
    std::vector<double> terms;
    std::vector<double> partial; // running sums
};

// terms (1/(l_i p_i)) sqrt(ln(1/p_{i+1})) = sqrt(vr_i), i = 2..K; each must
// stay below sqrt(c) i^{-1-delta/2} and the sums below sqrt(c) zeta(1+delta/2)
BoundSeries bound_upper_series(const CexSequence& seq, int K);

// lower bounds on (y_k/(y_k+l_k)^2) ln(1/p_{k+1}), k = 2..K; each at least u_k/v_k
BoundSeries bound_lower_terms(const CexSequence& seq, int K);

// sup_x P(Y_1+...+Y_m = x) <= (1/l) sqrt(2/m) for Y_i uniform on l >= 2 integers
bool unif_concentration_check(int l, int m, double* max_mass = nullptr,
                              double* bound = nullptr);

// omega(p) = min_u sqrt(2/u) + sqrt(1/(2ep))/(1-u)
double omega_fn(double p);

// E[1{Z>=1}/sqrt(Z)] <= omega(p)/sqrt(2np) for Z ~ B(n,p), exact binomial sums
bool binom_inverse_sqrt_check(int n, double p, double* lhs = nullptr, double* rhs = nullptr);

// jump law of the auxiliary walk: eps sum_{k<=G} (-1)^{k-1} tau_k with G
// geometric of parameter 2/3 (p_stay = 1/3)
LatticePMF step3_jump_law(const LatticePMF& nu, std::uint64_t g_max);

// small-magnitude interval template (y_k, l_k, p_k), k = 1.. ; all dense
struct ToyParams {
    std::vector<std::tuple<std::int64_t, std::int64_t, double>> levels;
};

struct ToyReport {
    int recursion_checks = 0;
    int recursion_violations = 0;
    double max_ratio = 0.0; // max lhs-minus-base over bound (<= 1 means pass)
    bool defect_exact = true;
    std::vector<double> sq_sums; // sum_{n<=N} P(W_n^k = 0)^2 per level k
    ClassifyReport classify;
};

// exact convolution check of the defective-walk recursion
//   P(W_n^k = 0) <= P(W_n^{k-1} = 0) + (1/(l_k p_k)) (1-q_k)^n / sqrt(n)
// for k = 2..K_small and n <= N, plus the criterion term table of the
// normalized positive part
ToyReport toy_scale_validation(const ToyParams& toy, int K_small, int N);

} // namespace prw
