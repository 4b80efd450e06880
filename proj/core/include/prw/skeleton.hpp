#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "prw/quadcomb.hpp"

namespace prw {

// Kernel of the internal (configuration) chain, restricted to the closed
// communicating class reached from (n,e). `states` holds the global config
// indices of the class in increasing order; `matrix` is row-stochastic in
// that local ordering; `pi` solves pi*P = pi.
struct InternalKernel {
    std::vector<int> states;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd pi;

    int local_index(int config) const; // -1 if outside the class
    int size() const { return static_cast<int>(states.size()); }
    // direction followed between breaking times when the chain sits at
    // local state i (i.e. dir of the current letter of that config)
    IVec2 dir(int i) const { return direction(config_from_index(states[static_cast<std::size_t>(i)]).cur); }
};

// Waiting-time laws nu_{c,s} on {1,2,...} per kernel edge with P(c,s) > 0;
// the jump along the edge is T * dir(c.cur) with T ~ nu_{c,s}.
struct ConditionalJumpLaws {
    // nu[i][j] meaningful iff kernel.matrix(i,j) > 0
    std::vector<std::vector<LatticePMF>> nu;
    // unconditional waiting-time law per local state
    std::vector<LatticePMF> nu_total;

    // max |sum_s P(c,s) nu_{c,s} - nu_c| deviation from the mixture
    // identity, where nu_c is the unconditional waiting-time law of c
    double mixture_residual(const InternalKernel& k) const;
};

// P((l',l);(l,l'')) = sum_n prod_{k<n}(1-alpha_k) alpha_n p_n, summed to
// n_max with the closed-form tail; rows are renormalized by their residual
// only when it is below `row_tol`, otherwise an error is raised.
InternalKernel build_kernel(const QuadCombSpec& spec, double row_tol = 1e-9);

// stationary law of an irreducible row-stochastic matrix, residual < 1e-12;
// reducible input raises an error identifying the classes
Eigen::VectorXd stationary(const Eigen::MatrixXd& P);

// conditional waiting-time laws; the geometric tail beyond n_max is carried
// out to `tail_tol` and the remainder lumped at the cap, so each nu keeps
// total mass exactly P-consistent
ConditionalJumpLaws build_jump_laws(const QuadCombSpec& spec, const InternalKernel& kernel,
                                    double tail_tol = 1e-14);

struct Skeleton {
    std::vector<std::uint64_t> breaking_times; // B_0 = 0, B_1, ...
    std::vector<Config> configs;               // C_n = (X_{B_n}, X_{B_n+1})
    std::vector<IVec2> points;                 // Z_n = S_{B_n}
    bool has_break = false;                    // false: no change observed
};

// B_{n+1} = inf{k > B_n : X_k != X_{k+1}}; x0 is the implicit letter X_0
Skeleton extract_skeleton(const Trajectory& tr, Letter x0 = Letter::N);

// skeleton margin jump laws of a generalized DRRW (symmetric by
// construction): eps * sum_{k<=G}(-1)^{k-1} tau_k per axis
std::pair<LatticePMF, LatticePMF> drrw_margin_jumps(const DRRWSpec& spec, std::uint64_t g_max,
                                                    double tol = 1e-12);

} // namespace prw
