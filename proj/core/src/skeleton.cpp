#include "prw/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace prw {

namespace {

// break weights w_n = prod_{k<n}(1-alpha_k) * alpha_n for n = 1..n_max,
// plus the survival mass prod_{n<=n_max}(1-alpha_n)
struct BreakWeights {
    std::vector<double> w;
    double survival;
};

BreakWeights break_weights(const QuadCombSpec& spec, int config) {
    BreakWeights bw;
    bw.w.resize(static_cast<std::size_t>(spec.n_max));
    double surv = 1.0;
    for (int n = 1; n <= spec.n_max; ++n) {
        double a = spec.alpha_at(config, n);
        bw.w[static_cast<std::size_t>(n - 1)] = surv * a;
        surv *= 1.0 - a;
    }
    bw.survival = surv;
    return bw;
}

// geometric tail extension shared by the unconditional and the per-edge
// laws: appends survival * abar*(1-abar)^j masses (times `scale`) until
// the remainder drops below tol, lumping it at the cap
void append_tail(std::vector<double>& masses, const QuadCombSpec& spec, int config, double survival,
                 double scale, double tol) {
    double rem = survival * scale;
    if (rem <= 0.0) return;
    if (spec.tail == TailRule::Absorb) {
        masses.push_back(rem);
        return;
    }
    double abar = spec.alpha_at(config, spec.n_max + 1);
    if (abar <= 0.0) throw Error("skeleton: non-summable change-time series (constant alpha = 0)");
    while (rem * (1.0 - abar) > tol) {
        masses.push_back(rem * abar);
        rem *= 1.0 - abar;
    }
    masses.push_back(rem);
}

std::vector<char> reachable(const Eigen::MatrixXd& P, int start, bool transpose) {
    int n = static_cast<int>(P.rows());
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<int> stack{start};
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            double v = transpose ? P(j, i) : P(i, j);
            if (v > 0.0 && !seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = 1;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

} // namespace

int InternalKernel::local_index(int config) const {
    auto it = std::lower_bound(states.begin(), states.end(), config);
    if (it == states.end() || *it != config) return -1;
    return static_cast<int>(it - states.begin());
}

InternalKernel build_kernel(const QuadCombSpec& spec, double row_tol) {
    spec.validate();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(kNumConfigs, kNumConfigs);
    for (int ci = 0; ci < kNumConfigs; ++ci) {
        Config c = config_from_index(ci);
        BreakWeights bw = break_weights(spec, ci);
        if (spec.tail == TailRule::Const && spec.alpha_at(ci, spec.n_max + 1) <= 0.0 &&
            bw.survival > row_tol)
            throw Error("build_kernel: non-summable series for config " + config_name(c));
        auto succ = successors(c.cur);
        double row_sum = 0.0;
        for (int k = 0; k < 3; ++k) {
            double e = 0.0;
            for (int n = 1; n <= spec.n_max; ++n)
                e += bw.w[static_cast<std::size_t>(n - 1)] * spec.turn_at(ci, k, n);
            e += bw.survival * spec.turn_at(ci, k, spec.n_max + 1);
            full(ci, config_index({c.cur, succ[static_cast<std::size_t>(k)]})) = e;
            row_sum += e;
        }
        if (std::abs(row_sum - 1.0) > row_tol)
            throw Error("build_kernel: row residual " + std::to_string(std::abs(row_sum - 1.0)) +
                        " for config " + config_name(c));
        full.row(ci) /= row_sum;
    }

    InternalKernel k;
    std::vector<char> seen = reachable(full, config_index({Letter::N, Letter::E}), false);
    for (int i = 0; i < kNumConfigs; ++i)
        if (seen[static_cast<std::size_t>(i)]) k.states.push_back(i);
    int m = static_cast<int>(k.states.size());
    k.matrix.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            k.matrix(i, j) = full(k.states[static_cast<std::size_t>(i)],
                                  k.states[static_cast<std::size_t>(j)]);
    k.pi = stationary(k.matrix);
    return k;
}

Eigen::VectorXd stationary(const Eigen::MatrixXd& P) {
    int n = static_cast<int>(P.rows());
    if (n == 0 || P.cols() != n) throw Error("stationary: empty or non-square kernel");

    std::vector<char> fwd = reachable(P, 0, false), bwd = reachable(P, 0, true);
    std::string out_fwd, out_bwd;
    for (int i = 0; i < n; ++i) {
        if (!fwd[static_cast<std::size_t>(i)]) out_fwd += " " + std::to_string(i);
        if (!bwd[static_cast<std::size_t>(i)]) out_bwd += " " + std::to_string(i);
    }
    if (!out_fwd.empty() || !out_bwd.empty())
        throw Error("stationary: reducible kernel; states unreachable from 0:{" + out_fwd +
                    " }, states not reaching 0:{" + out_bwd + " }");

    // pi (P - I) = 0 with sum(pi) = 1: replace the last column of the
    // transposed system by the normalization
    Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = A.colPivHouseholderQr().solve(b);

    // polish with a few power steps, then enforce the residual contract
    for (int it = 0; it < 64; ++it) {
        Eigen::VectorXd next = P.transpose() * pi;
        next /= next.sum();
        double diff = (next - pi).cwiseAbs().maxCoeff();
        pi = next;
        if (diff < 1e-16) break;
    }
    double resid = (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
    if (resid > 1e-12)
        throw Error("stationary: residual " + std::to_string(resid) + " exceeds 1e-12");
    return pi;
}

ConditionalJumpLaws build_jump_laws(const QuadCombSpec& spec, const InternalKernel& kernel,
                                    double tail_tol) {
    int m = kernel.size();
    ConditionalJumpLaws out;
    out.nu.assign(static_cast<std::size_t>(m), std::vector<LatticePMF>(static_cast<std::size_t>(m)));
    out.nu_total.reserve(static_cast<std::size_t>(m));

    for (int i = 0; i < m; ++i) {
        int ci = kernel.states[static_cast<std::size_t>(i)];
        Config c = config_from_index(ci);
        BreakWeights bw = break_weights(spec, ci);

        std::vector<double> total(bw.w);
        append_tail(total, spec, ci, bw.survival, 1.0, tail_tol);
        out.nu_total.emplace_back(1, total, 0.0);

        auto succ = successors(c.cur);
        for (int k = 0; k < 3; ++k) {
            int sj = kernel.local_index(config_index({c.cur, succ[static_cast<std::size_t>(k)]}));
            if (sj < 0) continue;
            double pij = kernel.matrix(i, sj);
            if (pij <= 0.0) continue;
            std::vector<double> masses(static_cast<std::size_t>(spec.n_max));
            for (int n = 1; n <= spec.n_max; ++n)
                masses[static_cast<std::size_t>(n - 1)] =
                    bw.w[static_cast<std::size_t>(n - 1)] * spec.turn_at(ci, k, n) / pij;
            double pbar = spec.turn_at(ci, k, spec.n_max + 1);
            append_tail(masses, spec, ci, bw.survival, pbar / pij, tail_tol);
            LatticePMF nu(1, std::move(masses), 0.0);
            nu.trim(0.0);
            out.nu[static_cast<std::size_t>(i)][static_cast<std::size_t>(sj)] = std::move(nu);
        }
    }
    return out;
}

double ConditionalJumpLaws::mixture_residual(const InternalKernel& k) const {
    double worst = 0.0;
    for (int i = 0; i < k.size(); ++i) {
        const LatticePMF& tot = nu_total[static_cast<std::size_t>(i)];
        std::int64_t hi = tot.hi();
        for (int j = 0; j < k.size(); ++j)
            if (k.matrix(i, j) > 0.0) hi = std::max(hi, nu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].hi());
        for (std::int64_t n = 1; n <= hi; ++n) {
            double mix = 0.0;
            for (int j = 0; j < k.size(); ++j)
                if (k.matrix(i, j) > 0.0)
                    mix += k.matrix(i, j) *
                           nu[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].mass_at(n);
            worst = std::max(worst, std::abs(mix - tot.mass_at(n)));
        }
    }
    return worst;
}

Skeleton extract_skeleton(const Trajectory& tr, Letter x0) {
    Skeleton sk;
    if (tr.letters.empty()) throw Error("extract_skeleton: empty trajectory");
    sk.breaking_times.push_back(0);
    sk.configs.push_back({x0, tr.letters[0]});
    sk.points.push_back(tr.positions[0]);
    // letters[k] = X_{k+1}: a break at time k >= 1 means letters[k-1] != letters[k]
    for (std::size_t k = 1; k < tr.letters.size(); ++k) {
        if (tr.letters[k] != tr.letters[k - 1]) {
            sk.breaking_times.push_back(k);
            sk.configs.push_back({tr.letters[k - 1], tr.letters[k]});
            sk.points.push_back(tr.positions[k]);
            sk.has_break = true;
        }
    }
    return sk;
}

std::pair<LatticePMF, LatticePMF> drrw_margin_jumps(const DRRWSpec& spec, std::uint64_t g_max,
                                                    double tol) {
    spec.validate();
    return {geometric_mixture(spec.nu_h, spec.p_h, g_max, tol),
            geometric_mixture(spec.nu_v, spec.p_v, g_max, tol)};
}

} // namespace prw
