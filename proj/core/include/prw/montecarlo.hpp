#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prw/quadcomb.hpp"

namespace prw {

struct TrialDiag {
    std::uint64_t returns_to_origin = 0;
    std::uint64_t last_return_time = 0; // 0 when the walk never returns
    double min_dist_after_burnin = 0.0; // Euclidean, over n in [burnin, T]
};

struct EnsembleOptions {
    std::uint64_t burnin = 0; // 0 = T/10
    int jobs = 1;
    std::uint64_t stream_base = 0; // trial t uses stream stream_base + t
    Config initial = {Letter::N, Letter::E};
};

// Per-trial diagnostics over the discrete chain S_n, n = 0..T. Trial t is a
// pure function of (seed, stream_base + t), so results are identical for any
// worker count and scheduling order.
std::vector<TrialDiag> ensemble(const QuadCombSpec& spec, std::uint64_t T, std::uint64_t trials,
                                std::uint64_t seed, EnsembleOptions opts = {});

struct EnsembleSummary {
    std::uint64_t trials = 0;
    double return_fraction = 0;  // trials with at least one return
    double mean_returns = 0;
    double mean_last_return = 0; // over returning trials
    double min_dist_q25 = 0, min_dist_q50 = 0, min_dist_q75 = 0;
};

EnsembleSummary summarize(const std::vector<TrialDiag>& diags);

struct DichotomyReport {
    std::array<double, kNumConfigs> return_fraction{}; // per initial configuration
    double spread = 0;    // max - min of the fractions
    double max_gap = 0;   // largest gap between sorted adjacent fractions
    bool clustered = false; // two stable clusters across configurations
};

// empirical zero-one probe: the return indicator should show the same
// all-or-nothing trend from every initial configuration; a diagnostic, not
// a proof
DichotomyReport dichotomy_probe(const QuadCombSpec& spec, std::uint64_t T, std::uint64_t trials,
                                std::uint64_t seed, int jobs = 1);

} // namespace prw
