#include "prw/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "prw/lattice.hpp"

namespace prw {

namespace {

TrialDiag run_trial(const QuadCombSpec& spec, std::uint64_t T, std::uint64_t burnin,
                    std::uint64_t seed, std::uint64_t stream, Config initial) {
    PrwStepper st(spec, seed, stream, initial);
    TrialDiag d;
    double min_sq = std::numeric_limits<double>::infinity();
    if (burnin == 0) min_sq = 0.0; // S_0 = origin is inside the window
    for (std::uint64_t n = 1; n <= T; ++n) {
        st.step();
        IVec2 p = st.position();
        if (p.x == 0 && p.y == 0) {
            ++d.returns_to_origin;
            d.last_return_time = n;
        }
        if (n >= burnin) {
            double sq = static_cast<double>(p.x) * static_cast<double>(p.x) +
                        static_cast<double>(p.y) * static_cast<double>(p.y);
            min_sq = std::min(min_sq, sq);
        }
    }
    d.min_dist_after_burnin = std::sqrt(min_sq);
    return d;
}

// deterministic partition of [0, trials) across workers; each result slot is
// written by exactly one thread, so aggregation order cannot matter
void parallel_trials(std::uint64_t trials, int jobs,
                     const std::function<void(std::uint64_t)>& body) {
    int nw = std::max(1, jobs);
    if (nw == 1 || trials < 2) {
        for (std::uint64_t t = 0; t < trials; ++t) body(t);
        return;
    }
    std::vector<std::thread> ws;
    ws.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w)
        ws.emplace_back([&, w] {
            for (std::uint64_t t = static_cast<std::uint64_t>(w); t < trials;
                 t += static_cast<std::uint64_t>(nw))
                body(t);
        });
    for (auto& th : ws) th.join();
}

} // namespace

std::vector<TrialDiag> ensemble(const QuadCombSpec& spec, std::uint64_t T, std::uint64_t trials,
                                std::uint64_t seed, EnsembleOptions opts) {
    spec.validate();
    std::uint64_t burnin = opts.burnin == 0 ? T / 10 : opts.burnin;
    std::vector<TrialDiag> out(trials);
    parallel_trials(trials, opts.jobs, [&](std::uint64_t t) {
        out[t] = run_trial(spec, T, burnin, seed, opts.stream_base + t, opts.initial);
    });
    return out;
}

EnsembleSummary summarize(const std::vector<TrialDiag>& diags) {
    EnsembleSummary s;
    s.trials = diags.size();
    if (diags.empty()) return s;
    std::uint64_t returned = 0;
    double sum_returns = 0, sum_last = 0;
    std::vector<double> dists;
    dists.reserve(diags.size());
    for (const TrialDiag& d : diags) {
        if (d.returns_to_origin > 0) {
            ++returned;
            sum_last += static_cast<double>(d.last_return_time);
        }
        sum_returns += static_cast<double>(d.returns_to_origin);
        dists.push_back(d.min_dist_after_burnin);
    }
    s.return_fraction = static_cast<double>(returned) / static_cast<double>(s.trials);
    s.mean_returns = sum_returns / static_cast<double>(s.trials);
    s.mean_last_return = returned > 0 ? sum_last / static_cast<double>(returned) : 0.0;
    std::sort(dists.begin(), dists.end());
    auto q = [&](double f) {
        return dists[std::min(dists.size() - 1,
                              static_cast<std::size_t>(f * static_cast<double>(dists.size())))];
    };
    s.min_dist_q25 = q(0.25);
    s.min_dist_q50 = q(0.50);
    s.min_dist_q75 = q(0.75);
    return s;
}

DichotomyReport dichotomy_probe(const QuadCombSpec& spec, std::uint64_t T, std::uint64_t trials,
                                std::uint64_t seed, int jobs) {
    DichotomyReport rep;
    for (int ci = 0; ci < kNumConfigs; ++ci) {
        EnsembleOptions opts;
        opts.jobs = jobs;
        opts.initial = config_from_index(ci);
        // disjoint stream ranges keep every (configuration, trial) independent
        opts.stream_base = static_cast<std::uint64_t>(ci) * trials;
        auto diags = ensemble(spec, T, trials, seed, opts);
        rep.return_fraction[static_cast<std::size_t>(ci)] = summarize(diags).return_fraction;
    }
    auto sorted = rep.return_fraction;
    std::sort(sorted.begin(), sorted.end());
    rep.spread = sorted.back() - sorted.front();
    for (std::size_t i = 1; i < sorted.size(); ++i)
        rep.max_gap = std::max(rep.max_gap, sorted[i] - sorted[i - 1]);
    rep.clustered = rep.max_gap > 0.25 && rep.spread > 0.5;
    return rep;
}

} // namespace prw
