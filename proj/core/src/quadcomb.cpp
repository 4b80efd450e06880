#include "prw/quadcomb.hpp"

#include <algorithm>
#include <cmath>

namespace prw {

char letter_char(Letter l) {
    static constexpr char c[4] = {'e', 'n', 'w', 's'};
    return c[static_cast<int>(l)];
}

Letter letter_from_char(char c) {
    switch (c) {
        case 'e': return Letter::E;
        case 'n': return Letter::N;
        case 'w': return Letter::W;
        case 's': return Letter::S;
        default: throw Error(std::string("unknown letter '") + c + "'");
    }
}

int config_index(Config c) {
    int p = static_cast<int>(c.prev), q = static_cast<int>(c.cur);
    if (p == q) throw Error("config_index: diagonal pair");
    return p * 3 + (q > p ? q - 1 : q);
}

Config config_from_index(int i) {
    if (i < 0 || i >= kNumConfigs) throw Error("config_from_index: out of range");
    int p = i / 3, r = i % 3;
    int q = r >= p ? r + 1 : r;
    return {static_cast<Letter>(p), static_cast<Letter>(q)};
}

std::string config_name(Config c) {
    return std::string{letter_char(c.prev), letter_char(c.cur)};
}

Config config_from_name(const std::string& s) {
    if (s.size() != 2) throw Error("config name must be two letters, got '" + s + "'");
    return {letter_from_char(s[0]), letter_from_char(s[1])};
}

std::array<Letter, 3> successors(Letter cur) {
    std::array<Letter, 3> out{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
        if (i != static_cast<int>(cur)) out[static_cast<std::size_t>(k++)] = static_cast<Letter>(i);
    return out;
}

double QuadCombSpec::alpha_at(int config, std::int64_t n) const {
    const auto& a = alpha[static_cast<std::size_t>(config)];
    if (n <= static_cast<std::int64_t>(a.size())) return a[static_cast<std::size_t>(n - 1)];
    return tail == TailRule::Absorb ? 1.0 : a.back();
}

double QuadCombSpec::turn_at(int config, int slot, std::int64_t n) const {
    const auto& t = turn[static_cast<std::size_t>(config)][static_cast<std::size_t>(slot)];
    if (n <= static_cast<std::int64_t>(t.size())) return t[static_cast<std::size_t>(n - 1)];
    return t.back();
}

double QuadCombSpec::survival(int config) const {
    double s = 1.0;
    for (int n = 1; n <= n_max; ++n) s *= 1.0 - alpha_at(config, n);
    return s;
}

void QuadCombSpec::validate(double tol) const {
    if (n_max < 1) throw Error("QuadCombSpec: n_max must be >= 1");
    for (int c = 0; c < kNumConfigs; ++c) {
        const auto& a = alpha[static_cast<std::size_t>(c)];
        if (static_cast<int>(a.size()) != n_max) throw Error("QuadCombSpec: alpha table shape");
        for (double v : a)
            if (v < 0.0 || v > 1.0) throw Error("QuadCombSpec: alpha outside [0,1]");
        for (int n = 1; n <= n_max; ++n) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) {
                const auto& t = turn[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)];
                if (static_cast<int>(t.size()) != n_max) throw Error("QuadCombSpec: turn table shape");
                double v = turn_at(c, k, n);
                if (v < 0.0 || v > 1.0) throw Error("QuadCombSpec: turn prob outside [0,1]");
                s += v;
            }
            if (std::abs(s - 1.0) > tol)
                throw Error("QuadCombSpec: turn row for config " +
                            config_name(config_from_index(c)) + " at n=" + std::to_string(n) +
                            " sums to " + std::to_string(s));
        }
    }

    // admissibility for every config reachable from (n,e): the change-time
    // law must be proper, i.e. the survival must vanish under the tail rule
    std::array<bool, kNumConfigs> seen{};
    std::vector<int> stack{config_index({Letter::N, Letter::E})};
    seen[static_cast<std::size_t>(stack[0])] = true;
    while (!stack.empty()) {
        int ci = stack.back();
        stack.pop_back();
        double surv = survival(ci);
        if (tail == TailRule::Const) {
            double last = alpha[static_cast<std::size_t>(ci)].back();
            if (last <= 0.0 && surv > tol)
                throw Error("QuadCombSpec: config " + config_name(config_from_index(ci)) +
                            " has a too-strong reinforcement (survival " + std::to_string(surv) +
                            " with constant tail alpha = 0)");
        }
        Config c = config_from_index(ci);
        auto succ = successors(c.cur);
        for (int k = 0; k < 3; ++k) {
            double reach = 0.0;
            for (int n = 1; n <= n_max; ++n) reach = std::max(reach, turn_at(ci, k, n));
            if (reach <= 0.0) continue;
            int si = config_index({c.cur, succ[static_cast<std::size_t>(k)]});
            if (!seen[static_cast<std::size_t>(si)]) {
                seen[static_cast<std::size_t>(si)] = true;
                stack.push_back(si);
            }
        }
    }
}

void DRRWSpec::validate() const {
    if (nu_h.lo() < 1 || nu_v.lo() < 1)
        throw Error("DRRWSpec: persistence-time laws must live on {1,2,...}");
    if (nu_h.defect() != 0.0 || nu_v.defect() != 0.0)
        throw Error("DRRWSpec: persistence-time laws must have zero defect");
    if (p_h < 0.0 || p_h >= 1.0 || p_v < 0.0 || p_v >= 1.0)
        throw Error("DRRWSpec: reversal probabilities must be in [0,1)");
    nu_h.validate();
    nu_v.validate();
}

QuadCombSpec drrw_to_quadcomb(const DRRWSpec& spec, int n_max) {
    spec.validate();
    QuadCombSpec out;
    out.n_max = n_max;

    // hazards per axis: alpha_n = nu(n) / sum_{m>=n} nu(m)
    auto hazards = [n_max](const LatticePMF& nu) {
        std::vector<double> h(static_cast<std::size_t>(n_max), 1.0);
        double tail = nu.total_mass();
        for (int n = 1; n <= n_max; ++n) {
            double p = nu.mass_at(n);
            if (tail <= 1e-15) {
                // the law never reaches run length n; the hazard there is
                // unreachable, and alpha = 1 keeps the change-time law proper
                h[static_cast<std::size_t>(n - 1)] = 1.0;
                continue;
            }
            h[static_cast<std::size_t>(n - 1)] = std::min(1.0, p / tail);
            tail -= p;
        }
        return h;
    };
    std::vector<double> hh = hazards(spec.nu_h), hv = hazards(spec.nu_v);

    bool h_bounded = spec.nu_h.hi() <= n_max;
    bool v_bounded = spec.nu_v.hi() <= n_max;
    out.tail = (h_bounded && v_bounded) ? TailRule::Absorb : TailRule::Const;

    for (int ci = 0; ci < kNumConfigs; ++ci) {
        Config c = config_from_index(ci);
        bool horiz = is_horizontal(c.cur);
        out.alpha[static_cast<std::size_t>(ci)] = horiz ? hh : hv;
        double p_rev = horiz ? spec.p_h : spec.p_v;
        auto succ = successors(c.cur);
        for (int k = 0; k < 3; ++k) {
            double p = succ[static_cast<std::size_t>(k)] == opposite(c.cur)
                           ? p_rev
                           : (1.0 - p_rev) / 2.0;
            out.turn[static_cast<std::size_t>(ci)][static_cast<std::size_t>(k)] =
                std::vector<double>(static_cast<std::size_t>(n_max), p);
        }
    }
    out.validate();
    return out;
}

PrwStepper::PrwStepper(const QuadCombSpec& spec, std::uint64_t seed, std::uint64_t stream,
                       Config initial)
    : spec_(spec), rng_(seed, stream), cur_(initial.cur), ci_(config_index(initial)) {}

Letter PrwStepper::step() {
    if (emitted_ > 0) {
        double u = rng_.next_double();
        if (u < spec_.alpha_at(ci_, runlen_)) {
            // change of direction
            double v = rng_.next_double();
            auto succ = successors(cur_);
            int slot = 2;
            double acc = 0.0;
            for (int s = 0; s < 3; ++s) {
                acc += spec_.turn_at(ci_, s, runlen_);
                if (v < acc) {
                    slot = s;
                    break;
                }
            }
            Letter next = succ[static_cast<std::size_t>(slot)];
            ci_ = config_index({cur_, next});
            cur_ = next;
            runlen_ = 1;
        } else {
            ++runlen_;
        }
    }
    ++emitted_;
    pos_ = pos_ + direction(cur_);
    return cur_;
}

Trajectory simulate_prw(const QuadCombSpec& spec, std::uint64_t steps, std::uint64_t seed,
                        std::uint64_t stream, Config initial) {
    PrwStepper st(spec, seed, stream, initial);
    Trajectory tr;
    tr.letters.reserve(steps);
    tr.positions.reserve(steps + 1);
    tr.positions.push_back({0, 0});
    for (std::uint64_t k = 0; k < steps; ++k) {
        tr.letters.push_back(st.step());
        tr.positions.push_back(st.position());
    }
    return tr;
}

} // namespace prw
