#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "prw/lattice.hpp"
#include "prw/rng.hpp"

namespace prw {

enum class Letter : std::uint8_t { E = 0, N = 1, W = 2, S = 3 };

struct IVec2 {
    std::int64_t x = 0, y = 0;
    IVec2 operator+(IVec2 o) const { return {x + o.x, y + o.y}; }
    IVec2 operator-(IVec2 o) const { return {x - o.x, y - o.y}; }
    bool operator==(const IVec2&) const = default;
};

inline IVec2 direction(Letter l) {
    switch (l) {
        case Letter::E: return {1, 0};
        case Letter::N: return {0, 1};
        case Letter::W: return {-1, 0};
        default: return {0, -1};
    }
}
inline Letter opposite(Letter l) {
    return static_cast<Letter>((static_cast<int>(l) + 2) % 4);
}
inline bool is_horizontal(Letter l) { return l == Letter::E || l == Letter::W; }
char letter_char(Letter l);
Letter letter_from_char(char c);

// A configuration (previous letter, current letter), prev != cur.
// The 12 off-diagonal pairs are indexed 0..11 in row-major (prev, cur) order.
struct Config {
    Letter prev, cur;
    bool operator==(const Config&) const = default;
};
constexpr int kNumConfigs = 12;
int config_index(Config c);
Config config_from_index(int i);
std::string config_name(Config c);
Config config_from_name(const std::string& s);

// the three admissible successor letters of `cur`, in E<N<W<S order
std::array<Letter, 3> successors(Letter cur);

enum class TailRule { Const, Absorb };

// Tabulated change probabilities alpha_n(c) and turn distributions
// p_n(c; letter) for n = 1..n_max, with a declared tail rule beyond n_max:
// Const keeps the last tabulated values, Absorb forces a change (alpha=1).
struct QuadCombSpec {
    int n_max = 1;
    TailRule tail = TailRule::Absorb;
    // alpha[config][n-1]
    std::array<std::vector<double>, kNumConfigs> alpha;
    // turn[config][successor slot][n-1], successor slots per successors(cur)
    std::array<std::array<std::vector<double>, 3>, kNumConfigs> turn;

    double alpha_at(int config, std::int64_t n) const;    // n >= 1
    double turn_at(int config, int slot, std::int64_t n) const;

    // checks shape, stochasticity of the turn rows and the admissibility
    // condition (the change-time law must be proper for every config
    // reachable from (n,e)); throws on violation
    void validate(double tol = 1e-9) const;

    // survival prod_{k<=n_max}(1-alpha_k) for one config
    double survival(int config) const;
};

// Generalized DRRW parameters: iid persistence-time laws per axis and
// axis-reversal probabilities.
struct DRRWSpec {
    LatticePMF nu_h = LatticePMF::delta(1);
    LatticePMF nu_v = LatticePMF::delta(1);
    double p_h = 1.0 / 3.0;
    double p_v = 1.0 / 3.0;

    void validate() const;
};

// hazard-rate encoding: alpha_n = nu(n)/P(tau >= n); turn rows constant,
// reversal = p_axis, each orthogonal turn = (1-p_axis)/2
QuadCombSpec drrw_to_quadcomb(const DRRWSpec& spec, int n_max);

struct Trajectory {
    // letters[k] is X_{k+1}; positions[k] is S_k, so positions has
    // size steps+1 with positions[0] = origin. X_0 = N implicitly.
    std::vector<Letter> letters;
    std::vector<IVec2> positions;
};

// Simulate the PRW from (X_0, X_1) = (n, e) (or the given initial
// configuration) for `steps` increments; deterministic in (seed, stream).
Trajectory simulate_prw(const QuadCombSpec& spec, std::uint64_t steps, std::uint64_t seed,
                        std::uint64_t stream = 0, Config initial = {Letter::N, Letter::E});

// Streaming form of simulate_prw: step() advances one increment and returns
// the new letter; identical draw sequence, O(1) memory.
class PrwStepper {
  public:
    PrwStepper(const QuadCombSpec& spec, std::uint64_t seed, std::uint64_t stream,
               Config initial = {Letter::N, Letter::E});
    Letter step();
    IVec2 position() const { return pos_; }
    std::uint64_t steps_taken() const { return emitted_; }

  private:
    const QuadCombSpec& spec_;
    CounterRng rng_;
    Letter cur_;
    int ci_;
    std::int64_t runlen_ = 1;
    IVec2 pos_{0, 0};
    std::uint64_t emitted_ = 0;
};

} // namespace prw
