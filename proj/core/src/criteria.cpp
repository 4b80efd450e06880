#include "prw/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "prw/skeleton.hpp"

namespace prw {

namespace {

// G(v) = P(J >= v) for v = 0..hi (one-sided upper tail)
std::vector<double> upper_tail(const LatticePMF& j) {
    std::int64_t hi = std::max<std::int64_t>(j.hi(), 0);
    std::vector<double> g(static_cast<std::size_t>(hi + 1), 0.0);
    double acc = 0.0;
    for (std::int64_t v = hi; v >= 0; --v) {
        acc += j.mass_at(v);
        g[static_cast<std::size_t>(v)] = acc;
    }
    return g;
}

// E[g(X)] with g(0) = G(0), g(+-v) = G(v)/2 for the symmetric law of X
double threshold_sum(const LatticePMF& xn, const std::vector<double>& g) {
    std::int64_t hi = std::min<std::int64_t>(xn.hi(), static_cast<std::int64_t>(g.size()) - 1);
    double f = 0.0;
    for (std::int64_t v = 0; v <= hi; ++v)
        f += xn.mass_at(v) * g[static_cast<std::size_t>(v)];
    return f;
}

CriterionTerms terms_dense(const LatticePMF& hj, const LatticePMF& vj, std::int64_t N,
                           const LatticeConfig& cfg) {
    std::vector<double> gh = upper_tail(hj), gv = upper_tail(vj);
    LatticePMF hn = LatticePMF::delta(0), vn = LatticePMF::delta(0);
    CriterionTerms out;
    out.a.reserve(static_cast<std::size_t>(N));
    out.b.reserve(static_cast<std::size_t>(N));
    for (std::int64_t n = 0; n < N; ++n) {
        double fv = threshold_sum(vn, gv);
        double fh = threshold_sum(hn, gh);
        hn = convolve(hn, hj, cfg);
        vn = convolve(vn, vj, cfg);
        out.a.push_back(hn.mass_at(0) * fv);
        out.b.push_back(vn.mass_at(0) * fh);
    }
    return out;
}

// rigorous 1D tail bound 2 min_theta exp(n log MGF(theta) - theta x)
double chernoff_1d(const LatticePMF& law, std::int64_t n, std::int64_t x) {
    std::int64_t B = std::max(std::abs(law.lo()), std::abs(law.hi()));
    if (B * n < x) return 0.0;
    auto g = [&](double th) {
        double mx = th * static_cast<double>(law.hi());
        double s = 0.0;
        for (std::int64_t v = law.lo(); v <= law.hi(); ++v) {
            double m = law.mass_at(v);
            if (m != 0.0) s += m * std::exp(th * static_cast<double>(v) - mx);
        }
        return static_cast<double>(n) * (mx + std::log(s)) - th * static_cast<double>(x);
    };
    double lo = 0.0, hi = 700.0 / static_cast<double>(B);
    for (int it = 0; it < 48; ++it) {
        double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
        if (g(a) < g(b)) hi = b; else lo = a;
    }
    return 2.0 * std::exp(g(0.5 * (lo + hi)));
}

struct AxisOut {
    std::vector<double> p0; // P(X_n = 0), n = 0..N
    std::vector<double> f;  // E g~(X_n), n = 0..N
};

AxisOut axis_spectral(const LatticePMF& jump, std::int64_t N, double alias_tol) {
    if (!jump.is_symmetric()) throw ContractError("series_criterion_terms: jump not symmetric");
    std::int64_t B = std::max(std::abs(jump.lo()), std::abs(jump.hi()));
    std::vector<double> g = upper_tail(jump);

    // g~ as a symmetric window so the same FFT path serves both transforms
    std::vector<double> gt(static_cast<std::size_t>(2 * B + 1), 0.0);
    gt[static_cast<std::size_t>(B)] = g[0];
    for (std::int64_t v = 1; v <= B; ++v) {
        gt[static_cast<std::size_t>(B + v)] = g[static_cast<std::size_t>(v)] / 2.0;
        gt[static_cast<std::size_t>(B - v)] = g[static_cast<std::size_t>(v)] / 2.0;
    }
    LatticePMF gtw(-B, gt, 0.0);

    std::int64_t M = 64;
    while (M < 4 * (B + 1)) M *= 2;
    while (M <= (std::int64_t(1) << 24) && chernoff_1d(jump, N, M - B) > alias_tol) M *= 2;
    if (M > (std::int64_t(1) << 24))
        throw SupportCapError("series_criterion_terms: no torus meets the aliasing tolerance");

    std::vector<double> phi = char_fn_grid(jump, M);
    std::vector<double> ghat = char_fn_grid(gtw, M);
    std::int64_t H = M / 2;
    std::vector<double> val(static_cast<std::size_t>(H + 1)), c1(val.size()), c2(val.size()),
        pw(val.size(), 1.0);
    for (std::int64_t j = 0; j <= H; ++j) {
        double w = (j == 0 || j == H) ? 1.0 : 2.0;
        val[static_cast<std::size_t>(j)] = phi[static_cast<std::size_t>(j)];
        c1[static_cast<std::size_t>(j)] = w;
        c2[static_cast<std::size_t>(j)] = w * ghat[static_cast<std::size_t>(j)];
    }

    AxisOut out;
    out.p0.resize(static_cast<std::size_t>(N + 1));
    out.f.resize(static_cast<std::size_t>(N + 1));
    double inv = 1.0 / static_cast<double>(M);
    for (std::int64_t n = 0; n <= N; ++n) {
        double a1 = 0.0, a2 = 0.0;
        std::size_t k = val.size();
        for (std::size_t i = 0; i < k; ++i) {
            a1 += c1[i] * pw[i];
            a2 += c2[i] * pw[i];
            pw[i] *= val[i];
        }
        out.p0[static_cast<std::size_t>(n)] = std::max(0.0, a1 * inv);
        out.f[static_cast<std::size_t>(n)] = std::max(0.0, a2 * inv);
        if ((n & 63) == 0 && n > 0) {
            std::size_t m2 = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (std::abs(pw[i]) >= 1e-22) {
                    val[m2] = val[i];
                    c1[m2] = c1[i];
                    c2[m2] = c2[i];
                    pw[m2] = pw[i];
                    ++m2;
                }
            val.resize(m2);
            c1.resize(m2);
            c2.resize(m2);
            pw.resize(m2);
        }
    }
    return out;
}

} // namespace

CriterionTerms series_criterion_terms(const LatticePMF& h_jump, const LatticePMF& v_jump,
                                      std::int64_t N, TermsOptions opts) {
    if (N < 0) throw Error("series_criterion_terms: negative N");
    if (!h_jump.is_symmetric() || !v_jump.is_symmetric())
        throw ContractError("series_criterion_terms: jump laws must be symmetric");
    if (h_jump.defect() != 0.0 || v_jump.defect() != 0.0)
        throw ContractError("series_criterion_terms: jump laws must have zero defect");

    using Engine = TermsOptions::Engine;
    Engine engine = opts.engine;
    if (engine == Engine::Auto) {
        double bh = static_cast<double>(std::max(std::abs(h_jump.lo()), h_jump.hi()));
        double bv = static_cast<double>(std::max(std::abs(v_jump.lo()), v_jump.hi()));
        double nn = static_cast<double>(N);
        double est = 4.0 * nn * nn * (bh * bh + bv * bv);
        bool window_ok = 2.0 * nn * std::max(bh, bv) < static_cast<double>(std::size_t(1) << 26);
        engine = (window_ok && est <= static_cast<double>(opts.dense_cost_cap)) ? Engine::Dense
                                                                                : Engine::Spectral;
    }
    if (engine == Engine::Dense) return terms_dense(h_jump, v_jump, N, LatticeConfig{});

    AxisOut h = axis_spectral(h_jump, N, opts.alias_tol);
    AxisOut v = axis_spectral(v_jump, N, opts.alias_tol);
    CriterionTerms out;
    out.a.resize(static_cast<std::size_t>(N));
    out.b.resize(static_cast<std::size_t>(N));
    for (std::int64_t n = 0; n < N; ++n) {
        out.a[static_cast<std::size_t>(n)] =
            h.p0[static_cast<std::size_t>(n + 1)] * v.f[static_cast<std::size_t>(n)];
        out.b[static_cast<std::size_t>(n)] =
            v.p0[static_cast<std::size_t>(n + 1)] * h.f[static_cast<std::size_t>(n)];
    }
    return out;
}

namespace {

struct SeqStats {
    double sum, slope, gamma, tail;
};

SeqStats sequence_stats(const std::vector<double>& a) {
    SeqStats st{0, 0, 0, std::numeric_limits<double>::infinity()};
    std::int64_t N = static_cast<std::int64_t>(a.size());
    std::vector<double> S(a.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i];
        S[i] = acc;
    }
    st.sum = acc;
    if (N < 10) return st;
    std::int64_t n0 = std::max<std::int64_t>(1, N / 10);
    st.slope = (S[static_cast<std::size_t>(N - 1)] - S[static_cast<std::size_t>(n0 - 1)]) /
               std::log(static_cast<double>(N) / static_cast<double>(n0));

    // least-squares ln a_n = c - gamma ln n over the last decade
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (std::int64_t n = n0; n < N; ++n) {
        double an = a[static_cast<std::size_t>(n)];
        if (an <= 0.0) continue;
        double x = std::log(static_cast<double>(n)), y = std::log(an);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt >= 8) {
        double det = cnt * sxx - sx * sx;
        double beta = (cnt * sxy - sx * sy) / det;   // slope of ln a vs ln n
        double c = (sy - beta * sx) / cnt;
        st.gamma = -beta;
        if (st.gamma > 1.0)
            st.tail = std::exp(c) * std::pow(static_cast<double>(N), 1.0 - st.gamma) /
                      (st.gamma - 1.0);
    }
    return st;
}

} // namespace

ClassifyReport classify_drrw(const DRRWSpec& spec, std::int64_t N, ClassifyOptions opts) {
    spec.validate();
    std::uint64_t g_max = opts.g_max;
    if (g_max == 0) {
        double p = std::max(spec.p_h, spec.p_v);
        g_max = p > 0.0 ? static_cast<std::uint64_t>(std::ceil(std::log(1e-12) / std::log(p))) : 1;
    }
    auto [hj, vj] = drrw_margin_jumps(spec, g_max);

    ClassifyReport rep;
    rep.terms = series_criterion_terms(hj, vj, N, opts.terms);
    SeqStats sa = sequence_stats(rep.terms.a), sb = sequence_stats(rep.terms.b);
    rep.sum_a = sa.sum; rep.sum_b = sb.sum;
    rep.slope_a = sa.slope; rep.slope_b = sb.slope;
    rep.gamma_a = sa.gamma; rep.gamma_b = sb.gamma;
    rep.tail_a = sa.tail; rep.tail_b = sb.tail;

    bool div_a = sa.slope >= opts.growth_min, div_b = sb.slope >= opts.growth_min;
    bool sum_a = sa.gamma > 1.0 + opts.margin && sa.tail < opts.tail_tol;
    bool sum_b = sb.gamma > 1.0 + opts.margin && sb.tail < opts.tail_tol;
    if ((div_a && sum_a) || (div_b && sum_b)) {
        rep.verdict = Verdict::Undecided;
        rep.detail = "conflicting evidence: growth and summable fit both triggered";
    } else if (div_a || div_b) {
        rep.verdict = Verdict::RecurrentAtN;
        rep.detail = "partial-sum log-slope " + std::to_string(std::max(sa.slope, sb.slope));
    } else if (sum_a && sum_b) {
        rep.verdict = Verdict::TransientAtN;
        rep.detail = "fitted powers " + std::to_string(sa.gamma) + ", " +
                     std::to_string(sb.gamma) + " with tails " + std::to_string(sa.tail) + ", " +
                     std::to_string(sb.tail);
    } else {
        rep.verdict = Verdict::Undecided;
        rep.detail = "no decisive trend (slopes " + std::to_string(sa.slope) + ", " +
                     std::to_string(sb.slope) + "; powers " + std::to_string(sa.gamma) + ", " +
                     std::to_string(sb.gamma) + ")";
    }
    return rep;
}

double fourier_double_integral(const LatticePMF& h_jump, const LatticePMF& v_jump, double r,
                               int grid_n, double v_half, bool joint_transient, double phi_tol) {
    if (r < 0.0 || r >= 1.0) throw ContractError("fourier_double_integral: r must be in [0,1)");
    if (!v_jump.is_symmetric())
        throw ContractError("fourier_double_integral: second jump law must be symmetric");
    if (!joint_transient)
        throw ContractError(
            "fourier_double_integral: the equivalence needs the joint walk transient; "
            "verify it (e.g. via the Fourier classification of the product law) first");
    if (grid_n < 2) throw Error("fourier_double_integral: grid too small");

    // tail mass function T_V(n), finite support
    std::int64_t bv = std::max(std::abs(v_jump.lo()), v_jump.hi());
    std::vector<double> tv(static_cast<std::size_t>(bv + 1));
    for (std::int64_t n = 0; n <= bv; ++n)
        tv[static_cast<std::size_t>(n)] = two_sided_tail(v_jump, n);

    std::int64_t kmax = bv;
    if (r > 0.0) {
        double k = std::log(phi_tol * (1.0 - r)) / std::log(r);
        if (k < static_cast<double>(kmax)) kmax = std::max<std::int64_t>(0, static_cast<std::int64_t>(k) + 1);
    } else {
        kmax = 0;
    }

    double step = 2.0 * v_half / grid_n;
    std::vector<double> phis(static_cast<std::size_t>(grid_n)), phit(static_cast<std::size_t>(grid_n)),
        phiv(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
        double u = -v_half + (i + 0.5) * step;
        phit[static_cast<std::size_t>(i)] = char_fn(h_jump, u).real();
        phiv[static_cast<std::size_t>(i)] = char_fn(v_jump, u).real();
        double rp = 1.0, acc = 0.0;
        for (std::int64_t n = 0; n <= kmax; ++n) {
            acc += rp * tv[static_cast<std::size_t>(n)] * std::cos(static_cast<double>(n) * u);
            rp *= r;
        }
        phis[static_cast<std::size_t>(i)] = acc;
    }
    double total = 0.0;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            double den = 1.0 - phit[static_cast<std::size_t>(i)] * phiv[static_cast<std::size_t>(j)];
            if (den == 0.0) continue; // midpoints never hit the origin; guard torus zeros
            total += phis[static_cast<std::size_t>(j)] / den;
        }
    return total * step * step;
}

ConcentrationReport concentration_sandwich_check(const LatticePMF& jump, int n_max,
                                                 const std::vector<double>& lambda_grid,
                                                 int big_n) {
    if (!jump.is_symmetric())
        throw ContractError("concentration_sandwich_check: jump not symmetric");
    ConcentrationReport rep;
    rep.p = positivity_radius(jump);
    rep.L = 2.0 * std::numbers::pi * big_n;
    double lam_min = rep.L / rep.p;
    LatticePMF mn = LatticePMF::delta(0);
    for (int n = 1; n <= n_max; ++n) {
        mn = convolve(mn, jump);
        for (double lam : lambda_grid) {
            if (lam < lam_min) continue;
            std::int64_t top = static_cast<std::int64_t>(std::floor(lam));
            double left = 0.0;
            for (std::int64_t x = 0; x <= std::min(top, mn.hi()); ++x) left += mn.mass_at(x);
            double q = concentration(mn, lam);
            if (left > q + 1e-15) ++rep.violations;
            if (left > 0.0) rep.c_hat = std::max(rep.c_hat, q / left);
            ++rep.evaluated;
        }
    }
    return rep;
}

EsseenReport esseen_bounds_check(const LatticePMF& jump, int n, double lambda) {
    if (!jump.is_symmetric()) throw ContractError("esseen_bounds_check: jump not symmetric");
    double p = positivity_radius(jump);
    if (lambda <= 2.0 * std::numbers::pi / p)
        throw ContractError("esseen_bounds_check: lambda out of admissible range (need > 2pi/p)");
    EsseenReport rep;
    // Simpson on [-pi/lambda, pi/lambda]
    const int K = 4096;
    double a = -std::numbers::pi / lambda, h = (2.0 * std::numbers::pi / lambda) / K;
    double acc = 0.0;
    for (int i = 0; i <= K; ++i) {
        double phi = char_fn(jump, a + i * h).real();
        double w = (i == 0 || i == K) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * std::pow(phi, n);
    }
    rep.integral = acc * h / 3.0;
    rep.q = concentration(n_fold(jump, static_cast<std::uint64_t>(n)), lambda);
    rep.ratio = rep.q / (lambda * rep.integral);
    return rep;
}

BacktrackReport backtrack_max_bound_check(const LatticePMF& nu_v, double p_v, int n,
                                          std::uint64_t g_max, double tol) {
    if (nu_v.lo() < 1) throw ContractError("backtrack_max_bound_check: nu must live on {1,2,...}");
    LatticePMF margin = geometric_mixture(nu_v, p_v, g_max, tol);
    LatticePMF vn = n_fold(margin, static_cast<std::uint64_t>(n));

    // prefix window P(0 <= V_n <= m)
    std::int64_t hi = std::max<std::int64_t>(vn.hi(), 0);
    std::vector<double> win(static_cast<std::size_t>(hi + 1));
    double acc = 0.0;
    for (std::int64_t v = 0; v <= hi; ++v) {
        acc += vn.mass_at(v);
        win[static_cast<std::size_t>(v)] = acc;
    }
    auto window = [&](std::int64_t m) {
        if (m < 0) return 0.0;
        return win[static_cast<std::size_t>(std::min(m, hi))];
    };

    // law of max_{1<=l<=G} s*A_l by joint DP over (A_l, running max)
    std::int64_t B = nu_v.hi();
    std::int64_t span = static_cast<std::int64_t>(g_max) * B;
    std::int64_t W = 2 * span + 1;
    auto lhs_for_sign = [&](int s) {
        std::vector<double> cur(static_cast<std::size_t>(W * W), 0.0), nxt;
        auto idx = [&](std::int64_t a2, std::int64_t m) {
            return static_cast<std::size_t>((a2 + span) * W + (m + span));
        };
        // l = 1: A_1 = tau
        for (std::int64_t v = nu_v.lo(); v <= B; ++v) {
            double mass = nu_v.mass_at(v);
            if (mass > 0.0) cur[idx(v, s * v)] += mass;
        }
        double lhs = 0.0;
        for (std::uint64_t l = 1; l <= g_max; ++l) {
            double stopw = (l == g_max) ? 1.0 : (1.0 - p_v); // lump the cap
            for (std::int64_t a2 = -span; a2 <= span; ++a2)
                for (std::int64_t m = -span; m <= span; ++m) {
                    double wgt = cur[idx(a2, m)];
                    if (wgt > 0.0) lhs += stopw * wgt * window(m);
                }
            if (l == g_max) break;
            nxt.assign(cur.size(), 0.0);
            double sgn = (l % 2 == 1) ? -1.0 : 1.0; // increment sign of A_{l+1}
            for (std::int64_t a2 = -span; a2 <= span; ++a2)
                for (std::int64_t m = -span; m <= span; ++m) {
                    double wgt = cur[idx(a2, m)];
                    if (wgt <= 0.0) continue;
                    for (std::int64_t v = nu_v.lo(); v <= B; ++v) {
                        double mass = nu_v.mass_at(v);
                        if (mass <= 0.0) continue;
                        std::int64_t a3 = a2 + static_cast<std::int64_t>(sgn) * v;
                        std::int64_t m3 = std::max<std::int64_t>(m, s * a3);
                        nxt[idx(a3, m3)] += p_v * wgt * mass;
                    }
                }
            cur.swap(nxt);
        }
        return lhs;
    };

    BacktrackReport rep;
    rep.lhs = 0.5 * lhs_for_sign(+1) + 0.5 * lhs_for_sign(-1);
    std::vector<double> gj = upper_tail(margin);
    rep.rhs = 2.0 * (1.0 + p_v) * threshold_sum(vn, gj);
    rep.pass = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

} // namespace prw
