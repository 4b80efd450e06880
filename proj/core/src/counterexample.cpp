#include "prw/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace prw {

double CexParams::v_k(int k) const { return v_coeff * std::pow(k, 2.0 + delta); }
double CexParams::u_k(int k) const { return u_coeff * std::pow(k, u_pow) * v_k(k); }

void CexParams::validate() const {
    if (!(r > 0.0 && r < 1.0)) throw Error("CexParams: r outside (0,1)");
    if (!(delta > 0.0 && c > 0.0 && alpha > 0.0 && beta > 0.0))
        throw Error("CexParams: delta, c, alpha, beta must be positive");
    if (!(p2 > 0.0 && p2 < 1.0 - r)) throw Error("CexParams: need 0 < p2 < 1-r");
    if (y1 < 1 || l1 < 1) throw Error("CexParams: y1, l1 >= 1 required");
    if (!(v_coeff * c > 1.0)) throw Error("CexParams: need 1/v_k < c/k^{2+delta}");
    if (!(u_coeff > 0.0 && u_pow > 0.0)) throw Error("CexParams: need v_k = o(u_k)");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double logadd(double x, double y) {
    if (std::isinf(x) && x < 0) return y;
    if (std::isinf(y) && y < 0) return x;
    double m = std::max(x, y);
    return m + std::log1p(std::exp(std::min(x, y) - m));
}

// certified double lower bound on A_k; tower levels all clear 1e15 easily
double a_lower_bound(const CexLevel& lv) {
    if (std::isfinite(lv.a)) return lv.a;
    if (lv.a_cert || (std::isfinite(lv.lna) && lv.lna >= 35.0)) return 1e15;
    return 0.0;
}

// residual magnitudes stay tiny in practice; 1e3 is the certification margin
bool residuals_moderate(const CexLevel& lv) {
    return std::abs(lv.ry) <= 1e3 && std::abs(lv.rl) <= 1e3 &&
           std::isfinite(lv.vr) && std::abs(std::log(lv.vr)) <= 1e3;
}

} // namespace

LogReal CexSequence::p_after(int k) const {
    if (k < 1 || k > K) throw Error("CexSequence::p_after: k out of range");
    return k == K ? p_next : at(k + 1).p;
}

CexSequence build_sequence(const CexParams& params, int K) {
    params.validate();
    if (K < 2) throw Error("build_sequence: K >= 2 required");

    CexSequence seq;
    seq.params = params;
    seq.K = K;
    seq.levels.resize(static_cast<std::size_t>(K));
    const double lnr_inv = std::log(1.0 / params.r);
    const double lnb = std::log(params.beta);

    std::vector<LogReal> pv(static_cast<std::size_t>(K + 2)); // p[k], k = 2..K+1
    pv[2] = LogReal::from_double(params.p2);

    CexLevel& l1 = seq.levels[0];
    l1.numeric = true;
    l1.y = LogReal::from_double(static_cast<double>(params.y1));
    l1.l = LogReal::from_double(static_cast<double>(params.l1));

    // constraint (ii) running sum in log scale; p_1 is pinned only after the
    // build, so its term enters with the upper bound p_1 <= 1
    double lnS = 2.0 * std::log(static_cast<double>(params.y1 + params.l1));
    double y_prev = static_cast<double>(params.y1), l_prev = static_cast<double>(params.l1);
    bool prev_numeric = true;

    double a = std::log(1.0 / params.p2), lna = std::log(a);
    bool a_cert = false;

    for (int k = 2; k <= K; ++k) {
        CexLevel& lv = seq.levels[static_cast<std::size_t>(k - 1)];
        double u = params.u_k(k), v = params.v_k(k);
        double cap_k = params.c / std::pow(k, 2.0 + params.delta);
        double vr = 0.5 * (1.0 / v + cap_k); // midpoint of the CondConst5 interval
        LogReal pk = pv[static_cast<std::size_t>(k)];
        lv.p = pk;
        lv.a = a;
        lv.lna = lna;
        lv.a_cert = a_cert;
        lv.vr = vr;

        bool numeric = prev_numeric && std::isfinite(a) && a < 300.0 &&
                       2.0 * u * std::exp(2.0 * a) < 1e14 &&
                       2.0 * u * std::exp(2.5 * a) / std::sqrt(params.beta) < 1e14;
        if (numeric) {
            double pd = std::exp(-a);
            double yd = std::max(y_prev + l_prev, std::ceil(2.0 * u / (pd * pd)));
            double ld = std::max(2.0, std::ceil(2.0 * yd / std::sqrt(pd * params.beta)));
            bool ok = false;
            int m = 0;
            for (; m <= 120 && ld <= 4.0e15; ++m, ld *= 2.0) {
                double lnl = std::log(ld), lny = std::log(yd), lnyl = std::log(yd + ld);
                bool c1 = std::log(v) + std::log(a + lnr_inv) <= 2.0 * lnl - 2.0 * a;
                bool c2 = lnS <= std::log(params.alpha) - a + 2.0 * lnyl;
                bool c3 = -2.0 * a + 2.0 * lnl + lny - 2.0 * lnyl >= std::log(u);
                bool c4 = 2.0 * lny <= lnb - a + 2.0 * lnyl;
                if (c1 && c2 && c3 && c4) { ok = true; break; }
            }
            if (!ok)
                throw Error("build_sequence: no feasible l_k at k=" + std::to_string(k));
            lv.numeric = true;
            lv.doublings = m;
            lv.y = LogReal::from_double(yd);
            lv.l = LogReal::from_double(ld);
            lv.ry = std::log(yd) - 2.0 * a;
            lv.rl = std::log(ld) - std::log(yd) - 0.5 * a;
            lnS = logadd(lnS, -a + 2.0 * std::log(yd + ld));
            y_prev = yd;
            l_prev = ld;
        } else {
            // tower regime: y = 2u p^{-2} and l = (2/sqrt(beta)) y p^{-1/2}
            // exactly (the unit round-up is far below tower precision), so the
            // residuals are exact doubles and feasibility is provable from a
            // certified A_k >= 1e4 plus moderate residuals:
            //   (iii) <=> ry >= ln u + 2 ln(1 + e^{-A/2 - rl}),  ry = ln(2u)
            //   (iv)  <=> ln beta + 2 rl = 2 ln 2 > 0
            //   (i)   <=  ln v + 1 <= 2.5 A + 2(ry + rl)   [ln A <= A/2]
            //   (ii)  through the gap A_k >= e^{2 A_{k-1}}
            lv.numeric = false;
            lv.doublings = 0;
            lv.ry = std::log(2.0 * u);
            lv.rl = std::numbers::ln2 - 0.5 * lnb;
            double LB = a_lower_bound(lv);
            if (LB < 1e4)
                throw Error("build_sequence: A_k not certifiably large at k=" + std::to_string(k));
            if (!(lv.ry >= std::log(u) + 2.0 * std::log1p(std::exp(-0.5 * LB - lv.rl))) ||
                !(lnb + 2.0 * lv.rl > 0.0) ||
                !(std::log(v) + 1.0 <= 2.5 * LB + 2.0 * (lv.ry + lv.rl)) || !residuals_moderate(lv))
                throw Error("build_sequence: tower-level feasibility check failed at k=" +
                            std::to_string(k));
            lv.y = pk.pow(-2.0) * LogReal::from_double(2.0 * u);
            lv.l = lv.y * pk.pow(-0.5) * LogReal::from_double(2.0 / std::sqrt(params.beta));
            if (std::isfinite(a)) lnS = logadd(lnS, 4.0 * a + 2.0 * (lv.ry + lv.rl));
            else lnS = kInf;
            prev_numeric = false;
        }

        // ln(1/p_{k+1}) = vr l^2 p^2; the exponent is an exact double as long
        // as A_k is, and a one-level-up tower afterwards
        LogReal M = lv.l.pow(2.0) * pk.pow(2.0) * LogReal::from_double(vr);
        pv[static_cast<std::size_t>(k + 1)] = LogReal::exp_of(-M);
        double lnl2p2 = std::isfinite(a) ? 3.0 * a + 2.0 * (lv.ry + lv.rl) : kInf;
        double lna_next = std::isfinite(lnl2p2) ? std::log(vr) + lnl2p2 : kInf;
        double a_next = (std::isfinite(lna_next) && lna_next < 690.0) ? std::exp(lna_next) : kInf;
        bool cert_next = !std::isfinite(a_next) &&
                         (std::isfinite(lna_next) ? lna_next >= 35.0
                                                  : (a_lower_bound(lv) >= 1e4 && residuals_moderate(lv)));
        a = a_next;
        lna = lna_next;
        a_cert = cert_next;
    }
    seq.p_next = pv[static_cast<std::size_t>(K + 1)];

    // p_1 = 1 - sum_{i>=2} p_i; suffix sums give the residuals q_k
    LogReal tail = seq.p_next;
    for (int k = K; k >= 2; --k) {
        seq.levels[static_cast<std::size_t>(k - 1)].q = tail;
        tail = tail + pv[static_cast<std::size_t>(k)];
    }
    LogReal p1 = LogReal::one() - tail;
    if (p1.sign() <= 0) throw Error("build_sequence: interval masses exceed 1");
    l1.p = p1;
    l1.q = tail;
    l1.a = -p1.log().to_double();
    l1.lna = std::log(l1.a);
    l1.ry = std::log(static_cast<double>(params.y1)) - 2.0 * l1.a;
    l1.rl = std::log(static_cast<double>(params.l1)) - std::log(static_cast<double>(params.y1)) -
            0.5 * l1.a;
    return seq;
}

std::vector<ConstraintRow> verify_constraints(const CexSequence& seq, const CexParams& params) {
    std::vector<ConstraintRow> rows;
    auto push_le = [&](int k, const std::string& name, double lhs, double rhs) {
        rows.push_back({k, name, lhs <= rhs, lhs, rhs});
    };
    auto push_bool = [&](int k, const std::string& name, bool pass, double lhs, double rhs) {
        rows.push_back({k, name, pass, lhs, rhs});
    };
    const double lnr_inv = std::log(1.0 / params.r);
    const double lnb = std::log(params.beta);

    // constraint (ii) running sum over the shallow levels, with the actual p_1
    double lnS = -kInf;
    {
        const CexLevel& f = seq.at(1);
        lnS = -f.a + 2.0 * std::log((f.y + f.l).to_double());
    }
    bool deep_chain_ok = true; // residual certification along all deep levels

    for (int k = 2; k <= seq.K; ++k) {
        const CexLevel& lv = seq.at(k);
        double u = params.u_k(k), v = params.v_k(k);
        double LB = a_lower_bound(lv);
        bool shallow = std::isfinite(lv.a);
        if (!shallow) deep_chain_ok = deep_chain_ok && residuals_moderate(lv) && LB >= 1e4;

        if (shallow) {
            double a = lv.a;
            double lny = 2.0 * a + lv.ry;
            double lnl = lny + 0.5 * a + lv.rl;
            double lnyl = lnl + std::log1p(std::exp(lny - lnl));

            push_le(k, "CondConst1", std::log(v) + std::log(a + lnr_inv), 2.0 * lnl - 2.0 * a);
            push_le(k, "CondConst2", lnS, std::log(params.alpha) - a + 2.0 * lnyl);
            push_le(k, "CondConst3", std::log(u) + 2.0 * lnyl, -2.0 * a + 2.0 * lnl + lny);
            push_le(k, "CondConst4", 2.0 * lny, lnb - a + 2.0 * lnyl);
            // ln ln(1/p_{k+1}) recovered from the stored tower exactly
            double lnln_next = (-seq.p_after(k).log()).log().to_double();
            double mid = lnln_next - (2.0 * lnl - 2.0 * a);
            push_le(k, "CondConst5-lo", -std::log(v), mid);
            push_le(k, "CondConst5-hi", mid,
                    std::log(params.c) - (2.0 + params.delta) * std::log(k));
            lnS = logadd(lnS, -a + 2.0 * lnyl);
        } else {
            // tower level: reduce each inequality, via ln y = 2A + ry and
            // ln l = ln y + A/2 + rl, to an exact double comparison with a
            // certified lower bound on A (see build_sequence)
            double R = lv.ry + lv.rl;
            if (std::isfinite(lv.lna))
                push_le(k, "CondConst1", std::log(v) + lv.lna + 1.0, 3.0 * LB + 2.0 * R);
            else
                push_le(k, "CondConst1", std::log(v) + 1.0, 2.5 * LB + 2.0 * R);
            // shallow part of the sum vs the dominant term; deep predecessors
            // are covered by the tower gap A_k >= e^{2 A_{k-1}}
            push_bool(k, "CondConst2", deep_chain_ok && LB >= 1e15 * 0.999 &&
                                           lnS <= std::log(params.alpha) + 4.0 * LB + 2.0 * R - 1.0,
                      lnS, 4.0 * LB + 2.0 * R);
            push_le(k, "CondConst3", std::log(u) + 2.0 * std::log1p(std::exp(-0.5 * LB - lv.rl)),
                    lv.ry);
            push_le(k, "CondConst4", 0.0, lnb + 2.0 * lv.rl);
            push_le(k, "CondConst5-lo", -std::log(v), std::log(lv.vr));
            push_le(k, "CondConst5-hi", std::log(lv.vr),
                    std::log(params.c) - (2.0 + params.delta) * std::log(k));
        }

        // structural rows hold in every regime through tower-level dominance
        bool pr = seq.p_after(k) <= LogReal::from_double(params.r) * lv.p;
        push_bool(k, "p-ratio", pr, 0.0, lnr_inv);
        bool ym = seq.at(k - 1).y + seq.at(k - 1).l <= lv.y;
        push_bool(k, "y-monotone", ym, 0.0, 0.0);
        bool lm = LogReal::from_double(2.0) <= lv.l;
        push_bool(k, "l-min", lm, std::numbers::ln2, 2.5 * LB + lv.ry + lv.rl);
    }
    return rows;
}

LogReal IntervalPMF::total_mass() const {
    LogReal t = defect;
    for (const Block& b : blocks) t = t + b.mass;
    return t;
}

void IntervalPMF::validate() const {
    LogReal end; // zero
    for (const Block& b : blocks) {
        if (b.y.sign() <= 0 || b.l.sign() <= 0 || b.mass.sign() < 0)
            throw Error("IntervalPMF: non-positive block geometry");
        if (b.y < end) throw Error("IntervalPMF: overlapping intervals");
        end = b.y + b.l;
    }
    LogReal err = total_mass() - LogReal::one();
    if (LogReal::max(err, -err) > LogReal::from_double(1e-9))
        throw Error("IntervalPMF: masses + defect != 1");
}

IntervalPMF mu_k(const CexSequence& seq, int k) {
    if (k < 1 || k > seq.K) throw Error("mu_k: k out of range");
    IntervalPMF out;
    for (int i = 1; i <= k; ++i) {
        const CexLevel& lv = seq.at(i);
        out.blocks.push_back({lv.y, lv.l, lv.p});
    }
    out.defect = seq.at(k).q;
    out.validate();
    return out;
}

LatticePMF waiting_distribution(const CexSequence& seq, int K, std::int64_t cap) {
    if (K < 1 || K > seq.K) throw Error("waiting_distribution: K out of range");
    const CexLevel& top = seq.at(K);
    LogReal end = top.y + top.l;
    if (!(end <= LogReal::from_double(static_cast<double>(cap))))
        throw SupportCapError("waiting_distribution: support exceeds cap; symbolic-only scale");
    std::int64_t n = static_cast<std::int64_t>(end.to_double()) - 1;
    std::vector<double> m(static_cast<std::size_t>(n), 0.0);
    double half = (1.0 - seq.at(K).q.to_double()) / 2.0; // P(X >= 1), p_0 = 0
    for (int i = 1; i <= K; ++i) {
        const CexLevel& lv = seq.at(i);
        std::int64_t y0 = static_cast<std::int64_t>(lv.y.to_double());
        std::int64_t len = static_cast<std::int64_t>(lv.l.to_double());
        double w = lv.p.to_double() / (2.0 * static_cast<double>(len)) / half;
        for (std::int64_t x = y0; x < y0 + len; ++x)
            m[static_cast<std::size_t>(x - 1)] += w;
    }
    return LatticePMF(1, std::move(m), 0.0);
}

BoundSeries bound_upper_series(const CexSequence& seq, int K) {
    if (K > seq.K) throw Error("bound_upper_series: K out of range");
    BoundSeries out;
    double sum = 0.0;
    for (int i = 2; i <= K; ++i) {
        // (1/(l p)) sqrt(ln(1/p_{i+1})) = sqrt(vr) exactly, at every scale
        double term = std::sqrt(seq.at(i).vr);
        sum += term;
        out.k.push_back(i);
        out.terms.push_back(term);
        out.partial.push_back(sum);
    }
    return out;
}

BoundSeries bound_lower_terms(const CexSequence& seq, int K) {
    if (K > seq.K) throw Error("bound_lower_terms: K out of range");
    BoundSeries out;
    double sum = 0.0;
    for (int k = 2; k <= K; ++k) {
        const CexLevel& lv = seq.at(k);
        // (y/(y+l)^2) ln(1/p_{k+1}) = vr e^{ry} / (1 + y/l)^2, bounded below
        // through the certified A_k when y/l underflows
        double x = std::exp(-0.5 * a_lower_bound(lv) - lv.rl);
        double term = lv.vr * std::exp(lv.ry - 2.0 * std::log1p(x));
        sum += term;
        out.k.push_back(k);
        out.terms.push_back(term);
        out.partial.push_back(sum);
    }
    return out;
}

bool unif_concentration_check(int l, int m, double* max_mass, double* bound) {
    if (l < 2 || m < 1) throw Error("unif_concentration_check: need l >= 2, m >= 1");
    LatticePMF sum = n_fold(LatticePMF::uniform(0, l), static_cast<std::uint64_t>(m));
    double mm = sum.max_mass();
    double bd = (1.0 / l) * std::sqrt(2.0 / m);
    if (max_mass) *max_mass = mm;
    if (bound) *bound = bd;
    return mm <= bd + 1e-15;
}

double omega_fn(double p) {
    if (!(p > 0.0 && p < 1.0)) throw Error("omega_fn: p outside (0,1)");
    double b = std::sqrt(1.0 / (2.0 * std::numbers::e * p));
    auto f = [&](double u) { return std::sqrt(2.0 / u) + b / (1.0 - u); };
    double lo = 1e-12, hi = 1.0 - 1e-12;
    for (int it = 0; it < 200; ++it) {
        double x = lo + (hi - lo) / 3.0, y2 = hi - (hi - lo) / 3.0;
        if (f(x) < f(y2)) hi = y2; else lo = x;
    }
    return f(0.5 * (lo + hi));
}

bool binom_inverse_sqrt_check(int n, double p, double* lhs, double* rhs) {
    if (n < 1) throw Error("binom_inverse_sqrt_check: n >= 1");
    double lf = 0.0;
    for (int z = 1; z <= n; ++z) {
        double lb = std::lgamma(n + 1.0) - std::lgamma(z + 1.0) - std::lgamma(n - z + 1.0) +
                    z * std::log(p) + (n - z) * std::log1p(-p);
        lf += std::exp(lb) / std::sqrt(static_cast<double>(z));
    }
    double rf = omega_fn(p) / std::sqrt(2.0 * n * p);
    if (lhs) *lhs = lf;
    if (rhs) *rhs = rf;
    return lf <= rf * (1.0 + 1e-12);
}

LatticePMF step3_jump_law(const LatticePMF& nu, std::uint64_t g_max) {
    return geometric_mixture(nu, 1.0 / 3.0, g_max);
}

ToyReport toy_scale_validation(const ToyParams& toy, int K_small, int N) {
    if (K_small < 2 || static_cast<std::size_t>(K_small) > toy.levels.size())
        throw Error("toy_scale_validation: K_small out of range");
    if (N < 1) throw Error("toy_scale_validation: N >= 1");

    // defective symmetric step laws mu_k
    std::vector<LatticePMF> mu;
    std::vector<double> pk, lk, qk;
    double psum = 0.0;
    std::int64_t prev_end = 0;
    for (int k = 1; k <= K_small; ++k) {
        auto [yk, lenk, pkk] = toy.levels[static_cast<std::size_t>(k - 1)];
        if (yk < prev_end || lenk < 1 || pkk <= 0.0)
            throw Error("toy_scale_validation: bad toy level");
        prev_end = yk + lenk;
        psum += pkk;
        if (psum > 1.0 + 1e-12) throw Error("toy_scale_validation: masses exceed 1");
        std::vector<std::pair<std::int64_t, double>> pts;
        for (int i = 1; i <= k; ++i) {
            auto [y, len, pm] = toy.levels[static_cast<std::size_t>(i - 1)];
            double w = pm / (2.0 * static_cast<double>(len));
            for (std::int64_t x = y; x < y + len; ++x) {
                pts.push_back({x, w});
                pts.push_back({-x, w});
            }
        }
        mu.push_back(LatticePMF::from_points(pts, 1.0 - psum));
        pk.push_back(pkk);
        lk.push_back(static_cast<double>(lenk));
        qk.push_back(1.0 - psum);
    }

    ToyReport rep;
    rep.sq_sums.assign(static_cast<std::size_t>(K_small), 0.0);
    std::vector<std::vector<double>> p0(static_cast<std::size_t>(K_small));
    for (int k = 0; k < K_small; ++k) {
        LatticePMF w = LatticePMF::delta(0);
        for (int n = 1; n <= N; ++n) {
            w = convolve(w, mu[static_cast<std::size_t>(k)]);
            double m0 = w.mass_at(0);
            p0[static_cast<std::size_t>(k)].push_back(m0);
            rep.sq_sums[static_cast<std::size_t>(k)] += m0 * m0;
            double dexp = 1.0 - std::pow(1.0 - qk[static_cast<std::size_t>(k)], n);
            if (std::abs(w.defect() - dexp) > 1e-10 * (1.0 + dexp)) rep.defect_exact = false;
        }
    }
    for (int k = 1; k < K_small; ++k) {
        double coef = 1.0 / (lk[static_cast<std::size_t>(k)] * pk[static_cast<std::size_t>(k)]);
        for (int n = 1; n <= N; ++n) {
            double lhs = p0[static_cast<std::size_t>(k)][static_cast<std::size_t>(n - 1)] -
                         p0[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(n - 1)];
            double rhsv = coef * std::pow(1.0 - qk[static_cast<std::size_t>(k)], n) /
                          std::sqrt(static_cast<double>(n));
            ++rep.recursion_checks;
            if (lhs > rhsv + 1e-15) ++rep.recursion_violations;
            if (rhsv > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhsv);
        }
    }

    // classify the DRRW driven by the normalized positive part of mu_K
    const LatticePMF& top = mu.back();
    std::vector<double> pos;
    double half = (1.0 - qk.back()) / 2.0;
    for (std::int64_t x = 1; x <= top.hi(); ++x) pos.push_back(top.mass_at(x) / half);
    LatticePMF nu(1, std::move(pos), 0.0);
    DRRWSpec spec;
    spec.nu_h = nu;
    spec.nu_v = nu;
    spec.p_h = spec.p_v = 1.0 / 3.0;
    rep.classify = classify_drrw(spec, N);
    return rep;
}

} // namespace prw
